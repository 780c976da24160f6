#include "adago/linalg/norms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "adago/linalg/kernels.hpp"
#include "adago/linalg/svd.hpp"

namespace adago::linalg {

double frobenius_norm(const Matrix& m) {
    require_finite(m, "frobenius_norm");
    double acc = 0.0;
    for (double x : m.data()) acc += x * x;
    return std::sqrt(acc);
}

double spectral_norm(const Matrix& m, const PowerIterationOptions& opts) {
    require_finite(m, "spectral_norm");
    if (m.empty() || m.is_zero()) return 0.0;
    const Matrix gram = m.rows() >= m.cols() ? matmul_tn(m, m) : matmul_nt(m, m);
    const std::size_t n = gram.rows();

    // Deterministic start with no special alignment to coordinate axes.
    std::vector<double> v(n), bv(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.37 * std::sin(1.0 + 2.3 * static_cast<double>(i));
    auto normalize = [](std::vector<double>& x) {
        const double s = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
        for (double& e : x) e /= s;
    };
    normalize(v);

    double lambda = 0.0;
    for (int it = 0; it < opts.max_iterations; ++it) {
        for (std::size_t i = 0; i < n; ++i) {
            auto row = gram.row(i);
            bv[i] = std::inner_product(row.begin(), row.end(), v.begin(), 0.0);
        }
        lambda = std::inner_product(v.begin(), v.end(), bv.begin(), 0.0);
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i) resid += (bv[i] - lambda * v[i]) * (bv[i] - lambda * v[i]);
        if (std::sqrt(resid) <= opts.relative_tolerance * lambda) break;
        v = bv;
        normalize(v);
    }
    return std::sqrt(std::max(lambda, 0.0));
}

double nuclear_norm(const Matrix& m) {
    require_finite(m, "nuclear_norm");
    if (m.empty() || m.is_zero()) return 0.0;
    const auto svd = svd_reduced(m);
    return std::accumulate(svd.sigma.begin(), svd.sigma.end(), 0.0);
}

} // namespace adago::linalg
