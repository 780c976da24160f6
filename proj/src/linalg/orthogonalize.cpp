#include "adago/linalg/orthogonalize.hpp"

#include "adago/errors.hpp"
#include "adago/linalg/kernels.hpp"
#include "adago/linalg/norms.hpp"
#include "adago/linalg/svd.hpp"

namespace adago::linalg {

Matrix orthogonalize_exact(const Matrix& m) {
    require_finite(m, "orthogonalize_exact");
    if (m.empty() || m.is_zero()) throw DegenerateInput("orthogonalize_exact: zero matrix");
    const auto svd = svd_reduced(m);
    return matmul_nt(svd.u, svd.v);
}

Matrix orthogonalize_newton_schulz(const Matrix& m, int iters) {
    if (iters < 1) throw InvalidInput("orthogonalize_newton_schulz: iters must be positive");
    const double norm = frobenius_norm(m);
    if (norm == 0.0) throw DegenerateInput("orthogonalize_newton_schulz: zero matrix");

    Matrix x = m * (1.0 / norm);
    const bool tall = x.rows() >= x.cols();
    for (int it = 0; it < iters; ++it) {
        // Contract through the smaller Gram matrix.
        Matrix cubic = tall ? matmul(x, matmul_tn(x, x)) : matmul(matmul_nt(x, x), x);
        x *= 1.5;
        x.add_scaled(cubic, -0.5);
    }
    return x;
}

Matrix orthogonalize(const Matrix& m, int ns_iters) {
    return ns_iters == 0 ? orthogonalize_exact(m) : orthogonalize_newton_schulz(m, ns_iters);
}

} // namespace adago::linalg
