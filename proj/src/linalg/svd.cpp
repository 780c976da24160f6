#include "adago/linalg/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "adago/errors.hpp"

namespace adago::linalg {
namespace {

// Columns of the working matrix are stored as rows so that rotations touch
// contiguous memory.
struct JacobiWork {
    Matrix cols;  // n × m, row i is column i of the (tall) input
    Matrix vcols; // n × n, row i is column i of V
};

double dot(const double* x, const double* y, std::size_t len) {
    double acc = 0.0;
    for (std::size_t i = 0; i < len; ++i) acc += x[i] * y[i];
    return acc;
}

void rotate(double* x, double* y, std::size_t len, double c, double s) {
    for (std::size_t i = 0; i < len; ++i) {
        const double a = x[i];
        const double b = y[i];
        x[i] = c * a - s * b;
        y[i] = s * a + c * b;
    }
}

// Orthogonalizes columns p and q. Returns true if a rotation was applied.
bool jacobi_pair(JacobiWork& w, std::size_t p, std::size_t q, double tol) {
    const std::size_t len = w.cols.cols();
    double* xp = w.cols.row(p).data();
    double* xq = w.cols.row(q).data();
    const double alpha = dot(xp, xp, len);
    const double beta = dot(xq, xq, len);
    const double gamma = dot(xp, xq, len);
    if (alpha == 0.0 || beta == 0.0) return false;
    if (std::abs(gamma) <= tol * std::sqrt(alpha) * std::sqrt(beta)) return false;

    const double zeta = (beta - alpha) / (2.0 * gamma);
    const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
    const double c = 1.0 / std::hypot(1.0, t);
    const double s = c * t;
    rotate(xp, xq, len, c, s);
    const std::size_t n = w.vcols.cols();
    rotate(w.vcols.row(p).data(), w.vcols.row(q).data(), n, c, s);
    return true;
}

JacobiWork prepare(const Matrix& tall) {
    return {tall.transposed(), Matrix::identity(tall.cols())};
}

SvdResult finish(JacobiWork& w, bool transposed, double rank_threshold) {
    const std::size_t n = w.cols.rows();
    const std::size_t len = w.cols.cols();
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = w.cols.row(i).data();
        norms[i] = std::sqrt(dot(x, x, len));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });

    const double sigma_max = norms[order.front()];
    std::size_t k = 0;
    while (k < n && norms[order[k]] > rank_threshold * sigma_max) ++k;

    Matrix left(len, k), right(n, k);
    std::vector<double> sigma(k);
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t src = order[j];
        sigma[j] = norms[src];
        for (std::size_t i = 0; i < len; ++i) left(i, j) = w.cols(src, i) / sigma[j];
        for (std::size_t i = 0; i < n; ++i) right(i, j) = w.vcols(src, i);
    }
    if (transposed) return {std::move(right), std::move(sigma), std::move(left)};
    return {std::move(left), std::move(sigma), std::move(right)};
}

void check_input(const Matrix& m) {
    if (m.empty()) throw InvalidInput("svd_reduced: empty matrix");
    require_finite(m, "svd_reduced");
    if (m.is_zero()) throw DegenerateInput("svd_reduced: zero matrix has no singular vectors");
}

[[noreturn]] void fail_convergence(int sweeps) {
    throw NumericFailure("svd_reduced: Jacobi sweeps did not converge after " +
                         std::to_string(sweeps) + " sweeps");
}

// Round-robin (chess tournament) schedule: n_slots-1 rounds, each a perfect
// matching of n_slots players. A player index ≥ n is a bye.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> round_robin(std::size_t n) {
    const std::size_t slots = n + (n % 2);
    std::vector<std::size_t> ring(slots);
    std::iota(ring.begin(), ring.end(), std::size_t{0});
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> rounds;
    for (std::size_t r = 0; r + 1 < slots; ++r) {
        std::vector<std::pair<std::size_t, std::size_t>> round;
        for (std::size_t i = 0; i < slots / 2; ++i) {
            std::size_t a = ring[i];
            std::size_t b = ring[slots - 1 - i];
            if (a >= n || b >= n) continue;
            if (a > b) std::swap(a, b);
            round.emplace_back(a, b);
        }
        rounds.push_back(std::move(round));
        std::rotate(ring.begin() + 1, ring.end() - 1, ring.end());
    }
    return rounds;
}

} // namespace

Matrix SvdResult::reconstruct() const {
    Matrix out(u.rows(), v.rows());
    for (std::size_t i = 0; i < u.rows(); ++i)
        for (std::size_t j = 0; j < v.rows(); ++j) {
            double acc = 0.0;
            for (std::size_t l = 0; l < sigma.size(); ++l) acc += u(i, l) * sigma[l] * v(j, l);
            out(i, j) = acc;
        }
    return out;
}

SvdResult svd_reduced(const Matrix& m, const JacobiOptions& opts) {
    check_input(m);
    const bool transposed = m.cols() > m.rows();
    JacobiWork w = prepare(transposed ? m.transposed() : m);
    const std::size_t n = w.cols.rows();
    const auto rounds = round_robin(n);
    const bool big = n * w.cols.cols() >= 4096;

    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        bool rotated = false;
        for (const auto& round : rounds) {
            const auto pairs = static_cast<std::ptrdiff_t>(round.size());
#pragma omp parallel for schedule(static) reduction(|| : rotated) if (big)
            for (std::ptrdiff_t i = 0; i < pairs; ++i) {
                if (jacobi_pair(w, round[i].first, round[i].second, opts.tolerance)) rotated = true;
            }
        }
        if (!rotated) return finish(w, transposed, opts.rank_threshold);
    }
    fail_convergence(opts.max_sweeps);
}

namespace serial {

SvdResult svd_reduced(const Matrix& m, const JacobiOptions& opts) {
    check_input(m);
    const bool transposed = m.cols() > m.rows();
    JacobiWork w = prepare(transposed ? m.transposed() : m);
    const std::size_t n = w.cols.rows();
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                rotated = jacobi_pair(w, p, q, opts.tolerance) || rotated;
        if (!rotated) return finish(w, transposed, opts.rank_threshold);
    }
    fail_convergence(opts.max_sweeps);
}

} // namespace serial
} // namespace adago::linalg
