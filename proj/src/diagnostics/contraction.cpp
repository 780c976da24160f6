#include "adago/diagnostics/contraction.hpp"

#include "adago/errors.hpp"
#include "adago/linalg/kernels.hpp"
#include "adago/linalg/svd.hpp"

namespace adago::diagnostics {
namespace {

// Largest singular value through the full Jacobi SVD rather than power
// iteration, so per-step inequality checks are not limited by an iterative
// tolerance.
double exact_spectral_norm(const Matrix& m) {
    if (m.is_zero()) return 0.0;
    return linalg::svd_reduced(m).sigma.front();
}

Matrix identity_minus(const Matrix& m, double eta) {
    Matrix out = Matrix::identity(m.rows());
    out.add_scaled(m, -eta);
    return out;
}

} // namespace

double contraction_factor_gd(const Matrix& x, double eta) {
    linalg::require_finite(x, "contraction_factor_gd");
    return exact_spectral_norm(identity_minus(linalg::matmul_nt(x, x), eta));
}

OgdPreconditioner ogd_preconditioner(const Matrix& grad) {
    linalg::require_finite(grad, "ogd_preconditioner");
    if (grad.is_zero()) throw DegenerateInput("ogd_preconditioner: zero gradient gives a singular P");
    const auto svd = linalg::svd_reduced(grad);
    const std::size_t d = grad.cols();
    const std::size_t k = svd.rank();
    const double top = svd.sigma.front();

    // P = top·I + V(Σ − top·I)Vᵀ and P⁻¹ = I/top + V(Σ⁻¹ − I/top)Vᵀ.
    Matrix vs(d, k), vs_inv(d, k);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            vs(i, j) = svd.v(i, j) * (svd.sigma[j] - top);
            vs_inv(i, j) = svd.v(i, j) * (1.0 / svd.sigma[j] - 1.0 / top);
        }
    OgdPreconditioner pre;
    pre.p = Matrix::identity(d) * top + linalg::matmul_nt(vs, svd.v);
    pre.p_inv = Matrix::identity(d) * (1.0 / top) + linalg::matmul_nt(vs_inv, svd.v);
    pre.sigma = svd.sigma;
    return pre;
}

double contraction_factor_ogd(const Matrix& x, const Matrix& grad, double eta) {
    if (grad.cols() != x.rows()) throw InvalidInput("contraction_factor_ogd: gradient width must match X rows");
    const auto pre = ogd_preconditioner(grad);
    return exact_spectral_norm(identity_minus(linalg::matmul(linalg::matmul_nt(x, x), pre.p_inv), eta));
}

std::vector<double> preconditioner_eigenvalues(const OgdPreconditioner& pre) {
    return linalg::svd_reduced(pre.p).sigma;
}

} // namespace adago::diagnostics
