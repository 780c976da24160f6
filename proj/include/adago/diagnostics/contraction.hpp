#pragma once

#include <vector>

#include "adago/linalg/matrix.hpp"

namespace adago::diagnostics {

using linalg::Matrix;

/// ‖I − η·XXᵀ‖₂ for the d×J design X.
double contraction_factor_gd(const Matrix& x, double eta);

/// P = VΣVᵀ + ‖G‖₂(I − VVᵀ) from the reduced SVD G = UΣVᵀ, with its inverse.
/// For any G, G·P⁻¹ = UVᵀ.
struct OgdPreconditioner {
    Matrix p;
    Matrix p_inv;
    std::vector<double> sigma; // nonzero singular values of G, nonincreasing
};

/// Throws DegenerateInput for a zero gradient.
OgdPreconditioner ogd_preconditioner(const Matrix& grad);

/// ‖I − η·XXᵀ·P⁻¹‖₂ with P built from `grad` (m×d, X is d×J).
double contraction_factor_ogd(const Matrix& x, const Matrix& grad, double eta);

/// Eigenvalues of P (it is symmetric positive definite), nonincreasing.
std::vector<double> preconditioner_eigenvalues(const OgdPreconditioner& pre);

} // namespace adago::diagnostics
