#pragma once

#include "adago/linalg/matrix.hpp"

namespace adago::linalg {

/// Orth(m) = U·Vᵀ from the reduced SVD: the nearest matrix (Frobenius) with
/// orthonormal rows or columns. Rank-deficient inputs map to the partial
/// isometry on the numerical range. Throws DegenerateInput for m = 0.
Matrix orthogonalize_exact(const Matrix& m);

/// Cubic Newton–Schulz: X₀ = m/‖m‖_F, X ← 1.5·X − 0.5·X·Xᵀ·X, `iters` times.
/// Converges to orthogonalize_exact(m) when the normalized singular values
/// lie in (0, √3), which Frobenius pre-scaling guarantees.
Matrix orthogonalize_newton_schulz(const Matrix& m, int iters);

/// Dispatch: exact SVD when ns_iters == 0, Newton–Schulz otherwise.
Matrix orthogonalize(const Matrix& m, int ns_iters);

} // namespace adago::linalg
