#pragma once

#include "adago/linalg/matrix.hpp"

namespace adago::linalg {

double frobenius_norm(const Matrix& m);

struct PowerIterationOptions {
    double relative_tolerance = 1e-10;
    int max_iterations = 10000;
};

/// Largest singular value via power iteration on the smaller Gram matrix.
/// Stops when the Rayleigh residual ‖Bv − λv‖ ≤ tol·λ.
double spectral_norm(const Matrix& m, const PowerIterationOptions& opts = {});

/// Sum of singular values; 0 for the zero matrix.
double nuclear_norm(const Matrix& m);

} // namespace adago::linalg
