#pragma once

#include "adago/linalg/matrix.hpp"

namespace adago::linalg {

/// C = A·B. OpenMP-parallel over output rows; each entry accumulates over k in
/// ascending order, so the result is bit-identical to serial::matmul for any
/// thread count.
Matrix matmul(const Matrix& a, const Matrix& b);

/// Aᵀ·B
Matrix matmul_tn(const Matrix& a, const Matrix& b);

/// A·Bᵀ
Matrix matmul_nt(const Matrix& a, const Matrix& b);

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b);

} // namespace serial
} // namespace adago::linalg
