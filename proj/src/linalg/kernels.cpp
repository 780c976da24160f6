#include "adago/linalg/kernels.hpp"

#include <cstddef>

#include "adago/errors.hpp"

namespace adago::linalg {
namespace {

constexpr std::size_t kParallelWork = 1u << 15;

void check_inner_dims(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw InvalidInput("matmul: inner dimensions differ");
}

} // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
    check_inner_dims(a, b);
    const std::size_t n = a.rows(), inner_dim = a.cols(), m = b.cols();
    Matrix c(n, m);
    const double* ap = a.data().data();
    const double* bp = b.data().data();
    double* cp = c.data().data();
    const bool big = n * inner_dim * m >= kParallelWork;
#pragma omp parallel for schedule(static) if (big)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        double* __restrict crow = cp + i * m;
        for (std::size_t k = 0; k < inner_dim; ++k) {
            const double aik = ap[i * inner_dim + k];
            const double* __restrict brow = bp + k * m;
#pragma omp simd
            for (std::size_t j = 0; j < m; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) { return matmul(a.transposed(), b); }

Matrix matmul_nt(const Matrix& a, const Matrix& b) { return matmul(a, b.transposed()); }

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b) {
    check_inner_dims(a, b);
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

} // namespace serial
} // namespace adago::linalg
