#pragma once

#include <cstddef>
#include <vector>

#include "adago/linalg/matrix.hpp"

namespace adago::linalg {

/// Reduced SVD m = u·diag(sigma)·vᵀ restricted to the numerical rank.
struct SvdResult {
    Matrix u;                  // rows × k, orthonormal columns
    std::vector<double> sigma; // k values, nonincreasing
    Matrix v;                  // cols × k, orthonormal columns

    std::size_t rank() const noexcept { return sigma.size(); }
    Matrix reconstruct() const;
};

struct JacobiOptions {
    /// Pair (p, q) is rotated while |⟨a_p, a_q⟩| > tolerance·‖a_p‖‖a_q‖.
    double tolerance = 1e-12;
    int max_sweeps = 60;
    /// Singular values ≤ rank_threshold·σ_max are dropped.
    double rank_threshold = 1e-12;
};

/// One-sided Jacobi SVD on the taller orientation of `m`. Rotations within a
/// round act on disjoint column pairs (round-robin ordering) and run in
/// parallel.
///
/// Throws InvalidInput on non-finite input, DegenerateInput on the zero
/// matrix, NumericFailure if `max_sweeps` sweeps do not converge.
SvdResult svd_reduced(const Matrix& m, const JacobiOptions& opts = {});

namespace serial {

/// Cyclic-by-row Jacobi ordering; reference for svd_reduced.
SvdResult svd_reduced(const Matrix& m, const JacobiOptions& opts = {});

} // namespace serial
} // namespace adago::linalg
