#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "adago/linalg/matrix.hpp"

namespace adago::models {

using linalg::Matrix;

/// Routing tag. Matrix parameters get orthogonalized updates under the hybrid
/// optimizers; vectors and scalars go to Adam.
enum class ParamKind { untagged, matrix, vector, scalar };

std::string_view to_string(ParamKind kind);

struct Param {
    std::string name;
    ParamKind kind = ParamKind::untagged;
    Matrix value; // vectors are stored 1×n, scalars 1×1
    Matrix grad;  // same shape as value
};

/// Named parameters with gradient slots. Every mutable access to a value bumps
/// `revision()`, which forward caches use to detect staleness.
class ParamSet {
public:
    void add(std::string name, ParamKind kind, Matrix value);

    std::size_t size() const noexcept { return params_.size(); }
    const Param& operator[](std::size_t i) const { return params_.at(i); }
    const Param& at(std::string_view name) const;
    std::size_t index_of(std::string_view name) const;

    Matrix& mutable_value(std::size_t i);
    Matrix& mutable_grad(std::size_t i) { return params_.at(i).grad; }
    void set_kind(std::size_t i, ParamKind kind) { params_.at(i).kind = kind; }

    void zero_grads();
    std::uint64_t revision() const noexcept { return revision_; }

    auto begin() const noexcept { return params_.begin(); }
    auto end() const noexcept { return params_.end(); }

    /// Values as a flat list; convenient for perturbation probes.
    std::vector<Matrix> values() const;
    std::vector<Matrix> grads() const;
    void set_values(const std::vector<Matrix>& values);

private:
    std::vector<Param> params_;
    std::uint64_t revision_ = 0;
};

} // namespace adago::models
