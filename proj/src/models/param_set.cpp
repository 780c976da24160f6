#include "adago/models/param_set.hpp"

#include <algorithm>

#include "adago/errors.hpp"

namespace adago::models {

std::string_view to_string(ParamKind kind) {
    switch (kind) {
    case ParamKind::matrix: return "matrix";
    case ParamKind::vector: return "vector";
    case ParamKind::scalar: return "scalar";
    case ParamKind::untagged: break;
    }
    return "untagged";
}

void ParamSet::add(std::string name, ParamKind kind, Matrix value) {
    if (std::any_of(params_.begin(), params_.end(), [&](const Param& p) { return p.name == name; }))
        throw InvalidInput("ParamSet: duplicate parameter '" + name + "'");
    Matrix grad(value.rows(), value.cols());
    params_.push_back({std::move(name), kind, std::move(value), std::move(grad)});
    ++revision_;
}

std::size_t ParamSet::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < params_.size(); ++i)
        if (params_[i].name == name) return i;
    throw InvalidInput("ParamSet: no parameter named '" + std::string(name) + "'");
}

const Param& ParamSet::at(std::string_view name) const { return params_[index_of(name)]; }

Matrix& ParamSet::mutable_value(std::size_t i) {
    ++revision_;
    return params_.at(i).value;
}

void ParamSet::zero_grads() {
    for (auto& p : params_) std::fill(p.grad.data().begin(), p.grad.data().end(), 0.0);
}

std::vector<Matrix> ParamSet::values() const {
    std::vector<Matrix> out;
    out.reserve(params_.size());
    for (const auto& p : params_) out.push_back(p.value);
    return out;
}

std::vector<Matrix> ParamSet::grads() const {
    std::vector<Matrix> out;
    out.reserve(params_.size());
    for (const auto& p : params_) out.push_back(p.grad);
    return out;
}

void ParamSet::set_values(const std::vector<Matrix>& values) {
    if (values.size() != params_.size()) throw InvalidInput("ParamSet::set_values: count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        linalg::require_same_shape(params_[i].value, values[i], "ParamSet::set_values");
        params_[i].value = values[i];
    }
    ++revision_;
}

} // namespace adago::models
