#include "adago/models/activations.hpp"

#include <cmath>
#include <numbers>

namespace adago::models {
namespace {
constexpr double kCoeff = 0.044715;
const double kScale = std::sqrt(2.0 / std::numbers::pi);
} // namespace

double gelu(double x) {
    return 0.5 * x * (1.0 + std::tanh(kScale * (x + kCoeff * x * x * x)));
}

double gelu_prime(double x) {
    const double th = std::tanh(kScale * (x + kCoeff * x * x * x));
    const double du = kScale * (1.0 + 3.0 * kCoeff * x * x);
    return 0.5 * (1.0 + th) + 0.5 * x * (1.0 - th * th) * du;
}

} // namespace adago::models
