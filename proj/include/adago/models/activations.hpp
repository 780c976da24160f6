#pragma once

namespace adago::models {

/// tanh approximation: 0.5·x·(1 + tanh(√(2/π)·(x + 0.044715·x³))).
double gelu(double x);
double gelu_prime(double x);

} // namespace adago::models
