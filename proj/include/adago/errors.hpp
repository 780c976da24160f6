#pragma once

#include <stdexcept>
#include <string>

namespace adago {

/// Malformed arguments: shape mismatch, non-finite entries, bad ranges.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input is well-formed but the operation is undefined on it (e.g. Orth(0)).
class DegenerateInput : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Iterative kernel failed to converge.
class NumericFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller broke an API contract (e.g. backward on a stale forward cache).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace adago
