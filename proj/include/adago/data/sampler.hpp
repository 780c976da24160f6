#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "adago/models/model.hpp"

namespace adago::data {

enum class ScheduleKind { constant, sqrt_t, linear_t, full };

/// Minibatch size as a function of the step t ≥ 1.
struct BatchSchedule {
    ScheduleKind kind = ScheduleKind::constant;
    std::size_t size = 128; // constant only

    static BatchSchedule constant(std::size_t b) { return {ScheduleKind::constant, b}; }
    static BatchSchedule sqrt_t() { return {ScheduleKind::sqrt_t, 0}; }
    static BatchSchedule linear_t() { return {ScheduleKind::linear_t, 0}; }
    static BatchSchedule full() { return {ScheduleKind::full, 0}; }

    /// Accepts "full", "sqrt", "linear", or a positive integer.
    static BatchSchedule parse(std::string_view text);
    std::string to_string() const;

    /// ⌈schedule(t)⌉ clipped to [1, n].
    std::size_t batch_size(std::uint64_t t, std::size_t n) const;
};

/// Minibatch for step t: b_t indices drawn without replacement from the
/// (seed, t)-keyed sampling stream. The full schedule returns `train` as is.
/// When `population_weight` is set, the batch weight becomes N/b_t so that
/// half-sum objectives get an unbiased stochastic gradient.
models::Batch sample_minibatch(const models::Batch& train, const BatchSchedule& schedule,
                               std::uint64_t seed, std::uint64_t t, bool population_weight = false);

/// Sub-batch of the given rows.
models::Batch select_rows(const models::Batch& source, std::span<const std::size_t> rows);

} // namespace adago::data
