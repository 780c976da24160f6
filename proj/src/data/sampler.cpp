#include "adago/data/sampler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "adago/data/rng.hpp"
#include "adago/errors.hpp"

namespace adago::data {

BatchSchedule BatchSchedule::parse(std::string_view text) {
    if (text == "full") return full();
    if (text == "sqrt" || text == "sqrt_t") return sqrt_t();
    if (text == "linear" || text == "linear_t") return linear_t();
    std::size_t b = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), b);
    if (ec != std::errc{} || end != text.data() + text.size() || b == 0)
        throw ConfigError("batch schedule must be full, sqrt, linear or a positive integer, got '" +
                          std::string(text) + "'");
    return constant(b);
}

std::string BatchSchedule::to_string() const {
    switch (kind) {
    case ScheduleKind::sqrt_t: return "sqrt";
    case ScheduleKind::linear_t: return "linear";
    case ScheduleKind::full: return "full";
    case ScheduleKind::constant: break;
    }
    return std::to_string(size);
}

std::size_t BatchSchedule::batch_size(std::uint64_t t, std::size_t n) const {
    if (n == 0) throw InvalidInput("batch_size: empty dataset");
    if (t == 0) throw InvalidInput("batch_size: steps are numbered from 1");
    std::size_t b = n;
    switch (kind) {
    case ScheduleKind::constant: b = size; break;
    case ScheduleKind::sqrt_t: b = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(t)))); break;
    case ScheduleKind::linear_t: b = static_cast<std::size_t>(t); break;
    case ScheduleKind::full: break;
    }
    return std::clamp<std::size_t>(b, 1, n);
}

models::Batch select_rows(const models::Batch& source, std::span<const std::size_t> rows) {
    models::Batch out;
    out.weight = source.weight;
    const bool has_targets = !source.targets.empty();
    out.inputs = linalg::Matrix(rows.size(), source.inputs.cols());
    if (has_targets) out.targets = linalg::Matrix(rows.size(), source.targets.cols());
    if (!source.labels.empty()) out.labels.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t r = rows[i];
        if (r >= source.size()) throw InvalidInput("select_rows: row index out of range");
        std::ranges::copy(source.inputs.row(r), out.inputs.row(i).begin());
        if (has_targets) std::ranges::copy(source.targets.row(r), out.targets.row(i).begin());
        if (!source.labels.empty()) out.labels.push_back(source.labels[r]);
    }
    return out;
}

models::Batch sample_minibatch(const models::Batch& train, const BatchSchedule& schedule, std::uint64_t seed,
                               std::uint64_t t, bool population_weight) {
    const std::size_t n = train.size();
    const std::size_t b = schedule.batch_size(t, n);
    if (schedule.kind == ScheduleKind::full || b == n) {
        models::Batch all = train;
        if (population_weight) all.weight = 1.0;
        return all;
    }
    // Partial Fisher–Yates: the first b slots are a uniform sample without replacement.
    CounterRng rng(seed, Stream::sampling, t);
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < b; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    models::Batch out = select_rows(train, std::span(idx).first(b));
    if (population_weight) out.weight = static_cast<double>(n) / static_cast<double>(b);
    return out;
}

} // namespace adago::data
