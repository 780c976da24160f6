#pragma once

#include <cstdint>
#include <limits>

namespace adago::data {

/// Independent random streams derived from one experiment seed.
enum class Stream : std::uint64_t {
    data = 0x1,     // dataset samples
    features = 0x2, // random Fourier features / ground-truth weights
    init = 0x3,     // parameter initialization
    sampling = 0x4, // minibatch indices
    probe = 0x5,    // diagnostics
};

/// Counter-based generator: the i-th output is splitmix64(key + i·φ), where the
/// key hashes (seed, stream, substream). Any (seed, stream, substream) triple
/// gives a reproducible, independent sequence; e.g. the minibatch at step t
/// uses substream t.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, Stream stream, std::uint64_t substream = 0) noexcept
        : key_(mix(mix(seed ^ kGolden) ^ (static_cast<std::uint64_t>(stream) * kGolden2) ^
                   mix(substream + kGolden))) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return mix(key_ + (++counter_) * kGolden); }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t kGolden2 = 0xD1B54A32D192ED03ull;

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace adago::data
