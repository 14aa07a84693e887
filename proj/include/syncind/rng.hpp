#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace syncind {

/// Purpose tags used to split one seed into independent streams.
enum class StreamTag : std::uint64_t {
    permutations = 1,
    tie_break = 2,
    sps_signs = 3,
    sps_tie = 4,
    innovations = 5,
    inputs = 6,
    trial = 7,
    system = 8,
};

/// Stateless 64-bit mixer (splitmix64 finalizer).
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derive a child seed for stream `(tag, index)` of `seed`. Distinct
/// (tag, index) pairs give statistically independent streams.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed, StreamTag tag,
                                                  std::uint64_t index = 0) noexcept {
    std::uint64_t h = mix64(seed + 0x9E3779B97F4A7C15ULL);
    h = mix64(h ^ (static_cast<std::uint64_t>(tag) * 0xD1B54A32D192ED03ULL));
    return mix64(h ^ (index + 0x632BE59BD9B4E019ULL));
}

/// Counter-based generator: the k-th output is a pure function of
/// (key, k), so any position of a stream can be reproduced without
/// replaying the prefix. Satisfies UniformRandomBitGenerator.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t key, std::uint64_t counter = 0) noexcept
        : key_(mix64(key)), counter_(counter) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    constexpr result_type operator()() noexcept {
        return mix64(key_ + 0x9E3779B97F4A7C15ULL * ++counter_);
    }

    [[nodiscard]] constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

// Samplers below are written out rather than taken from <random>: the
// standard distributions are implementation-defined, and results must be
// bit-identical across standard libraries.

/// Uniform on [0, 1) with 53 random bits.
[[nodiscard]] double uniform01(CounterRng& rng) noexcept;

/// Uniform integer in [0, bound). `bound` must be positive.
[[nodiscard]] std::uint64_t uniform_index(CounterRng& rng, std::uint64_t bound) noexcept;

/// +1 or -1 with equal probability.
[[nodiscard]] double rademacher(CounterRng& rng) noexcept;

/// Standard normal (Box-Muller, one variate per call).
[[nodiscard]] double standard_normal(CounterRng& rng) noexcept;

/// Laplace with location 0 and scale 1 (variance 2).
[[nodiscard]] double standard_laplace(CounterRng& rng) noexcept;

/// Student-t with `df` degrees of freedom; `df` must be a positive integer.
[[nodiscard]] double student_t(CounterRng& rng, int df) noexcept;

/// Uniformly random permutation of {0, ..., size-1} (Fisher-Yates).
[[nodiscard]] std::vector<std::uint32_t> random_permutation(CounterRng& rng, std::size_t size);

}  // namespace syncind
