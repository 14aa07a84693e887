#include "syncind/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace syncind {

double uniform01(CounterRng& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_index(CounterRng& rng, std::uint64_t bound) noexcept {
    // Lemire's multiply-shift with rejection; unbiased.
    std::uint64_t x = rng();
    __uint128_t prod = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            x = rng();
            prod = static_cast<__uint128_t>(x) * bound;
            low = static_cast<std::uint64_t>(prod);
        }
    }
    return static_cast<std::uint64_t>(prod >> 64);
}

double rademacher(CounterRng& rng) noexcept {
    return (rng() >> 63) != 0 ? 1.0 : -1.0;
}

double standard_normal(CounterRng& rng) noexcept {
    // 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double standard_laplace(CounterRng& rng) noexcept {
    const double u = uniform01(rng) - 0.5;
    const double mag = -std::log(1.0 - 2.0 * std::abs(u));
    return u < 0.0 ? -mag : mag;
}

double student_t(CounterRng& rng, int df) noexcept {
    const double z = standard_normal(rng);
    double chi2 = 0.0;
    for (int k = 0; k < df; ++k) {
        const double g = standard_normal(rng);
        chi2 += g * g;
    }
    return z / std::sqrt(chi2 / df);
}

std::vector<std::uint32_t> random_permutation(CounterRng& rng, std::size_t size) {
    std::vector<std::uint32_t> perm(size);
    std::iota(perm.begin(), perm.end(), 0U);
    for (std::size_t i = size; i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

}  // namespace syncind
