#pragma once

#include "syncind/depmeasure.hpp"

#include <cstddef>
#include <cstdint>
#include <string>

namespace syncind::harness {

/// Joint innovation law (E, N) used by the experiments.
struct InnovationGenerator {
    enum class Kind { independent_gaussian, rotated_mixture, extinct_gaussian, custom };

    Kind kind = Kind::independent_gaussian;
    double scale = 1.0;   ///< covariance scale*I; 1/4 for mixture and extinct by default
    double angle = 0.0;   ///< rotation in radians (rotated_mixture)
    double shift = 1.0;   ///< per-coordinate sign shift (rotated_mixture)
    double radius = 0.0;  ///< extinction radius (extinct_gaussian)
    std::string sampler;  ///< custom: "gaussian", "laplace" or "student_t3"

    static InnovationGenerator independent_gaussian(double scale = 1.0);
    static InnovationGenerator rotated_mixture(double angle, double shift = 1.0,
                                               double scale = 0.25);
    static InnovationGenerator extinct_gaussian(double radius, double scale = 0.25);
    static InnovationGenerator custom(std::string sampler);

    void validate() const;
    [[nodiscard]] std::string describe() const;
};

/// Gaussian(0, scale I) pairs shifted by independent random signs times
/// `shift` and rotated about the origin by `angle`.
[[nodiscard]] depmeasure::PairedSample gen_rotated_mixture(std::size_t n, double angle,
                                                           std::uint64_t seed, double shift = 1.0,
                                                           double scale = 0.25);

struct ExtinctSample {
    depmeasure::PairedSample sample;
    std::size_t raw_draws = 0;  ///< Gaussian pairs drawn, including discarded ones
};

/// Gaussian(0, scale I) pairs, discarding those strictly inside the circle of
/// the given radius until n remain.
[[nodiscard]] ExtinctSample gen_extinct_gaussian(std::size_t n, double radius, std::uint64_t seed,
                                                 double scale = 0.25);

/// Independent coordinates from a named marginal sampler.
[[nodiscard]] depmeasure::PairedSample gen_independent(std::size_t n, const std::string& sampler,
                                                       std::uint64_t seed, double scale = 1.0);

[[nodiscard]] depmeasure::PairedSample generate(const InnovationGenerator& gen, std::size_t n,
                                                std::uint64_t seed);

}  // namespace syncind::harness
