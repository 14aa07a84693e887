#include "syncind/harness/generators.hpp"

#include "syncind/rng.hpp"

#include <cmath>
#include <fmt/format.h>
#include <stdexcept>
#include <vector>

namespace syncind::harness {

using depmeasure::PairedSample;

InnovationGenerator InnovationGenerator::independent_gaussian(double scale) {
    InnovationGenerator g;
    g.kind = Kind::independent_gaussian;
    g.scale = scale;
    return g;
}

InnovationGenerator InnovationGenerator::rotated_mixture(double angle, double shift, double scale) {
    InnovationGenerator g;
    g.kind = Kind::rotated_mixture;
    g.angle = angle;
    g.shift = shift;
    g.scale = scale;
    return g;
}

InnovationGenerator InnovationGenerator::extinct_gaussian(double radius, double scale) {
    InnovationGenerator g;
    g.kind = Kind::extinct_gaussian;
    g.radius = radius;
    g.scale = scale;
    return g;
}

InnovationGenerator InnovationGenerator::custom(std::string sampler) {
    InnovationGenerator g;
    g.kind = Kind::custom;
    g.sampler = std::move(sampler);
    return g;
}

void InnovationGenerator::validate() const {
    if (!(scale > 0.0)) throw std::invalid_argument("InnovationGenerator: scale must be positive");
    if (!(radius >= 0.0)) throw std::invalid_argument("InnovationGenerator: radius must be >= 0");
    if (kind == Kind::custom && sampler != "gaussian" && sampler != "laplace" &&
        sampler != "student_t3") {
        throw std::invalid_argument(fmt::format("InnovationGenerator: unknown sampler '{}'", sampler));
    }
}

std::string InnovationGenerator::describe() const {
    switch (kind) {
        case Kind::independent_gaussian:
            return fmt::format("independent_gaussian(scale={:.17g})", scale);
        case Kind::rotated_mixture:
            return fmt::format("rotated_mixture(angle={:.17g},shift={:.17g},scale={:.17g})", angle,
                               shift, scale);
        case Kind::extinct_gaussian:
            return fmt::format("extinct_gaussian(radius={:.17g},scale={:.17g})", radius, scale);
        case Kind::custom:
            return fmt::format("custom({})", sampler);
    }
    return "unknown";
}

PairedSample gen_rotated_mixture(std::size_t n, double angle, std::uint64_t seed, double shift,
                                 double scale) {
    CounterRng rng(derive_seed(seed, StreamTag::innovations));
    const double sd = std::sqrt(scale);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    std::vector<double> e(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = sd * standard_normal(rng) + shift * rademacher(rng);
        const double y = sd * standard_normal(rng) + shift * rademacher(rng);
        e[i] = c * x - s * y;
        v[i] = s * x + c * y;
    }
    return PairedSample(std::move(e), std::move(v));
}

ExtinctSample gen_extinct_gaussian(std::size_t n, double radius, std::uint64_t seed, double scale) {
    if (!(radius >= 0.0)) throw std::invalid_argument("gen_extinct_gaussian: negative radius");
    CounterRng rng(derive_seed(seed, StreamTag::innovations));
    const double sd = std::sqrt(scale);
    const double r2 = radius * radius;
    std::vector<double> e, v;
    e.reserve(n);
    v.reserve(n);
    std::size_t draws = 0;
    while (e.size() < n) {
        const double x = sd * standard_normal(rng);
        const double y = sd * standard_normal(rng);
        ++draws;
        if (x * x + y * y >= r2) {
            e.push_back(x);
            v.push_back(y);
        }
    }
    return {PairedSample(std::move(e), std::move(v)), draws};
}

PairedSample gen_independent(std::size_t n, const std::string& sampler, std::uint64_t seed,
                             double scale) {
    CounterRng rng(derive_seed(seed, StreamTag::innovations));
    const double sd = std::sqrt(scale);
    auto draw = [&]() -> double {
        if (sampler == "gaussian") return sd * standard_normal(rng);
        if (sampler == "laplace") return sd * standard_laplace(rng);
        if (sampler == "student_t3") return sd * student_t(rng, 3);
        throw std::invalid_argument(fmt::format("gen_independent: unknown sampler '{}'", sampler));
    };
    std::vector<double> e(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        e[i] = draw();
        v[i] = draw();
    }
    return PairedSample(std::move(e), std::move(v));
}

PairedSample generate(const InnovationGenerator& gen, std::size_t n, std::uint64_t seed) {
    gen.validate();
    switch (gen.kind) {
        case InnovationGenerator::Kind::independent_gaussian:
            return gen_independent(n, "gaussian", seed, gen.scale);
        case InnovationGenerator::Kind::rotated_mixture:
            return gen_rotated_mixture(n, gen.angle, seed, gen.shift, gen.scale);
        case InnovationGenerator::Kind::extinct_gaussian:
            return gen_extinct_gaussian(n, gen.radius, seed, gen.scale).sample;
        case InnovationGenerator::Kind::custom:
            return gen_independent(n, gen.sampler, seed, gen.scale);
    }
    throw std::logic_error("generate: unknown generator");
}

}  // namespace syncind::harness
