#include "syncind/harness/experiment.hpp"

#include "syncind/parallel.hpp"
#include "syncind/rng.hpp"

#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace syncind::harness {

using linsys::Series;
using robusttest::SystemData;

double TestSpec::configured_level() const {
    if (kind == Kind::robust) return alpha;
    ranktest::RankConfig cfg;
    cfg.m = m;
    cfg.r = r;
    cfg.p = p;
    cfg.form = form;
    return cfg.level();
}

std::string sweep_name(SweepSpec::Variable v) {
    switch (v) {
        case SweepSpec::Variable::none: return "none";
        case SweepSpec::Variable::angle: return "angle";
        case SweepSpec::Variable::radius: return "radius";
        case SweepSpec::Variable::n: return "n";
    }
    return "none";
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("monte_carlo.trials must be >= 1");
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    for (std::size_t i = 1; i < sweep.values.size(); ++i) {
        if (sweep.values[i] < sweep.values[i - 1]) {
            throw std::invalid_argument("monte_carlo.sweep.values must be sorted");
        }
    }
    if (sweep.variable == SweepSpec::Variable::n) {
        for (double v : sweep.values) {
            if (!(v >= 1.0) || v != std::floor(v)) {
                throw std::invalid_argument("monte_carlo.sweep.values must be positive integers for n");
            }
        }
    }
    generator.validate();
    for (const auto* sys : {&y, &z}) {
        if (sys->truth.size() != sys->structure.free_count()) {
            throw std::invalid_argument("systems.*.true_params length does not match the structure");
        }
    }
    if (test.kind == TestSpec::Kind::iid) {
        (void)rank_config(test, 0);
    } else {
        robust_config(test, 0).validate();
    }
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t index) {
    return derive_seed(master_seed, StreamTag::trial, index);
}

namespace {

Series make_input(const InputSpec& spec, std::size_t n, std::uint64_t seed) {
    if (spec.kind == InputSpec::Kind::zero) return Series::zeros(n);
    CounterRng rng(seed);
    const double sd = std::sqrt(spec.scale);
    std::vector<double> u(n);
    for (auto& x : u) x = sd * standard_normal(rng);
    return Series(std::move(u));
}

}  // namespace

SimulatedPair simulate_pair(const ExperimentConfig& cfg, std::size_t n,
                            const InnovationGenerator& gen, std::uint64_t seed) {
    depmeasure::PairedSample innov = generate(gen, n, seed);
    const Series e(std::vector<double>(innov.e().begin(), innov.e().end()));
    const Series v(std::vector<double>(innov.n().begin(), innov.n().end()));

    const Series u_y = make_input(cfg.y.input, n, derive_seed(seed, StreamTag::inputs, 0));
    const Series u_z = make_input(cfg.z.input, n, derive_seed(seed, StreamTag::inputs, 1));
    Series y = linsys::simulate(cfg.y.structure.model(cfg.y.truth), u_y, e);
    Series z = linsys::simulate(cfg.z.structure.model(cfg.z.truth), u_z, v);
    return SimulatedPair{SystemData{cfg.y.structure, u_y, std::move(y)},
                         SystemData{cfg.z.structure, u_z, std::move(z)}, std::move(innov)};
}

ranktest::RankConfig rank_config(const TestSpec& test, std::uint64_t seed) {
    ranktest::RankConfig rc;
    rc.m = test.m;
    rc.r = test.r;
    rc.p = test.p;
    rc.form = test.form;
    rc.perm_seed = derive_seed(seed, StreamTag::permutations);
    rc.tie_seed = derive_seed(seed, StreamTag::tie_break);
    rc.validate();
    return rc;
}

robusttest::RobustConfig robust_config(const TestSpec& test, std::uint64_t seed) {
    robusttest::RobustConfig rc;
    rc.alpha = test.alpha;
    rc.m = test.m;
    rc.r = test.r;
    rc.estimator = test.estimator;
    rc.perm_seed = derive_seed(seed, StreamTag::permutations);
    rc.tie_seed = derive_seed(seed, StreamTag::tie_break);
    rc.sps_y = spsconf::SpsConfig{test.sps_M, test.sps_q, derive_seed(seed, StreamTag::sps_signs, 0),
                                  derive_seed(seed, StreamTag::sps_tie, 0)};
    rc.sps_z = spsconf::SpsConfig{test.sps_M, test.sps_q, derive_seed(seed, StreamTag::sps_signs, 1),
                                  derive_seed(seed, StreamTag::sps_tie, 1)};
    return rc;
}

ranktest::TestReport run_iid_on(const ExperimentConfig& cfg, const SystemData& y,
                                const SystemData& z, std::uint64_t seed, unsigned threads) {
    const depmeasure::PairedSample residuals =
        robusttest::residual_pair(cfg.y.truth, cfg.z.truth, y, z);
    return ranktest::iid_independence_test(residuals, cfg.test.estimator,
                                           rank_config(cfg.test, seed), threads);
}

robusttest::RobustReport run_robust_on(const ExperimentConfig& cfg, const SystemData& y,
                                       const SystemData& z, std::uint64_t seed, unsigned threads) {
    return robusttest::robust_independence_test(y, z, robust_config(cfg.test, seed),
                                                cfg.y.grid_axes, cfg.z.grid_axes, threads);
}

bool run_trial(const ExperimentConfig& cfg, std::size_t n, const InnovationGenerator& gen,
               std::uint64_t seed) {
    const SimulatedPair data = simulate_pair(cfg, n, gen, seed);
    if (cfg.test.kind == TestSpec::Kind::iid) {
        return run_iid_on(cfg, data.y, data.z, seed).reject;
    }
    return run_robust_on(cfg, data.y, data.z, seed).decision.reject;
}

PowerCurve run_power_curve(const ExperimentConfig& cfg, unsigned threads) {
    cfg.validate();
    PowerCurve curve;
    curve.variable = sweep_name(cfg.sweep.variable);
    curve.sweep = cfg.sweep.values;
    if (curve.sweep.empty() || cfg.sweep.variable == SweepSpec::Variable::none) {
        curve.variable = "none";
        curve.sweep = {0.0};
    }
    curve.trials = cfg.trials;
    curve.seed = cfg.master_seed;
    curve.test = cfg.test.kind == TestSpec::Kind::iid ? "iid" : "robust";
    curve.estimator = cfg.test.estimator.describe();
    curve.generator = cfg.generator.describe();
    curve.level = cfg.test.configured_level();
    curve.n = cfg.n;

    const std::size_t points = curve.sweep.size();
    std::vector<std::uint8_t> outcome(points * cfg.trials, 0);
    parallel_for(outcome.size(), threads, [&](std::size_t k) {
        const std::size_t point = k / cfg.trials;
        const std::size_t trial = k % cfg.trials;
        InnovationGenerator gen = cfg.generator;
        std::size_t n = cfg.n;
        const double value = curve.sweep[point];
        switch (cfg.sweep.variable) {
            case SweepSpec::Variable::angle: gen.angle = value; break;
            case SweepSpec::Variable::radius: gen.radius = value; break;
            case SweepSpec::Variable::n: n = static_cast<std::size_t>(value); break;
            case SweepSpec::Variable::none: break;
        }
        outcome[k] = run_trial(cfg, n, gen, trial_seed(cfg.master_seed, trial)) ? 1 : 0;
    });

    const auto trials = static_cast<double>(cfg.trials);
    for (std::size_t p = 0; p < points; ++p) {
        std::size_t count = 0;
        for (std::size_t t = 0; t < cfg.trials; ++t) count += outcome[p * cfg.trials + t];
        const double f = static_cast<double>(count) / trials;
        curve.rejections.push_back(count);
        curve.power.push_back(f);
        curve.half_width.push_back(1.96 * std::sqrt(f * (1.0 - f) / trials));
    }
    return curve;
}

}  // namespace syncind::harness
