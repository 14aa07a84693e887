#pragma once

#include "syncind/depmeasure.hpp"
#include "syncind/harness/generators.hpp"
#include "syncind/linsys.hpp"
#include "syncind/ranktest.hpp"
#include "syncind/robusttest.hpp"
#include "syncind/spsconf.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace syncind::harness {

/// Exogenous input of a simulated system.
struct InputSpec {
    enum class Kind { zero, gaussian };
    Kind kind = Kind::zero;
    double scale = 1.0;  ///< variance for Kind::gaussian
};

struct SystemSpec {
    linsys::ModelStructure structure = linsys::ModelStructure::ar1();
    linsys::ParamVector truth{{0.5}};
    std::vector<std::vector<double>> grid_axes{spsconf::linspace(-1.0, 1.0, 41)};
    InputSpec input;
};

struct TestSpec {
    enum class Kind { iid, robust };

    Kind kind = Kind::iid;
    depmeasure::DependenceEstimator estimator;
    std::size_t m = 40;
    std::size_t r = 6;
    std::optional<std::size_t> p;
    ranktest::RankConfig::Form form = ranktest::RankConfig::Form::one_sided;
    double alpha = 0.15;  ///< robust only
    std::size_t sps_M = 80;
    std::size_t sps_q = 1;

    [[nodiscard]] double configured_level() const;
};

struct SweepSpec {
    enum class Variable { none, angle, radius, n };
    Variable variable = Variable::none;
    std::vector<double> values;
};

[[nodiscard]] std::string sweep_name(SweepSpec::Variable v);

struct ExperimentConfig {
    SystemSpec y;
    SystemSpec z = SystemSpec{linsys::ModelStructure::ar1(), linsys::ParamVector{{0.3}},
                              {spsconf::linspace(-1.0, 1.0, 41)}, {}};
    InnovationGenerator generator;
    std::size_t n = 200;
    TestSpec test;
    std::size_t trials = 100;
    SweepSpec sweep;
    std::uint64_t master_seed = 0;

    /// Throws std::invalid_argument naming the offending setting.
    void validate() const;
};

/// Seeds of trial `index`: hash(master_seed, index).
[[nodiscard]] std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t index);

struct SimulatedPair {
    robusttest::SystemData y;
    robusttest::SystemData z;
    depmeasure::PairedSample innovations;
};

/// Draw innovations and inputs for one trial and simulate both systems from
/// zero initial conditions.
[[nodiscard]] SimulatedPair simulate_pair(const ExperimentConfig& cfg, std::size_t n,
                                          const InnovationGenerator& gen, std::uint64_t seed);

/// Rank-test configuration derived from a trial seed.
[[nodiscard]] ranktest::RankConfig rank_config(const TestSpec& test, std::uint64_t seed);
[[nodiscard]] robusttest::RobustConfig robust_config(const TestSpec& test, std::uint64_t seed);

/// Known-parameter test on the residuals at the true parameters.
[[nodiscard]] ranktest::TestReport run_iid_on(const ExperimentConfig& cfg,
                                              const robusttest::SystemData& y,
                                              const robusttest::SystemData& z, std::uint64_t seed,
                                              unsigned threads = 1);

[[nodiscard]] robusttest::RobustReport run_robust_on(const ExperimentConfig& cfg,
                                                     const robusttest::SystemData& y,
                                                     const robusttest::SystemData& z,
                                                     std::uint64_t seed, unsigned threads = 1);

/// Configured test on freshly simulated data; true iff H0 is rejected.
[[nodiscard]] bool run_trial(const ExperimentConfig& cfg, std::size_t n,
                             const InnovationGenerator& gen, std::uint64_t seed);

struct PowerCurve {
    std::string variable;
    std::vector<double> sweep;
    std::vector<std::size_t> rejections;
    std::vector<double> power;
    std::vector<double> half_width;  ///< 1.96 sqrt(f(1-f)/trials)
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string test;
    std::string estimator;
    std::string generator;
    double level = 0.0;
    std::size_t n = 0;
};

/// Rejection frequency of the configured test at each sweep value. Trials
/// run in parallel; results do not depend on `threads`.
[[nodiscard]] PowerCurve run_power_curve(const ExperimentConfig& cfg, unsigned threads = 1);

}  // namespace syncind::harness
