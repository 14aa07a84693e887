#include "syncind/harness/cli.hpp"

#include "syncind/harness/config.hpp"
#include "syncind/harness/experiment.hpp"
#include "syncind/harness/report_io.hpp"
#include "syncind/harness/selftest.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <optional>

namespace syncind::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    bool timing = false;
};

void add_common(CLI::App* cmd, Options& opt, bool needs_config) {
    auto* c = cmd->add_option("--config", opt.config, "JSON configuration file (schema_version 1)");
    if (needs_config) c->required();
    cmd->add_option("--out", opt.out, "output directory")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "master seed, overrides the config");
    cmd->add_option("--threads", opt.threads, "worker threads; affects speed only")
        ->check(CLI::Range(1U, 1024U))
        ->capture_default_str();
    cmd->add_flag("--timing", opt.timing, "include wall-clock times in reports");
}

RunConfig load(const Options& opt) {
    RunConfig run = load_config(opt.config);
    if (opt.seed) run.experiment.master_seed = *opt.seed;
    return run;
}

/// Observed data from the config's data files, or one simulated record.
std::pair<robusttest::SystemData, robusttest::SystemData> obtain_data(const RunConfig& run,
                                                                      std::uint64_t seed) {
    const ExperimentConfig& cfg = run.experiment;
    if (run.data_y) {
        DataRecord y = read_data_csv(*run.data_y);
        DataRecord z = read_data_csv(*run.data_z);
        if (y.y.size() != z.y.size()) {
            throw std::runtime_error("data files for y and z must have the same number of rows");
        }
        return {robusttest::SystemData{cfg.y.structure, std::move(y.u), std::move(y.y)},
                robusttest::SystemData{cfg.z.structure, std::move(z.u), std::move(z.y)}};
    }
    SimulatedPair sim = simulate_pair(cfg, cfg.n, cfg.generator, seed);
    return {std::move(sim.y), std::move(sim.z)};
}

int cmd_simulate(const Options& opt) {
    const RunConfig run = load(opt);
    const ExperimentConfig& cfg = run.experiment;
    const SimulatedPair sim = simulate_pair(cfg, cfg.n, cfg.generator, trial_seed(cfg.master_seed, 0));
    const fs::path dir(opt.out);
    write_text_file(dir / "y.csv", columns_csv({"input", "output"}, {sim.y.u.vector(), sim.y.y.vector()}));
    write_text_file(dir / "z.csv", columns_csv({"input", "output"}, {sim.z.u.vector(), sim.z.y.vector()}));
    write_text_file(dir / "innovations.csv",
                    columns_csv({"e", "n"}, {{sim.innovations.e().begin(), sim.innovations.e().end()},
                                             {sim.innovations.n().begin(), sim.innovations.n().end()}}));
    std::cout << fmt::format("simulated n={} into {}\n", cfg.n, dir.string());
    return kExitOk;
}

int cmd_test_iid(const Options& opt) {
    RunConfig run = load(opt);
    run.experiment.test.kind = TestSpec::Kind::iid;
    const ExperimentConfig& cfg = run.experiment;
    const std::uint64_t seed = trial_seed(cfg.master_seed, 0);
    const auto [y, z] = obtain_data(run, seed);
    const ranktest::TestReport report = run_iid_on(cfg, y, z, seed, opt.threads);
    json doc = to_json(report, opt.timing);
    doc["config"] = experiment_json(cfg);
    doc["n"] = y.y.size();
    write_text_file(fs::path(opt.out) / "report.json", dump_json(doc));
    std::cout << fmt::format("rank {} of {}, level {:.6g}: {}\n", report.rank, report.m, report.level,
                             report.reject ? "H0 rejected" : "H0 accepted");
    return report.reject ? kExitRejected : kExitOk;
}

int cmd_test_robust(const Options& opt) {
    RunConfig run = load(opt);
    run.experiment.test.kind = TestSpec::Kind::robust;
    const ExperimentConfig& cfg = run.experiment;
    robust_config(cfg.test, 0).validate();
    const std::uint64_t seed = trial_seed(cfg.master_seed, 0);
    const auto [y, z] = obtain_data(run, seed);
    const robusttest::RobustReport report = run_robust_on(cfg, y, z, seed, opt.threads);
    json doc = to_json(report, opt.timing);
    doc["config"] = experiment_json(cfg);
    doc["n"] = y.y.size();
    const fs::path dir(opt.out);
    write_text_file(dir / "report.json", dump_json(doc));
    write_text_file(dir / "rank_field.csv", rank_field_csv(report.field));
    if (!report.decision.warning.empty()) std::cerr << "warning: " << report.decision.warning << "\n";
    std::cout << fmt::format("max rank {} over {} grid pairs, r={}, certified level {:.6g}: {}\n",
                             report.decision.max_rank, report.field.size(), report.decision.r,
                             report.decision.certified_level,
                             report.decision.reject ? "H0 rejected" : "H0 accepted");
    return report.decision.reject ? kExitRejected : kExitOk;
}

int cmd_sps_region(const Options& opt) {
    const RunConfig run = load(opt);
    const ExperimentConfig& cfg = run.experiment;
    const std::uint64_t seed = trial_seed(cfg.master_seed, 0);
    const auto [y, z] = obtain_data(run, seed);
    const robusttest::RobustConfig rc = robust_config(cfg.test, seed);
    const auto region_y = spsconf::sps_region(y.structure, y.u, y.y, cfg.y.grid_axes, rc.sps_y, opt.threads);
    const auto region_z = spsconf::sps_region(z.structure, z.u, z.y, cfg.z.grid_axes, rc.sps_z, opt.threads);
    const fs::path dir(opt.out);
    write_text_file(dir / "region_y.json", dump_json(to_json(region_y)));
    write_text_file(dir / "region_z.json", dump_json(to_json(region_z)));
    std::cout << fmt::format("accepted {}/{} (y) and {}/{} (z) grid points at beta {:.6g}\n",
                             region_y.accepted_indices().size(), region_y.size(),
                             region_z.accepted_indices().size(), region_z.size(), region_y.beta());
    return kExitOk;
}

int cmd_power_curve(const Options& opt) {
    const RunConfig run = load(opt);
    const PowerCurve curve = run_power_curve(run.experiment, opt.threads);
    const fs::path dir(opt.out);
    write_text_file(dir / "power_curve.csv", power_curve_csv(curve));
    json doc = to_json(curve);
    doc["config"] = experiment_json(run.experiment);
    write_text_file(dir / "power_curve.json", dump_json(doc));
    for (std::size_t i = 0; i < curve.sweep.size(); ++i) {
        std::cout << fmt::format("{}={:.6g}: power {:.4f} +- {:.4f}\n", curve.variable, curve.sweep[i],
                                 curve.power[i], curve.half_width[i]);
    }
    return kExitOk;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Finite-sample independence tests for synchronously driven linear systems", "syncind"};
    app.require_subcommand(1);
    Options opt;
    auto* simulate = app.add_subcommand("simulate", "simulate both systems and write y.csv, z.csv, innovations.csv");
    auto* test_iid = app.add_subcommand("test-iid", "rank test on residuals at the configured true parameters");
    auto* test_robust = app.add_subcommand("test-robust", "parameter-uniform test over SPS confidence regions");
    auto* sps = app.add_subcommand("sps-region", "SPS confidence regions of both systems");
    auto* power = app.add_subcommand("power-curve", "Monte Carlo rejection frequencies over a sweep");
    auto* selftest = app.add_subcommand("selftest", "run the hand-derived oracle checks");
    for (auto* cmd : {simulate, test_iid, test_robust, sps, power}) add_common(cmd, opt, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? kExitOk : kExitError;
    }

    try {
        if (*selftest) return run_selftest(std::cout) ? kExitOk : kExitError;
        if (*simulate) return cmd_simulate(opt);
        if (*test_iid) return cmd_test_iid(opt);
        if (*test_robust) return cmd_test_robust(opt);
        if (*sps) return cmd_sps_region(opt);
        if (*power) return cmd_power_curve(opt);
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitError;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace syncind::harness
