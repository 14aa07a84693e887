#include "syncind/harness/config.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <initializer_list>
#include <limits>

namespace syncind::harness {

using nlohmann::json;

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::runtime_error(fmt::format("config key '{}': {}", key, message)), key_(std::move(key)) {}

namespace {

std::string join(const std::string& key, const std::string& child) {
    return key.empty() ? child : key + "." + child;
}

void require_object(const json& node, const std::string& key) {
    if (!node.is_object()) throw ConfigError(key, "expected an object");
}

void check_keys(const json& node, const std::string& key, std::initializer_list<const char*> allowed) {
    require_object(node, key);
    for (const auto& [name, value] : node.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || name == a;
        if (!known) throw ConfigError(join(key, name), "unknown key");
    }
}

double get_double(const json& node, const std::string& name, const std::string& key,
                  std::optional<double> fallback = std::nullopt) {
    if (!node.contains(name)) {
        if (fallback) return *fallback;
        throw ConfigError(join(key, name), "missing");
    }
    const json& v = node.at(name);
    if (!v.is_number()) throw ConfigError(join(key, name), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(join(key, name), "expected a finite number");
    return d;
}

std::uint64_t get_uint(const json& node, const std::string& name, const std::string& key,
                       std::optional<std::uint64_t> fallback = std::nullopt) {
    if (!node.contains(name)) {
        if (fallback) return *fallback;
        throw ConfigError(join(key, name), "missing");
    }
    const json& v = node.at(name);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ConfigError(join(key, name), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string get_string(const json& node, const std::string& name, const std::string& key,
                       std::optional<std::string> fallback = std::nullopt) {
    if (!node.contains(name)) {
        if (fallback) return *fallback;
        throw ConfigError(join(key, name), "missing");
    }
    const json& v = node.at(name);
    if (!v.is_string()) throw ConfigError(join(key, name), "expected a string");
    return v.get<std::string>();
}

std::vector<linsys::Coefficient> parse_slots(const json& node, const std::string& key) {
    if (!node.is_array() || node.empty()) throw ConfigError(key, "expected a non-empty array");
    std::vector<linsys::Coefficient> slots;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const std::string k = fmt::format("{}[{}]", key, i);
        const json& v = node[i];
        if (v.is_number()) {
            slots.emplace_back(v.get<double>());
        } else if (v.is_object()) {
            check_keys(v, k, {"param", "sign"});
            const double sign = get_double(v, "sign", k, 1.0);
            if (sign != 1.0 && sign != -1.0) throw ConfigError(join(k, "sign"), "must be 1 or -1");
            slots.emplace_back(linsys::ParamRef{get_uint(v, "param", k), sign});
        } else {
            throw ConfigError(k, "expected a number or {\"param\": i, \"sign\": +-1}");
        }
    }
    return slots;
}

std::vector<std::vector<double>> parse_grid(const json& node, const std::string& key) {
    if (!node.is_array() || node.empty()) throw ConfigError(key, "expected a non-empty array of axes");
    std::vector<std::vector<double>> axes;
    for (std::size_t a = 0; a < node.size(); ++a) {
        const std::string k = fmt::format("{}[{}]", key, a);
        const json& axis = node[a];
        if (axis.is_object()) {
            check_keys(axis, k, {"min", "max", "points"});
            const double lo = get_double(axis, "min", k);
            const double hi = get_double(axis, "max", k);
            const auto points = get_uint(axis, "points", k);
            if (points < 1) throw ConfigError(join(k, "points"), "must be >= 1");
            if (points > 1 && !(lo < hi)) throw ConfigError(k, "min must be below max");
            axes.push_back(spsconf::linspace(lo, hi, points));
        } else if (axis.is_array() && !axis.empty()) {
            std::vector<double> values;
            for (const auto& v : axis) {
                if (!v.is_number()) throw ConfigError(k, "axis values must be numbers");
                values.push_back(v.get<double>());
            }
            for (std::size_t i = 1; i < values.size(); ++i) {
                if (!(values[i - 1] < values[i])) throw ConfigError(k, "axis values must be increasing");
            }
            axes.push_back(std::move(values));
        } else {
            throw ConfigError(k, "expected {min,max,points} or a list of values");
        }
    }
    return axes;
}

depmeasure::Kernel parse_kernel(const json& node, const std::string& key) {
    check_keys(node, key, {"kind", "bandwidth"});
    const std::string kind = get_string(node, "kind", key, std::string("gaussian"));
    if (kind == "linear") return depmeasure::Kernel::linear();
    if (kind != "gaussian") throw ConfigError(join(key, "kind"), "expected 'gaussian' or 'linear'");
    if (!node.contains("bandwidth")) return depmeasure::Kernel::gaussian_median();
    const json& bw = node.at("bandwidth");
    if (bw.is_string()) {
        if (bw.get<std::string>() != "median") {
            throw ConfigError(join(key, "bandwidth"), "expected a positive number or 'median'");
        }
        return depmeasure::Kernel::gaussian_median();
    }
    const double value = get_double(node, "bandwidth", key);
    if (!(value > 0.0)) throw ConfigError(join(key, "bandwidth"), "must be positive");
    return depmeasure::Kernel::gaussian(value);
}

InnovationGenerator parse_generator(const json& node, const std::string& key) {
    check_keys(node, key, {"kind", "scale", "base_cov_scale", "angle", "shift", "radius", "sampler"});
    const std::string kind = get_string(node, "kind", key);
    InnovationGenerator g;
    if (kind == "independent_gaussian") {
        g = InnovationGenerator::independent_gaussian(get_double(node, "scale", key, 1.0));
    } else if (kind == "rotated_mixture") {
        g = InnovationGenerator::rotated_mixture(get_double(node, "angle", key, 0.0),
                                                 get_double(node, "shift", key, 1.0),
                                                 get_double(node, "base_cov_scale", key, 0.25));
    } else if (kind == "extinct_gaussian") {
        g = InnovationGenerator::extinct_gaussian(get_double(node, "radius", key, 0.0),
                                                  get_double(node, "base_cov_scale", key, 0.25));
    } else if (kind == "custom") {
        g = InnovationGenerator::custom(get_string(node, "sampler", key));
        g.scale = get_double(node, "scale", key, 1.0);
    } else {
        throw ConfigError(join(key, "kind"), fmt::format("unknown innovation kind '{}'", kind));
    }
    try {
        g.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(key, err.what());
    }
    return g;
}

InputSpec parse_input(const json& node, const std::string& key) {
    check_keys(node, key, {"kind", "scale"});
    const std::string kind = get_string(node, "kind", key, std::string("zero"));
    InputSpec spec;
    if (kind == "zero") return spec;
    if (kind != "gaussian") throw ConfigError(join(key, "kind"), "expected 'zero' or 'gaussian'");
    spec.kind = InputSpec::Kind::gaussian;
    spec.scale = get_double(node, "scale", key, 1.0);
    if (!(spec.scale > 0.0)) throw ConfigError(join(key, "scale"), "must be positive");
    return spec;
}

SystemSpec parse_system(const json& node, const std::string& key, const SystemSpec& defaults) {
    check_keys(node, key, {"structure", "true_params", "grid", "input"});
    SystemSpec spec = defaults;
    if (node.contains("structure")) spec.structure = parse_structure(node.at("structure"), join(key, "structure"));
    if (node.contains("true_params")) {
        const json& tp = node.at("true_params");
        if (!tp.is_array()) throw ConfigError(join(key, "true_params"), "expected an array");
        spec.truth.entries.clear();
        for (const auto& v : tp) {
            if (!v.is_number()) throw ConfigError(join(key, "true_params"), "expected numbers");
            spec.truth.entries.push_back(v.get<double>());
        }
    }
    if (spec.truth.size() != spec.structure.free_count()) {
        throw ConfigError(join(key, "true_params"),
                          fmt::format("expected {} values for the structure", spec.structure.free_count()));
    }
    if (node.contains("grid")) {
        spec.grid_axes = parse_grid(node.at("grid"), join(key, "grid"));
    } else if (spec.structure.free_count() != 1) {
        spec.grid_axes.assign(spec.structure.free_count(), spsconf::linspace(-1.0, 1.0, 41));
    }
    if (spec.grid_axes.size() != spec.structure.free_count()) {
        throw ConfigError(join(key, "grid"), "one axis per free parameter required");
    }
    if (node.contains("input")) spec.input = parse_input(node.at("input"), join(key, "input"));
    return spec;
}

TestSpec parse_test(const json& node, const std::string& key) {
    check_keys(node, key, {"kind", "estimator", "m", "r", "p", "form", "alpha", "sps"});
    TestSpec spec;
    const std::string kind = get_string(node, "kind", key, std::string("iid"));
    if (kind == "robust") {
        spec.kind = TestSpec::Kind::robust;
    } else if (kind != "iid") {
        throw ConfigError(join(key, "kind"), "expected 'iid' or 'robust'");
    }
    if (node.contains("estimator")) spec.estimator = parse_estimator(node.at("estimator"), join(key, "estimator"));
    spec.m = get_uint(node, "m", key, 40);
    if (spec.m < 1) throw ConfigError(join(key, "m"), "must be >= 1");

    if (spec.kind == TestSpec::Kind::iid) {
        if (node.contains("r")) {
            spec.r = get_uint(node, "r", key);
        } else if (node.contains("alpha")) {
            try {
                spec.r = ranktest::RankConfig::from_level(get_double(node, "alpha", key), spec.m, 0, 0).r;
            } catch (const std::invalid_argument& err) {
                throw ConfigError(join(key, "alpha"), err.what());
            }
        }
        if (node.contains("p")) spec.p = get_uint(node, "p", key);
        const std::string form = get_string(node, "form", key, std::string("one_sided"));
        if (form == "interval") {
            spec.form = ranktest::RankConfig::Form::interval;
        } else if (form != "one_sided") {
            throw ConfigError(join(key, "form"), "expected 'one_sided' or 'interval'");
        }
        try {
            (void)rank_config(spec, 0);
        } catch (const std::invalid_argument& err) {
            throw ConfigError(join(key, "r"), err.what());
        }
        return spec;
    }

    spec.alpha = get_double(node, "alpha", key, 0.15);
    if (node.contains("sps")) {
        const json& sps = node.at("sps");
        const std::string k = join(key, "sps");
        check_keys(sps, k, {"M", "q"});
        spec.sps_M = get_uint(sps, "M", k, 80);
        spec.sps_q = get_uint(sps, "q", k, 1);
    }
    spec.r = get_uint(node, "r", key, 5);
    try {
        robust_config(spec, 0).validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(key, err.what());
    }
    return spec;
}

SweepSpec parse_sweep(const json& node, const std::string& key) {
    check_keys(node, key, {"variable", "values"});
    SweepSpec sweep;
    const std::string var = get_string(node, "variable", key);
    if (var == "angle") {
        sweep.variable = SweepSpec::Variable::angle;
    } else if (var == "radius") {
        sweep.variable = SweepSpec::Variable::radius;
    } else if (var == "n") {
        sweep.variable = SweepSpec::Variable::n;
    } else if (var != "none") {
        throw ConfigError(join(key, "variable"), "expected 'angle', 'radius', 'n' or 'none'");
    }
    if (node.contains("values")) {
        const json& values = node.at("values");
        if (!values.is_array()) throw ConfigError(join(key, "values"), "expected an array");
        for (const auto& v : values) {
            if (!v.is_number()) throw ConfigError(join(key, "values"), "expected numbers");
            sweep.values.push_back(v.get<double>());
        }
    }
    for (std::size_t i = 1; i < sweep.values.size(); ++i) {
        if (sweep.values[i] < sweep.values[i - 1]) throw ConfigError(join(key, "values"), "must be sorted");
    }
    return sweep;
}

json slots_json(const std::vector<linsys::Coefficient>& slots) {
    json out = json::array();
    for (const auto& slot : slots) {
        if (const auto* ref = std::get_if<linsys::ParamRef>(&slot)) {
            out.push_back({{"param", ref->index}, {"sign", ref->sign}});
        } else {
            out.push_back(std::get<double>(slot));
        }
    }
    return out;
}

json kernel_json(const depmeasure::Kernel& k) {
    if (k.kind == depmeasure::Kernel::Kind::linear) return {{"kind", "linear"}};
    json out = {{"kind", "gaussian"}};
    if (k.bandwidth) {
        out["bandwidth"] = *k.bandwidth;
    } else {
        out["bandwidth"] = "median";
    }
    return out;
}

json generator_json(const InnovationGenerator& g) {
    switch (g.kind) {
        case InnovationGenerator::Kind::independent_gaussian:
            return {{"kind", "independent_gaussian"}, {"scale", g.scale}};
        case InnovationGenerator::Kind::rotated_mixture:
            return {{"kind", "rotated_mixture"}, {"angle", g.angle}, {"shift", g.shift}, {"base_cov_scale", g.scale}};
        case InnovationGenerator::Kind::extinct_gaussian:
            return {{"kind", "extinct_gaussian"}, {"radius", g.radius}, {"base_cov_scale", g.scale}};
        case InnovationGenerator::Kind::custom:
            return {{"kind", "custom"}, {"sampler", g.sampler}, {"scale", g.scale}};
    }
    return {};
}

}  // namespace

linsys::ModelStructure parse_structure(const json& node, const std::string& key) {
    if (node.is_string()) {
        if (node.get<std::string>() == "ar1") return linsys::ModelStructure::ar1();
        throw ConfigError(key, fmt::format("unknown structure preset '{}'", node.get<std::string>()));
    }
    require_object(node, key);
    try {
        if (node.contains("preset")) {
            check_keys(node, key, {"preset", "na", "nb", "nc"});
            const std::string preset = get_string(node, "preset", key);
            const auto na = get_uint(node, "na", key, 0);
            const auto nb = get_uint(node, "nb", key, 0);
            const auto nc = get_uint(node, "nc", key, 0);
            if (preset == "ar1") return linsys::ModelStructure::ar1();
            if (preset == "arx") return linsys::ModelStructure::arx(na, nb);
            if (preset == "armax") return linsys::ModelStructure::armax(na, nb, nc);
            throw ConfigError(join(key, "preset"), fmt::format("unknown preset '{}'", preset));
        }
        check_keys(node, key, {"b", "f", "c", "d"});
        auto slots = [&](const char* name) -> std::vector<linsys::Coefficient> {
            if (!node.contains(name)) {
                return {std::string_view(name) == "b" ? 0.0 : 1.0};
            }
            return parse_slots(node.at(name), join(key, name));
        };
        return linsys::ModelStructure(slots("b"), slots("f"), slots("c"), slots("d"));
    } catch (const std::invalid_argument& err) {
        throw ConfigError(key, err.what());
    }
}

depmeasure::DependenceEstimator parse_estimator(const json& node, const std::string& key) {
    check_keys(node, key, {"kind", "kernel_e", "kernel_n"});
    const std::string kind = get_string(node, "kind", key);
    if (kind == "dcov") return depmeasure::DependenceEstimator::distance_covariance();
    if (kind != "hsic") throw ConfigError(join(key, "kind"), "expected 'hsic' or 'dcov'");
    auto kernel = [&](const char* name) {
        return node.contains(name) ? parse_kernel(node.at(name), join(key, name))
                                   : depmeasure::Kernel::gaussian_median();
    };
    return depmeasure::DependenceEstimator::hsic(kernel("kernel_e"), kernel("kernel_n"));
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    check_keys(doc, "", {"schema_version", "seed", "n", "systems", "innovations", "test",
                         "monte_carlo", "data"});
    if (!doc.contains("schema_version")) throw ConfigError("schema_version", "missing");
    if (get_uint(doc, "schema_version", "") != kSchemaVersion) {
        throw ConfigError("schema_version", fmt::format("unsupported (expected {})", kSchemaVersion));
    }

    RunConfig run;
    ExperimentConfig& cfg = run.experiment;
    cfg.master_seed = get_uint(doc, "seed", "", 0);
    cfg.n = get_uint(doc, "n", "", 200);
    if (cfg.n < 1) throw ConfigError("n", "must be >= 1");

    if (doc.contains("systems")) {
        const json& systems = doc.at("systems");
        check_keys(systems, "systems", {"y", "z"});
        if (systems.contains("y")) cfg.y = parse_system(systems.at("y"), "systems.y", cfg.y);
        if (systems.contains("z")) cfg.z = parse_system(systems.at("z"), "systems.z", cfg.z);
    }
    if (doc.contains("innovations")) cfg.generator = parse_generator(doc.at("innovations"), "innovations");
    if (doc.contains("test")) cfg.test = parse_test(doc.at("test"), "test");
    if (doc.contains("monte_carlo")) {
        const json& mc = doc.at("monte_carlo");
        check_keys(mc, "monte_carlo", {"trials", "sweep"});
        cfg.trials = get_uint(mc, "trials", "monte_carlo", 100);
        if (cfg.trials < 1) throw ConfigError("monte_carlo.trials", "must be >= 1");
        if (mc.contains("sweep")) cfg.sweep = parse_sweep(mc.at("sweep"), "monte_carlo.sweep");
    }
    if (doc.contains("data")) {
        const json& data = doc.at("data");
        check_keys(data, "data", {"y", "z"});
        if (data.contains("y")) run.data_y = base_dir / get_string(data, "y", "data");
        if (data.contains("z")) run.data_z = base_dir / get_string(data, "z", "data");
        if (run.data_y.has_value() != run.data_z.has_value()) {
            throw ConfigError("data", "both 'y' and 'z' data files are required");
        }
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError("", err.what());
    }
    return run;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(fmt::format("cannot open config file '{}'", path.string()));
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& err) {
        throw std::runtime_error(fmt::format("config file '{}' is not valid JSON: {}", path.string(), err.what()));
    }
    return parse_config(doc, path.parent_path());
}

json experiment_json(const ExperimentConfig& cfg) {
    auto system = [](const SystemSpec& s) {
        json axes = json::array();
        for (const auto& axis : s.grid_axes) axes.push_back(axis);
        return json{{"structure",
                     {{"b", slots_json(s.structure.b())},
                      {"f", slots_json(s.structure.f())},
                      {"c", slots_json(s.structure.c())},
                      {"d", slots_json(s.structure.d())}}},
                    {"true_params", s.truth.entries},
                    {"grid", axes},
                    {"input",
                     {{"kind", s.input.kind == InputSpec::Kind::zero ? "zero" : "gaussian"},
                      {"scale", s.input.scale}}}};
    };
    json test = {{"kind", cfg.test.kind == TestSpec::Kind::iid ? "iid" : "robust"},
                 {"m", cfg.test.m},
                 {"r", cfg.test.r},
                 {"level", cfg.test.configured_level()}};
    if (cfg.test.estimator.kind == depmeasure::DependenceEstimator::Kind::dcov) {
        test["estimator"] = {{"kind", "dcov"}};
    } else {
        test["estimator"] = {{"kind", "hsic"},
                             {"kernel_e", kernel_json(cfg.test.estimator.kernel_e)},
                             {"kernel_n", kernel_json(cfg.test.estimator.kernel_n)}};
    }
    if (cfg.test.kind == TestSpec::Kind::iid) {
        test["p"] = cfg.test.p.value_or(cfg.test.m);
        test["form"] = cfg.test.form == ranktest::RankConfig::Form::one_sided ? "one_sided" : "interval";
    } else {
        test["alpha"] = cfg.test.alpha;
        test["sps"] = {{"M", cfg.test.sps_M}, {"q", cfg.test.sps_q}};
    }
    return json{{"schema_version", kSchemaVersion},
                {"seed", cfg.master_seed},
                {"n", cfg.n},
                {"systems", {{"y", system(cfg.y)}, {"z", system(cfg.z)}}},
                {"innovations", generator_json(cfg.generator)},
                {"test", test},
                {"monte_carlo",
                 {{"trials", cfg.trials},
                  {"sweep", {{"variable", sweep_name(cfg.sweep.variable)}, {"values", cfg.sweep.values}}}}}};
}

}  // namespace syncind::harness
