#include "syncind/harness/report_io.hpp"

#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace syncind::harness {

using nlohmann::json;

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

namespace {

const char* form_name(ranktest::RankConfig::Form form) {
    return form == ranktest::RankConfig::Form::one_sided ? "one_sided" : "interval";
}

json params_json(const std::vector<linsys::ParamVector>& points) {
    json out = json::array();
    for (const auto& p : points) out.push_back(p.entries);
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, const std::filesystem::path& path, std::size_t line) {
    cell = trim(cell);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
        throw std::runtime_error(
            fmt::format("{}:{}: '{}' is not a number", path.string(), line, std::string(cell)));
    }
    return value;
}

}  // namespace

json to_json(const ranktest::TestReport& report, bool timing) {
    json out = {{"decision", report.reject ? "reject" : "accept"},
                {"reject", report.reject},
                {"rank", report.rank},
                {"m", report.m},
                {"r", report.r},
                {"p", report.p},
                {"form", form_name(report.form)},
                {"level", report.level},
                {"measure_values", report.measure_values},
                {"estimator", report.estimator.describe()},
                {"seeds", {{"permutations", report.perm_seed}, {"tie_break", report.tie_seed}}}};
    if (timing) out["wall_time_seconds"] = report.wall_time_seconds;
    return out;
}

json to_json(const spsconf::ConfidenceGrid& grid) {
    std::vector<int> mask(grid.accepted.begin(), grid.accepted.end());
    std::vector<int> invalid(grid.invalid.begin(), grid.invalid.end());
    return json{{"axes", grid.axes},
                {"mask", mask},
                {"invalid", invalid},
                {"ranks", grid.ranks},
                {"accepted_count", grid.accepted_indices().size()},
                {"beta", grid.beta()},
                {"M", grid.M},
                {"q", grid.q},
                {"seeds", {{"signs", grid.seed}, {"tie_break", grid.tie_seed}}},
                {"data_hash", grid.data_hash}};
}

json to_json(const robusttest::RobustReport& report, bool timing) {
    const auto& f = report.field;
    const auto& d = report.decision;
    json argmax = nullptr;
    if (!d.vacuous && !f.ranks.empty()) {
        const std::size_t ng = f.gamma_points.size();
        const std::size_t i = d.argmax / ng;
        const std::size_t j = d.argmax % ng;
        argmax = {{"flat_index", d.argmax},
                  {"theta", f.theta_points[i].entries},
                  {"gamma", f.gamma_points[j].entries},
                  {"theta_grid_index", f.theta_indices[i]},
                  {"gamma_grid_index", f.gamma_indices[j]}};
    }
    json out = {{"decision", d.reject ? "reject" : "accept"},
                {"reject", d.reject},
                {"vacuous", d.vacuous},
                {"warning", d.warning},
                {"max_rank", d.max_rank},
                {"r", d.r},
                {"m", f.m},
                {"certified_level", d.certified_level},
                {"argmax", argmax},
                {"estimator", f.estimator.describe()},
                {"rank_field",
                 {{"theta_points", params_json(f.theta_points)},
                  {"gamma_points", params_json(f.gamma_points)},
                  {"theta_grid_indices", f.theta_indices},
                  {"gamma_grid_indices", f.gamma_indices},
                  {"ranks", f.ranks},
                  {"excluded_theta", f.excluded_theta},
                  {"excluded_gamma", f.excluded_gamma}}},
                {"region_y", to_json(report.region_y)},
                {"region_z", to_json(report.region_z)},
                {"seeds", {{"permutations", f.perm_seed}, {"tie_break", f.tie_seed}}}};
    if (timing) out["wall_time_seconds"] = report.wall_time_seconds;
    return out;
}

json to_json(const PowerCurve& curve) {
    return json{{"variable", curve.variable},
                {"sweep", curve.sweep},
                {"rejections", curve.rejections},
                {"power", curve.power},
                {"ci_halfwidth", curve.half_width},
                {"trials", curve.trials},
                {"seed", curve.seed},
                {"test", curve.test},
                {"estimator", curve.estimator},
                {"generator", curve.generator},
                {"level", curve.level},
                {"n", curve.n}};
}

std::string power_curve_csv(const PowerCurve& curve) {
    std::string out = "sweep,power,ci_halfwidth,trials,seed\n";
    for (std::size_t i = 0; i < curve.sweep.size(); ++i) {
        out += fmt::format("{},{},{},{},{}\n", format_double(curve.sweep[i]),
                           format_double(curve.power[i]), format_double(curve.half_width[i]),
                           curve.trials, curve.seed);
    }
    return out;
}

std::string rank_field_csv(const robusttest::RankField& field) {
    const std::size_t dy = field.theta_points.empty() ? 0 : field.theta_points.front().size();
    const std::size_t dz = field.gamma_points.empty() ? 0 : field.gamma_points.front().size();
    std::string out;
    for (std::size_t k = 0; k < dy; ++k) out += fmt::format("theta_{},", k);
    for (std::size_t k = 0; k < dz; ++k) out += fmt::format("gamma_{},", k);
    out += "rank,statistic\n";
    const std::size_t ng = field.gamma_points.size();
    for (std::size_t i = 0; i < field.theta_points.size(); ++i) {
        for (std::size_t j = 0; j < ng; ++j) {
            for (double v : field.theta_points[i].entries) out += format_double(v) + ",";
            for (double v : field.gamma_points[j].entries) out += format_double(v) + ",";
            out += fmt::format("{},{}\n", field.rank_at(i, j), format_double(field.reference[i * ng + j]));
        }
    }
    return out;
}

std::string columns_csv(const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) throw std::invalid_argument("columns_csv: header/column count mismatch");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != rows) throw std::invalid_argument("columns_csv: ragged columns");
    }
    std::string out;
    for (std::size_t k = 0; k < header.size(); ++k) out += (k ? "," : "") + header[k];
    out += "\n";
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t k = 0; k < columns.size(); ++k) {
            if (k) out += ",";
            out += format_double(columns[k][i]);
        }
        out += "\n";
    }
    return out;
}

DataRecord read_data_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(fmt::format("cannot open data file '{}'", path.string()));
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::vector<double> u, y;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
            throw std::runtime_error(
                fmt::format("{}:{}: expected exactly two columns (input,output)", path.string(), lineno));
        }
        if (!header) {
            double probe = 0.0;
            const auto first = trim(row.substr(0, comma));
            const auto res = std::from_chars(first.data(), first.data() + first.size(), probe);
            if (res.ec == std::errc() && res.ptr == first.data() + first.size() && !first.empty()) {
                throw std::runtime_error(fmt::format("{}: missing header row", path.string()));
            }
            header = true;
            continue;
        }
        u.push_back(parse_cell(row.substr(0, comma), path, lineno));
        y.push_back(parse_cell(row.substr(comma + 1), path, lineno));
    }
    if (!header) throw std::runtime_error(fmt::format("{}: missing header row", path.string()));
    if (u.empty()) throw std::runtime_error(fmt::format("{}: no data rows", path.string()));
    return {linsys::Series(std::move(u)), linsys::Series(std::move(y))};
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    out << content;
    if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace syncind::harness
