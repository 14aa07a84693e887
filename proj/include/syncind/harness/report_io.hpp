#pragma once

#include "syncind/harness/experiment.hpp"
#include "syncind/linsys.hpp"
#include "syncind/ranktest.hpp"
#include "syncind/robusttest.hpp"
#include "syncind/spsconf.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace syncind::harness {

/// Doubles in CSV output: 17 significant digits, '.' decimal point.
[[nodiscard]] std::string format_double(double x);

/// Wall-clock fields are only emitted when `timing` is set, so that reports of
/// repeated runs compare byte-for-byte.
[[nodiscard]] nlohmann::json to_json(const ranktest::TestReport& report, bool timing = false);
[[nodiscard]] nlohmann::json to_json(const spsconf::ConfidenceGrid& grid);
[[nodiscard]] nlohmann::json to_json(const robusttest::RobustReport& report, bool timing = false);
[[nodiscard]] nlohmann::json to_json(const PowerCurve& curve);

/// Header `sweep,power,ci_halfwidth,trials,seed`.
[[nodiscard]] std::string power_curve_csv(const PowerCurve& curve);
/// One row per (theta, gamma) grid point of the field.
[[nodiscard]] std::string rank_field_csv(const robusttest::RankField& field);
/// Columns of equal length under the given header names.
[[nodiscard]] std::string columns_csv(const std::vector<std::string>& header,
                                      const std::vector<std::vector<double>>& columns);

struct DataRecord {
    linsys::Series u;
    linsys::Series y;
};

/// Two-column (input,output) CSV with a mandatory header row.
[[nodiscard]] DataRecord read_data_csv(const std::filesystem::path& path);

/// Pretty-printed JSON with sorted keys and a trailing newline.
[[nodiscard]] std::string dump_json(const nlohmann::json& doc);

/// Writes in binary mode so line endings stay LF on every platform.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace syncind::harness
