#pragma once

#include "syncind/harness/experiment.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace syncind::harness {

inline constexpr int kSchemaVersion = 1;

/// Malformed configuration; `key()` is the dotted path of the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message);
    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct RunConfig {
    ExperimentConfig experiment;
    std::optional<std::filesystem::path> data_y;  ///< two-column CSV (input,output)
    std::optional<std::filesystem::path> data_z;
};

/// Parse a schema-version-1 configuration document. Relative data paths are
/// resolved against `base_dir`.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& doc,
                                     const std::filesystem::path& base_dir = {});

[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

[[nodiscard]] linsys::ModelStructure parse_structure(const nlohmann::json& node,
                                                     const std::string& key);
[[nodiscard]] depmeasure::DependenceEstimator parse_estimator(const nlohmann::json& node,
                                                              const std::string& key);

/// Canonical echo of an experiment configuration, embedded in reports.
[[nodiscard]] nlohmann::json experiment_json(const ExperimentConfig& cfg);

}  // namespace syncind::harness
