#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "eswm/sim.hpp"

namespace eswm {

inline constexpr const char* kArtifactName = "eswm";
inline constexpr const char* kArtifactVersion = "0.1.0";

/// Fully resolved experiment configuration. Every field has a default, so an
/// empty config file is valid; file values override defaults and CLI flags
/// override file values.
struct ExperimentConfig {
    ExperimentParams params;
    std::string output_dir = "out";
    bool oracle_check = false;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Flag-level overrides collected by the CLI; only set fields are applied.
struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    std::optional<int> epochs;
    std::optional<int> replications;
    std::optional<std::string> output_dir;
    bool oracle_check = false;
};

ExperimentConfig default_config();

/// Strict JSON mapping: unknown keys, wrong types, and invariant violations
/// all raise ConfigError naming the field. config_from_json(config_to_json(c))
/// reproduces c exactly.
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& json);

/// Reads defaults overlaid with the file's values and validates the result.
ExperimentConfig parse_config_file(const std::filesystem::path& path);

void apply_overrides(ExperimentConfig& config, const CliOverrides& overrides);

/// Re-checks every invariant; throws ConfigError naming field and constraint.
void validate_config(const ExperimentConfig& config);

} // namespace eswm
