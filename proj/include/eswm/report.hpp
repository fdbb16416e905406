#pragma once

#include <filesystem>
#include <ostream>

#include "eswm/config.hpp"
#include "eswm/sim.hpp"

namespace eswm {

// Result files for offline plotting. Headers, column order, and number
// formatting are fixed: a rerun with the same config and master seed must be
// byte-identical.

inline constexpr const char* kEpochsCsvName = "epochs.csv";
inline constexpr const char* kSummaryCsvName = "summary.csv";
inline constexpr const char* kRunJsonName = "run.json";

inline constexpr const char* kEpochsCsvHeader =
    "replication,epoch,mechanism,requesters,providers,nsw,esw,realized_sw,"
    "platform_utility,avg_requester_utility,avg_provider_utility,tasks_served";

inline constexpr const char* kSummaryCsvHeader = "epoch,mechanism,metric,mean,ci95_half_width";

/// One row per (replication, epoch, mechanism), long format.
void write_epochs_csv(std::ostream& out, const ExperimentResult& result);

/// One row per (epoch, mechanism, metric): cross-replication mean and 95%
/// half-width.
void write_summary_csv(std::ostream& out, const ExperimentResult& result);

/// Full resolved config plus master seed and artifact version, for provenance.
void write_run_json(std::ostream& out, const ExperimentConfig& config);

struct OutputPaths {
    std::filesystem::path epochs;
    std::filesystem::path summary;
    std::filesystem::path run_meta;
};

/// Writes the three result files into out_dir (created if missing). Throws
/// IoError naming the path on any write failure.
OutputPaths emit_results(const ExperimentResult& result, const ExperimentConfig& config,
                         const std::filesystem::path& out_dir);

} // namespace eswm
