#include "eswm/report.hpp"

#include <charconv>
#include <fstream>
#include <system_error>

namespace eswm {

namespace {

// Shortest round-trip decimal form, locale-independent.
void append_number(std::string& line, double value) {
    char buf[40];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    line.append(buf, end);
    (void)ec;
}

void append_number(std::string& line, int value) { line += std::to_string(value); }

} // namespace

void write_epochs_csv(std::ostream& out, const ExperimentResult& result) {
    out << kEpochsCsvHeader << '\n';
    std::string line;
    for (std::size_t rep = 0; rep < result.replications.size(); ++rep) {
        for (const EpochTrace& entry : result.replications[rep].epochs) {
            for (Mechanism mech : {Mechanism::Benchmark, Mechanism::Eswm}) {
                const MechanismEpochStats& s =
                    mech == Mechanism::Benchmark ? entry.benchmark : entry.eswm;
                line.clear();
                append_number(line, static_cast<int>(rep));
                line += ',';
                append_number(line, entry.epoch);
                line += ',';
                line += to_string(mech);
                line += ',';
                append_number(line, s.requesters);
                line += ',';
                append_number(line, s.providers);
                line += ',';
                append_number(line, s.nsw);
                line += ',';
                append_number(line, s.esw);
                line += ',';
                append_number(line, s.realized_sw);
                line += ',';
                append_number(line, s.platform_utility);
                line += ',';
                append_number(line, s.avg_requester_utility);
                line += ',';
                append_number(line, s.avg_provider_utility);
                line += ',';
                append_number(line, s.tasks_served);
                out << line << '\n';
            }
        }
    }
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
    out << kSummaryCsvHeader << '\n';
    std::string line;
    for (const SummaryRow& row : result.summary) {
        line.clear();
        append_number(line, row.epoch);
        line += ',';
        line += to_string(row.mechanism);
        line += ',';
        line += row.metric;
        line += ',';
        append_number(line, row.mean);
        line += ',';
        append_number(line, row.ci95_half_width);
        out << line << '\n';
    }
}

void write_run_json(std::ostream& out, const ExperimentConfig& config) {
    nlohmann::json meta{
        {"artifact", {{"name", kArtifactName}, {"version", kArtifactVersion}}},
        {"master_seed", config.params.seed},
        {"config", config_to_json(config)},
    };
    out << meta.dump(2) << '\n';
}

OutputPaths emit_results(const ExperimentResult& result, const ExperimentConfig& config,
                         const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

    OutputPaths paths{out_dir / kEpochsCsvName, out_dir / kSummaryCsvName,
                      out_dir / kRunJsonName};

    auto open = [](const std::filesystem::path& path) {
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file) throw IoError("cannot write " + path.string());
        return file;
    };

    auto finish = [](std::ofstream& file, const std::filesystem::path& path) {
        file.flush();
        if (!file) throw IoError("write failed for " + path.string());
    };

    auto epochs = open(paths.epochs);
    write_epochs_csv(epochs, result);
    finish(epochs, paths.epochs);

    auto summary = open(paths.summary);
    write_summary_csv(summary, result);
    finish(summary, paths.summary);

    auto run_meta = open(paths.run_meta);
    write_run_json(run_meta, config);
    finish(run_meta, paths.run_meta);

    return paths;
}

} // namespace eswm
