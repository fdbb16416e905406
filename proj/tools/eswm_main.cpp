#include <cmath>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eswm/config.hpp"
#include "eswm/oracle.hpp"
#include "eswm/report.hpp"
#include "eswm/selfcheck.hpp"
#include "eswm/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitRuntimeError = 2;

// Cross-checks every greedy round within the enumeration guard against the
// exact solver for the round's own objective.
struct OracleAudit {
    std::mutex mutex;
    long checked = 0;
    long skipped = 0;
    long violations = 0;
    double worst_ratio = 1.0;

    void observe(const eswm::RoundContext& ctx, const eswm::Market& market,
                 const eswm::MechanismOutcome& outcome, const eswm::PaymentPolicy& policy) {
        const auto objective = ctx.mechanism == eswm::Mechanism::Eswm
                                   ? eswm::Objective::ExpectedWelfare
                                   : eswm::Objective::Platform;
        std::scoped_lock lock(mutex);
        if (static_cast<int>(market.requesters.size()) > eswm::kOracleSideLimit ||
            static_cast<int>(market.providers.size()) > eswm::kOracleSideLimit) {
            ++skipped;
            return;
        }
        const auto weights = eswm::compute_weights(market, policy);
        double greedy_value = 0.0;
        for (const auto& pair : outcome.matches.pairs)
            for (const auto& w : weights)
                if (w.requester == pair.requester && w.provider == pair.provider) {
                    greedy_value += w.weight(objective);
                    break;
                }
        const auto exact = eswm::solve_exact(market, weights, objective);
        ++checked;
        if (greedy_value > exact.objective + 1e-9 ||
            greedy_value + 1e-9 < 0.5 * exact.objective)
            ++violations;
        if (exact.objective > 0.0)
            worst_ratio = std::min(worst_ratio, greedy_value / exact.objective);
    }
};

eswm::ExperimentConfig load_config(const std::optional<std::string>& path,
                                   const eswm::CliOverrides& overrides) {
    eswm::ExperimentConfig config =
        path ? eswm::parse_config_file(*path) : eswm::default_config();
    eswm::apply_overrides(config, overrides);
    return config;
}

int command_run(const std::optional<std::string>& config_path,
                const eswm::CliOverrides& overrides) {
    const eswm::ExperimentConfig config = load_config(config_path, overrides);

    std::cout << "mode=" << eswm::to_string(config.params.mode)
              << " epochs=" << config.params.epochs
              << " replications=" << config.params.replications
              << " seed=" << config.params.seed << '\n';

    OracleAudit audit;
    eswm::RoundObserver observer;
    if (config.oracle_check) {
        observer = [&](const eswm::RoundContext& ctx, const eswm::Market& market,
                       const eswm::MechanismOutcome& outcome) {
            audit.observe(ctx, market, outcome, config.params.payment);
        };
    }

    const eswm::ExperimentResult result = eswm::run_experiment(config.params, observer);
    const eswm::OutputPaths paths = eswm::emit_results(result, config, config.output_dir);

    std::cout << "wrote " << paths.epochs.string() << '\n'
              << "wrote " << paths.summary.string() << '\n'
              << "wrote " << paths.run_meta.string() << '\n';

    // Headline: final-epoch means for the two platforms.
    for (const auto& row : result.summary) {
        if (row.epoch == config.params.epochs - 1 &&
            (row.metric == "esw" || row.metric == "platform_utility")) {
            std::cout << "final " << row.metric << " (" << eswm::to_string(row.mechanism)
                      << "): " << row.mean << " +/- " << row.ci95_half_width << '\n';
        }
    }

    if (config.oracle_check) {
        std::cout << "oracle check: " << audit.checked << " rounds checked, " << audit.skipped
                  << " beyond the " << eswm::kOracleSideLimit << "x" << eswm::kOracleSideLimit
                  << " guard, " << audit.violations << " violations";
        if (audit.checked > 0) std::cout << ", worst greedy/exact ratio " << audit.worst_ratio;
        std::cout << '\n';
        if (audit.violations > 0) {
            std::cerr << "error: greedy selection violated its approximation bound\n";
            return kExitRuntimeError;
        }
    }
    return kExitOk;
}

int command_verify(const std::optional<std::string>& config_path) {
    const eswm::ExperimentConfig config = load_config(config_path, {});
    return eswm::run_self_verification(config, std::cout) ? kExitOk : kExitRuntimeError;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for deadline-sensitive crowdsourcing incentive mechanisms"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    eswm::CliOverrides overrides;

    CLI::App* run = app.add_subcommand("run", "run an experiment and write result files");
    run->add_option("--config", config_path, "config file (JSON)");
    run->add_option("--seed", overrides.seed, "master seed override");
    run->add_option("--mode", overrides.mode, "static|reselection");
    run->add_option("--epochs", overrides.epochs, "epochs per replication");
    run->add_option("--replications", overrides.replications, "independent replications");
    run->add_flag("--oracle", overrides.oracle_check,
                  "cross-check greedy selections against the exact solver");
    run->add_option("--out", overrides.output_dir, "output directory");

    CLI::App* verify = app.add_subcommand("verify", "run the invariant and oracle self-checks");
    verify->add_option("--config", config_path, "config file (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err); // prints usage or help text
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (run->parsed()) return command_run(config_path, overrides);
        return command_verify(config_path);
    } catch (const eswm::ConfigError& err) {
        std::cerr << "config error: " << err.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitRuntimeError;
    }
}
