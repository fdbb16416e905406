#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eswm/mechanism.hpp"
#include "eswm/model.hpp"

namespace eswm {

// ---------------------------------------------------------------------------
// Multi-epoch competition between two platforms serving the same participant
// pool: the benchmark selects winners by platform utility, the other side by
// expected social welfare. Between epochs, participants migrate toward the
// platform whose previous-epoch average utility (for their own role) was
// higher.
// ---------------------------------------------------------------------------

enum class Mechanism { Benchmark, Eswm };
enum class Mode { Static, Reselection };

std::string_view to_string(Mechanism mech);
std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name); // throws ConfigError

struct Population {
    std::vector<Requester> requesters;
    std::vector<Provider> providers;

    bool operator==(const Population&) const = default;
};

struct MechanismEpochStats {
    int requesters = 0;
    int providers = 0;
    double nsw = 0.0;
    double esw = 0.0;
    double realized_sw = 0.0;
    double platform_utility = 0.0;
    double avg_requester_utility = 0.0;
    double avg_provider_utility = 0.0;
    int tasks_served = 0;

    bool operator==(const MechanismEpochStats&) const = default;
};

struct EpochTrace {
    int epoch = 0;
    MechanismEpochStats benchmark;
    MechanismEpochStats eswm;

    bool operator==(const EpochTrace&) const = default;
};

/// Migration rule: join probability proportional to (average utility)^exponent,
/// with non-positive averages clamped to the floor before exponentiation.
struct ReselectionRule {
    double exponent = 0.5;
    double floor = 1e-6;

    bool operator==(const ReselectionRule&) const = default;
};

/// P(join A) = u_A^e / (u_A^e + u_B^e) with u_X = max(floor, avg_X).
double participation_probability(double avg_a, double avg_b, const ReselectionRule& rule);

/// Uniform random half/half partition (odd counts: the benchmark side gets
/// the smaller half). Used for the epoch-0 split in every mode.
std::pair<Population, Population> split_equal(const Population& global, RngEngine& rng);

/// Partitions the global pool for the next epoch: every participant joins the
/// benchmark side with the probability given by its own role's previous
/// average utilities. Returns (benchmark, eswm) populations.
std::pair<Population, Population> reselect(const EpochTrace& previous, const Population& global,
                                           const ReselectionRule& rule, RngEngine& rng);

struct RoundResult {
    Market market;
    MechanismOutcome outcome;
    MechanismEpochStats stats;
};

/// One mechanism, one round: weights -> greedy winners -> realization.
/// Depends only on its own arguments, so concurrent rounds never interact.
RoundResult run_mechanism_round(const Population& pop, Objective objective, int capacity,
                                const PaymentPolicy& policy, std::uint64_t seed);

/// One epoch of the two-platform competition. Each side consumes its own seed.
EpochTrace run_epoch(int epoch, const Population& benchmark_pop, const Population& eswm_pop,
                     const PaymentPolicy& policy, int capacity, std::uint64_t benchmark_seed,
                     std::uint64_t eswm_seed);

struct ExperimentParams {
    PopulationSpec population; // global pool shared by the two platforms
    int capacity = 20;         // K per mechanism
    PaymentPolicy payment;
    ReselectionRule reselection;
    Mode mode = Mode::Reselection;
    int epochs = 30;
    int replications = 200;
    std::uint64_t seed = 1;
    int threads = 1;

    bool operator==(const ExperimentParams&) const = default;
};

struct ReplicationTrace {
    std::vector<EpochTrace> epochs;

    bool operator==(const ReplicationTrace&) const = default;
};

struct SummaryRow {
    int epoch = 0;
    Mechanism mechanism = Mechanism::Benchmark;
    std::string metric;
    double mean = 0.0;
    double ci95_half_width = 0.0; // normal approximation over replications
};

struct ExperimentResult {
    std::vector<ReplicationTrace> replications;
    std::vector<SummaryRow> summary;
};

struct RoundContext {
    int replication = 0;
    int epoch = 0;
    Mechanism mechanism = Mechanism::Benchmark;
};

/// Called once per (replication, epoch, mechanism) round; invocations are
/// serialized even when replications run on several threads.
using RoundObserver =
    std::function<void(const RoundContext&, const Market&, const MechanismOutcome&)>;

/// Runs the full experiment: per-replication pool generation, epoch-0 equal
/// split, epochs with or without reselection, and cross-replication summary.
/// Every replication derives its own seed from the master seed, so the result
/// does not depend on the thread count.
ExperimentResult run_experiment(const ExperimentParams& params,
                                const RoundObserver& observer = {});

/// Names and accessors of the per-epoch metrics, in the order they appear in
/// result files.
struct MetricView {
    const char* name;
    double (*get)(const MechanismEpochStats&);
};
std::span<const MetricView> epoch_metrics();

} // namespace eswm
