#include "eswm/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <thread>

#include "eswm/rng.hpp"

namespace eswm {

namespace {

// Stream tags for seed derivation within one replication.
enum : std::uint64_t {
    kStreamReplication = 1,
    kStreamPool = 2,
    kStreamSplit = 3,
    kStreamReselect = 4,
    kStreamBenchmarkRound = 5,
    kStreamEswmRound = 6,
};

template <typename T>
std::vector<T> shuffled(std::vector<T> items, RngEngine& rng) {
    for (std::size_t i = items.size(); i > 1; --i)
        std::swap(items[i - 1], items[uniform_index(rng, i)]);
    return items;
}

MechanismEpochStats stats_from(const Population& pop, const MechanismOutcome& outcome) {
    MechanismEpochStats s;
    s.requesters = static_cast<int>(pop.requesters.size());
    s.providers = static_cast<int>(pop.providers.size());
    s.nsw = outcome.totals.nsw;
    s.esw = outcome.totals.esw;
    s.realized_sw = outcome.totals.realized_sw;
    s.platform_utility = outcome.totals.platform_utility;
    s.avg_requester_utility = outcome.totals.avg_requester_utility;
    s.avg_provider_utility = outcome.totals.avg_provider_utility;
    s.tasks_served = outcome.totals.winner_count;
    return s;
}

constexpr std::array<MetricView, 9> kMetrics{{
    {"requesters", [](const MechanismEpochStats& s) { return static_cast<double>(s.requesters); }},
    {"providers", [](const MechanismEpochStats& s) { return static_cast<double>(s.providers); }},
    {"nsw", [](const MechanismEpochStats& s) { return s.nsw; }},
    {"esw", [](const MechanismEpochStats& s) { return s.esw; }},
    {"realized_sw", [](const MechanismEpochStats& s) { return s.realized_sw; }},
    {"platform_utility", [](const MechanismEpochStats& s) { return s.platform_utility; }},
    {"avg_requester_utility",
     [](const MechanismEpochStats& s) { return s.avg_requester_utility; }},
    {"avg_provider_utility",
     [](const MechanismEpochStats& s) { return s.avg_provider_utility; }},
    {"tasks_served", [](const MechanismEpochStats& s) { return static_cast<double>(s.tasks_served); }},
}};

std::vector<SummaryRow> summarize(const std::vector<ReplicationTrace>& replications, int epochs) {
    std::vector<SummaryRow> rows;
    const auto reps = static_cast<double>(replications.size());
    for (int epoch = 0; epoch < epochs; ++epoch) {
        for (Mechanism mech : {Mechanism::Benchmark, Mechanism::Eswm}) {
            for (const MetricView& metric : kMetrics) {
                double sum = 0.0;
                for (const auto& rep : replications) {
                    const auto& entry = rep.epochs[static_cast<std::size_t>(epoch)];
                    sum += metric.get(mech == Mechanism::Benchmark ? entry.benchmark : entry.eswm);
                }
                const double mean = sum / reps;
                double var = 0.0;
                for (const auto& rep : replications) {
                    const auto& entry = rep.epochs[static_cast<std::size_t>(epoch)];
                    const double v =
                        metric.get(mech == Mechanism::Benchmark ? entry.benchmark : entry.eswm);
                    var += (v - mean) * (v - mean);
                }
                SummaryRow row;
                row.epoch = epoch;
                row.mechanism = mech;
                row.metric = metric.name;
                row.mean = mean;
                row.ci95_half_width =
                    replications.size() > 1
                        ? 1.96 * std::sqrt(var / (reps - 1.0)) / std::sqrt(reps)
                        : 0.0;
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

} // namespace

std::string_view to_string(Mechanism mech) {
    return mech == Mechanism::Benchmark ? "benchmark" : "eswm";
}

std::string_view to_string(Mode mode) {
    return mode == Mode::Static ? "static" : "reselection";
}

Mode mode_from_string(std::string_view name) {
    if (name == "static") return Mode::Static;
    if (name == "reselection") return Mode::Reselection;
    throw ConfigError("mode: must be 'static' or 'reselection', got '" + std::string(name) + "'");
}

double participation_probability(double avg_a, double avg_b, const ReselectionRule& rule) {
    const double ua = std::pow(std::max(rule.floor, avg_a), rule.exponent);
    const double ub = std::pow(std::max(rule.floor, avg_b), rule.exponent);
    return ua / (ua + ub);
}

std::pair<Population, Population> split_equal(const Population& global, RngEngine& rng) {
    Population a, b;
    const auto requesters = shuffled(global.requesters, rng);
    const auto providers = shuffled(global.providers, rng);
    const std::size_t half_r = requesters.size() / 2;
    const std::size_t half_w = providers.size() / 2;
    a.requesters.assign(requesters.begin(), requesters.begin() + static_cast<long>(half_r));
    b.requesters.assign(requesters.begin() + static_cast<long>(half_r), requesters.end());
    a.providers.assign(providers.begin(), providers.begin() + static_cast<long>(half_w));
    b.providers.assign(providers.begin() + static_cast<long>(half_w), providers.end());
    // Participants rejoin in id order regardless of the shuffle.
    auto by_id = [](auto& v) {
        std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
    };
    by_id(a.requesters);
    by_id(b.requesters);
    by_id(a.providers);
    by_id(b.providers);
    return {std::move(a), std::move(b)};
}

std::pair<Population, Population> reselect(const EpochTrace& previous, const Population& global,
                                           const ReselectionRule& rule, RngEngine& rng) {
    const double p_requester = participation_probability(
        previous.benchmark.avg_requester_utility, previous.eswm.avg_requester_utility, rule);
    const double p_provider = participation_probability(
        previous.benchmark.avg_provider_utility, previous.eswm.avg_provider_utility, rule);

    Population bench, eswm;
    for (const auto& r : global.requesters)
        (uniform01(rng) < p_requester ? bench : eswm).requesters.push_back(r);
    for (const auto& w : global.providers)
        (uniform01(rng) < p_provider ? bench : eswm).providers.push_back(w);
    return {std::move(bench), std::move(eswm)};
}

RoundResult run_mechanism_round(const Population& pop, Objective objective, int capacity,
                                const PaymentPolicy& policy, std::uint64_t seed) {
    RoundResult result;
    result.market = Market{pop.requesters, pop.providers, capacity};
    const auto weights = compute_weights(result.market, policy);
    const MatchSet winners = select_winners_greedy(result.market, weights, objective);
    RngEngine rng = make_engine(seed);
    result.outcome = realize_round(result.market, winners, policy, rng);
    result.stats = stats_from(pop, result.outcome);
    return result;
}

EpochTrace run_epoch(int epoch, const Population& benchmark_pop, const Population& eswm_pop,
                     const PaymentPolicy& policy, int capacity, std::uint64_t benchmark_seed,
                     std::uint64_t eswm_seed) {
    EpochTrace entry;
    entry.epoch = epoch;
    entry.benchmark =
        run_mechanism_round(benchmark_pop, Objective::Platform, capacity, policy, benchmark_seed)
            .stats;
    entry.eswm =
        run_mechanism_round(eswm_pop, Objective::ExpectedWelfare, capacity, policy, eswm_seed)
            .stats;
    return entry;
}

ExperimentResult run_experiment(const ExperimentParams& params, const RoundObserver& observer) {
    ExperimentResult result;
    result.replications.resize(static_cast<std::size_t>(params.replications));
    std::mutex observer_mutex;

    auto run_replication = [&](int rep) {
        const std::uint64_t rep_seed =
            derive_seed(params.seed, kStreamReplication, static_cast<std::uint64_t>(rep));

        Population global;
        {
            const Market pool =
                generate_population(params.population, derive_seed(rep_seed, kStreamPool));
            global.requesters = pool.requesters;
            global.providers = pool.providers;
        }

        RngEngine split_rng = make_engine(derive_seed(rep_seed, kStreamSplit));
        auto [bench, eswm] = split_equal(global, split_rng);

        auto& trace = result.replications[static_cast<std::size_t>(rep)];
        trace.epochs.reserve(static_cast<std::size_t>(params.epochs));

        for (int epoch = 0; epoch < params.epochs; ++epoch) {
            if (epoch > 0 && params.mode == Mode::Reselection) {
                RngEngine resel_rng = make_engine(
                    derive_seed(rep_seed, kStreamReselect, static_cast<std::uint64_t>(epoch)));
                std::tie(bench, eswm) = reselect(trace.epochs.back(), global, params.reselection,
                                                 resel_rng);
            }

            const auto bench_seed =
                derive_seed(rep_seed, kStreamBenchmarkRound, static_cast<std::uint64_t>(epoch));
            const auto eswm_seed =
                derive_seed(rep_seed, kStreamEswmRound, static_cast<std::uint64_t>(epoch));

            RoundResult round_b = run_mechanism_round(bench, Objective::Platform, params.capacity,
                                                      params.payment, bench_seed);
            RoundResult round_e = run_mechanism_round(eswm, Objective::ExpectedWelfare,
                                                      params.capacity, params.payment, eswm_seed);

            if (observer) {
                std::scoped_lock lock(observer_mutex);
                observer({rep, epoch, Mechanism::Benchmark}, round_b.market, round_b.outcome);
                observer({rep, epoch, Mechanism::Eswm}, round_e.market, round_e.outcome);
            }

            EpochTrace entry;
            entry.epoch = epoch;
            entry.benchmark = round_b.stats;
            entry.eswm = round_e.stats;
            trace.epochs.push_back(std::move(entry));
        }
    };

    const int threads = std::max(1, params.threads);
    if (threads == 1 || params.replications <= 1) {
        for (int rep = 0; rep < params.replications; ++rep) run_replication(rep);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (int rep = t; rep < params.replications; rep += threads) run_replication(rep);
            });
        }
        for (auto& worker : pool) worker.join();
    }

    result.summary = summarize(result.replications, params.epochs);
    return result;
}

std::span<const MetricView> epoch_metrics() { return kMetrics; }

} // namespace eswm
