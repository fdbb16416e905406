#include "eswm/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eswm/oracle.hpp"
#include "eswm/report.hpp"
#include "eswm/rng.hpp"
#include "eswm/sim.hpp"
#include "eswm/valuation.hpp"

namespace eswm {

namespace {

// Weight sums of the same pair set may differ by an ulp between code paths.
constexpr double kSumSlack = 1e-9;

struct CheckReporter {
    std::ostream& out;
    bool all_ok = true;

    void report(bool ok, const std::string& name, const std::string& detail) {
        out << (ok ? "[ok]   " : "[FAIL] ") << name << ": " << detail << '\n';
        all_ok = all_ok && ok;
    }
};

PopulationSpec small_spec(const PopulationSpec& base, int requesters, int providers,
                          int capacity) {
    PopulationSpec spec = base;
    spec.requesters = requesters;
    spec.providers = providers;
    spec.capacity = capacity;
    return spec;
}

double selected_weight_sum(const std::vector<PairWeight>& weights, const MatchSet& matches,
                           Objective objective) {
    double sum = 0.0;
    for (const auto& pair : matches.pairs) {
        for (const auto& w : weights) {
            if (w.requester == pair.requester && w.provider == pair.provider) {
                sum += w.weight(objective);
                break;
            }
        }
    }
    return sum;
}

} // namespace

bool run_self_verification(const ExperimentConfig& config, std::ostream& out) {
    CheckReporter check{out};
    const std::uint64_t seed = derive_seed(config.params.seed, 0x5e1fc8ecULL);
    RngEngine rng = make_engine(seed);

    // Greedy feasibility plus oracle dominance / half bound on random small
    // markets drawn from the configured parameter ranges.
    {
        const int instances = 300;
        int infeasible = 0;
        int dominance_violations = 0;
        int half_bound_violations = 0;
        double worst_ratio = 1.0;
        for (int i = 0; i < instances; ++i) {
            const int n = 1 + static_cast<int>(uniform_index(rng, 6));
            const int m = 1 + static_cast<int>(uniform_index(rng, 6));
            const int k = 1 + static_cast<int>(uniform_index(rng, 4));
            const Market market =
                generate_population(small_spec(config.params.population, n, m, k), rng());
            const auto weights = compute_weights(market, config.params.payment);
            for (Objective obj : {Objective::ExpectedWelfare, Objective::Platform}) {
                const MatchSet greedy = select_winners_greedy(market, weights, obj);
                if (!validate_match_set(market, greedy).feasible) ++infeasible;
            }
            const MatchSet greedy = select_winners_greedy(market, weights,
                                                          Objective::ExpectedWelfare);
            const double greedy_value =
                selected_weight_sum(weights, greedy, Objective::ExpectedWelfare);
            const OracleResult exact = solve_exact(market, weights);
            if (greedy_value > exact.objective + kSumSlack) ++dominance_violations;
            if (greedy_value + kSumSlack < 0.5 * exact.objective) ++half_bound_violations;
            if (exact.objective > 0.0)
                worst_ratio = std::min(worst_ratio, greedy_value / exact.objective);
        }
        check.report(infeasible == 0, "greedy feasibility",
                     std::to_string(2 * instances) + " selections, " +
                         std::to_string(infeasible) + " infeasible");
        check.report(dominance_violations == 0 && half_bound_violations == 0,
                     "greedy vs exact bounds",
                     std::to_string(instances) + " instances, worst ratio " +
                         std::to_string(worst_ratio));
    }

    // Analytic expected value against its Monte Carlo estimator.
    {
        int outside = 0;
        const std::size_t samples = 100000;
        for (CurveKind kind : {CurveKind::Step, CurveKind::Linear, CurveKind::Exponential}) {
            for (int draw = 0; draw < 8; ++draw) {
                Requester r;
                r.id = 0;
                r.value = uniform_in(rng, config.params.population.value.lo,
                                     config.params.population.value.hi);
                r.deadline = 1.0;
                r.depreciation = {kind, uniform_in(rng, 0.05, 2.0)};
                Provider w;
                w.id = 0;
                w.cost = 0.0;
                w.punctuality = {uniform_in(rng, 0.05, 0.95), uniform_in(rng, 0.3, 3.0)};
                const double analytic = expected_value(r, w);
                const auto mc = expected_value_monte_carlo(r, w, samples, rng);
                // 4 standard errors: this runs on user-chosen seeds.
                if (std::abs(analytic - mc.mean) > 4.0 * mc.std_error + 1e-12) ++outside;
            }
        }
        check.report(outside == 0, "expected value vs Monte Carlo",
                     "24 parameter draws at 100k samples, " + std::to_string(outside) +
                         " outside 4 standard errors");
    }

    // Budget identity: charges = platform utility + payments, exactly.
    {
        int violations = 0;
        for (int i = 0; i < 50; ++i) {
            const Market market =
                generate_population(small_spec(config.params.population, 8, 8, 5), rng());
            const auto weights = compute_weights(market, config.params.payment);
            const MatchSet winners =
                select_winners_greedy(market, weights, Objective::ExpectedWelfare);
            RngEngine round_rng = make_engine(rng());
            const MechanismOutcome outcome =
                realize_round(market, winners, config.params.payment, round_rng);
            double charges = 0.0, payments = 0.0;
            for (const auto& rec : outcome.per_match) {
                charges += rec.requester_charge;
                payments += rec.provider_payment;
            }
            if (outcome.totals.platform_utility != charges - payments) ++violations;
        }
        check.report(violations == 0, "budget identity",
                     "50 rounds, " + std::to_string(violations) + " violations");
    }

    // Determinism of the experiment driver.
    {
        ExperimentParams params = config.params;
        params.population = small_spec(config.params.population, 12, 12, 4);
        params.capacity = 4;
        params.epochs = 5;
        params.replications = 3;
        params.threads = 1;
        const ExperimentResult a = run_experiment(params);
        const ExperimentResult b = run_experiment(params);
        check.report(a.replications == b.replications, "experiment determinism",
                     "two identical runs, traces " +
                         std::string(a.replications == b.replications ? "match" : "differ"));
    }

    out << (check.all_ok ? "verification passed" : "verification FAILED") << '\n';
    return check.all_ok;
}

} // namespace eswm
