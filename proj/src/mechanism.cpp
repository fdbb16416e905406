#include "eswm/mechanism.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace eswm {

std::vector<PairWeight> compute_weights(const Market& market, const PaymentPolicy& policy) {
    std::vector<PairWeight> weights;
    weights.reserve(market.requesters.size() * market.providers.size());
    for (const auto& r : market.requesters) {
        for (const auto& w : market.providers) {
            const double ev = expected_value(r, w);
            PairWeight pw;
            pw.requester = r.id;
            pw.provider = w.id;
            pw.esw_weight = ev - w.cost;
            pw.platform_weight =
                policy.requester_share * ev - w.cost * (1.0 + policy.provider_margin);
            weights.push_back(pw);
        }
    }
    return weights;
}

MatchSet select_winners_greedy(const Market& market, const std::vector<PairWeight>& weights,
                               Objective objective) {
    // Sorting by (weight desc, requester, provider) makes the scan below
    // equivalent to repeatedly extracting the best remaining pair.
    std::vector<const PairWeight*> order;
    order.reserve(weights.size());
    for (const auto& w : weights)
        if (w.weight(objective) > 0.0) order.push_back(&w);
    std::sort(order.begin(), order.end(), [objective](const PairWeight* a, const PairWeight* b) {
        const double wa = a->weight(objective);
        const double wb = b->weight(objective);
        if (wa != wb) return wa > wb;
        if (a->requester != b->requester) return a->requester < b->requester;
        return a->provider < b->provider;
    });

    MatchSet matches;
    std::unordered_set<int> used_requesters;
    std::unordered_set<int> used_providers;
    for (const PairWeight* pw : order) {
        if (matches.size() >= market.capacity) break;
        if (used_requesters.contains(pw->requester) || used_providers.contains(pw->provider))
            continue;
        used_requesters.insert(pw->requester);
        used_providers.insert(pw->provider);
        matches.pairs.push_back({pw->requester, pw->provider});
    }
    std::sort(matches.pairs.begin(), matches.pairs.end());
    return matches;
}

MechanismOutcome realize_round(const Market& market, const MatchSet& matches,
                               const PaymentPolicy& policy, RngEngine& rng) {
    const Feasibility verdict = validate_match_set(market, matches);
    if (!verdict.feasible)
        throw StructuralError("realize_round: infeasible match set, violates constraint " +
                              verdict.violated + " (" + verdict.detail + ")");

    std::unordered_map<int, const Requester*> requesters;
    std::unordered_map<int, const Provider*> providers;
    for (const auto& r : market.requesters) requesters.emplace(r.id, &r);
    for (const auto& w : market.providers) providers.emplace(w.id, &w);

    MechanismOutcome outcome;
    outcome.matches = matches;
    // Completion draws happen in sorted pair order; this is the determinism
    // contract for identical (market, matches, policy, seed).
    std::sort(outcome.matches.pairs.begin(), outcome.matches.pairs.end());

    double sum_charges = 0.0;
    double sum_payments = 0.0;
    double sum_requester_utility = 0.0;
    double sum_provider_utility = 0.0;
    auto& totals = outcome.totals;

    for (const auto& pair : outcome.matches.pairs) {
        const Requester& r = *requesters.at(pair.requester);
        const Provider& w = *providers.at(pair.provider);

        MatchRecord rec;
        rec.requester = pair.requester;
        rec.provider = pair.provider;
        rec.expected_value = expected_value(r, w);
        rec.completion = sample_completion(w, rng);
        rec.realized_value = depreciated_value(r, rec.completion);
        rec.requester_charge = policy.requester_share *
                               (policy.charge_on_realized ? rec.realized_value : rec.expected_value);
        rec.provider_payment = w.cost * (1.0 + policy.provider_margin);

        totals.nsw += r.value;
        totals.esw += rec.expected_value - w.cost;
        totals.realized_sw += rec.realized_value - w.cost;
        sum_charges += rec.requester_charge;
        sum_payments += rec.provider_payment;
        sum_requester_utility += rec.realized_value - rec.requester_charge;
        sum_provider_utility += rec.provider_payment - w.cost;

        outcome.per_match.push_back(rec);
    }

    // Budget identity holds bit-exactly in this form: total margin is the
    // difference of the two payment streams, summed in match order.
    totals.platform_utility = sum_charges - sum_payments;

    totals.requester_count = static_cast<int>(market.requesters.size());
    totals.provider_count = static_cast<int>(market.providers.size());
    totals.winner_count = outcome.matches.size();

    const int requester_base = policy.average_over == AverageOver::All ? totals.requester_count
                                                                       : totals.winner_count;
    const int provider_base = policy.average_over == AverageOver::All ? totals.provider_count
                                                                      : totals.winner_count;
    totals.avg_requester_utility =
        requester_base > 0 ? sum_requester_utility / requester_base : 0.0;
    totals.avg_provider_utility = provider_base > 0 ? sum_provider_utility / provider_base : 0.0;

    return outcome;
}

} // namespace eswm
