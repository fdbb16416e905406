#pragma once

#include <vector>

#include "eswm/model.hpp"
#include "eswm/valuation.hpp"

namespace eswm {

// ---------------------------------------------------------------------------
// Winner selection and settlement for one round. Two greedy objectives exist:
// expected-welfare selection (the mechanism under study) and platform-utility
// selection (the benchmark it competes against).
// ---------------------------------------------------------------------------

enum class Objective { ExpectedWelfare, Platform };

enum class AverageOver { All, Winners };

/// Payment rule: a matched provider is paid cost * (1 + provider_margin); a
/// matched requester is charged requester_share * expected value (or times
/// realized value when charge_on_realized is set, shifting the depreciation
/// loss off the requester).
struct PaymentPolicy {
    double requester_share = 0.8; // gamma in (0, 1]
    double provider_margin = 0.2; // m >= 0
    bool charge_on_realized = false;
    AverageOver average_over = AverageOver::All;

    bool operator==(const PaymentPolicy&) const = default;
};

struct PairWeight {
    int requester = 0;
    int provider = 0;
    double esw_weight = 0.0;      // expected value minus provider cost
    double platform_weight = 0.0; // expected requester charge minus provider payment

    double weight(Objective objective) const {
        return objective == Objective::ExpectedWelfare ? esw_weight : platform_weight;
    }
};

/// One entry per (requester, provider) pair, requester-major order.
std::vector<PairWeight> compute_weights(const Market& market, const PaymentPolicy& policy);

/// Greedy selection: repeatedly takes the strictly positive remaining weight
/// whose requester and provider are both free, until the capacity is reached
/// or no positive pair remains. Ties break on (requester id, provider id).
/// The result always satisfies constraints 11.a-11.e.
MatchSet select_winners_greedy(const Market& market, const std::vector<PairWeight>& weights,
                               Objective objective);

struct MatchRecord {
    int requester = 0;
    int provider = 0;
    double expected_value = 0.0;
    CompletionTime completion;
    double realized_value = 0.0;
    double requester_charge = 0.0;
    double provider_payment = 0.0;
};

struct RoundAggregates {
    double nsw = 0.0;         // sum of full valuations over matched requesters
    double esw = 0.0;         // sum of (expected value - cost) over matches
    double realized_sw = 0.0; // sum of (realized value - cost) over matches
    double platform_utility = 0.0;
    double avg_requester_utility = 0.0;
    double avg_provider_utility = 0.0;
    int requester_count = 0;
    int provider_count = 0;
    int winner_count = 0;
};

struct MechanismOutcome {
    MatchSet matches;
    std::vector<MatchRecord> per_match;
    RoundAggregates totals;
};

/// Draws completions for every match, settles charges and payments, and
/// aggregates all round metrics. Average utilities span all participants of
/// the round (losers at zero) unless the policy averages over winners only.
/// Throws StructuralError when the match set is infeasible for the market.
MechanismOutcome realize_round(const Market& market, const MatchSet& matches,
                               const PaymentPolicy& policy, RngEngine& rng);

} // namespace eswm
