#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "eswm/errors.hpp"

namespace eswm {

// ---------------------------------------------------------------------------
// Participants and markets.
//
// A requester owns one task with full valuation `value` and a deadline; the
// value depreciates once completion slips past the deadline, following a
// per-requester curve. A provider completes an assigned task either within
// the deadline (probability on_time_prob) or with an exponentially
// distributed delay past it.
// ---------------------------------------------------------------------------

enum class CurveKind { Step, Linear, Exponential };

std::string_view to_string(CurveKind kind);
CurveKind curve_kind_from_string(std::string_view name); // throws ConfigError

/// Value retention as a function of delay past the deadline.
/// factor(0) = 1, factor is non-increasing and stays within [0, 1].
struct DepreciationCurve {
    CurveKind kind = CurveKind::Exponential;
    double rate = 0.5; // per time unit past deadline; ignored for Step

    double factor(double delay_past_deadline) const;

    bool operator==(const DepreciationCurve&) const = default;
};

/// Two-parameter punctuality: on-time with probability on_time_prob,
/// otherwise late by Exponential(late_rate) time units (mean 1/late_rate).
struct PunctualityModel {
    double on_time_prob = 1.0;
    double late_rate = 1.0;

    bool operator==(const PunctualityModel&) const = default;
};

struct Requester {
    int id = 0;
    double value = 0.0;    // full task valuation, > 0
    double deadline = 0.0; // time units, > 0
    DepreciationCurve depreciation;

    bool operator==(const Requester&) const = default;
};

struct Provider {
    int id = 0;
    double cost = 0.0; // true cost of completing a task, >= 0
    PunctualityModel punctuality;

    bool operator==(const Provider&) const = default;
};

struct Market {
    std::vector<Requester> requesters;
    std::vector<Provider> providers;
    int capacity = 0; // K, maximum number of matches the platform serves

    bool operator==(const Market&) const = default;
};

// ---------------------------------------------------------------------------
// Match sets: the feasible assignments of the selection problem. A match set
// is feasible when
//   11.a  |pairs| <= K
//   11.b  |pairs| equals the number of selected requesters and of selected
//         providers (holds whenever 11.c-11.e do; cross-checked anyway)
//   11.c  each requester appears at most once
//   11.d  each provider appears at most once
//   11.e  no pair is selected more than once
// ---------------------------------------------------------------------------

struct MatchPair {
    int requester = 0;
    int provider = 0;

    auto operator<=>(const MatchPair&) const = default;
};

struct MatchSet {
    std::vector<MatchPair> pairs; // kept sorted by (requester, provider)

    int size() const { return static_cast<int>(pairs.size()); }
    bool empty() const { return pairs.empty(); }
    bool requester_matched(int id) const;
    bool provider_matched(int id) const;

    bool operator==(const MatchSet&) const = default;
};

struct Feasibility {
    bool feasible = true;
    std::string violated; // constraint id ("11.a".."11.e"); empty when feasible
    std::string detail;
};

/// Checks constraints 11.a-11.e. Ids that do not exist in the market are a
/// structural error, not an infeasibility, and throw StructuralError.
Feasibility validate_match_set(const Market& market, const MatchSet& matches);

// ---------------------------------------------------------------------------
// Population generation.
// ---------------------------------------------------------------------------

struct Range {
    double lo = 0.0;
    double hi = 0.0;

    bool operator==(const Range&) const = default;
};

/// Parameter ranges for i.i.d. uniform population sampling. Defaults: a
/// 60+60 pool served with capacity 20 per platform.
struct PopulationSpec {
    int requesters = 60;
    int providers = 60;
    int capacity = 20;

    Range value{5.0, 15.0};
    Range deadline{1.0, 10.0};
    Range depreciation_rate{0.2, 1.5};
    std::vector<CurveKind> curves{CurveKind::Exponential}; // sampled uniformly

    Range cost{3.0, 6.0};
    Range on_time_prob{0.38, 0.95};
    Range late_rate{0.4, 2.0};

    bool operator==(const PopulationSpec&) const = default;
};

/// Throws ConfigError naming the offending field when a range is inverted or
/// leaves the legal domain of its parameter.
void validate_population_spec(const PopulationSpec& spec);

/// Samples a market from the spec. Pure function of (spec, seed): identical
/// inputs yield bitwise-identical markets. Ids are dense ordinals 0..n-1 per
/// side.
Market generate_population(const PopulationSpec& spec, std::uint64_t seed);

} // namespace eswm
