#include "eswm/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "eswm/rng.hpp"

namespace eswm {

std::string_view to_string(CurveKind kind) {
    switch (kind) {
    case CurveKind::Step: return "step";
    case CurveKind::Linear: return "linear";
    case CurveKind::Exponential: return "exponential";
    }
    return "?";
}

CurveKind curve_kind_from_string(std::string_view name) {
    if (name == "step") return CurveKind::Step;
    if (name == "linear") return CurveKind::Linear;
    if (name == "exponential") return CurveKind::Exponential;
    throw ConfigError("curve kind: must be one of step|linear|exponential, got '" +
                      std::string(name) + "'");
}

double DepreciationCurve::factor(double delay_past_deadline) const {
    if (delay_past_deadline <= 0.0) return 1.0;
    switch (kind) {
    case CurveKind::Step:
        return 0.0;
    case CurveKind::Linear:
        return std::max(0.0, 1.0 - rate * delay_past_deadline);
    case CurveKind::Exponential:
        return std::exp(-rate * delay_past_deadline);
    }
    return 0.0;
}

bool MatchSet::requester_matched(int id) const {
    return std::any_of(pairs.begin(), pairs.end(),
                       [id](const MatchPair& p) { return p.requester == id; });
}

bool MatchSet::provider_matched(int id) const {
    return std::any_of(pairs.begin(), pairs.end(),
                       [id](const MatchPair& p) { return p.provider == id; });
}

Feasibility validate_match_set(const Market& market, const MatchSet& matches) {
    std::unordered_set<int> known_requesters;
    std::unordered_set<int> known_providers;
    for (const auto& r : market.requesters) known_requesters.insert(r.id);
    for (const auto& w : market.providers) known_providers.insert(w.id);

    for (const auto& pair : matches.pairs) {
        if (!known_requesters.contains(pair.requester))
            throw StructuralError("match set refers to unknown requester id " +
                                  std::to_string(pair.requester));
        if (!known_providers.contains(pair.provider))
            throw StructuralError("match set refers to unknown provider id " +
                                  std::to_string(pair.provider));
    }

    // 11.e: every decision variable is binary, i.e. no pair listed twice.
    std::vector<MatchPair> sorted = matches.pairs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        return {false, "11.e", "a (requester, provider) pair is selected more than once"};

    // 11.c / 11.d: one match per participant on each side.
    std::unordered_set<int> used_requesters;
    std::unordered_set<int> used_providers;
    for (const auto& pair : matches.pairs) {
        if (!used_requesters.insert(pair.requester).second)
            return {false, "11.c",
                    "requester " + std::to_string(pair.requester) + " matched more than once"};
        if (!used_providers.insert(pair.provider).second)
            return {false, "11.d",
                    "provider " + std::to_string(pair.provider) + " matched more than once"};
    }

    // 11.a: capacity cap.
    if (matches.size() > market.capacity)
        return {false, "11.a",
                std::to_string(matches.size()) + " matches exceed capacity " +
                    std::to_string(market.capacity)};

    // 11.b: selected requesters, matches, and selected providers agree in count.
    if (static_cast<int>(used_requesters.size()) != matches.size() ||
        static_cast<int>(used_providers.size()) != matches.size())
        return {false, "11.b", "selection counts disagree with the number of matches"};

    return {};
}

namespace {

void check_range(const char* field, const Range& r, double domain_lo, double domain_hi,
                 bool lo_exclusive) {
    const bool lo_ok = lo_exclusive ? r.lo > domain_lo : r.lo >= domain_lo;
    if (!(r.lo <= r.hi) || !lo_ok || !(r.hi <= domain_hi)) {
        throw ConfigError(std::string("population.") + field + ": range [" +
                          std::to_string(r.lo) + ", " + std::to_string(r.hi) +
                          "] must satisfy " + (lo_exclusive ? "lo > " : "lo >= ") +
                          std::to_string(domain_lo) + ", lo <= hi, hi <= " +
                          std::to_string(domain_hi));
    }
}

constexpr double kNoUpperBound = 1e300;

} // namespace

void validate_population_spec(const PopulationSpec& spec) {
    if (spec.requesters < 0)
        throw ConfigError("population.requesters: must be >= 0");
    if (spec.providers < 0)
        throw ConfigError("population.providers: must be >= 0");
    if (spec.capacity < 0)
        throw ConfigError("capacity: must be >= 0 (constraint 11.a)");
    check_range("value", spec.value, 0.0, kNoUpperBound, /*lo_exclusive=*/true);
    check_range("deadline", spec.deadline, 0.0, kNoUpperBound, true);
    check_range("depreciation_rate", spec.depreciation_rate, 0.0, kNoUpperBound, false);
    check_range("cost", spec.cost, 0.0, kNoUpperBound, false);
    check_range("on_time_prob", spec.on_time_prob, 0.0, 1.0, false);
    check_range("late_rate", spec.late_rate, 0.0, kNoUpperBound, true);
    if (spec.curves.empty())
        throw ConfigError("population.curves: must name at least one curve kind");
}

Market generate_population(const PopulationSpec& spec, std::uint64_t seed) {
    validate_population_spec(spec);

    RngEngine rng = make_engine(seed);
    Market market;
    market.capacity = spec.capacity;
    market.requesters.reserve(static_cast<std::size_t>(spec.requesters));
    market.providers.reserve(static_cast<std::size_t>(spec.providers));

    // Sampling order is part of the determinism contract: all requesters
    // first, then all providers, fields in declaration order.
    for (int id = 0; id < spec.requesters; ++id) {
        Requester r;
        r.id = id;
        r.value = uniform_in(rng, spec.value.lo, spec.value.hi);
        r.deadline = uniform_in(rng, spec.deadline.lo, spec.deadline.hi);
        r.depreciation.rate = uniform_in(rng, spec.depreciation_rate.lo, spec.depreciation_rate.hi);
        r.depreciation.kind = spec.curves[uniform_index(rng, spec.curves.size())];
        market.requesters.push_back(r);
    }
    for (int id = 0; id < spec.providers; ++id) {
        Provider w;
        w.id = id;
        w.cost = uniform_in(rng, spec.cost.lo, spec.cost.hi);
        w.punctuality.on_time_prob = uniform_in(rng, spec.on_time_prob.lo, spec.on_time_prob.hi);
        w.punctuality.late_rate = uniform_in(rng, spec.late_rate.lo, spec.late_rate.hi);
        market.providers.push_back(w);
    }
    return market;
}

} // namespace eswm
