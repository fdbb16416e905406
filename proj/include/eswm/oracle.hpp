#pragma once

#include <cstdint>
#include <vector>

#include "eswm/mechanism.hpp"
#include "eswm/model.hpp"

namespace eswm {

// ---------------------------------------------------------------------------
// Exact reference solver for the capacity-capped assignment objective.
// Straight enumeration, bounded by kOracleSideLimit per side; ground truth
// for the greedy selection at desk scale.
// ---------------------------------------------------------------------------

/// Guard on each side; enumeration above this size is refused.
inline constexpr int kOracleSideLimit = 12;

struct OracleResult {
    MatchSet best;
    double objective = 0.0;  // sum of selected weights under the chosen objective
    std::uint64_t explored = 0; // complete candidate assignments evaluated
};

/// Enumerates every one-to-one assignment of size <= min(K, |R|, |W|)
/// restricted to strictly positive-weight pairs and returns the maximum.
/// Equal-objective candidates resolve to the lexicographically smallest
/// sorted pair list. Markets beyond kOracleSideLimit on either side throw
/// StructuralError advising the greedy path instead.
OracleResult solve_exact(const Market& market, const std::vector<PairWeight>& weights,
                         Objective objective);

/// Expected-welfare objective, the contract used to audit the mechanism.
OracleResult solve_exact(const Market& market, const std::vector<PairWeight>& weights);

} // namespace eswm
