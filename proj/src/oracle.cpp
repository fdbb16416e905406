#include "eswm/oracle.hpp"

#include <algorithm>
#include <string>

namespace eswm {

namespace {

struct Enumerator {
    int n = 0; // requesters
    int m = 0; // providers
    int cap = 0;
    // positive[j] lists (provider index, weight), provider-ascending.
    std::vector<std::vector<std::pair<int, double>>> positive;
    std::vector<int> requester_ids;
    std::vector<int> provider_ids;

    std::vector<bool> provider_used;
    std::vector<MatchPair> current;
    double current_objective = 0.0;

    OracleResult best;
    bool have_candidate = false;

    void consider_leaf() {
        ++best.explored;
        if (!have_candidate || current_objective > best.objective ||
            (current_objective == best.objective && current < best.best.pairs)) {
            best.best.pairs = current;
            best.objective = current_objective;
            have_candidate = true;
        }
    }

    // Requester-ascending DFS; each requester is either skipped or matched to
    // a free positive-weight provider, so every feasible restricted
    // assignment appears as exactly one leaf.
    void walk(int j) {
        if (j == n || static_cast<int>(current.size()) == cap) {
            consider_leaf();
            return;
        }
        walk(j + 1); // requester j stays unmatched
        for (const auto& [i, w] : positive[j]) {
            if (provider_used[static_cast<std::size_t>(i)]) continue;
            provider_used[static_cast<std::size_t>(i)] = true;
            current.push_back({requester_ids[static_cast<std::size_t>(j)],
                               provider_ids[static_cast<std::size_t>(i)]});
            current_objective += w;
            walk(j + 1);
            current_objective -= w;
            current.pop_back();
            provider_used[static_cast<std::size_t>(i)] = false;
        }
    }
};

} // namespace

OracleResult solve_exact(const Market& market, const std::vector<PairWeight>& weights,
                         Objective objective) {
    const int n = static_cast<int>(market.requesters.size());
    const int m = static_cast<int>(market.providers.size());
    if (n > kOracleSideLimit || m > kOracleSideLimit)
        throw StructuralError("solve_exact: instance " + std::to_string(n) + "x" +
                              std::to_string(m) + " exceeds the enumeration guard of " +
                              std::to_string(kOracleSideLimit) +
                              " per side; use the greedy selection instead");

    Enumerator e;
    e.n = n;
    e.m = m;
    e.cap = std::min({market.capacity, n, m});
    e.requester_ids.reserve(static_cast<std::size_t>(n));
    e.provider_ids.reserve(static_cast<std::size_t>(m));
    for (const auto& r : market.requesters) e.requester_ids.push_back(r.id);
    for (const auto& w : market.providers) e.provider_ids.push_back(w.id);

    // Map ids to dense indices to accept markets whose ids are not ordinals.
    std::vector<std::pair<int, int>> requester_index, provider_index;
    for (int j = 0; j < n; ++j) requester_index.emplace_back(e.requester_ids[static_cast<std::size_t>(j)], j);
    for (int i = 0; i < m; ++i) provider_index.emplace_back(e.provider_ids[static_cast<std::size_t>(i)], i);
    std::sort(requester_index.begin(), requester_index.end());
    std::sort(provider_index.begin(), provider_index.end());
    auto lookup = [](const std::vector<std::pair<int, int>>& index, int id) {
        auto it = std::lower_bound(index.begin(), index.end(), std::pair<int, int>{id, -1});
        if (it == index.end() || it->first != id)
            throw StructuralError("solve_exact: weight refers to unknown participant id " +
                                  std::to_string(id));
        return it->second;
    };

    e.positive.resize(static_cast<std::size_t>(n));
    for (const auto& pw : weights) {
        const double w = pw.weight(objective);
        if (w <= 0.0) continue;
        const int j = lookup(requester_index, pw.requester);
        const int i = lookup(provider_index, pw.provider);
        e.positive[static_cast<std::size_t>(j)].emplace_back(i, w);
    }
    for (auto& row : e.positive) std::sort(row.begin(), row.end());

    e.provider_used.assign(static_cast<std::size_t>(m), false);
    e.walk(0);
    std::sort(e.best.best.pairs.begin(), e.best.best.pairs.end());
    return e.best;
}

OracleResult solve_exact(const Market& market, const std::vector<PairWeight>& weights) {
    return solve_exact(market, weights, Objective::ExpectedWelfare);
}

} // namespace eswm
