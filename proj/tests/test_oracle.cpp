#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "eswm/oracle.hpp"
#include "eswm/rng.hpp"

using namespace eswm;

namespace {

Market bare_market(int n, int m, int capacity) {
    Market market;
    market.capacity = capacity;
    for (int j = 0; j < n; ++j) market.requesters.push_back({j, 1.0, 1.0, {}});
    for (int i = 0; i < m; ++i) market.providers.push_back({i, 0.0, {}});
    return market;
}

PairWeight weight(int j, int i, double w) { return {j, i, w, w}; }

// Second, structurally different enumeration: subset bitmasks on both sides
// plus provider permutations. Used as the independent cross-check of the
// DFS in solve_exact. restrict_positive mirrors the solver's pair filter;
// with it off, the enumeration also visits assignments through non-positive
// pairs.
double enumerate_best(const Market& market, const std::vector<PairWeight>& weights,
                      bool restrict_positive) {
    const int n = static_cast<int>(market.requesters.size());
    const int m = static_cast<int>(market.providers.size());
    const int cap = std::min({market.capacity, n, m});

    std::vector<std::vector<double>> w(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(m), 0.0));
    std::vector<std::vector<bool>> present(
        static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(m), false));
    for (const auto& pw : weights) {
        w[static_cast<std::size_t>(pw.requester)][static_cast<std::size_t>(pw.provider)] =
            pw.esw_weight;
        present[static_cast<std::size_t>(pw.requester)][static_cast<std::size_t>(pw.provider)] =
            true;
    }

    double best = 0.0; // the empty assignment
    for (unsigned rmask = 0; rmask < (1u << n); ++rmask) {
        const int k = __builtin_popcount(rmask);
        if (k > cap) continue;
        std::vector<int> rs;
        for (int j = 0; j < n; ++j)
            if (rmask & (1u << j)) rs.push_back(j);
        for (unsigned wmask = 0; wmask < (1u << m); ++wmask) {
            if (__builtin_popcount(wmask) != k) continue;
            std::vector<int> ws;
            for (int i = 0; i < m; ++i)
                if (wmask & (1u << i)) ws.push_back(i);
            std::sort(ws.begin(), ws.end());
            do {
                double sum = 0.0;
                bool admissible = true;
                for (int idx = 0; idx < k; ++idx) {
                    const auto j = static_cast<std::size_t>(rs[static_cast<std::size_t>(idx)]);
                    const auto i = static_cast<std::size_t>(ws[static_cast<std::size_t>(idx)]);
                    if (!present[j][i] || (restrict_positive && w[j][i] <= 0.0)) {
                        admissible = false;
                        break;
                    }
                    sum += w[j][i];
                }
                if (admissible) best = std::max(best, sum);
            } while (std::next_permutation(ws.begin(), ws.end()));
        }
    }
    return best;
}

// Weights on a 1/64 lattice keep sums exact in binary floating point, so the
// two enumerations must agree to the last bit.
std::vector<PairWeight> lattice_weights(int n, int m, RngEngine& rng) {
    std::vector<PairWeight> weights;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) {
            const double v = static_cast<double>(static_cast<int>(uniform_index(rng, 705)) - 64) / 64.0;
            weights.push_back(weight(j, i, v));
        }
    return weights;
}

} // namespace

TEST_CASE("solve_exact on the empty market") {
    const auto result = solve_exact(bare_market(0, 0, 3), {});
    CHECK(result.best.empty());
    CHECK(result.objective == 0.0);
    CHECK(result.explored == 1); // just the empty assignment
}

TEST_CASE("solve_exact on the 2x2 instance with seven feasible assignments") {
    const Market market = bare_market(2, 2, 2);
    const std::vector<PairWeight> weights = {weight(0, 0, 3.0), weight(0, 1, 4.0),
                                             weight(1, 0, 5.0), weight(1, 1, 1.0)};
    const auto result = solve_exact(market, weights);
    CHECK(result.objective == 9.0);
    REQUIRE(result.best.size() == 2);
    CHECK(result.best.pairs[0] == MatchPair{0, 1});
    CHECK(result.best.pairs[1] == MatchPair{1, 0});
    CHECK(result.explored == 7);
    CHECK(validate_match_set(market, result.best).feasible);
}

TEST_CASE("solve_exact agrees exactly with an independent enumeration") {
    RngEngine rng = make_engine(4242);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(uniform_index(rng, 5));
        const int m = 1 + static_cast<int>(uniform_index(rng, 5));
        const int k = 1 + static_cast<int>(uniform_index(rng, 5));
        const Market market = bare_market(n, m, k);
        const auto weights = lattice_weights(n, m, rng);
        const auto result = solve_exact(market, weights);
        CHECK(result.objective == enumerate_best(market, weights, /*restrict_positive=*/true));
        CHECK(validate_match_set(market, result.best).feasible);
    }
}

TEST_CASE("restricting to positive pairs never lowers the optimum") {
    RngEngine rng = make_engine(777);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(uniform_index(rng, 4));
        const int m = 1 + static_cast<int>(uniform_index(rng, 4));
        const int k = 1 + static_cast<int>(uniform_index(rng, 4));
        const Market market = bare_market(n, m, k);
        const auto weights = lattice_weights(n, m, rng);
        const auto result = solve_exact(market, weights);
        CHECK(result.objective == enumerate_best(market, weights, /*restrict_positive=*/false));
    }
}

TEST_CASE("equal objectives resolve to the lexicographically smallest pair list") {
    const Market market = bare_market(2, 2, 1);
    // Both single pairs score 2; {(0,0)} must win over {(0,1)} and {(1,0)}.
    const auto result = solve_exact(
        market, {weight(0, 0, 2.0), weight(0, 1, 2.0), weight(1, 0, 2.0)});
    CHECK(result.objective == 2.0);
    REQUIRE(result.best.size() == 1);
    CHECK(result.best.pairs[0] == MatchPair{0, 0});
}

TEST_CASE("the exact objective dominates the greedy objective by definition") {
    PopulationSpec spec;
    spec.requesters = 4;
    spec.providers = 5;
    spec.capacity = 3;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Market market = generate_population(spec, seed);
        const auto weights = compute_weights(market, PaymentPolicy{});
        const auto greedy = select_winners_greedy(market, weights, Objective::ExpectedWelfare);
        double greedy_value = 0.0;
        for (const auto& p : greedy.pairs)
            for (const auto& w : weights)
                if (w.requester == p.requester && w.provider == p.provider)
                    greedy_value += w.esw_weight;
        CHECK(solve_exact(market, weights).objective >= greedy_value - 1e-9);
    }
}

TEST_CASE("instances beyond the enumeration guard are refused") {
    const Market market = bare_market(kOracleSideLimit + 1, 3, 2);
    CHECK_THROWS_AS((void)solve_exact(market, {}), StructuralError);
}
