#include <doctest.h>

#include <cmath>
#include <vector>

#include "eswm/valuation.hpp"

using namespace eswm;

namespace {

Requester make_requester(double value, CurveKind kind, double rate) {
    return {0, value, 5.0, {kind, rate}};
}

Provider make_provider(double cost, double on_time_prob, double late_rate) {
    return {0, cost, {on_time_prob, late_rate}};
}

// Hand-derived expectation of the linear retention factor under an
// exponential delay: E[max(0, 1 - L d)] = 1 - (L/mu) * (1 - exp(-mu/L)).
// Kept independent of the quadrature path it cross-checks.
double linear_factor_reference(double lambda, double mu) {
    if (lambda <= 0.0) return 1.0;
    return 1.0 - (lambda / mu) * (1.0 - std::exp(-mu / lambda));
}

} // namespace

TEST_CASE("on-time completion keeps the full valuation for every curve") {
    for (CurveKind kind : {CurveKind::Step, CurveKind::Linear, CurveKind::Exponential}) {
        const Requester r = make_requester(10.0, kind, 0.5);
        CHECK(depreciated_value(r, CompletionTime::within_deadline()) == 10.0);
    }
}

TEST_CASE("depreciated_value follows the curve shapes") {
    SUBCASE("step curve drops to zero for any lateness") {
        const Requester r = make_requester(10.0, CurveKind::Step, 0.0);
        CHECK(depreciated_value(r, CompletionTime::late_by(1e-9)) == 0.0);
    }
    SUBCASE("linear curve hits zero at delay = 1/rate") {
        const Requester r = make_requester(10.0, CurveKind::Linear, 0.5);
        CHECK(depreciated_value(r, CompletionTime::late_by(2.0)) == 0.0);
        CHECK(depreciated_value(r, CompletionTime::late_by(1.0)) == doctest::Approx(5.0));
        CHECK(depreciated_value(r, CompletionTime::late_by(3.0)) == 0.0);
    }
    SUBCASE("exponential curve halves at delay = ln 2 / rate") {
        const Requester r = make_requester(10.0, CurveKind::Exponential, 1.0);
        CHECK(depreciated_value(r, CompletionTime::late_by(std::log(2.0))) ==
              doctest::Approx(5.0).epsilon(1e-12));
    }
    SUBCASE("factor is non-increasing in the delay") {
        for (CurveKind kind : {CurveKind::Step, CurveKind::Linear, CurveKind::Exponential}) {
            const DepreciationCurve curve{kind, 0.7};
            double prev = curve.factor(0.0);
            CHECK(prev == 1.0);
            for (double delay = 0.25; delay <= 5.0; delay += 0.25) {
                const double f = curve.factor(delay);
                CHECK(f <= prev);
                CHECK(f >= 0.0);
                prev = f;
            }
        }
    }
}

TEST_CASE("sample_completion: degenerate mixtures and determinism") {
    SUBCASE("p = 1 is always on time") {
        const Provider w = make_provider(1.0, 1.0, 2.0);
        RngEngine rng = make_engine(5);
        for (int i = 0; i < 1000; ++i) CHECK(sample_completion(w, rng).on_time);
    }
    SUBCASE("p = 0, mu = 2 has empirical mean delay 0.5 within 1%") {
        const Provider w = make_provider(1.0, 0.0, 2.0);
        RngEngine rng = make_engine(17);
        double sum = 0.0;
        const int n = 1'000'000;
        for (int i = 0; i < n; ++i) {
            const CompletionTime c = sample_completion(w, rng);
            CHECK_FALSE(c.on_time);
            sum += c.delay;
        }
        CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
    }
    SUBCASE("a fixed seed reproduces the sample sequence") {
        const Provider w = make_provider(1.0, 0.4, 1.3);
        RngEngine a = make_engine(123);
        RngEngine b = make_engine(123);
        for (int i = 0; i < 100; ++i) CHECK(sample_completion(w, a) == sample_completion(w, b));
    }
}

TEST_CASE("expected_value closed forms") {
    SUBCASE("step curve: only on-time completions carry value") {
        CHECK(expected_value(make_requester(10.0, CurveKind::Step, 0.3),
                             make_provider(1.0, 0.5, 1.0)) == 5.0);
    }
    SUBCASE("exponential curve closed form") {
        // 10 * (0.5 + 0.5 * mu / (mu + lambda)) with mu = lambda = 1.
        CHECK(expected_value(make_requester(10.0, CurveKind::Exponential, 1.0),
                             make_provider(1.0, 0.5, 1.0)) ==
              doctest::Approx(7.5).epsilon(1e-12));
    }
    SUBCASE("linear curve quadrature matches the hand-derived reference") {
        for (double lambda : {0.0, 0.2, 1.0, 3.0}) {
            for (double mu : {0.4, 1.0, 2.5}) {
                const double got = expected_value(make_requester(10.0, CurveKind::Linear, lambda),
                                                  make_provider(1.0, 0.0, mu));
                CHECK(got == doctest::Approx(10.0 * linear_factor_reference(lambda, mu))
                                 .epsilon(1e-8));
            }
        }
    }
    SUBCASE("linear curve agrees with Monte Carlo within 0.5%") {
        const Requester r = make_requester(10.0, CurveKind::Linear, 1.0);
        const Provider w = make_provider(1.0, 0.0, 1.0);
        RngEngine rng = make_engine(29);
        const auto mc = expected_value_monte_carlo(r, w, 1'000'000, rng);
        CHECK(expected_value(r, w) == doctest::Approx(mc.mean).epsilon(0.005));
    }
}

TEST_CASE("expected_value_monte_carlo") {
    SUBCASE("p = 1 gives the exact valuation with zero error") {
        RngEngine rng = make_engine(3);
        const auto est = expected_value_monte_carlo(
            make_requester(10.0, CurveKind::Exponential, 1.0), make_provider(1.0, 1.0, 1.0), 100,
            rng);
        CHECK(est.mean == 10.0);
        CHECK(est.std_error == 0.0);
    }
    SUBCASE("step curve estimate stays within 3 binomial standard errors") {
        RngEngine rng = make_engine(41);
        const auto est = expected_value_monte_carlo(make_requester(10.0, CurveKind::Step, 0.0),
                                                    make_provider(1.0, 0.3, 1.0), 1'000'000, rng);
        const double sigma = 10.0 * std::sqrt(0.3 * 0.7 / 1e6);
        CHECK(std::abs(est.mean - 3.0) <= 3.0 * sigma);
        CHECK(est.std_error == doctest::Approx(sigma).epsilon(0.05));
    }
    SUBCASE("zero samples is a usage error") {
        RngEngine rng = make_engine(1);
        CHECK_THROWS_AS((void)expected_value_monte_carlo(
                            make_requester(10.0, CurveKind::Step, 0.0),
                            make_provider(1.0, 0.3, 1.0), 0, rng),
                        std::invalid_argument);
    }
}

TEST_CASE("closed form and Monte Carlo agree within 3 standard errors across random draws") {
    RngEngine rng = make_engine(2024);
    const CurveKind kinds[] = {CurveKind::Step, CurveKind::Linear, CurveKind::Exponential};
    for (int draw = 0; draw < 50; ++draw) {
        const Requester r = make_requester(uniform_in(rng, 2.0, 18.0),
                                           kinds[uniform_index(rng, 3)],
                                           uniform_in(rng, 0.05, 2.0));
        const Provider w =
            make_provider(0.0, uniform_in(rng, 0.05, 0.95), uniform_in(rng, 0.3, 3.0));
        const double analytic = expected_value(r, w);
        const auto mc = expected_value_monte_carlo(r, w, 100'000, rng);
        CHECK(std::abs(analytic - mc.mean) <= 3.0 * mc.std_error + 1e-12);
    }
}

TEST_CASE("expected_value bounds and monotonicity") {
    RngEngine rng = make_engine(77);
    const CurveKind kinds[] = {CurveKind::Step, CurveKind::Linear, CurveKind::Exponential};
    for (int trial = 0; trial < 200; ++trial) {
        const double v = uniform_in(rng, 1.0, 20.0);
        const double lambda = uniform_in(rng, 0.0, 2.0);
        const double p = uniform_in(rng, 0.0, 1.0);
        const double mu = uniform_in(rng, 0.2, 3.0);
        const CurveKind kind = kinds[uniform_index(rng, 3)];

        const double base = expected_value(make_requester(v, kind, lambda),
                                           make_provider(1.0, p, mu));
        CHECK(base >= p * v - 1e-12);
        CHECK(base <= v + 1e-12);

        // Non-decreasing in punctuality, non-increasing in depreciation rate,
        // non-decreasing in the lateness rate (late completions land sooner).
        const double dp = uniform_in(rng, 0.0, 1.0 - p);
        CHECK(expected_value(make_requester(v, kind, lambda), make_provider(1.0, p + dp, mu)) >=
              base - 1e-6);
        const double dl = uniform_in(rng, 0.0, 1.0);
        CHECK(expected_value(make_requester(v, kind, lambda + dl), make_provider(1.0, p, mu)) <=
              base + 1e-6);
        const double dm = uniform_in(rng, 0.0, 2.0);
        CHECK(expected_value(make_requester(v, kind, lambda), make_provider(1.0, p, mu + dm)) >=
              base - 1e-6);
    }
}
