#include "eswm/valuation.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace eswm {

namespace {

// Recursive adaptive Simpson quadrature with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double m, double b,
                        double fa, double fm, double fb, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, m, b, fa, fm, fb, whole, tol, 48);
}

constexpr double kQuadratureTol = 1e-9;

} // namespace

double depreciated_value(const Requester& requester, const CompletionTime& completion) {
    if (completion.on_time) return requester.value;
    return requester.value * requester.depreciation.factor(completion.delay);
}

CompletionTime sample_completion(const Provider& provider, RngEngine& rng) {
    const double u = uniform01(rng);
    if (u < provider.punctuality.on_time_prob) return CompletionTime::within_deadline();
    return CompletionTime::late_by(exponential(rng, provider.punctuality.late_rate));
}

double expected_depreciation_factor(const DepreciationCurve& curve, double late_rate) {
    const double mu = late_rate;
    const double lambda = curve.rate;
    switch (curve.kind) {
    case CurveKind::Step:
        // Late completions are worthless; the delay is > 0 almost surely.
        return 0.0;
    case CurveKind::Exponential:
        return mu / (mu + lambda);
    case CurveKind::Linear: {
        if (lambda <= 0.0) return 1.0; // no depreciation at all
        // E[max(0, 1 - lambda d)] over d ~ Exp(mu); the integrand vanishes
        // beyond d = 1/lambda.
        const double upper = 1.0 / lambda;
        auto integrand = [mu, lambda](double d) {
            return (1.0 - lambda * d) * mu * std::exp(-mu * d);
        };
        return integrate(integrand, 0.0, upper, kQuadratureTol);
    }
    }
    return 0.0;
}

double expected_value(const Requester& requester, const Provider& provider) {
    const double p = provider.punctuality.on_time_prob;
    const double late_factor =
        expected_depreciation_factor(requester.depreciation, provider.punctuality.late_rate);
    return requester.value * (p + (1.0 - p) * late_factor);
}

MonteCarloEstimate expected_value_monte_carlo(const Requester& requester,
                                              const Provider& provider,
                                              std::size_t samples, RngEngine& rng) {
    if (samples == 0)
        throw std::invalid_argument("expected_value_monte_carlo: samples must be >= 1");

    // Welford running moments.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t n = 1; n <= samples; ++n) {
        const double x = depreciated_value(requester, sample_completion(provider, rng));
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }
    MonteCarloEstimate est;
    est.mean = mean;
    if (samples > 1) {
        const double variance = m2 / static_cast<double>(samples - 1);
        est.std_error = std::sqrt(variance / static_cast<double>(samples));
    }
    return est;
}

} // namespace eswm
