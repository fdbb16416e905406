#pragma once

#include <cstddef>

#include "eswm/model.hpp"
#include "eswm/rng.hpp"

namespace eswm {

// ---------------------------------------------------------------------------
// Time-depreciated task value and its expectation over a provider's
// completion-time distribution. Time is continuous; the deadline is the
// origin, so only the delay past it matters for valuation.
// ---------------------------------------------------------------------------

struct CompletionTime {
    bool on_time = true;
    double delay = 0.0; // time units past the deadline; 0 when on time

    static CompletionTime within_deadline() { return {true, 0.0}; }
    static CompletionTime late_by(double delay) { return {false, delay}; }

    bool operator==(const CompletionTime&) const = default;
};

/// Value actually achieved: v_j times the curve factor at the delay. On-time
/// completions keep the full valuation no matter how early they land.
double depreciated_value(const Requester& requester, const CompletionTime& completion);

/// Draws a completion time: on time with probability on_time_prob, otherwise
/// late by Exponential(late_rate).
CompletionTime sample_completion(const Provider& provider, RngEngine& rng);

/// Expected retention factor E[f(delay)] conditional on being late, with
/// delay ~ Exponential(late_rate). Step and Exponential curves use closed
/// forms; Linear integrates numerically (adaptive Simpson, |err| <= 1e-9).
double expected_depreciation_factor(const DepreciationCurve& curve, double late_rate);

/// Expected task valuation when this provider completes this requester's
/// task:  p * v  +  (1 - p) * v * E[f(delay)].
/// Always within [p * v, v].
double expected_value(const Requester& requester, const Provider& provider);

struct MonteCarloEstimate {
    double mean = 0.0;
    double std_error = 0.0; // sample standard deviation / sqrt(samples)
};

/// Empirical mean of depreciated_value over sampled completions. Serves as
/// the independent cross-check of the analytic expected_value path.
/// samples must be >= 1.
MonteCarloEstimate expected_value_monte_carlo(const Requester& requester,
                                              const Provider& provider,
                                              std::size_t samples, RngEngine& rng);

} // namespace eswm
