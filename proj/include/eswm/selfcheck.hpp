#pragma once

#include <ostream>

#include "eswm/config.hpp"

namespace eswm {

/// Small-instance invariant and oracle suite behind `verify`: greedy
/// feasibility and approximation bounds against exact enumeration, analytic
/// vs Monte Carlo expected values, the budget identity, and experiment
/// determinism. Parameter ranges come from the config; instance sizes stay
/// within the enumeration guard. Prints one line per check, returns true when
/// all pass.
bool run_self_verification(const ExperimentConfig& config, std::ostream& out);

} // namespace eswm
