#pragma once

#include <stdexcept>
#include <string>

namespace eswm {

/// Invalid configuration or parameter range; CLI maps this to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed structural input (unknown ids, infeasible match sets, oversized
/// oracle instances); CLI maps this to exit code 2.
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Failure writing result files; carries the offending path in the message.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace eswm
