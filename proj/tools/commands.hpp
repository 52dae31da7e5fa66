#pragma once

#include "config.hpp"

#include <ostream>
#include <string>

namespace curvbill::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Runs one subcommand, writing its files into cfg.out and a short summary to
/// `log`. Returns the process exit status (0, or 1 when selftest fails);
/// ValidationError and NumericalError propagate to the caller.
int run(const std::string& subcommand, const ExperimentConfig& cfg, std::ostream& log);

}  // namespace curvbill::cli
