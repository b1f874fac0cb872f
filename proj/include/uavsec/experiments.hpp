#pragma once

#include <string>

#include "uavsec/config.hpp"

// Experiment orchestration behind the CLI: runs the configured experiment,
// writes the CSV and its run manifest, returns the process exit code.

namespace uavsec::cli {

constexpr const char* kVersion = "0.1.0";

/// Exit codes: 0 success, 1 validation gap exceeded, 2 configuration error,
/// 3 numeric failure.
int run(const LoadedConfig& cfg);

/// Formats a double with 12 significant digits (the CSV round-trip format).
std::string format_value(double v);

} // namespace uavsec::cli
