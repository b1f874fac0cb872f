#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavsec/engine.hpp"
#include "uavsec/optimizer.hpp"

// Flat key = value configuration with units spelled out in the key names,
// defaulting to the reference urban-microcell scenario. A `scenario` key
// selects a named preset (table2, fig3 ... fig9) before the remaining keys
// are applied as overrides.

namespace uavsec::cli {

struct ExperimentSpec {
    std::string experiment = "simulate";  ///< validate | sweep-shape | sweep-q |
                                          ///< sweep-power | optimize | simulate
    std::string scenario = "table2";
    opt::Evaluator evaluator = opt::Evaluator::Analytic;
    std::string output_path = "uavsec_out.csv";
    std::uint64_t seed = 1;
    std::size_t trials = 1000000;
    unsigned threads = 0;  ///< 0 = hardware concurrency
    int grid_resolution = 32;
    std::vector<double> axis_values;  ///< empty = experiment-specific default grid

    // Raw axis range from axis_from/axis_to/axis_step keys; expanded into
    // axis_values by finalize().
    double axis_from = 0.0, axis_to = 0.0, axis_step = 0.0;
    bool has_axis_from = false, has_axis_to = false, has_axis_step = false;
};

struct LoadedConfig {
    ScenarioConfig scenario;
    ExperimentSpec experiment;
};

/// Table II defaults (h = 20 m, kappa = 3, worst-case Eve decoding,
/// min-angle zone at q = 0.05).
LoadedConfig default_config();

/// Presets named after the figures they reproduce. Throws ConfigError for an
/// unknown name.
void apply_preset(LoadedConfig& cfg, const std::string& name);

/// Parses a config file. Empty path yields the defaults. Errors carry the
/// line number and offending key.
LoadedConfig load_config(const std::string& path);

/// Applies one key=value override (same keys as the file format).
void apply_key(LoadedConfig& cfg, const std::string& key, const std::string& value,
               int line_no = 0);

/// Re-validates cross-field invariants after all overrides.
void finalize(LoadedConfig& cfg);

std::vector<std::string> preset_names();

} // namespace uavsec::cli
