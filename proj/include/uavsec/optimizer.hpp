#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "uavsec/engine.hpp"

// Protected-zone shape search at fixed area fraction: exhaustive grid over
// the half-angle with the radius implied, across all three zone kinds, plus
// the generic parameter-sweep driver behind the CLI experiments.

namespace uavsec::opt {

enum class Regime { ShapeLimited, SpaceLimited };

struct ShapeCandidate {
    geom::ProtectedZone zone;
    double objective = 0.0;  ///< total sum secrecy rate [BPCU]
    bool feasible = false;
};

struct ShapeOptimum {
    ShapeCandidate best;
    std::vector<ShapeCandidate> frontier;  ///< feasible candidates by delta_p
    Regime regime = Regime::ShapeLimited;
    double min_angle = 0.0;  ///< global minimum feasible half-angle
    double grid_step = 0.0;  ///< first grid spacing above min_angle
};

using ZoneObjective = std::function<double(const geom::ProtectedZone&)>;

/// Grid search over feasible (kind, delta_p) at fixed q. The grid clusters
/// toward the minimum angle where the objective is steepest; ties break
/// toward the smaller angle. Throws InfeasibleZoneError when no kind can
/// realize q.
ShapeOptimum optimize_shape(const geom::RegionSpec& reg, double q, int resolution_per_kind,
                            unsigned threads, const ZoneObjective& objective);

enum class Evaluator { Analytic, MonteCarlo };

/// optimize_shape with the engine's analytic (or Monte Carlo) total rate as
/// the objective.
ShapeOptimum optimize_shape(Engine& engine, double q, int resolution_per_kind,
                            Evaluator evaluator = Evaluator::Analytic,
                            const mc::SimOptions& mc_opts = {});

enum class SweepAxis { DeltaP, AreaFraction, TxPower, Altitude };

const char* sweep_axis_name(SweepAxis axis);

struct SweepPoint {
    double axis_value = 0.0;
    geom::ProtectedZone zone{};
    bool feasible = false;
    std::string error;  ///< infeasibility note; rates invalid when set
    analytic::RateBreakdown rates{};
    std::optional<mc::SimResult> mc;  ///< present when evaluator = MonteCarlo
};

/// One record per axis value; per-point infeasibility is recorded and the
/// sweep continues. Zones follow the engine's configured rule except on the
/// DeltaP axis, where the axis value is the zone angle itself; an Optimal
/// rule re-optimizes the shape per point on the AreaFraction axis (power and
/// altitude sweeps expect the caller to have pinned the shape already).
std::vector<SweepPoint> sweep(Engine& engine, SweepAxis axis, const std::vector<double>& values,
                              Evaluator evaluator, const mc::SimOptions& mc_opts = {},
                              int optimal_resolution = 24);

} // namespace uavsec::opt
