#include "uavsec/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "uavsec/errors.hpp"
#include "uavsec/parallel.hpp"

namespace uavsec::opt {

namespace {

struct KindRange {
    geom::ZoneKind kind;
    double lo, hi;
};

std::vector<KindRange> feasible_ranges(const geom::RegionSpec& reg, double q) {
    std::vector<KindRange> ranges;
    const double slack = 1e-12 * reg.delta_e();

    const double lo1 = geom::min_angle(geom::ZoneKind::TypeI, q, reg);
    if (lo1 <= reg.delta_u + slack)
        ranges.push_back({geom::ZoneKind::TypeI, lo1, reg.delta_u});

    const double lo3 = std::max(reg.delta_u, geom::min_angle(geom::ZoneKind::TypeIII, q, reg));
    const double hi3 = geom::max_angle(geom::ZoneKind::TypeIII, q, reg);
    if (lo3 <= hi3 + slack) ranges.push_back({geom::ZoneKind::TypeIII, lo3, std::max(lo3, hi3)});

    const double lo2 = std::max(reg.delta_u, geom::min_angle(geom::ZoneKind::TypeII, q, reg));
    if (lo2 <= reg.delta_e() + slack)
        ranges.push_back({geom::ZoneKind::TypeII, lo2, reg.delta_e()});

    return ranges;
}

} // namespace

ShapeOptimum optimize_shape(const geom::RegionSpec& reg, double q, int resolution_per_kind,
                            unsigned threads, const ZoneObjective& objective) {
    if (!(q > 0.0 && q < 1.0))
        throw ArgumentError("shape optimization needs an area fraction in (0, 1)");
    if (resolution_per_kind < 8)
        throw ArgumentError("shape optimization needs at least 8 grid points per kind");

    const auto ranges = feasible_ranges(reg, q);
    if (ranges.empty())
        throw InfeasibleZoneError("no zone kind can realize this area fraction");

    // Geometric spacing clusters points toward the minimum angle, where the
    // objective is steepest.
    std::vector<ShapeCandidate> candidates;
    for (const auto& kr : ranges) {
        const double ratio = kr.hi > kr.lo ? kr.hi / kr.lo : 1.0;
        for (int s = 0; s < resolution_per_kind; ++s) {
            const double t = static_cast<double>(s) / (resolution_per_kind - 1);
            const double delta_p = kr.lo * std::pow(ratio, t);
            ShapeCandidate cand;
            try {
                cand.zone = geom::ProtectedZone{
                    kr.kind, delta_p, geom::radius_for_fraction(kr.kind, delta_p, q, reg)};
                cand.feasible = true;
            } catch (const InfeasibleZoneError&) {
                cand.feasible = false;
            }
            candidates.push_back(cand);
        }
    }

    parallel_for_chunks(candidates.size(), 1, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            if (candidates[k].feasible) candidates[k].objective = objective(candidates[k].zone);
        }
    });

    std::vector<ShapeCandidate> frontier;
    for (auto& c : candidates)
        if (c.feasible) frontier.push_back(c);
    std::sort(frontier.begin(), frontier.end(),
              [](const auto& a, const auto& b) { return a.zone.delta_p < b.zone.delta_p; });
    if (frontier.empty())
        throw InfeasibleZoneError("every shape candidate was infeasible for this area fraction");

    ShapeOptimum res;
    res.frontier = frontier;
    res.best = frontier.front();
    for (const auto& c : frontier) {
        if (c.objective > res.best.objective) res.best = c;
    }
    res.min_angle = geom::global_min_angle(q, reg);
    res.grid_step = frontier.size() > 1 ? frontier[1].zone.delta_p - frontier[0].zone.delta_p
                                        : 0.0;
    // Space-limited means the optimum sits at the minimum feasible angle.
    // The tolerance is one grid step with a 10% relative floor: the regime
    // statement is about where the optimum lands at plotting resolution, so
    // the classification must not sharpen as the grid refines.
    const double tol = std::max(res.grid_step, 0.10 * res.min_angle);
    res.regime = res.best.zone.delta_p <= res.min_angle + tol * 1.0000001
                     ? Regime::SpaceLimited
                     : Regime::ShapeLimited;
    return res;
}

ShapeOptimum optimize_shape(Engine& engine, double q, int resolution_per_kind,
                            Evaluator evaluator, const mc::SimOptions& mc_opts) {
    // Monte Carlo candidates share one seed so the comparison is paired.
    ZoneObjective objective;
    if (evaluator == Evaluator::Analytic) {
        objective = [&engine](const geom::ProtectedZone& z) {
            return engine.analytic_rates(z).total_bpcu;
        };
    } else {
        objective = [&engine, mc_opts](const geom::ProtectedZone& z) {
            mc::SimOptions o = mc_opts;
            o.threads = 1;  // candidates already run in parallel
            return engine.mc_rates(z, o).rate_total;
        };
    }
    return optimize_shape(engine.config().region, q, resolution_per_kind, engine.threads(),
                          objective);
}

const char* sweep_axis_name(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::DeltaP: return "delta_p_rad";
    case SweepAxis::AreaFraction: return "q";
    case SweepAxis::TxPower: return "ptx_dbm";
    case SweepAxis::Altitude: return "altitude_m";
    }
    return "?";
}

std::vector<SweepPoint> sweep(Engine& engine, SweepAxis axis, const std::vector<double>& values,
                              Evaluator evaluator, const mc::SimOptions& mc_opts,
                              int optimal_resolution) {
    if (values.empty()) throw ArgumentError("sweep needs at least one axis value");
    const auto& cfg = engine.config();
    std::vector<SweepPoint> points(values.size());

    for (std::size_t k = 0; k < values.size(); ++k) {
        SweepPoint& pt = points[k];
        pt.axis_value = values[k];
        double ptx = cfg.rf.tx_power_dbm;
        double alt = cfg.rf.altitude_m;
        double q = cfg.zone.q;
        try {
            switch (axis) {
            case SweepAxis::DeltaP:
                pt.zone = geom::zone_for_angle(values[k], q, cfg.region);
                break;
            case SweepAxis::AreaFraction:
                q = values[k];
                switch (cfg.zone.rule) {
                case ZoneAngleRule::Fixed:
                    pt.zone = geom::zone_for_angle(cfg.zone.fixed_delta_p, q, cfg.region);
                    break;
                case ZoneAngleRule::Optimal:
                    pt.zone = optimize_shape(engine, q, optimal_resolution, evaluator, mc_opts)
                                  .best.zone;
                    break;
                case ZoneAngleRule::MinAngle:
                    pt.zone = geom::min_angle_zone(q, cfg.region);
                    break;
                }
                break;
            case SweepAxis::TxPower:
                ptx = values[k];
                pt.zone = engine.resolve_zone();
                break;
            case SweepAxis::Altitude:
                alt = values[k];
                pt.zone = engine.resolve_zone();
                break;
            }
            pt.rates = engine.analytic_rates(pt.zone, ptx, alt);
            if (evaluator == Evaluator::MonteCarlo) {
                pt.mc = engine.mc_rates(pt.zone, mc_opts, ptx, alt);
            }
            pt.feasible = true;
        } catch (const Error& e) {
            pt.feasible = false;
            pt.error = e.what();
        }
    }
    return points;
}

} // namespace uavsec::opt
