#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "uavsec/analytic.hpp"
#include "uavsec/montecarlo.hpp"

// Scenario bundle plus cached gain distributions. Distributions depend only
// on the geometry, the zone and the RF front end (not on transmit power), so
// power sweeps reuse a single build.

namespace uavsec {

enum class ZoneAngleRule { MinAngle, Fixed, Optimal };

struct ZoneSpec {
    double q = 0.05;                          ///< area fraction of the Eve region
    ZoneAngleRule rule = ZoneAngleRule::MinAngle;
    double fixed_delta_p = 0.0;               ///< used when rule == Fixed [rad]
    std::optional<geom::ZoneKind> fixed_kind; ///< optional explicit kind for Fixed
};

struct ScenarioConfig {
    geom::RegionSpec region;
    double lambda_u = 1.0;
    double lambda_e = 0.1;
    prop::RfConfig rf;
    analytic::NomaConfig noma;
    ZoneSpec zone;
    bool eve_mean_over_unprotected_area = true;  ///< Poisson weights use A_e - A_p
    bool renormalize_eve_presence = true;        ///< condition sums on K_e >= 1

    void validate() const;
};

class Engine {
public:
    explicit Engine(ScenarioConfig cfg, unsigned threads = 0);

    const ScenarioConfig& config() const { return cfg_; }
    unsigned threads() const { return threads_; }

    std::shared_ptr<const dist::GainDistribution> user_dist(double altitude_m);
    std::shared_ptr<const dist::GainDistribution> eve_dist(const geom::ProtectedZone& zone,
                                                           double altitude_m);

    /// Analytic hybrid rates for the given zone, with optional power or
    /// altitude overrides (altitude rebuilds the cached distributions once).
    analytic::RateBreakdown analytic_rates(const geom::ProtectedZone& zone);
    analytic::RateBreakdown analytic_rates(const geom::ProtectedZone& zone, double ptx_dbm,
                                           double altitude_m);

    mc::SimResult mc_rates(const geom::ProtectedZone& zone, const mc::SimOptions& opts);
    mc::SimResult mc_rates(const geom::ProtectedZone& zone, const mc::SimOptions& opts,
                           double ptx_dbm, double altitude_m);

    /// Concrete zone for the configured rule (Optimal is resolved by the
    /// caller via the optimizer; requesting it here throws).
    geom::ProtectedZone resolve_zone() const;

private:
    ScenarioConfig cfg_;
    unsigned threads_;
    std::mutex mutex_;
    std::map<double, std::shared_ptr<const dist::GainDistribution>> user_cache_;
    std::map<std::tuple<int, double, double, double>,
             std::shared_ptr<const dist::GainDistribution>>
        eve_cache_;
};

} // namespace uavsec
