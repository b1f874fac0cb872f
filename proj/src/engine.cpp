#include "uavsec/engine.hpp"

#include "uavsec/errors.hpp"
#include "uavsec/parallel.hpp"

namespace uavsec {

void ScenarioConfig::validate() const {
    region.validate();
    rf.validate();
    noma.validate();
    if (!(lambda_u > 0.0)) throw ArgumentError("scenario: user density must be positive");
    if (!(lambda_e > 0.0)) throw ArgumentError("scenario: Eve density must be positive");
    if (zone.q < 0.0 || zone.q > 1.0)
        throw ArgumentError("scenario: zone area fraction must lie in [0, 1]");
}

Engine::Engine(ScenarioConfig cfg, unsigned threads)
    : cfg_(std::move(cfg)), threads_(threads == 0 ? hardware_threads() : threads) {
    cfg_.validate();
}

std::shared_ptr<const dist::GainDistribution> Engine::user_dist(double altitude_m) {
    {
        std::lock_guard lock(mutex_);
        if (auto it = user_cache_.find(altitude_m); it != user_cache_.end()) return it->second;
    }
    prop::RfConfig rf = cfg_.rf;
    rf.altitude_m = altitude_m;
    auto built = std::make_shared<const dist::GainDistribution>(
        dist::GainDistribution::build_user(cfg_.region, rf));
    std::lock_guard lock(mutex_);
    return user_cache_.try_emplace(altitude_m, std::move(built)).first->second;
}

std::shared_ptr<const dist::GainDistribution> Engine::eve_dist(const geom::ProtectedZone& zone,
                                                               double altitude_m) {
    const auto key = std::make_tuple(static_cast<int>(zone.kind), zone.delta_p, zone.l_p,
                                     altitude_m);
    {
        std::lock_guard lock(mutex_);
        if (auto it = eve_cache_.find(key); it != eve_cache_.end()) return it->second;
    }
    prop::RfConfig rf = cfg_.rf;
    rf.altitude_m = altitude_m;
    auto built = std::make_shared<const dist::GainDistribution>(
        dist::GainDistribution::build_eve(cfg_.region, zone, rf));
    std::lock_guard lock(mutex_);
    return eve_cache_.try_emplace(key, std::move(built)).first->second;
}

analytic::RateBreakdown Engine::analytic_rates(const geom::ProtectedZone& zone) {
    return analytic_rates(zone, cfg_.rf.tx_power_dbm, cfg_.rf.altitude_m);
}

analytic::RateBreakdown Engine::analytic_rates(const geom::ProtectedZone& zone, double ptx_dbm,
                                               double altitude_m) {
    auto user = user_dist(altitude_m);
    auto eve = eve_dist(zone, altitude_m);
    prop::RfConfig rf = cfg_.rf;
    rf.tx_power_dbm = ptx_dbm;
    rf.altitude_m = altitude_m;
    const auto pop = dist::PopulationModel::make(
        cfg_.region, zone, cfg_.lambda_u, cfg_.lambda_e, cfg_.noma.weak_rank,
        cfg_.noma.strong_rank, cfg_.eve_mean_over_unprotected_area);
    return analytic::hybrid_rates(*user, *eve, pop, cfg_.noma, rf.snr_scale(),
                                  cfg_.renormalize_eve_presence);
}

mc::SimResult Engine::mc_rates(const geom::ProtectedZone& zone, const mc::SimOptions& opts) {
    return mc_rates(zone, opts, cfg_.rf.tx_power_dbm, cfg_.rf.altitude_m);
}

mc::SimResult Engine::mc_rates(const geom::ProtectedZone& zone, const mc::SimOptions& opts,
                               double ptx_dbm, double altitude_m) {
    mc::Scenario sc;
    sc.region = cfg_.region;
    sc.zone = zone;
    sc.rf = cfg_.rf;
    sc.rf.tx_power_dbm = ptx_dbm;
    sc.rf.altitude_m = altitude_m;
    sc.noma = cfg_.noma;
    sc.lambda_u = cfg_.lambda_u;
    sc.lambda_e = cfg_.lambda_e;
    mc::SimOptions o = opts;
    if (o.threads == 0) o.threads = threads_;
    return mc::simulate(sc, o);
}

geom::ProtectedZone Engine::resolve_zone() const {
    switch (cfg_.zone.rule) {
    case ZoneAngleRule::MinAngle:
        return geom::min_angle_zone(cfg_.zone.q, cfg_.region);
    case ZoneAngleRule::Fixed:
        if (cfg_.zone.fixed_kind) {
            const auto kind = *cfg_.zone.fixed_kind;
            return geom::ProtectedZone{
                kind, cfg_.zone.fixed_delta_p,
                geom::radius_for_fraction(kind, cfg_.zone.fixed_delta_p, cfg_.zone.q,
                                          cfg_.region)};
        }
        return geom::zone_for_angle(cfg_.zone.fixed_delta_p, cfg_.zone.q, cfg_.region);
    case ZoneAngleRule::Optimal:
        throw ArgumentError("zone rule 'optimal' must be resolved through the optimizer");
    }
    throw ArgumentError("unknown zone rule");
}

} // namespace uavsec
