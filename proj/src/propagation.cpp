#include "uavsec/propagation.hpp"

#include <cmath>
#include <numbers>

#include "uavsec/errors.hpp"
#include "uavsec/units.hpp"

namespace uavsec::prop {

void RfConfig::validate() const {
    if (antenna_count < 1) throw ArgumentError("rf: antenna count must be >= 1");
    if (!(carrier_freq_ghz > 0.0)) throw ArgumentError("rf: carrier frequency must be positive");
    if (!(bandwidth_hz > 0.0)) throw ArgumentError("rf: bandwidth must be positive");
    if (!(altitude_m > 0.0)) throw ArgumentError("rf: altitude must be positive");
}

double RfConfig::tx_power_watts() const {
    double dbm = tx_power_dbm;
    if (apply_bs_antenna_gain) dbm += bs_antenna_gain_dbi;
    return units::dbm_to_watts(dbm);
}

double RfConfig::snr_scale() const { return tx_power_watts() / noise_power_watts(*this); }

double path_loss_db(double x_m, double fc_ghz) {
    if (!(x_m > 0.0)) throw ArgumentError("path loss: distance must be positive");
    return 32.4 + 21.0 * std::log10(x_m) + 20.0 * std::log10(fc_ghz);
}

double path_loss_linear(double x_m, double fc_ghz) {
    return units::db_to_linear(path_loss_db(x_m, fc_ghz));
}

double fejer_gain(double theta0, double theta, int antenna_count) {
    if (antenna_count < 1) throw ArgumentError("fejer gain: antenna count must be >= 1");
    const double m = static_cast<double>(antenna_count);
    double u = theta0 - theta;
    // Reduce modulo the kernel period of 2; squared sines are unchanged.
    u -= 2.0 * std::round(0.5 * u);
    if (std::abs(u) < 1e-9) return m;
    const double num = std::sin(0.5 * std::numbers::pi * m * u);
    const double den = std::sin(0.5 * std::numbers::pi * u);
    const double ratio = num / den;
    return ratio * ratio / m;
}

double gain_ratio(double theta, double distance_m, const RfConfig& rf, double theta0) {
    const double los = std::hypot(distance_m, rf.altitude_m);
    return path_loss_linear(los, rf.carrier_freq_ghz) /
           fejer_gain(theta0, theta, rf.antenna_count);
}

double effective_gain(const LinkGeometry& link, const RfConfig& rf, double theta0) {
    return link.fading_power / gain_ratio(link.theta, link.distance_m, rf, theta0);
}

double noise_power_dbm(const RfConfig& rf) {
    return rf.thermal_noise_dbm_per_hz + 10.0 * std::log10(rf.bandwidth_hz) +
           rf.noise_figure_db;
}

double noise_power_watts(const RfConfig& rf) {
    return units::dbm_to_watts(noise_power_dbm(rf));
}

double sample_fading(rng::Xoshiro256pp& stream) { return stream.exponential(); }

} // namespace uavsec::prop
