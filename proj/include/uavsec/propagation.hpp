#pragma once

#include "uavsec/rng.hpp"

// mmWave LoS link physics: UMi path loss, ULA array gain through the Fejer
// kernel, effective channel gain and noise power. These are the scalar
// reference implementations; the batch kernels in kernels.hpp must agree
// with them to near machine precision.

namespace uavsec::prop {

struct RfConfig {
    int antenna_count = 100;          ///< M
    double carrier_freq_ghz = 28.0;   ///< f_c
    double bandwidth_hz = 100e6;      ///< BW
    double thermal_noise_dbm_per_hz = -174.0;
    double noise_figure_db = 9.0;
    double altitude_m = 20.0;         ///< h
    double tx_power_dbm = 45.0;
    double bs_antenna_gain_dbi = 8.0; ///< optional offset on tx power
    bool apply_bs_antenna_gain = true;

    void validate() const;

    double tx_power_watts() const;
    /// P_tx / N_0, the transmit SNR normalization.
    double snr_scale() const;
};

struct LinkGeometry {
    double theta = 0.0;          ///< AoD projected on the xy-plane [rad]
    double distance_m = 0.0;     ///< horizontal distance d
    double fading_power = 1.0;   ///< |alpha|^2
};

/// Linear UMi LoS attenuation (>= 1 for x >= 1 m):
/// PL_dB = 32.4 + 21 log10(x) + 20 log10(f_c), x in meters, f_c in GHz.
/// Throws ArgumentError for x <= 0.
double path_loss_db(double x_m, double fc_ghz);
double path_loss_linear(double x_m, double fc_ghz);

/// Fejer-kernel array gain of a critically spaced M-element ULA:
/// (1/M) |sin(pi M u / 2) / sin(pi u / 2)|^2 with u = theta0 - theta.
/// The removable singularities at u in 2Z evaluate to M.
double fejer_gain(double theta0, double theta, int antenna_count);

/// |alpha|^2 * F_M(theta0, theta) / PL(sqrt(d^2 + h^2)).
double effective_gain(const LinkGeometry& link, const RfConfig& rf, double theta0 = 0.0);

/// Ratio PL(sqrt(d^2+h^2)) / F_M: the per-location exponential rate of the
/// fading mixture (gain = |alpha|^2 / ratio).
double gain_ratio(double theta, double distance_m, const RfConfig& rf, double theta0 = 0.0);

/// N_0 in watts: TNP + 10 log10(BW) + NF, converted from dBm.
double noise_power_watts(const RfConfig& rf);
double noise_power_dbm(const RfConfig& rf);

/// Unit-mean exponential |alpha|^2 draw (standard complex Gaussian fading).
double sample_fading(rng::Xoshiro256pp& stream);

} // namespace uavsec::prop
