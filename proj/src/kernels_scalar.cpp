#include <cmath>
#include <numbers>

#include "uavsec/kernels.hpp"

namespace uavsec::kernels {

GainModel GainModel::from(const prop::RfConfig& rf, double theta0) {
    GainModel gm;
    gm.theta0 = theta0;
    gm.antennas = static_cast<double>(rf.antenna_count);
    gm.h2 = rf.altitude_m * rf.altitude_m;
    gm.ln_pl_c = 3.24 * std::numbers::ln10 + 2.0 * std::log(rf.carrier_freq_ghz);
    return gm;
}

namespace {

inline double fejer(const GainModel& gm, double theta) {
    double u = gm.theta0 - theta;
    u -= 2.0 * std::round(0.5 * u);
    if (std::abs(u) < 1e-9) return gm.antennas;
    const double num = std::sin(0.5 * std::numbers::pi * gm.antennas * u);
    const double den = std::sin(0.5 * std::numbers::pi * u);
    const double ratio = num / den;
    return ratio * ratio / gm.antennas;
}

inline double pl(const GainModel& gm, double r) {
    return std::exp(gm.ln_pl_c + 1.05 * std::log(r * r + gm.h2));
}

void effective_gains_scalar(const GainModel& gm, const double* theta, const double* r,
                            const double* u01, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = -std::log(u01[i]) * fejer(gm, theta[i]) / pl(gm, r[i]);
    }
}

void path_loss_scalar(const GainModel& gm, const double* r, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = pl(gm, r[i]);
}

void exp_terms_scalar(const double* c, const double* w, double z, double* surv, double* dens,
                      std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double e = std::exp(-z * c[i]) * w[i];
        surv[i] = e;
        dens[i] = c[i] * e;
    }
}

} // namespace

const Backend& scalar_backend() {
    static const Backend backend{"scalar", effective_gains_scalar, path_loss_scalar,
                                 exp_terms_scalar};
    return backend;
}

} // namespace uavsec::kernels
