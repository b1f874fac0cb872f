#pragma once

#include <cstddef>
#include <string_view>

#include "uavsec/propagation.hpp"

// Batch kernels for the arithmetic inner loops: Monte Carlo gain evaluation
// and quadrature integrand terms. Scalar reference implementations and an
// AVX2 variant share this interface; the active backend is selected at
// runtime from CPU features and can be forced for testing (set_backend or
// the UAVSEC_KERNELS environment variable: scalar | avx2 | auto).

namespace uavsec::kernels {

/// Constants of the gain model, precomputed once per scenario.
/// Linear path loss factors as pl = exp(ln_pl_c + 1.05 * ln(r^2 + h^2)).
struct GainModel {
    double theta0 = 0.0;
    double antennas = 1.0;
    double h2 = 0.0;
    double ln_pl_c = 0.0;

    static GainModel from(const prop::RfConfig& rf, double theta0 = 0.0);
};

struct Backend {
    const char* name;

    /// out[i] = -log(u01[i]) * F_M(theta0, theta[i]) / PL(sqrt(r[i]^2 + h^2))
    void (*effective_gains)(const GainModel& gm, const double* theta, const double* r,
                            const double* u01, double* out, std::size_t n);

    /// out[i] = PL(sqrt(r[i]^2 + h^2))
    void (*path_loss)(const GainModel& gm, const double* r, double* out, std::size_t n);

    /// Exponential terms of the gain-distribution integrands at fixed z:
    /// surv[i] = exp(-z*c[i]) * w[i], dens[i] = c[i] * exp(-z*c[i]) * w[i].
    void (*exp_terms)(const double* c, const double* w, double z, double* surv, double* dens,
                      std::size_t n);
};

const Backend& scalar_backend();
const Backend* avx2_backend();  ///< nullptr when unsupported by CPU or build

const Backend& active_backend();
void set_backend(const Backend& backend);

/// Selects by name ("scalar", "avx2", "auto"). Returns false if unavailable.
bool select_backend(std::string_view name);

} // namespace uavsec::kernels
