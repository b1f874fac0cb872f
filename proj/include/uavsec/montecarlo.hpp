#pragma once

#include <cstdint>
#include <vector>

#include "uavsec/analytic.hpp"
#include "uavsec/distributions.hpp"
#include "uavsec/geometry.hpp"
#include "uavsec/propagation.hpp"
#include "uavsec/rng.hpp"

// Monte Carlo simulation of the deployment/fading/SIC chain. Every trial
// draws from its own counter-derived substream and trials are reduced in a
// fixed chunk order, so results are identical for any worker count.

namespace uavsec::mc {

struct Scenario {
    geom::RegionSpec region;
    geom::ProtectedZone zone;
    prop::RfConfig rf;
    analytic::NomaConfig noma;
    double lambda_u = 1.0;
    double lambda_e = 0.1;
};

struct Deployment {
    std::vector<prop::LinkGeometry> users;
    std::vector<prop::LinkGeometry> eves;  ///< all inside the unprotected Eve region
};

/// One deployment: user count ~ Poisson(A_u lambda_u), Eves drawn over the
/// full Eve region with Poisson(A_e lambda_e) and thinned by the protected
/// zone (so the kept count is Poisson over the unprotected area). Positions
/// are area-uniform via radial inversion plus rejection.
Deployment draw_deployment(const geom::RegionSpec& reg, const geom::ProtectedZone& zone,
                           double lambda_u, double lambda_e, rng::Xoshiro256pp& stream);

enum class Scheme { Noma, Sut, None };

struct TrialOutcome {
    Scheme scheme = Scheme::None;
    std::vector<double> user_gains;  ///< sorted descending
    double eve_gain = 0.0;           ///< most detrimental Eve
    double secrecy_weak = 0.0;
    double secrecy_strong = 0.0;  ///< SUT secrecy rate when scheme == Sut
    bool outage_weak = true;
    bool outage_strong = true;
    double banked_rate = 0.0;  ///< sum of met target rates this trial
    double oma_rate = 0.0;     ///< OMA baseline under the same outage rule
};

/// Evaluates one materialized deployment through the SIC SINR chain using
/// the scalar reference gain path. Requires at least one Eve.
TrialOutcome evaluate_trial(const Deployment& dep, const Scenario& sc);

struct SimOptions {
    std::uint64_t seed = 1;
    std::size_t trials = 100000;
    unsigned threads = 0;  ///< 0 = hardware concurrency
    /// Condition on exact counts instead of sampling the populations
    /// (for comparing against the conditional outage integrals).
    bool stratified = false;
    int fixed_users = 0;
    int fixed_eves = 0;
};

struct SimResult {
    double rate_total = 0.0;  ///< hybrid NOMA/SUT outage-based sum rate [BPCU]
    double rate_noma = 0.0;
    double rate_sut = 0.0;
    double rate_oma = 0.0;
    double outage_weak = 0.0;    ///< among NOMA-eligible trials
    double outage_strong = 0.0;
    double outage_sut = 0.0;     ///< among SUT-eligible trials
    double hw_rate_total = 0.0;  ///< 95% normal-approximation half-widths
    double hw_rate_oma = 0.0;
    double hw_outage_weak = 0.0;
    double hw_outage_strong = 0.0;
    double hw_outage_sut = 0.0;
    std::size_t trials = 0;
    std::size_t noma_trials = 0;
    std::size_t sut_trials = 0;
};

/// Runs the simulation; always conditions on at least one (unprotected) Eve.
SimResult simulate(const Scenario& sc, const SimOptions& opts);

} // namespace uavsec::mc
