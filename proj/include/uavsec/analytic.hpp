#pragma once

#include "uavsec/distributions.hpp"

// Secrecy-outage probabilities of the two scheduled NOMA users (and the SUT
// fallback user), conditional on the user/Eve counts, plus the Poisson-
// weighted hybrid NOMA/SUT sum secrecy rate.

namespace uavsec::analytic {

enum class EveMode { WorstCase, BestCase };

/// Decoding regime entering the strong-user outage integral. The SUT case is
/// the strong-user expression with all power on the scheduled user.
enum class StrongMode { WorstCase, BestCase, Sut };

struct NomaConfig {
    int weak_rank = 10;              ///< i (larger index = weaker channel)
    int strong_rank = 1;             ///< j
    double beta_weak_sq = 0.75;      ///< power fraction of the weak user
    double beta_strong_sq = 0.25;
    double target_weak_bpcu = 1.0;   ///< target secrecy rate of the weak user
    double target_strong_bpcu = 4.0;
    EveMode eve_mode = EveMode::WorstCase;

    void validate() const;
};

/// Upper limit of the inner gain integral for the strong/SUT user at Eve
/// gain y; snr is P_tx / N_0.
double delta_max_strong(double y, double snr, const NomaConfig& cfg, StrongMode mode);

/// Weak-user integration limits: the gain threshold delta_i(y) (+inf at and
/// beyond the pole) and the outer split point rho (0 when the pole condition
/// 2^R * beta_strong^2 >= 1 makes the first branch empty).
struct WeakLimits {
    double delta_i;
    double rho;
};
double weak_rho(double snr, const NomaConfig& cfg);
WeakLimits weak_integration_limits(double y, double snr, const NomaConfig& cfg);

/// Conditional secrecy outage of the strong NOMA user (or the SUT user),
/// given exactly K users and K_e eavesdroppers.
double outage_strong(const dist::GainDistribution& user, const dist::GainDistribution& eve,
                     const NomaConfig& cfg, double snr, int K, int K_e, StrongMode mode);

/// Conditional secrecy outage of the weak NOMA user.
double outage_weak(const dist::GainDistribution& user, const dist::GainDistribution& eve,
                   const NomaConfig& cfg, double snr, int K, int K_e);

struct RateBreakdown {
    double noma_bpcu = 0.0;
    double sut_bpcu = 0.0;
    double total_bpcu = 0.0;
    /// Population-weighted outage probabilities, conditioned on the scheme
    /// being active and at least one eavesdropper present.
    double outage_weak = 1.0;
    double outage_strong = 1.0;
    double outage_sut = 1.0;
};

/// Hybrid NOMA/SUT sum secrecy rate. The Poisson population sums are
/// evaluated exactly: the Eve-count sum collapses to
/// mu_e f_E(y) exp(-mu_e (1-F_E(y))) and the user-count sum to a Poisson
/// tail with a finite correction for n below the NOMA threshold.
/// renormalize divides by P(K_e >= 1); pass false for the literal
/// unconditioned weighting.
RateBreakdown hybrid_rates(const dist::GainDistribution& user, const dist::GainDistribution& eve,
                           const dist::PopulationModel& pop, const NomaConfig& cfg, double snr,
                           bool renormalize = true);

/// Literal truncated double sums over (K, K_e) with per-term conditional
/// outage integrals. Slow; retained as an independent algebraic route for
/// validating hybrid_rates.
double sum_secrecy_noma_direct(const dist::GainDistribution& user,
                               const dist::GainDistribution& eve,
                               const dist::PopulationModel& pop, const NomaConfig& cfg,
                               double snr, bool renormalize = true, double trunc_eps = 1e-10);
double sum_secrecy_sut_direct(const dist::GainDistribution& user,
                              const dist::GainDistribution& eve,
                              const dist::PopulationModel& pop, const NomaConfig& cfg, double snr,
                              bool renormalize = true, double trunc_eps = 1e-10);

} // namespace uavsec::analytic
