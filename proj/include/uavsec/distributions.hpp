#pragma once

#include <vector>

#include "uavsec/geometry.hpp"
#include "uavsec/propagation.hpp"

// Distributions of the effective channel gain for legitimate users and for
// eavesdroppers in the unprotected part of the Eve region, plus the order
// statistics and Poisson population weights built on top of them.
//
// Two evaluation routes exist on purpose: the direct functions integrate the
// defining double integral on every call (reference quality, slow), while
// GainDistribution precomputes a monotone-spline table once and is what the
// outage/rate machinery evaluates thousands of times.

namespace uavsec::dist {

/// F_U(z): probability that an unordered user gain is <= z, by nested
/// adaptive quadrature of the polar double integral over the user sector.
double user_unordered_cdf(double z, const geom::RegionSpec& reg, const prop::RfConfig& rf);
double user_unordered_pdf(double z, const geom::RegionSpec& reg, const prop::RfConfig& rf);

/// F_E(y) over the unprotected Eve region (Eve sector minus user region and
/// minus the protected zone); integration panels are split at the region
/// boundaries so every piece is smooth.
/// Throws DegenerateDistributionError when the unprotected area vanishes.
double eve_unordered_cdf(double y, const geom::RegionSpec& reg, const geom::ProtectedZone& zone,
                         const prop::RfConfig& rf);
double eve_unordered_pdf(double y, const geom::RegionSpec& reg, const geom::ProtectedZone& zone,
                         const prop::RfConfig& rf);

/// Shape-preserving cubic (Fritsch-Carlson) through strictly increasing x.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);
    double eval(double xq) const;
    double slope(double xq) const;
    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

private:
    std::vector<double> x_, y_, d_;
};

/// Memoized gain distribution: cdf and survival as monotone splines in
/// log(gain) (each built from its own well-conditioned integrand), the pdf
/// as the spline derivative. Immutable after construction and freely
/// shareable across threads.
class GainDistribution {
public:
    static GainDistribution build_user(const geom::RegionSpec& reg, const prop::RfConfig& rf);
    static GainDistribution build_eve(const geom::RegionSpec& reg, const geom::ProtectedZone& zone,
                                      const prop::RfConfig& rf);

    double cdf(double z) const;
    double survival(double z) const;  ///< 1 - cdf, accurate in the upper tail
    double pdf(double z) const;
    /// Beyond this gain the survival is below 1e-12.
    double support_hint() const { return z_max_; }
    /// Smallest z with cdf(z) >= p.
    double quantile(double p) const;
    /// Gain y with survival(y) = s; substituting u = survival(y) turns
    /// Eve-weighted outer integrals into pdf-free ones.
    double survival_inverse(double s) const;

private:
    GainDistribution(std::vector<double> log_z, std::vector<double> log_cdf,
                     std::vector<double> log_surv, double z_min, double z_max);

    MonotoneCubic log_cdf_, log_surv_, inv_log_surv_;
    double z_min_ = 0.0, z_max_ = 0.0;
};

// ---- order statistics (rank 1 = strongest of K) ----

/// CDF of the k-th largest of K i.i.d. user gains, via the binomial
/// closed form P(Binomial(K, survival(z)) <= k-1).
double ordered_user_cdf(const GainDistribution& d, double z, int k, int K);
double ordered_user_pdf(const GainDistribution& d, double z, int k, int K);

/// Max of K_e i.i.d. Eve gains (the most detrimental eavesdropper).
double detrimental_eve_cdf(const GainDistribution& d, double y, int k_e);
double detrimental_eve_pdf(const GainDistribution& d, double y, int k_e);

// ---- Poisson populations ----

double poisson_log_pmf(int n, double mu);
double poisson_weight(int n, double mu);
/// Smallest N with P(X > N) < eps for X ~ Poisson(mu).
int truncation_bound(double mu, double eps);
/// P(X <= k); k < 0 gives 0.
double poisson_cdf(int k, double mu);

struct PopulationModel {
    double lambda_u = 1.0;
    double lambda_e = 0.1;
    double mu_u = 0.0;      ///< mean user count, area_user * lambda_u
    double mu_e = 0.0;      ///< mean Eve count over the counted area
    int noma_min_users = 10; ///< weak-user rank i
    int sut_min_users = 1;   ///< strong-user rank j

    void validate() const;

    /// mu_e over the unprotected area (default) or the full Eve region,
    /// depending on the caller's convention switch.
    static PopulationModel make(const geom::RegionSpec& reg, const geom::ProtectedZone& zone,
                                double lambda_u, double lambda_e, int weak_rank, int strong_rank,
                                bool eve_mean_over_unprotected_area = true);
};

} // namespace uavsec::dist
