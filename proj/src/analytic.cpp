#include "uavsec/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "uavsec/errors.hpp"
#include "uavsec/quadrature.hpp"

namespace uavsec::analytic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// All outer integrals substitute u = survival(y) of the unordered Eve gain:
// the Eve pdf cancels, the count weights become polynomials/exponentials in
// u, and the weak-user pole maps to a regular edge. Panels cluster near
// u = 0 at the 1/weight_scale mass scale and near the lower edge.
std::vector<double> u_edges(double weight_scale, double u_lo, double u_hi) {
    std::vector<double> edges{u_lo, u_hi};
    auto add = [&](double v) {
        if (v > u_lo && v < u_hi) edges.push_back(v);
    };
    const double s = std::max(weight_scale, 1.0);
    for (double c : {0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0}) add(c / s);
    for (double c : {0.1, 0.3, 0.6}) add(c);
    const double span = u_hi - u_lo;
    for (double c : {1e-6, 1e-4, 1e-2}) add(u_lo + span * c);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

const quad::Options kOuterOpts{1e-7, 1e-6, 4000, true};

} // namespace

void NomaConfig::validate() const {
    if (strong_rank < 1 || weak_rank <= strong_rank)
        throw ArgumentError("noma: ranks must satisfy 1 <= strong_rank < weak_rank");
    if (std::abs(beta_weak_sq + beta_strong_sq - 1.0) > 1e-9)
        throw ArgumentError("noma: power fractions must sum to 1");
    if (!(beta_weak_sq > beta_strong_sq))
        throw ArgumentError("noma: the weak user must receive the larger power fraction");
    if (!(target_weak_bpcu > 0.0) || !(target_strong_bpcu > 0.0))
        throw ArgumentError("noma: target secrecy rates must be positive");
}

double delta_max_strong(double y, double snr, const NomaConfig& cfg, StrongMode mode) {
    const double pow2r = std::exp2(cfg.target_strong_bpcu);
    switch (mode) {
    case StrongMode::WorstCase:
        return (pow2r - 1.0) / (snr * cfg.beta_strong_sq) + pow2r * y;
    case StrongMode::BestCase:
        return (pow2r - 1.0) / (snr * cfg.beta_strong_sq) +
               pow2r * y / (1.0 + snr * y * cfg.beta_weak_sq);
    case StrongMode::Sut:
        return (pow2r - 1.0) / snr + pow2r * y;
    }
    return 0.0;
}

double weak_rho(double snr, const NomaConfig& cfg) {
    const double pow2r = std::exp2(cfg.target_weak_bpcu);
    const double num = 1.0 - pow2r * cfg.beta_strong_sq;
    if (num <= 0.0) return 0.0;  // threshold negative for every Eve gain
    return num / (snr * cfg.beta_strong_sq * (pow2r - 1.0));
}

WeakLimits weak_integration_limits(double y, double snr, const NomaConfig& cfg) {
    const double pow2r = std::exp2(cfg.target_weak_bpcu);
    const double bj2 = cfg.beta_strong_sq;
    const double rho = weak_rho(snr, cfg);
    if (rho <= 0.0 || y >= rho * (1.0 - 1e-9)) return {kInf, rho};
    const double a = 1.0 + snr * bj2 * y;
    const double b = 1.0 + snr * y;
    const double denom = snr * (a - pow2r * bj2 * b);
    if (denom <= 0.0) return {kInf, rho};
    return {(pow2r * b - a) / denom, rho};
}

double outage_strong(const dist::GainDistribution& user, const dist::GainDistribution& eve,
                     const NomaConfig& cfg, double snr, int K, int K_e, StrongMode mode) {
    cfg.validate();
    if (K_e < 1) throw ArgumentError("outage: at least one eavesdropper required");
    if (mode == StrongMode::Sut) {
        if (K < cfg.strong_rank || K >= cfg.weak_rank)
            throw ArgumentError("outage: SUT requires strong_rank <= K < weak_rank");
    } else if (K < cfg.weak_rank) {
        throw ArgumentError("outage: NOMA requires K >= weak_rank");
    }

    auto integrand = [&](const double* u, double* out, std::size_t n) {
        for (std::size_t idx = 0; idx < n; ++idx) {
            const double y = eve.survival_inverse(u[idx]);
            const double d = delta_max_strong(y, snr, cfg, mode);
            out[idx] = dist::ordered_user_cdf(user, d, cfg.strong_rank, K) * K_e *
                       std::exp((K_e - 1) * std::log1p(-u[idx]));
        }
    };
    const auto edges = u_edges(K_e, 0.0, 1.0);
    return std::clamp(quad::integrate(integrand, edges, kOuterOpts).value, 0.0, 1.0);
}

double outage_weak(const dist::GainDistribution& user, const dist::GainDistribution& eve,
                   const NomaConfig& cfg, double snr, int K, int K_e) {
    cfg.validate();
    if (K_e < 1) throw ArgumentError("outage: at least one eavesdropper required");
    if (K < cfg.weak_rank) throw ArgumentError("outage: NOMA requires K >= weak_rank");

    const double rho = weak_rho(snr, cfg);
    if (rho <= 0.0) return 1.0;
    // Above rho the threshold is negative, so that Eve tail is all outage.
    const double tail = 1.0 - dist::detrimental_eve_cdf(eve, rho, K_e);

    const double u_lo = eve.survival(rho);
    auto integrand = [&](const double* u, double* out, std::size_t n) {
        for (std::size_t idx = 0; idx < n; ++idx) {
            const double y = eve.survival_inverse(u[idx]);
            const double d = weak_integration_limits(y, snr, cfg).delta_i;
            out[idx] = dist::ordered_user_cdf(user, d, cfg.weak_rank, K) * K_e *
                       std::exp((K_e - 1) * std::log1p(-u[idx]));
        }
    };
    const double first = u_lo < 1.0
                             ? quad::integrate(integrand, u_edges(K_e, u_lo, 1.0), kOuterOpts).value
                             : 0.0;
    return std::clamp(first + tail, 0.0, 1.0);
}

namespace {

// P(Binomial(n, s) <= t_max).
double binomial_cdf(int n, double s, int t_max) {
    if (t_max >= n) return 1.0;
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    const double ls = std::log(s);
    const double lf = std::log1p(-s);
    double sum = 0.0;
    for (int t = 0; t <= t_max; ++t) {
        const double lc =
            std::lgamma(n + 1.0) - std::lgamma(t + 1.0) - std::lgamma(n - t + 1.0);
        sum += std::exp(lc + t * ls + (n - t) * lf);
    }
    return std::min(sum, 1.0);
}

// Poisson-weighted ordered CDF over all populations n >= n_min:
//   sum_{n>=n_min} P(K=n) P(k-th largest of n <= x)
// The unrestricted sum telescopes to P(Poisson(mu * survival) <= k-1) by
// thinning; the finitely many n < n_min terms are subtracted exactly.
double poisson_weighted_ordered_cdf(const dist::GainDistribution& user, double x, int k,
                                    double mu_u, int n_min) {
    const double s = user.survival(x);
    double total = dist::poisson_cdf(k - 1, mu_u * s);
    for (int n = 0; n < n_min; ++n) {
        total -= dist::poisson_weight(n, mu_u) * binomial_cdf(n, s, k - 1);
    }
    return std::max(total, 0.0);
}

} // namespace

RateBreakdown hybrid_rates(const dist::GainDistribution& user, const dist::GainDistribution& eve,
                           const dist::PopulationModel& pop, const NomaConfig& cfg, double snr,
                           bool renormalize) {
    cfg.validate();
    pop.validate();
    const int i = cfg.weak_rank;
    const int j = cfg.strong_rank;
    const double mu_u = pop.mu_u;
    const double mu_e = pop.mu_e;
    const double p_noma = 1.0 - dist::poisson_cdf(i - 1, mu_u);
    const double eve_presence = -std::expm1(-mu_e);
    const double norm = renormalize ? eve_presence : 1.0;

    // Strong user: expected non-outage mass across the NOMA population, with
    // the Eve-count sum collapsed to the weight mu_e exp(-mu_e u).
    const StrongMode smode =
        cfg.eve_mode == EveMode::WorstCase ? StrongMode::WorstCase : StrongMode::BestCase;
    auto strong_integrand = [&](const double* u, double* out, std::size_t n) {
        for (std::size_t idx = 0; idx < n; ++idx) {
            const double y = eve.survival_inverse(u[idx]);
            const double d = delta_max_strong(y, snr, cfg, smode);
            const double w = poisson_weighted_ordered_cdf(user, d, j, mu_u, i);
            out[idx] = (p_noma - w) * mu_e * std::exp(-mu_e * u[idx]);
        }
    };
    const double mass_strong = std::max(
        0.0, quad::integrate(strong_integrand, u_edges(mu_e, 0.0, 1.0), kOuterOpts).value);

    // Weak user: only Eve gains below rho contribute non-outage mass.
    const double rho = weak_rho(snr, cfg);
    double mass_weak = 0.0;
    if (rho > 0.0) {
        const double u_lo = eve.survival(rho);
        if (u_lo < 1.0) {
            auto weak_integrand = [&](const double* u, double* out, std::size_t n) {
                for (std::size_t idx = 0; idx < n; ++idx) {
                    const double y = eve.survival_inverse(u[idx]);
                    const double d = weak_integration_limits(y, snr, cfg).delta_i;
                    const double w = poisson_weighted_ordered_cdf(user, d, i, mu_u, i);
                    out[idx] = (p_noma - w) * mu_e * std::exp(-mu_e * u[idx]);
                }
            };
            mass_weak = std::max(
                0.0,
                quad::integrate(weak_integrand, u_edges(mu_e, u_lo, 1.0), kOuterOpts).value);
        }
    }

    // SUT window: finitely many populations, each weighted explicitly so the
    // tiny Poisson weights cannot be swamped by quadrature tolerance.
    double mass_sut = 0.0;
    double p_sut_window = 0.0;
    const auto sut_edges = u_edges(mu_e, 0.0, 1.0);
    for (int n = j; n < i; ++n) {
        const double pn = dist::poisson_weight(n, mu_u);
        p_sut_window += pn;
        if (pn < 1e-300) continue;
        auto sut_integrand = [&](const double* u, double* out, std::size_t nn) {
            for (std::size_t idx = 0; idx < nn; ++idx) {
                const double y = eve.survival_inverse(u[idx]);
                const double d = delta_max_strong(y, snr, cfg, StrongMode::Sut);
                const double c = dist::ordered_user_cdf(user, d, j, n);
                out[idx] = (1.0 - c) * mu_e * std::exp(-mu_e * u[idx]);
            }
        };
        mass_sut += pn * std::max(0.0, quad::integrate(sut_integrand, sut_edges, kOuterOpts).value);
    }

    RateBreakdown out;
    out.noma_bpcu = (cfg.target_weak_bpcu * mass_weak + cfg.target_strong_bpcu * mass_strong) /
                    (norm > 0.0 ? norm : 1.0);
    out.sut_bpcu = cfg.target_strong_bpcu * mass_sut / (norm > 0.0 ? norm : 1.0);
    out.total_bpcu = out.noma_bpcu + out.sut_bpcu;
    // Reported outages are always conditioned on at least one Eve.
    const double cond_noma = p_noma * eve_presence;
    out.outage_weak = cond_noma > 1e-300 ? std::clamp(1.0 - mass_weak / cond_noma, 0.0, 1.0) : 1.0;
    out.outage_strong =
        cond_noma > 1e-300 ? std::clamp(1.0 - mass_strong / cond_noma, 0.0, 1.0) : 1.0;
    const double cond_sut = p_sut_window * eve_presence;
    out.outage_sut = cond_sut > 1e-300 ? std::clamp(1.0 - mass_sut / cond_sut, 0.0, 1.0) : 1.0;
    return out;
}

double sum_secrecy_noma_direct(const dist::GainDistribution& user,
                               const dist::GainDistribution& eve,
                               const dist::PopulationModel& pop, const NomaConfig& cfg,
                               double snr, bool renormalize, double trunc_eps) {
    cfg.validate();
    const int i = cfg.weak_rank;
    const int n_hi = dist::truncation_bound(pop.mu_u, trunc_eps);
    const int m_hi = std::max(1, dist::truncation_bound(pop.mu_e, trunc_eps));
    const double norm = renormalize ? -std::expm1(-pop.mu_e) : 1.0;
    const StrongMode mode =
        cfg.eve_mode == EveMode::WorstCase ? StrongMode::WorstCase : StrongMode::BestCase;

    double total = 0.0;
    for (int n = i; n <= n_hi; ++n) {
        const double pn = dist::poisson_weight(n, pop.mu_u);
        if (pn < 1e-18) continue;
        for (int m = 1; m <= m_hi; ++m) {
            const double pm = dist::poisson_weight(m, pop.mu_e);
            if (pm < 1e-18) continue;
            const double pw = outage_weak(user, eve, cfg, snr, n, m);
            const double ps = outage_strong(user, eve, cfg, snr, n, m, mode);
            total += pn * pm *
                     ((1.0 - pw) * cfg.target_weak_bpcu + (1.0 - ps) * cfg.target_strong_bpcu);
        }
    }
    return total / (norm > 0.0 ? norm : 1.0);
}

double sum_secrecy_sut_direct(const dist::GainDistribution& user,
                              const dist::GainDistribution& eve,
                              const dist::PopulationModel& pop, const NomaConfig& cfg, double snr,
                              bool renormalize, double trunc_eps) {
    cfg.validate();
    const int m_hi = std::max(1, dist::truncation_bound(pop.mu_e, trunc_eps));
    const double norm = renormalize ? -std::expm1(-pop.mu_e) : 1.0;

    double total = 0.0;
    for (int n = cfg.strong_rank; n < cfg.weak_rank; ++n) {
        const double pn = dist::poisson_weight(n, pop.mu_u);
        if (pn < 1e-18) continue;
        for (int m = 1; m <= m_hi; ++m) {
            const double pm = dist::poisson_weight(m, pop.mu_e);
            if (pm < 1e-18) continue;
            const double ps = outage_strong(user, eve, cfg, snr, n, m, StrongMode::Sut);
            total += pn * pm * (1.0 - ps) * cfg.target_strong_bpcu;
        }
    }
    return total / (norm > 0.0 ? norm : 1.0);
}

} // namespace uavsec::analytic
