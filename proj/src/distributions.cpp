#include "uavsec/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "uavsec/errors.hpp"
#include "uavsec/kernels.hpp"
#include "uavsec/quadrature.hpp"

namespace uavsec::dist {

namespace {

enum class Mode { Cdf, Survival, Pdf };

// Integration context for one region (user sector, or unprotected Eve region).
struct RegionIntegral {
    const geom::RegionSpec* reg = nullptr;
    const geom::ProtectedZone* zone = nullptr;  // nullptr = user region
    kernels::GainModel gm;
    int antennas = 1;
    double area = 0.0;
    double half_angle = 0.0;
    double pl_min = 0.0;        // path loss at the closest point of the region
    double curv_peak = 0.0;     // curvature scale of the array gain at its first null
    std::vector<double> base_edges;
};

std::vector<double> structural_edges(const geom::RegionSpec& reg,
                                     const geom::ProtectedZone* zone, double half) {
    std::vector<double> edges{-half, half};
    auto add = [&](double v) {
        if (v > -half && v < half) edges.push_back(v);
    };
    if (zone) {
        add(-reg.delta_u);
        add(reg.delta_u);
        add(-zone->delta_p);
        add(zone->delta_p);
    }
    return edges;
}

RegionIntegral make_region_integral(const geom::RegionSpec& reg,
                                    const geom::ProtectedZone* zone,
                                    const prop::RfConfig& rf) {
    reg.validate();
    rf.validate();
    RegionIntegral ri;
    ri.reg = &reg;
    ri.zone = zone;
    ri.gm = kernels::GainModel::from(rf);
    ri.antennas = rf.antenna_count;
    ri.half_angle = zone ? reg.delta_e() : reg.delta_u;
    if (zone) {
        ri.area = reg.area_eve() - geom::zone_area(*zone, reg);
        if (!(ri.area > 1e-9 * reg.area_eve())) {
            throw DegenerateDistributionError(
                "unprotected Eve region has vanished (q = 1 or empty Eve region)");
        }
    } else {
        ri.area = reg.area_user();
    }
    ri.pl_min = prop::path_loss_linear(std::hypot(reg.l_i, rf.altitude_m), rf.carrier_freq_ghz);
    // Array gain near its first null at offset 2/M behaves like curv * u^2.
    const double m = static_cast<double>(rf.antenna_count);
    const double s = std::sin(std::numbers::pi / m);
    ri.curv_peak = s > 0.0 ? std::numbers::pi * std::numbers::pi * m / (4.0 * s * s) : 1.0;
    ri.base_edges = structural_edges(reg, zone, ri.half_angle);
    return ri;
}

// Outer panel edges for one evaluation at gain z: the structural boundaries,
// the array-gain nulls, and geometric clusters shrinking toward each null so
// the exp(-z pl / F) boundary layers (width ~ sqrt(z pl / curv)) are panel-
// aligned instead of being discovered by bisection.
std::vector<double> theta_edges_for(const RegionIntegral& ri, double z) {
    std::vector<double> edges = ri.base_edges;
    const double half = ri.half_angle;
    auto add = [&](double v) {
        if (v > -half && v < half) edges.push_back(v);
    };

    const double null_step = 2.0 / ri.antennas;
    const double layer = z > 0.0 ? std::sqrt(z * ri.pl_min / ri.curv_peak) : null_step;
    int depth = 0;
    if (layer < 0.5 * null_step) {
        depth = static_cast<int>(std::ceil(std::log(0.5 * null_step / (0.2 * layer)) /
                                           std::log(6.0)));
        depth = std::clamp(depth, 0, 14);
    }
    for (int k = 0; k * null_step <= half + null_step; ++k) {
        const double u0 = k * null_step;
        for (int sgn = (k == 0 ? 1 : -1); sgn <= 1; sgn += 2) {
            const double center = sgn * u0;
            if (k > 0) {
                add(center);
                add(-center);
            }
            double w = 0.5 * null_step;
            for (int d = 0; d < depth; ++d) {
                w /= 6.0;
                add(center + w);
                add(center - w);
                if (k > 0) {
                    add(-center + w);
                    add(-center - w);
                }
            }
            if (k == 0) break;  // the boresight peak has no mirror
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

// Inner integral over the radial cross-section at fixed theta.
double radial_integral(const RegionIntegral& ri, double theta, double z, Mode mode,
                       const quad::Options& opts) {
    const double fejer = prop::fejer_gain(ri.gm.theta0, theta, ri.antennas);
    std::array<geom::RadialInterval, 2> segs;
    int nseg;
    if (ri.zone) {
        nseg = geom::unprotected_radial_intervals(theta, *ri.reg, *ri.zone, segs);
    } else {
        nseg = 1;
        segs[0] = {ri.reg->l_i, ri.reg->l_u};
    }
    if (nseg == 0) return 0.0;

    const double inv_f = 1.0 / fejer;
    const double inv_area = 1.0 / ri.area;
    const auto& backend = kernels::active_backend();

    auto integrand = [&](const double* r, double* y, std::size_t n) {
        double pl[16], c[16], w[16], surv[16], dens[16];
        backend.path_loss(ri.gm, r, pl, n);
        for (std::size_t i = 0; i < n; ++i) {
            c[i] = pl[i] * inv_f;
            w[i] = r[i] * inv_area;
        }
        switch (mode) {
        case Mode::Cdf:
            // expm1 keeps the small-z values exact.
            for (std::size_t i = 0; i < n; ++i) y[i] = -std::expm1(-z * c[i]) * w[i];
            break;
        case Mode::Survival:
            backend.exp_terms(c, w, z, surv, dens, n);
            for (std::size_t i = 0; i < n; ++i) y[i] = surv[i];
            break;
        case Mode::Pdf:
            backend.exp_terms(c, w, z, surv, dens, n);
            for (std::size_t i = 0; i < n; ++i) y[i] = dens[i];
            break;
        }
    };

    double total = 0.0;
    for (int s = 0; s < nseg; ++s) {
        const double edges[2] = {segs[s].lo, segs[s].hi};
        total += quad::integrate(integrand, edges, opts).value;
    }
    return total;
}

double region_integral(const RegionIntegral& ri, double z, Mode mode,
                       const quad::Options& inner, const quad::Options& outer) {
    auto outer_fn = [&](const double* th, double* y, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) y[i] = radial_integral(ri, th[i], z, mode, inner);
    };
    return quad::integrate(outer_fn, theta_edges_for(ri, z), outer).value;
}

// Direct (reference) evaluation tolerances.
const quad::Options kRefInner{1e-13, 1e-7, 4000, true};
const quad::Options kRefOuter{1e-12, 1e-6, 4000, true};

// Build-time tolerances: the survival route is tight because the Poisson
// weights amplify the upper tail; the lower cdf tail only feeds empirical
// comparisons and may run looser. Builds never throw; monotone repair and
// the consumers' tolerances absorb residual noise.
const quad::Options kBuildInner{1e-13, 1e-6, 4000, false};
const quad::Options kBuildCdfOuter{1e-9, 1e-4, 8000, false};
const quad::Options kBuildSurvOuter{1e-12, 1e-6, 8000, false};

// Upper bound on the per-location exponential scale F_M / PL; the gain
// survival is below 1e-12 beyond 27.64 times this.
double scale_sup(const geom::RegionSpec& reg, const prop::RfConfig& rf) {
    const double closest = std::hypot(reg.l_i, rf.altitude_m);
    return rf.antenna_count / prop::path_loss_linear(closest, rf.carrier_freq_ghz);
}

constexpr double kTailLog = 27.6310211159285482;  // -ln(1e-12)

} // namespace

double user_unordered_cdf(double z, const geom::RegionSpec& reg, const prop::RfConfig& rf) {
    if (z < 0.0) throw ArgumentError("gain must be nonnegative");
    if (z == 0.0) return 0.0;
    auto ri = make_region_integral(reg, nullptr, rf);
    return std::min(1.0, region_integral(ri, z, Mode::Cdf, kRefInner, kRefOuter));
}

double user_unordered_pdf(double z, const geom::RegionSpec& reg, const prop::RfConfig& rf) {
    if (z < 0.0) throw ArgumentError("gain must be nonnegative");
    auto ri = make_region_integral(reg, nullptr, rf);
    return region_integral(ri, z, Mode::Pdf, kRefInner, kRefOuter);
}

double eve_unordered_cdf(double y, const geom::RegionSpec& reg, const geom::ProtectedZone& zone,
                         const prop::RfConfig& rf) {
    if (y < 0.0) throw ArgumentError("gain must be nonnegative");
    if (y == 0.0) return 0.0;
    auto ri = make_region_integral(reg, &zone, rf);
    return std::min(1.0, region_integral(ri, y, Mode::Cdf, kRefInner, kRefOuter));
}

double eve_unordered_pdf(double y, const geom::RegionSpec& reg, const geom::ProtectedZone& zone,
                         const prop::RfConfig& rf) {
    if (y < 0.0) throw ArgumentError("gain must be nonnegative");
    auto ri = make_region_integral(reg, &zone, rf);
    return region_integral(ri, y, Mode::Pdf, kRefInner, kRefOuter);
}

// ---- monotone cubic ----

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    d_.assign(n, 0.0);
    if (n < 2) return;
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_[0] = delta[0];
    d_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    // Endpoint slopes limited to preserve shape.
    auto limit_end = [](double d_end, double delta_end) {
        if (d_end * delta_end <= 0.0) return 0.0;
        if (std::abs(d_end) > 3.0 * std::abs(delta_end)) return 3.0 * delta_end;
        return d_end;
    };
    d_[0] = limit_end(d_[0], delta[0]);
    d_[n - 1] = limit_end(d_[n - 1], delta[n - 2]);
}

double MonotoneCubic::eval(double xq) const {
    if (x_.empty()) return 0.0;
    if (xq <= x_.front()) return y_.front() + d_.front() * (xq - x_.front());
    if (xq >= x_.back()) return y_.back() + d_.back() * (xq - x_.back());
    const auto it = std::upper_bound(x_.begin(), x_.end(), xq);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (xq - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double MonotoneCubic::slope(double xq) const {
    if (x_.empty()) return 0.0;
    if (xq <= x_.front()) return d_.front();
    if (xq >= x_.back()) return d_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), xq);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (xq - x_[i]) / h;
    const double dh00 = (6 * t * t - 6 * t) / h;
    const double dh10 = 3 * t * t - 4 * t + 1;
    const double dh01 = (-6 * t * t + 6 * t) / h;
    const double dh11 = 3 * t * t - 2 * t;
    return dh00 * y_[i] + dh10 * d_[i] + dh01 * y_[i + 1] + dh11 * d_[i + 1];
}

// ---- memoized distribution ----

namespace {

struct Knot {
    double z;
    double cdf;
    double surv;
};

Knot eval_knot(const RegionIntegral& ri, double z, double prior_cdf) {
    Knot k;
    k.z = z;
    if (prior_cdf > 0.6) {
        // Monotonicity makes the direct cdf integral redundant here.
        k.surv = std::clamp(region_integral(ri, z, Mode::Survival, kBuildInner, kBuildSurvOuter),
                            0.0, 1.0);
        k.cdf = 1.0 - k.surv;
        return k;
    }
    k.cdf = std::clamp(region_integral(ri, z, Mode::Cdf, kBuildInner, kBuildCdfOuter), 0.0, 1.0);
    if (k.cdf < 0.4) {
        k.surv = 1.0 - k.cdf;
    } else {
        k.surv = std::clamp(region_integral(ri, z, Mode::Survival, kBuildInner, kBuildSurvOuter),
                            0.0, 1.0);
        k.cdf = 1.0 - k.surv;
    }
    return k;
}

} // namespace

namespace {

struct KnotTable {
    std::vector<double> log_z, log_cdf, log_surv;
    double z_min = 0.0, z_max = 0.0;
};

KnotTable build_knot_table(const RegionIntegral& ri, const geom::RegionSpec& reg,
                           const prop::RfConfig& rf) {
    KnotTable table;
    const double z_max_ = table.z_max = kTailLog * scale_sup(reg, rf);
    const double z_min_ = table.z_min = z_max_ * 1e-16;

    // Initial log-spaced grid, then midpoint refinement wherever the cdf or
    // the log-survival still jumps too much between neighbours.
    const int per_decade = 6;
    const int n0 = 16 * per_decade + 1;
    std::vector<Knot> knots;
    knots.reserve(512);
    const double lr = std::log(z_max_ / z_min_);
    double prior = 0.0;
    for (int i = 0; i < n0; ++i) {
        knots.push_back(eval_knot(ri, z_min_ * std::exp(lr * i / (n0 - 1)), prior));
        prior = knots.back().cdf;
    }

    const std::size_t max_knots = 480;
    bool refined = true;
    while (refined && knots.size() < max_knots) {
        refined = false;
        for (std::size_t i = 0; i + 1 < knots.size() && knots.size() < max_knots; ++i) {
            const Knot& a = knots[i];
            const Knot& b = knots[i + 1];
            const bool cdf_jump = b.cdf - a.cdf > 0.015;
            const bool tail_jump =
                b.surv > 1e-13 && a.surv > 0.0 && std::log(a.surv / b.surv) > 0.22;
            if (cdf_jump || tail_jump) {
                knots.insert(knots.begin() + i + 1,
                             eval_knot(ri, std::sqrt(a.z * b.z), a.cdf));
                refined = true;
                ++i;
            }
        }
    }

    // Quadrature noise in the far tails can break monotonicity; repair it.
    for (std::size_t i = 1; i < knots.size(); ++i)
        knots[i].cdf = std::max(knots[i].cdf, knots[i - 1].cdf);
    for (std::size_t i = knots.size() - 1; i > 0; --i)
        knots[i - 1].surv = std::max(knots[i - 1].surv, knots[i].surv);

    table.log_z.resize(knots.size());
    table.log_cdf.resize(knots.size());
    table.log_surv.resize(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) {
        table.log_z[i] = std::log(knots[i].z);
        table.log_cdf[i] = std::log(std::max(knots[i].cdf, 1e-300));
        table.log_surv[i] = std::log(std::max(knots[i].surv, 1e-300));
    }
    return table;
}

} // namespace

GainDistribution::GainDistribution(std::vector<double> log_z, std::vector<double> log_cdf,
                                   std::vector<double> log_surv, double z_min, double z_max)
    : z_min_(z_min), z_max_(z_max) {
    // Inverse of the survival spline over its strictly decreasing stretch,
    // for quantiles and for substituting u = survival(y) in outer integrals.
    std::vector<double> inv_x, inv_y;
    for (std::size_t idx = log_z.size(); idx-- > 0;) {
        const double ls = log_surv[idx];
        if (!inv_x.empty() && !(ls > inv_x.back())) continue;
        if (ls <= std::log(1e-280) || ls >= 0.0) continue;
        inv_x.push_back(ls);
        inv_y.push_back(log_z[idx]);
    }
    inv_log_surv_ = MonotoneCubic(std::move(inv_x), std::move(inv_y));
    log_cdf_ = MonotoneCubic(log_z, std::move(log_cdf));
    log_surv_ = MonotoneCubic(std::move(log_z), std::move(log_surv));
}

GainDistribution GainDistribution::build_user(const geom::RegionSpec& reg,
                                              const prop::RfConfig& rf) {
    auto ri = make_region_integral(reg, nullptr, rf);
    auto t = build_knot_table(ri, reg, rf);
    return GainDistribution(std::move(t.log_z), std::move(t.log_cdf), std::move(t.log_surv),
                            t.z_min, t.z_max);
}

GainDistribution GainDistribution::build_eve(const geom::RegionSpec& reg,
                                             const geom::ProtectedZone& zone,
                                             const prop::RfConfig& rf) {
    auto ri = make_region_integral(reg, &zone, rf);
    auto t = build_knot_table(ri, reg, rf);
    return GainDistribution(std::move(t.log_z), std::move(t.log_cdf), std::move(t.log_surv),
                            t.z_min, t.z_max);
}

double GainDistribution::cdf(double z) const {
    if (z <= 0.0) return 0.0;
    if (z >= z_max_) return 1.0;
    const double f = std::exp(log_cdf_.eval(std::log(z)));
    if (f < 0.5) return std::min(f, 1.0);
    return 1.0 - survival(z);
}

double GainDistribution::survival(double z) const {
    if (z <= 0.0) return 1.0;
    if (z >= z_max_) return 0.0;
    const double s = std::exp(log_surv_.eval(std::log(z)));
    if (s < 0.5) return s;
    return std::clamp(1.0 - std::exp(log_cdf_.eval(std::log(z))), 0.0, 1.0);
}

double GainDistribution::pdf(double z) const {
    if (z <= 0.0 || z >= z_max_) return 0.0;
    const double lzq = std::log(z);
    const double f = std::exp(log_cdf_.eval(lzq));
    if (f < 0.5) return f * log_cdf_.slope(lzq) / z;
    const double s = std::exp(log_surv_.eval(lzq));
    return -s * log_surv_.slope(lzq) / z;
}

double GainDistribution::quantile(double p) const {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return z_max_;
    return survival_inverse(1.0 - p);
}

double GainDistribution::survival_inverse(double s) const {
    if (s <= 0.0) return z_max_;
    if (s >= 1.0) return 0.0;
    const double ls = std::log(s);
    if (ls <= inv_log_surv_.x_front()) return z_max_;
    if (ls >= inv_log_surv_.x_back()) {
        // Survival this close to 1 sits below the gridded range; fall back
        // to the forward cdf spline (cdf = 1 - s is tiny there).
        const double target = std::log1p(-s);
        double lo = std::log(z_min_) - 60.0, hi = std::log(z_max_);
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (log_cdf_.eval(mid) < target ? lo : hi) = mid;
        }
        return std::exp(0.5 * (lo + hi));
    }
    return std::exp(inv_log_surv_.eval(ls));
}

// ---- order statistics ----

namespace {

void check_rank(int k, int K) {
    if (K < 1 || k < 1 || k > K)
        throw ArgumentError("order statistic rank must satisfy 1 <= k <= K");
}

} // namespace

double ordered_user_cdf(const GainDistribution& d, double z, int k, int K) {
    check_rank(k, K);
    const double s = d.survival(z);
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    const double log_s = std::log(s);
    const double log_f = std::log1p(-s);
    // P(Binomial(K, s) <= k-1): at most k-1 of the K gains exceed z.
    double sum = 0.0;
    for (int t = 0; t < k; ++t) {
        const double lc = std::lgamma(K + 1.0) - std::lgamma(t + 1.0) - std::lgamma(K - t + 1.0);
        sum += std::exp(lc + t * log_s + (K - t) * log_f);
    }
    return std::min(sum, 1.0);
}

double ordered_user_pdf(const GainDistribution& d, double z, int k, int K) {
    check_rank(k, K);
    const double s = d.survival(z);
    const double f = d.pdf(z);
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double lc = std::lgamma(K + 1.0) - std::lgamma(static_cast<double>(k)) -
                      std::lgamma(K - k + 1.0);
    return f * std::exp(lc + (K - k) * std::log1p(-s) + (k - 1) * std::log(s));
}

double detrimental_eve_cdf(const GainDistribution& d, double y, int k_e) {
    if (k_e < 1) throw ArgumentError("eavesdropper count must be >= 1");
    const double s = d.survival(y);
    if (s >= 1.0) return 0.0;
    return std::exp(k_e * std::log1p(-s));
}

double detrimental_eve_pdf(const GainDistribution& d, double y, int k_e) {
    if (k_e < 1) throw ArgumentError("eavesdropper count must be >= 1");
    const double s = d.survival(y);
    if (s >= 1.0) return 0.0;
    return k_e * d.pdf(y) * std::exp((k_e - 1) * std::log1p(-s));
}

// ---- Poisson ----

double poisson_log_pmf(int n, double mu) {
    if (n < 0) return -std::numeric_limits<double>::infinity();
    return n * std::log(mu) - mu - std::lgamma(n + 1.0);
}

double poisson_weight(int n, double mu) {
    if (!(mu > 0.0)) throw ArgumentError("poisson mean must be positive");
    return n < 0 ? 0.0 : std::exp(poisson_log_pmf(n, mu));
}

int truncation_bound(double mu, double eps) {
    if (!(mu > 0.0) || !(eps > 0.0))
        throw ArgumentError("poisson truncation needs mu > 0 and eps > 0");
    double pmf = std::exp(-mu);
    double cum = pmf;
    int n = 0;
    const int hard_cap = static_cast<int>(mu + 20.0 * std::sqrt(mu) + 200.0);
    while (cum < 1.0 - eps && n < hard_cap) {
        ++n;
        pmf *= mu / n;
        cum += pmf;
    }
    return n;
}

double poisson_cdf(int k, double mu) {
    if (k < 0) return 0.0;
    double pmf = std::exp(-mu);
    double cum = pmf;
    for (int n = 1; n <= k; ++n) {
        pmf *= mu / n;
        cum += pmf;
    }
    return std::min(cum, 1.0);
}

void PopulationModel::validate() const {
    if (!(mu_u > 0.0) || !(mu_e > 0.0))
        throw ArgumentError("population: mean user and Eve counts must be positive");
    if (sut_min_users > noma_min_users)
        throw ArgumentError("population: SUT threshold must not exceed the NOMA threshold");
    if (sut_min_users < 1) throw ArgumentError("population: ranks start at 1");
}

PopulationModel PopulationModel::make(const geom::RegionSpec& reg,
                                      const geom::ProtectedZone& zone, double lambda_u,
                                      double lambda_e, int weak_rank, int strong_rank,
                                      bool eve_mean_over_unprotected_area) {
    PopulationModel pop;
    pop.lambda_u = lambda_u;
    pop.lambda_e = lambda_e;
    pop.mu_u = reg.area_user() * lambda_u;
    const double area_e =
        eve_mean_over_unprotected_area ? reg.area_eve() - geom::zone_area(zone, reg)
                                       : reg.area_eve();
    pop.mu_e = area_e * lambda_e;
    pop.noma_min_users = weak_rank;
    pop.sut_min_users = strong_rank;
    pop.validate();
    return pop;
}

} // namespace uavsec::dist
