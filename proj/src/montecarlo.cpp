#include "uavsec/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "uavsec/errors.hpp"
#include "uavsec/kernels.hpp"
#include "uavsec/parallel.hpp"

namespace uavsec::mc {

namespace {

constexpr std::size_t kChunk = 4096;

double radial_inverse(double u, double lo, double hi) {
    return std::sqrt(lo * lo + u * (hi * hi - lo * lo));
}

int draw_poisson(double mu, rng::Xoshiro256pp& stream) {
    std::poisson_distribution<int> dist(mu);
    return dist(stream);
}

// Raw position arrays for one trial; gains are filled in by a batch kernel.
struct TrialScratch {
    std::vector<double> theta, r, u01, gains;
    std::vector<double> user_sorted;

    void clear() {
        theta.clear();
        r.clear();
        u01.clear();
    }
    void push(double th, double rr, double u) {
        theta.push_back(th);
        r.push_back(rr);
        u01.push_back(u);
    }
};

// Draw order is fixed (user count, eve count, user points, eve points) so a
// seed pairs deployments across zone configurations: the zone only thins the
// Eve set, it never shifts the stream. Stratified mode instead conditions
// on exact counts inside the unprotected region.
std::size_t draw_positions(const geom::RegionSpec& reg, const geom::ProtectedZone& zone,
                           double lambda_u, double lambda_e, bool stratified, int fixed_users,
                           int fixed_eves, rng::Xoshiro256pp& stream, TrialScratch& scratch) {
    scratch.clear();

    const int n_users = stratified ? fixed_users : draw_poisson(reg.area_user() * lambda_u, stream);
    const int n_eves_full =
        stratified ? fixed_eves : draw_poisson(reg.area_eve() * lambda_e, stream);

    for (int k = 0; k < n_users; ++k) {
        const double th = (2.0 * stream.uniform01() - 1.0) * reg.delta_u;
        const double rr = radial_inverse(stream.uniform01(), reg.l_i, reg.l_u);
        scratch.push(th, rr, stream.uniform01());
    }
    for (int k = 0; k < n_eves_full; ++k) {
        double th, rr;
        bool kept;
        if (stratified) {
            do {
                th = (2.0 * stream.uniform01() - 1.0) * reg.delta_e();
                rr = radial_inverse(stream.uniform01(), reg.l_i, reg.l_e());
            } while (!geom::in_unprotected_eve_region(th, rr, reg, zone));
            kept = true;
        } else {
            do {
                th = (2.0 * stream.uniform01() - 1.0) * reg.delta_e();
                rr = radial_inverse(stream.uniform01(), reg.l_i, reg.l_e());
            } while (!geom::in_eve_region(th, rr, reg));
            kept = !geom::in_protected_zone(th, rr, reg, zone);
        }
        const double u = stream.uniform01();
        if (kept) scratch.push(th, rr, u);
    }
    return static_cast<std::size_t>(n_users);
}

struct TrialRates {
    Scheme scheme = Scheme::None;
    double secrecy_weak = 0.0, secrecy_strong = 0.0;
    bool outage_weak = true, outage_strong = true;
    double banked = 0.0;
    double oma = 0.0;
};

double log2_1p(double x) { return std::log1p(x) * 1.4426950408889634074; }

// SINR/rate chain for one trial given the ranked user gains and the most
// detrimental Eve gain.
TrialRates rate_chain(const double* gains_desc, std::size_t n_users, double g_e,
                      const analytic::NomaConfig& noma, double snr) {
    TrialRates out;
    const int i = noma.weak_rank, j = noma.strong_rank;
    const double bi2 = noma.beta_weak_sq, bj2 = noma.beta_strong_sq;

    if (n_users >= static_cast<std::size_t>(i)) {
        out.scheme = Scheme::Noma;
        const double gj = gains_desc[j - 1];
        const double gi = gains_desc[i - 1];

        // Decoding the weak message at the strong user must be at least as
        // good as at the weak user itself, or the rate collapse is invalid.
        const double sinr_i_at_j = snr * gj * bi2 / (1.0 + snr * gj * bj2);
        const double sinr_i_at_i = snr * gi * bi2 / (1.0 + snr * gi * bj2);
        if (sinr_i_at_j < sinr_i_at_i * (1.0 - 1e-12))
            throw Error("SIC decoding chain violated its ordering (ranking bug)");

        const double rate_strong = log2_1p(snr * gj * bj2);
        const double rate_weak = log2_1p(sinr_i_at_i);
        const double eve_strong =
            noma.eve_mode == analytic::EveMode::WorstCase
                ? log2_1p(snr * g_e * bj2)
                : log2_1p(snr * g_e * bj2 / (1.0 + snr * g_e * bi2));
        const double eve_weak = log2_1p(snr * g_e * bi2 / (1.0 + snr * g_e * bj2));

        out.secrecy_strong = std::max(0.0, rate_strong - eve_strong);
        out.secrecy_weak = std::max(0.0, rate_weak - eve_weak);
        out.outage_strong = out.secrecy_strong < noma.target_strong_bpcu;
        out.outage_weak = out.secrecy_weak < noma.target_weak_bpcu;
        out.banked = (out.outage_weak ? 0.0 : noma.target_weak_bpcu) +
                     (out.outage_strong ? 0.0 : noma.target_strong_bpcu);

        // OMA baseline: two equal slots, full power each, same outage rule.
        const double eve_cap = log2_1p(snr * g_e);
        const double oma_strong = 0.5 * std::max(0.0, log2_1p(snr * gj) - eve_cap);
        const double oma_weak = 0.5 * std::max(0.0, log2_1p(snr * gi) - eve_cap);
        out.oma = (oma_strong >= noma.target_strong_bpcu ? noma.target_strong_bpcu : 0.0) +
                  (oma_weak >= noma.target_weak_bpcu ? noma.target_weak_bpcu : 0.0);
    } else if (n_users >= static_cast<std::size_t>(j)) {
        out.scheme = Scheme::Sut;
        const double gj = gains_desc[j - 1];
        const double secrecy = std::max(0.0, log2_1p(snr * gj) - log2_1p(snr * g_e));
        out.secrecy_strong = secrecy;
        out.outage_strong = secrecy < noma.target_strong_bpcu;
        out.banked = out.outage_strong ? 0.0 : noma.target_strong_bpcu;
        out.oma = out.banked;  // single scheduled user: same slot layout
    }
    return out;
}

struct ChunkAccum {
    double banked = 0.0, banked_sq = 0.0;
    double banked_noma = 0.0, banked_sut = 0.0;
    double oma = 0.0, oma_sq = 0.0;
    std::size_t n_trials = 0, n_noma = 0, n_sut = 0;
    std::size_t out_weak = 0, out_strong = 0, out_sut = 0;
};

} // namespace

Deployment draw_deployment(const geom::RegionSpec& reg, const geom::ProtectedZone& zone,
                           double lambda_u, double lambda_e, rng::Xoshiro256pp& stream) {
    TrialScratch scratch;
    const std::size_t n_users =
        draw_positions(reg, zone, lambda_u, lambda_e, false, 0, 0, stream, scratch);

    Deployment dep;
    for (std::size_t k = 0; k < scratch.theta.size(); ++k) {
        prop::LinkGeometry link{scratch.theta[k], scratch.r[k], -std::log(scratch.u01[k])};
        if (k < n_users)
            dep.users.push_back(link);
        else
            dep.eves.push_back(link);
    }
    return dep;
}

TrialOutcome evaluate_trial(const Deployment& dep, const Scenario& sc) {
    if (dep.eves.empty()) throw ArgumentError("trial evaluation requires at least one Eve");
    const double snr = sc.rf.snr_scale();

    std::vector<double> gains;
    gains.reserve(dep.users.size());
    for (const auto& u : dep.users) gains.push_back(prop::effective_gain(u, sc.rf));
    std::sort(gains.begin(), gains.end(), std::greater<>());

    double g_e = 0.0;
    for (const auto& e : dep.eves) g_e = std::max(g_e, prop::effective_gain(e, sc.rf));

    const TrialRates rates = rate_chain(gains.data(), gains.size(), g_e, sc.noma, snr);

    TrialOutcome out;
    out.scheme = rates.scheme;
    out.user_gains = std::move(gains);
    out.eve_gain = g_e;
    out.secrecy_weak = rates.secrecy_weak;
    out.secrecy_strong = rates.secrecy_strong;
    out.outage_weak = rates.outage_weak;
    out.outage_strong = rates.outage_strong;
    out.banked_rate = rates.banked;
    out.oma_rate = rates.oma;
    return out;
}

SimResult simulate(const Scenario& sc, const SimOptions& opts) {
    if (opts.trials < 1) throw ArgumentError("simulate: at least one trial required");
    sc.region.validate();
    sc.rf.validate();
    sc.noma.validate();
    if (opts.stratified && opts.fixed_eves < 1)
        throw ArgumentError("simulate: stratified mode needs at least one Eve");

    const double snr = sc.rf.snr_scale();
    const kernels::GainModel gm = kernels::GainModel::from(sc.rf);
    const auto& backend = kernels::active_backend();

    const std::size_t num_chunks = (opts.trials + kChunk - 1) / kChunk;
    std::vector<ChunkAccum> accums(num_chunks);

    parallel_for_chunks(opts.trials, kChunk, opts.threads, [&](std::size_t begin, std::size_t end) {
        ChunkAccum acc;
        TrialScratch scratch;
        for (std::size_t t = begin; t < end; ++t) {
            rng::Xoshiro256pp stream(opts.seed, t);

            std::size_t n_users = 0;
            for (;;) {
                n_users = draw_positions(sc.region, sc.zone, sc.lambda_u, sc.lambda_e,
                                         opts.stratified, opts.fixed_users, opts.fixed_eves,
                                         stream, scratch);
                if (scratch.theta.size() > n_users) break;  // at least one surviving Eve
            }

            const std::size_t total = scratch.theta.size();
            scratch.gains.resize(total);
            backend.effective_gains(gm, scratch.theta.data(), scratch.r.data(),
                                    scratch.u01.data(), scratch.gains.data(), total);

            scratch.user_sorted.assign(scratch.gains.begin(), scratch.gains.begin() + n_users);
            std::sort(scratch.user_sorted.begin(), scratch.user_sorted.end(), std::greater<>());
            double g_e = 0.0;
            for (std::size_t k = n_users; k < total; ++k) g_e = std::max(g_e, scratch.gains[k]);

            const TrialRates rates =
                rate_chain(scratch.user_sorted.data(), n_users, g_e, sc.noma, snr);

            acc.n_trials++;
            acc.banked += rates.banked;
            acc.banked_sq += rates.banked * rates.banked;
            acc.oma += rates.oma;
            acc.oma_sq += rates.oma * rates.oma;
            if (rates.scheme == Scheme::Noma) {
                acc.n_noma++;
                acc.banked_noma += rates.banked;
                if (rates.outage_weak) acc.out_weak++;
                if (rates.outage_strong) acc.out_strong++;
            } else if (rates.scheme == Scheme::Sut) {
                acc.n_sut++;
                acc.banked_sut += rates.banked;
                if (rates.outage_strong) acc.out_sut++;
            }
        }
        accums[begin / kChunk] = acc;
    });

    ChunkAccum sum;
    for (const auto& a : accums) {
        sum.banked += a.banked;
        sum.banked_sq += a.banked_sq;
        sum.banked_noma += a.banked_noma;
        sum.banked_sut += a.banked_sut;
        sum.oma += a.oma;
        sum.oma_sq += a.oma_sq;
        sum.n_trials += a.n_trials;
        sum.n_noma += a.n_noma;
        sum.n_sut += a.n_sut;
        sum.out_weak += a.out_weak;
        sum.out_strong += a.out_strong;
        sum.out_sut += a.out_sut;
    }

    const double n = static_cast<double>(sum.n_trials);
    auto mean_hw = [&](double s, double sq) {
        const double mean = s / n;
        const double var = std::max(0.0, sq / n - mean * mean);
        return std::pair{mean, 1.96 * std::sqrt(var / n)};
    };
    auto frac_hw = [](std::size_t count, std::size_t total) {
        if (total == 0) return std::pair{0.0, 0.0};
        const double p = static_cast<double>(count) / static_cast<double>(total);
        return std::pair{p, 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(total))};
    };

    SimResult res;
    res.trials = sum.n_trials;
    res.noma_trials = sum.n_noma;
    res.sut_trials = sum.n_sut;
    std::tie(res.rate_total, res.hw_rate_total) = mean_hw(sum.banked, sum.banked_sq);
    std::tie(res.rate_oma, res.hw_rate_oma) = mean_hw(sum.oma, sum.oma_sq);
    res.rate_noma = sum.banked_noma / n;
    res.rate_sut = sum.banked_sut / n;
    std::tie(res.outage_weak, res.hw_outage_weak) = frac_hw(sum.out_weak, sum.n_noma);
    std::tie(res.outage_strong, res.hw_outage_strong) = frac_hw(sum.out_strong, sum.n_noma);
    std::tie(res.outage_sut, res.hw_outage_sut) = frac_hw(sum.out_sut, sum.n_sut);
    return res;
}

} // namespace uavsec::mc
