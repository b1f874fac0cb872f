// Acceptance suite: reruns the headline results end to end and prints one
// PASS/FAIL line per criterion. Exit code is the number of failures.
//
//  1. analytic vs Monte Carlo agreement across six scenario points
//  2. rate saturation along the protected-area fraction
//  3. interior rate peak along transmit power (and its absence for small q)
//  4. weak-user outage saturation beyond 5 dBm
//  5. shape-optimization gain over the minimum-angle heuristic
//  6. space- vs shape-limited regime classification
//  7. best-case Eve decoding: vanishing strong outage and q-convergence
//  8. always-on property checks (round trips, kernel mean, order statistics,
//     tail dominance, seeded determinism)
//  9. altitude sharpens the penalty for a non-optimal shape

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "uavsec/config.hpp"
#include "uavsec/errors.hpp"
#include "uavsec/experiments.hpp"
#include "uavsec/optimizer.hpp"
#include "uavsec/quadrature.hpp"
#include "uavsec/units.hpp"

#include "../support/oracles.hpp"

using namespace uavsec;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

ScenarioConfig base_config() { return cli::default_config().scenario; }

std::string fmt(const char* f, ...) {
    va_list args;
    va_start(args, f);
    char buf[512];
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

// --- criterion 1 -----------------------------------------------------------

void criterion_1() {
    struct Point {
        double h, q, ptx;
        analytic::EveMode mode;
    };
    const std::vector<Point> points = {
        {20.0, 0.05, 45.0, analytic::EveMode::WorstCase},
        {20.0, 0.20, 0.0, analytic::EveMode::WorstCase},
        {50.0, 0.05, 0.0, analytic::EveMode::WorstCase},
        {50.0, 0.20, 45.0, analytic::EveMode::WorstCase},
        {20.0, 0.20, 45.0, analytic::EveMode::BestCase},
        {50.0, 0.05, 45.0, analytic::EveMode::BestCase},
    };
    bool pass = true;
    double worst_rate = 0.0, worst_outage = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& p = points[k];
        auto sc = base_config();
        sc.rf.altitude_m = p.h;
        sc.rf.tx_power_dbm = p.ptx;
        sc.zone.q = p.q;
        sc.noma.eve_mode = p.mode;
        Engine engine(sc, 0);
        const auto zone = engine.resolve_zone();
        const auto ana = engine.analytic_rates(zone);
        mc::SimOptions opts;
        opts.seed = 1000 + k;
        opts.trials = 1000000;
        const auto sim = engine.mc_rates(zone, opts);

        const double rate_gap = std::abs(ana.total_bpcu - sim.rate_total);
        const double ow_gap = std::abs(ana.outage_weak - sim.outage_weak);
        const double os_gap = std::abs(ana.outage_strong - sim.outage_strong);
        worst_rate = std::max(worst_rate, rate_gap);
        worst_outage = std::max(worst_outage, std::max(ow_gap, os_gap));
        pass = pass && rate_gap <= 0.1 && ow_gap <= 0.02 && os_gap <= 0.02;
    }
    report(1, "analytic vs Monte Carlo at 1e6 trials", pass,
           fmt("max |rate gap| = %.4f BPCU (<= 0.1), max |outage gap| = %.4f (<= 0.02)",
               worst_rate, worst_outage));
}

// --- criterion 2 -----------------------------------------------------------

void criterion_2() {
    auto sc = base_config();
    Engine engine(sc, 0);
    double lo = 1e9, hi = -1e9;
    for (double q : {0.10, 0.15, 0.20}) {
        const auto r = engine.analytic_rates(geom::min_angle_zone(q, sc.region));
        lo = std::min(lo, r.total_bpcu);
        hi = std::max(hi, r.total_bpcu);
    }
    const bool pass = lo >= 3.5 && hi <= 4.0 && (hi - lo) <= 0.2;
    report(2, "rate saturation for q in {0.1, 0.15, 0.2}", pass,
           fmt("range [%.3f, %.3f] BPCU, spread %.3f (<= 0.2)", lo, hi, hi - lo));
}

// --- criterion 3 -----------------------------------------------------------

void criterion_3() {
    auto sc = base_config();
    Engine engine(sc, 0);
    const auto z20 = geom::min_angle_zone(0.20, sc.region);
    const auto z05 = geom::min_angle_zone(0.05, sc.region);
    double peak = -1.0, argmax = 0.0, peak05 = -1.0;
    for (int p = -15; p <= 45; ++p) {
        const double r20 = engine.analytic_rates(z20, p, sc.rf.altitude_m).total_bpcu;
        if (r20 > peak) {
            peak = r20;
            argmax = p;
        }
        peak05 = std::max(peak05, engine.analytic_rates(z05, p, sc.rf.altitude_m).total_bpcu);
    }
    const bool pass = peak > 4.0 && argmax >= -5.0 && argmax <= 2.0 && peak05 <= 4.0;
    report(3, "transmit-power peak at q = 0.2, none at q = 0.05", pass,
           fmt("peak %.3f BPCU at %+g dBm (q=0.2); max %.3f (q=0.05)", peak, argmax, peak05));
}

// --- criterion 4 -----------------------------------------------------------

void criterion_4() {
    auto sc = base_config();
    Engine engine(sc, 0);
    bool pass = true;
    double worst = 1.0, worst_p = 0.0, worst_q = 0.0;
    for (double q : {0.05, 0.20}) {
        const auto zone = geom::min_angle_zone(q, sc.region);
        for (int p = 5; p <= 45; ++p) {
            const double ow = engine.analytic_rates(zone, p, sc.rf.altitude_m).outage_weak;
            if (ow < worst) {
                worst = ow;
                worst_p = p;
                worst_q = q;
            }
            pass = pass && ow >= 0.99;
        }
    }
    report(4, "weak user in outage beyond 5 dBm", pass,
           fmt("min outage %.5f at P=%g dBm, q=%g (>= 0.99)", worst, worst_p, worst_q));
}

// --- criteria 5 and 9 ------------------------------------------------------

opt::ShapeOptimum run_optimizer(double altitude_m, double q, double kappa) {
    auto sc = base_config();
    sc.rf.altitude_m = altitude_m;
    sc.region.kappa = kappa;
    Engine engine(sc, 0);
    return opt::optimize_shape(engine, q, 32);
}

void criterion_5(const opt::ShapeOptimum& res_h20) {
    auto sc = base_config();
    Engine engine(sc, 0);
    const double at_min =
        engine.analytic_rates(geom::min_angle_zone(0.03, sc.region)).total_bpcu;
    const double ratio = res_h20.best.objective / at_min;
    const bool pass = res_h20.best.zone.delta_p > res_h20.min_angle && ratio >= 1.15;
    report(5, "optimal shape beats the minimum angle at q = 0.03", pass,
           fmt("delta_p %.5f > min %.5f rad; objective ratio %.3f (>= 1.15)",
               res_h20.best.zone.delta_p, res_h20.min_angle, ratio));
}

void criterion_9(const opt::ShapeOptimum& res_h20) {
    const auto res_h50 = run_optimizer(50.0, 0.03, 3.0);
    auto drop = [](const opt::ShapeOptimum& r) {
        return (r.best.objective - r.frontier.back().objective) / r.best.objective;
    };
    const double d20 = drop(res_h20), d50 = drop(res_h50);
    report(9, "altitude sharpens the off-optimum penalty", d50 > d20,
           fmt("relative drop to the widest shape: %.3f at 50 m > %.3f at 20 m", d50, d20));
}

// --- criterion 6 -----------------------------------------------------------

void criterion_6() {
    bool pass = true;
    std::ostringstream detail;
    for (double q : {0.01, 0.03, 0.05, 0.09, 0.13}) {
        const auto res = run_optimizer(20.0, q, 2.0);
        const bool space = res.regime == opt::Regime::SpaceLimited;
        const bool want_space = q >= 0.09;
        pass = pass && space == want_space;
        detail << "q=" << q << (space ? ":space " : ":shape ");
    }
    report(6, "regime split at kappa = 2", pass, detail.str());
}

// --- criterion 7 -----------------------------------------------------------

void criterion_7() {
    auto sc = base_config();
    sc.noma.eve_mode = analytic::EveMode::BestCase;
    Engine engine(sc, 0);
    const auto z05 = geom::min_angle_zone(0.05, sc.region);
    const auto z20 = geom::min_angle_zone(0.20, sc.region);

    const double os05 = engine.analytic_rates(z05, 45.0, 20.0).outage_strong;
    const double os20 = engine.analytic_rates(z20, 45.0, 20.0).outage_strong;

    double max_gap = 0.0;
    for (double h : {20.0, 50.0}) {
        for (int p = 5; p <= 45; p += 2) {
            const double a = engine.analytic_rates(z05, p, h).total_bpcu;
            const double b = engine.analytic_rates(z20, p, h).total_bpcu;
            max_gap = std::max(max_gap, std::abs(a - b));
        }
    }
    const bool pass = os05 < 1e-3 && os20 < 1e-3 && max_gap <= 0.2;
    report(7, "best-case Eve: vanishing strong outage and q-convergence", pass,
           fmt("outage %.2e / %.2e (< 1e-3); max rate gap %.3f BPCU (<= 0.2)", os05, os20,
               max_gap));
}

// --- criterion 8 -----------------------------------------------------------

void criterion_8() {
    bool pass = true;
    std::ostringstream detail;

    // Geometry round trips at 1e-10 relative.
    {
        const auto reg = base_config().region;
        rng::Xoshiro256pp rng(1, 0);
        double worst = 0.0;
        for (int it = 0; it < 200; ++it) {
            const double q = 0.005 + 0.3 * rng.uniform01();
            const double lo = geom::global_min_angle(q, reg);
            const double dp = lo + (reg.delta_e() - lo) * rng.uniform01();
            try {
                const auto zone = geom::zone_for_angle(dp, q, reg);
                worst = std::max(worst,
                                 std::abs(geom::zone_fraction(zone, reg) - q) / q);
            } catch (const InfeasibleZoneError&) {
            }
        }
        pass = pass && worst <= 1e-10;
        detail << "geometry round-trip " << (worst <= 1e-10 ? "ok" : "BAD") << "; ";
    }

    // Unit mean of the array-gain kernel by quadrature.
    {
        double worst = 0.0;
        for (int m = 1; m <= 16; ++m) {
            std::vector<double> edges{-1.0, 1.0};
            for (int k = 1; 2.0 * k / m < 1.0; ++k) {
                edges.push_back(2.0 * k / m);
                edges.push_back(-2.0 * k / m);
            }
            std::sort(edges.begin(), edges.end());
            auto f = [&](const double* x, double* y, std::size_t n) {
                for (std::size_t i = 0; i < n; ++i) y[i] = prop::fejer_gain(0.0, x[i], m);
            };
            const double mean =
                0.5 * quad::integrate(f, edges, {1e-10, 1e-10, 4000, true}).value;
            worst = std::max(worst, std::abs(mean - 1.0));
        }
        pass = pass && worst <= 1e-8;
        detail << "kernel unit-mean " << (worst <= 1e-8 ? "ok" : "BAD") << "; ";
    }

    // Order statistics against a 1e6-sample sort oracle.
    {
        const auto sc = base_config();
        const auto user = dist::GainDistribution::build_user(sc.region, sc.rf);
        std::vector<double> seconds(1000000);
        rng::Xoshiro256pp rng(2, 0);
        for (auto& s : seconds) {
            const double a = oracles::sample_user_gain(sc.region, sc.rf, rng);
            const double b = oracles::sample_user_gain(sc.region, sc.rf, rng);
            const double c = oracles::sample_user_gain(sc.region, sc.rf, rng);
            s = std::max(std::min(a, b), std::min(std::max(a, b), c));
        }
        const double ks = oracles::ks_distance(
            std::move(seconds),
            [&](double z) { return dist::ordered_user_cdf(user, z, 2, 3); });
        pass = pass && ks <= 0.005;
        detail << "order-stat KS " << (ks <= 0.005 ? "ok" : "BAD") << "; ";
    }

    // cdf/pdf consistency by finite differences of the direct evaluators.
    {
        const auto sc = base_config();
        const auto zone = geom::min_angle_zone(0.05, sc.region);
        const auto eve = dist::GainDistribution::build_eve(sc.region, zone, sc.rf);
        double worst = 0.0;
        for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const double y = eve.quantile(p);
            const double h = 0.02 * y;
            const double fd =
                (-dist::eve_unordered_cdf(y + 2 * h, sc.region, zone, sc.rf) +
                 8 * dist::eve_unordered_cdf(y + h, sc.region, zone, sc.rf) -
                 8 * dist::eve_unordered_cdf(y - h, sc.region, zone, sc.rf) +
                 dist::eve_unordered_cdf(y - 2 * h, sc.region, zone, sc.rf)) /
                (12 * h);
            const double pdf = dist::eve_unordered_pdf(y, sc.region, zone, sc.rf);
            worst = std::max(worst, std::abs(pdf - fd) / pdf);
        }
        pass = pass && worst <= 1e-4;
        detail << "cdf/pdf consistency " << (worst <= 1e-4 ? "ok" : "BAD") << "; ";
    }

    // Larger protected fractions dominate the Eve gain law.
    {
        const auto sc = base_config();
        std::vector<dist::GainDistribution> dists;
        for (double q : {0.01, 0.05, 0.1, 0.2}) {
            dists.push_back(dist::GainDistribution::build_eve(
                sc.region, geom::min_angle_zone(q, sc.region), sc.rf));
        }
        bool ok = true;
        for (std::size_t i = 0; i + 1 < dists.size(); ++i) {
            for (double p = 0.05; p < 0.999; p += 0.05) {
                const double y = dists[i].quantile(p);
                ok = ok && dists[i + 1].cdf(y) >= dists[i].cdf(y) - 1e-6;
            }
        }
        pass = pass && ok;
        detail << "tail dominance " << (ok ? "ok" : "BAD") << "; ";
    }

    // Seeded Monte Carlo determinism, CSV byte-for-byte.
    {
        auto cfg = cli::default_config();
        cfg.experiment.experiment = "simulate";
        cfg.experiment.evaluator = opt::Evaluator::MonteCarlo;
        cfg.experiment.trials = 50000;
        cfg.experiment.seed = 7;
        cfg.experiment.output_path = "acceptance_det_a.csv";
        cfg.experiment.threads = 1;
        const int ra = cli::run(cfg);
        cfg.experiment.output_path = "acceptance_det_b.csv";
        cfg.experiment.threads = 0;
        const int rb = cli::run(cfg);
        auto slurp = [](const char* p) {
            std::string s;
            if (FILE* f = std::fopen(p, "rb")) {
                char buf[4096];
                std::size_t n;
                while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) s.append(buf, n);
                std::fclose(f);
            }
            return s;
        };
        const bool ok = ra == 0 && rb == 0 &&
                        slurp("acceptance_det_a.csv") == slurp("acceptance_det_b.csv");
        std::remove("acceptance_det_a.csv");
        std::remove("acceptance_det_b.csv");
        std::remove("acceptance_det_a.csv.manifest");
        std::remove("acceptance_det_b.csv.manifest");
        pass = pass && ok;
        detail << "seeded determinism " << (ok ? "ok" : "BAD");
    }

    report(8, "property suites", pass, detail.str());
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();

    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    const auto fig4 = run_optimizer(20.0, 0.03, 3.0);
    criterion_5(fig4);
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9(fig4);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d of 9 criteria failed; %.1f s total\n", g_failures, wall);
    return g_failures;
}
