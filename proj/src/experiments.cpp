#include "uavsec/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "uavsec/errors.hpp"
#include "uavsec/units.hpp"

namespace uavsec::cli {

namespace {

constexpr double kValidateOutageGap = 0.02;
constexpr double kValidateRateGap = 0.1;

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

const char* eve_mode_name(analytic::EveMode m) {
    return m == analytic::EveMode::WorstCase ? "worst" : "best";
}

const char* evaluator_name(opt::Evaluator e) {
    return e == opt::Evaluator::Analytic ? "analytic" : "mc";
}

struct CsvWriter {
    std::ofstream out;

    explicit CsvWriter(const std::string& path) : out(path, std::ios::binary) {
        if (!out) throw ConfigError("cannot open output path '" + path + "'");
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << csv_quote(cells[i]);
        }
        out << '\n';
    }
};

void write_manifest(const LoadedConfig& cfg, const std::string& extra, double wall_s) {
    std::ofstream m(cfg.experiment.output_path + ".manifest");
    if (!m) throw ConfigError("cannot open manifest path");
    const auto& sc = cfg.scenario;
    const auto& ex = cfg.experiment;
    m << "tool = uavsec " << kVersion << "\n";
    m << "experiment = " << ex.experiment << "\n";
    m << "scenario = " << ex.scenario << "\n";
    m << "evaluator = " << evaluator_name(ex.evaluator) << "\n";
    m << "seed = " << ex.seed << "\n";
    m << "trials = " << ex.trials << "\n";
    m << "threads = " << ex.threads << "\n";
    m << "grid_resolution = " << ex.grid_resolution << "\n";
    m << "output_csv = " << ex.output_path << "\n";
    m << "wall_time_s = " << format_value(wall_s) << "\n";
    m << "config.inner_radius_m = " << format_value(sc.region.l_i) << "\n";
    m << "config.user_radius_m = " << format_value(sc.region.l_u) << "\n";
    m << "config.user_half_angle_deg = " << format_value(units::rad_to_deg(sc.region.delta_u))
      << "\n";
    m << "config.expansion_ratio = " << format_value(sc.region.kappa) << "\n";
    m << "config.user_density_per_m2 = " << format_value(sc.lambda_u) << "\n";
    m << "config.eve_density_per_m2 = " << format_value(sc.lambda_e) << "\n";
    m << "config.antenna_count = " << sc.rf.antenna_count << "\n";
    m << "config.carrier_freq_ghz = " << format_value(sc.rf.carrier_freq_ghz) << "\n";
    m << "config.bandwidth_hz = " << format_value(sc.rf.bandwidth_hz) << "\n";
    m << "config.thermal_noise_dbm_per_hz = " << format_value(sc.rf.thermal_noise_dbm_per_hz)
      << "\n";
    m << "config.noise_figure_db = " << format_value(sc.rf.noise_figure_db) << "\n";
    m << "config.altitude_m = " << format_value(sc.rf.altitude_m) << "\n";
    m << "config.tx_power_dbm = " << format_value(sc.rf.tx_power_dbm) << "\n";
    m << "config.bs_antenna_gain_dbi = " << format_value(sc.rf.bs_antenna_gain_dbi) << "\n";
    m << "config.apply_bs_antenna_gain = " << (sc.rf.apply_bs_antenna_gain ? "true" : "false")
      << "\n";
    m << "config.weak_rank = " << sc.noma.weak_rank << "\n";
    m << "config.strong_rank = " << sc.noma.strong_rank << "\n";
    m << "config.power_frac_weak = " << format_value(sc.noma.beta_weak_sq) << "\n";
    m << "config.power_frac_strong = " << format_value(sc.noma.beta_strong_sq) << "\n";
    m << "config.target_rate_weak_bpcu = " << format_value(sc.noma.target_weak_bpcu) << "\n";
    m << "config.target_rate_strong_bpcu = " << format_value(sc.noma.target_strong_bpcu) << "\n";
    m << "config.eve_decoding = " << eve_mode_name(sc.noma.eve_mode) << "\n";
    m << "config.zone_area_fraction = " << format_value(sc.zone.q) << "\n";
    const char* rule = sc.zone.rule == ZoneAngleRule::MinAngle ? "min_angle"
                       : sc.zone.rule == ZoneAngleRule::Fixed  ? "fixed"
                                                               : "optimal";
    m << "config.zone_angle_rule = " << rule << "\n";
    m << "config.zone_half_angle_deg = " << format_value(units::rad_to_deg(sc.zone.fixed_delta_p))
      << "\n";
    m << "config.eve_mean_count_area = "
      << (sc.eve_mean_over_unprotected_area ? "unprotected" : "full") << "\n";
    m << "config.condition_on_eve_presence = " << (sc.renormalize_eve_presence ? "true" : "false")
      << "\n";
    if (!extra.empty()) m << extra;
}

const std::vector<std::string> kSweepHeader = {
    "experiment",       "axis",
    "axis_value",       "altitude_m",
    "ptx_dbm",          "q",
    "zone_kind",        "delta_p_rad",
    "l_p_m",            "eve_mode",
    "evaluator",        "rate_total_bpcu",
    "rate_noma_bpcu",   "rate_sut_bpcu",
    "rate_oma_bpcu",    "outage_weak_prob",
    "outage_strong_prob", "outage_sut_prob",
    "rate_halfwidth_bpcu", "outage_weak_halfwidth",
    "outage_strong_halfwidth", "feasible",
    "note"};

void sweep_row(CsvWriter& csv, const LoadedConfig& cfg, const std::string& axis,
               const opt::SweepPoint& pt, double altitude_m, double ptx_dbm, double q) {
    const auto& sc = cfg.scenario;
    std::vector<std::string> cells;
    cells.push_back(cfg.experiment.experiment);
    cells.push_back(axis);
    cells.push_back(format_value(pt.axis_value));
    cells.push_back(format_value(altitude_m));
    cells.push_back(format_value(ptx_dbm));
    cells.push_back(format_value(q));
    if (pt.feasible) {
        cells.push_back(geom::zone_kind_name(pt.zone.kind));
        cells.push_back(format_value(pt.zone.delta_p));
        cells.push_back(format_value(pt.zone.l_p));
    } else {
        cells.insert(cells.end(), {"", "", ""});
    }
    cells.push_back(eve_mode_name(sc.noma.eve_mode));
    cells.push_back(evaluator_name(cfg.experiment.evaluator));
    if (pt.feasible && pt.mc) {
        const auto& r = *pt.mc;
        cells.push_back(format_value(r.rate_total));
        cells.push_back(format_value(r.rate_noma));
        cells.push_back(format_value(r.rate_sut));
        cells.push_back(format_value(r.rate_oma));
        cells.push_back(format_value(r.outage_weak));
        cells.push_back(format_value(r.outage_strong));
        cells.push_back(format_value(r.outage_sut));
        cells.push_back(format_value(r.hw_rate_total));
        cells.push_back(format_value(r.hw_outage_weak));
        cells.push_back(format_value(r.hw_outage_strong));
    } else if (pt.feasible) {
        const auto& r = pt.rates;
        cells.push_back(format_value(r.total_bpcu));
        cells.push_back(format_value(r.noma_bpcu));
        cells.push_back(format_value(r.sut_bpcu));
        cells.push_back("");  // OMA exists only through the Monte Carlo path
        cells.push_back(format_value(r.outage_weak));
        cells.push_back(format_value(r.outage_strong));
        cells.push_back(format_value(r.outage_sut));
        cells.insert(cells.end(), {"", "", ""});
    } else {
        cells.insert(cells.end(), 10, std::string{});
    }
    cells.push_back(pt.feasible ? "true" : "false");
    cells.push_back(pt.error);
    csv.row(cells);
}

std::vector<double> default_axis(const LoadedConfig& cfg, opt::SweepAxis axis) {
    const auto& sc = cfg.scenario;
    std::vector<double> values;
    switch (axis) {
    case opt::SweepAxis::DeltaP: {
        // Feasible half-angle range at the configured q, densest near the
        // minimum angle.
        const double lo = geom::global_min_angle(sc.zone.q, sc.region);
        const double hi = sc.region.delta_e();
        const int n = std::max(16, cfg.experiment.grid_resolution);
        for (int s = 0; s < n; ++s) {
            const double t = static_cast<double>(s) / (n - 1);
            values.push_back(lo + (hi - lo) * t * t);
        }
        break;
    }
    case opt::SweepAxis::AreaFraction:
        for (int k = 1; k <= 20; ++k) values.push_back(0.01 * k);
        break;
    case opt::SweepAxis::TxPower:
        for (int p = -15; p <= 45; ++p) values.push_back(static_cast<double>(p));
        break;
    case opt::SweepAxis::Altitude:
        values = {20.0, 50.0};
        break;
    }
    return values;
}

int run_sweep(const LoadedConfig& cfg, opt::SweepAxis axis) {
    LoadedConfig resolved = cfg;
    Engine probe(cfg.scenario, cfg.experiment.threads);
    if (cfg.scenario.zone.rule == ZoneAngleRule::Optimal &&
        (axis == opt::SweepAxis::TxPower || axis == opt::SweepAxis::Altitude)) {
        // Pin the optimal shape once at the base configuration.
        const auto opt_res = opt::optimize_shape(probe, cfg.scenario.zone.q,
                                                 cfg.experiment.grid_resolution);
        resolved.scenario.zone.rule = ZoneAngleRule::Fixed;
        resolved.scenario.zone.fixed_delta_p = opt_res.best.zone.delta_p;
        resolved.scenario.zone.fixed_kind = opt_res.best.zone.kind;
    }

    Engine engine(resolved.scenario, resolved.experiment.threads);
    const auto values = resolved.experiment.axis_values.empty()
                            ? default_axis(resolved, axis)
                            : resolved.experiment.axis_values;
    mc::SimOptions mc_opts;
    mc_opts.seed = resolved.experiment.seed;
    mc_opts.trials = resolved.experiment.trials;
    mc_opts.threads = resolved.experiment.threads;
    const auto points = opt::sweep(engine, axis, values, resolved.experiment.evaluator, mc_opts,
                                   resolved.experiment.grid_resolution);

    CsvWriter csv(resolved.experiment.output_path);
    csv.row(kSweepHeader);
    const auto& sc = resolved.scenario;
    for (const auto& pt : points) {
        double alt = sc.rf.altitude_m, ptx = sc.rf.tx_power_dbm, q = sc.zone.q;
        if (axis == opt::SweepAxis::TxPower) ptx = pt.axis_value;
        if (axis == opt::SweepAxis::Altitude) alt = pt.axis_value;
        if (axis == opt::SweepAxis::AreaFraction) q = pt.axis_value;
        sweep_row(csv, resolved, opt::sweep_axis_name(axis), pt, alt, ptx, q);
    }
    return 0;
}

int run_optimize(const LoadedConfig& cfg, std::string& manifest_extra) {
    Engine engine(cfg.scenario, cfg.experiment.threads);
    mc::SimOptions mc_opts;
    mc_opts.seed = cfg.experiment.seed;
    mc_opts.trials = cfg.experiment.trials;
    const auto res = opt::optimize_shape(engine, cfg.scenario.zone.q,
                                         cfg.experiment.grid_resolution,
                                         cfg.experiment.evaluator, mc_opts);

    CsvWriter csv(cfg.experiment.output_path);
    csv.row(kSweepHeader);
    const auto& sc = cfg.scenario;
    for (const auto& cand : res.frontier) {
        opt::SweepPoint pt;
        pt.axis_value = cand.zone.delta_p;
        pt.zone = cand.zone;
        pt.feasible = true;
        pt.rates.total_bpcu = cand.objective;
        sweep_row(csv, cfg, "delta_p_rad", pt, sc.rf.altitude_m, sc.rf.tx_power_dbm, sc.zone.q);
    }
    // Optimum row with the full analytic breakdown.
    opt::SweepPoint best;
    best.axis_value = res.best.zone.delta_p;
    best.zone = res.best.zone;
    best.feasible = true;
    best.rates = engine.analytic_rates(res.best.zone);
    best.error = std::string("optimum regime=") +
                 (res.regime == opt::Regime::SpaceLimited ? "space-limited" : "shape-limited");
    sweep_row(csv, cfg, "delta_p_rad", best, sc.rf.altitude_m, sc.rf.tx_power_dbm, sc.zone.q);

    std::ostringstream extra;
    extra << "result.best_delta_p_rad = " << format_value(res.best.zone.delta_p) << "\n";
    extra << "result.best_l_p_m = " << format_value(res.best.zone.l_p) << "\n";
    extra << "result.best_kind = " << geom::zone_kind_name(res.best.zone.kind) << "\n";
    extra << "result.best_objective_bpcu = " << format_value(res.best.objective) << "\n";
    extra << "result.min_angle_rad = " << format_value(res.min_angle) << "\n";
    extra << "result.regime = "
          << (res.regime == opt::Regime::SpaceLimited ? "space-limited" : "shape-limited")
          << "\n";
    manifest_extra = extra.str();
    return 0;
}

int run_simulate(const LoadedConfig& cfg) {
    Engine engine(cfg.scenario, cfg.experiment.threads);
    const auto zone = cfg.scenario.zone.rule == ZoneAngleRule::Optimal
                          ? opt::optimize_shape(engine, cfg.scenario.zone.q,
                                                cfg.experiment.grid_resolution)
                                .best.zone
                          : engine.resolve_zone();
    opt::SweepPoint pt;
    pt.axis_value = cfg.scenario.rf.tx_power_dbm;
    pt.zone = zone;
    pt.feasible = true;
    pt.rates = engine.analytic_rates(zone);
    if (cfg.experiment.evaluator == opt::Evaluator::MonteCarlo) {
        mc::SimOptions mc_opts;
        mc_opts.seed = cfg.experiment.seed;
        mc_opts.trials = cfg.experiment.trials;
        mc_opts.threads = cfg.experiment.threads;
        pt.mc = engine.mc_rates(zone, mc_opts);
    }
    CsvWriter csv(cfg.experiment.output_path);
    csv.row(kSweepHeader);
    sweep_row(csv, cfg, "ptx_dbm", pt, cfg.scenario.rf.altitude_m, cfg.scenario.rf.tx_power_dbm,
              cfg.scenario.zone.q);
    return 0;
}

struct ValidatePoint {
    double altitude_m, q, ptx_dbm;
    analytic::EveMode mode;
};

int run_validate(const LoadedConfig& cfg) {
    // Six points spanning altitude, zone size, transmit power and both Eve
    // decoding assumptions.
    const std::vector<ValidatePoint> points = {
        {20.0, 0.05, 45.0, analytic::EveMode::WorstCase},
        {20.0, 0.20, 0.0, analytic::EveMode::WorstCase},
        {50.0, 0.05, 0.0, analytic::EveMode::WorstCase},
        {50.0, 0.20, 45.0, analytic::EveMode::WorstCase},
        {20.0, 0.20, 45.0, analytic::EveMode::BestCase},
        {50.0, 0.05, 45.0, analytic::EveMode::BestCase},
    };

    CsvWriter csv(cfg.experiment.output_path);
    csv.row({"point", "altitude_m", "q", "ptx_dbm", "eve_mode", "analytic_rate_bpcu",
             "mc_rate_bpcu", "rate_gap_bpcu", "analytic_outage_weak", "mc_outage_weak",
             "outage_weak_gap", "analytic_outage_strong", "mc_outage_strong",
             "outage_strong_gap", "mc_rate_halfwidth_bpcu", "pass"});

    bool all_pass = true;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto& vp = points[k];
        ScenarioConfig sc = cfg.scenario;
        sc.rf.altitude_m = vp.altitude_m;
        sc.rf.tx_power_dbm = vp.ptx_dbm;
        sc.zone.q = vp.q;
        sc.zone.rule = ZoneAngleRule::MinAngle;
        sc.noma.eve_mode = vp.mode;
        Engine engine(sc, cfg.experiment.threads);
        const auto zone = engine.resolve_zone();
        const auto ana = engine.analytic_rates(zone);
        mc::SimOptions mc_opts;
        mc_opts.seed = cfg.experiment.seed + k;
        mc_opts.trials = cfg.experiment.trials;
        mc_opts.threads = cfg.experiment.threads;
        const auto sim = engine.mc_rates(zone, mc_opts);

        const double rate_gap = std::abs(ana.total_bpcu - sim.rate_total);
        const double weak_gap = std::abs(ana.outage_weak - sim.outage_weak);
        const double strong_gap = std::abs(ana.outage_strong - sim.outage_strong);
        const bool pass = rate_gap <= kValidateRateGap && weak_gap <= kValidateOutageGap &&
                          strong_gap <= kValidateOutageGap;
        all_pass = all_pass && pass;

        csv.row({std::to_string(k + 1), format_value(vp.altitude_m), format_value(vp.q),
                 format_value(vp.ptx_dbm), eve_mode_name(vp.mode),
                 format_value(ana.total_bpcu), format_value(sim.rate_total),
                 format_value(rate_gap), format_value(ana.outage_weak),
                 format_value(sim.outage_weak), format_value(weak_gap),
                 format_value(ana.outage_strong), format_value(sim.outage_strong),
                 format_value(strong_gap), format_value(sim.hw_rate_total),
                 pass ? "true" : "false"});
    }
    return all_pass ? 0 : 1;
}

} // namespace

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

int run(const LoadedConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    int code = 0;
    std::string manifest_extra;
    try {
        const auto& kind = cfg.experiment.experiment;
        if (kind == "sweep-shape") code = run_sweep(cfg, opt::SweepAxis::DeltaP);
        else if (kind == "sweep-q") code = run_sweep(cfg, opt::SweepAxis::AreaFraction);
        else if (kind == "sweep-power") code = run_sweep(cfg, opt::SweepAxis::TxPower);
        else if (kind == "optimize") code = run_optimize(cfg, manifest_extra);
        else if (kind == "simulate") code = run_simulate(cfg);
        else if (kind == "validate") code = run_validate(cfg);
        else throw ConfigError("unknown experiment '" + kind + "'");
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(cfg, manifest_extra, wall);
    return code;
}

} // namespace uavsec::cli
