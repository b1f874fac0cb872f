#include "uavsec/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "uavsec/errors.hpp"
#include "uavsec/units.hpp"

namespace uavsec::cli {

namespace {

[[noreturn]] void fail(const std::string& msg, int line_no) {
    std::ostringstream os;
    os << "config";
    if (line_no > 0) os << " (line " << line_no << ")";
    os << ": " << msg;
    throw ConfigError(os.str());
}

double parse_double(const std::string& v, const std::string& key, int line_no) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) fail("trailing characters in value for '" + key + "'", line_no);
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail("value for '" + key + "' is not a number: '" + v + "'", line_no);
    }
}

long parse_int(const std::string& v, const std::string& key, int line_no) {
    const double x = parse_double(v, key, line_no);
    if (std::abs(x - std::round(x)) > 1e-9) fail("'" + key + "' must be an integer", line_no);
    return static_cast<long>(std::llround(x));
}

bool parse_bool(const std::string& v, const std::string& key, int line_no) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail("'" + key + "' must be true or false", line_no);
}

std::vector<double> parse_list(const std::string& v, const std::string& key, int line_no) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        out.push_back(parse_double(item.substr(b, e - b + 1), key, line_no));
    }
    if (out.empty()) fail("'" + key + "' needs at least one value", line_no);
    return out;
}

} // namespace

LoadedConfig default_config() {
    LoadedConfig cfg;
    cfg.scenario.region = geom::RegionSpec{5.0, 50.0, units::deg_to_rad(2.5), 3.0};
    cfg.scenario.lambda_u = 1.0;
    cfg.scenario.lambda_e = 0.1;
    cfg.scenario.rf = prop::RfConfig{};
    cfg.scenario.noma = analytic::NomaConfig{};
    cfg.scenario.zone = ZoneSpec{0.05, ZoneAngleRule::MinAngle, 0.0, std::nullopt};
    return cfg;
}

std::vector<std::string> preset_names() {
    return {"table2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

void apply_preset(LoadedConfig& cfg, const std::string& name) {
    cfg = default_config();
    cfg.experiment.scenario = name;
    auto& sc = cfg.scenario;
    auto& ex = cfg.experiment;
    if (name == "table2") {
        ex.experiment = "simulate";
        ex.evaluator = opt::Evaluator::MonteCarlo;
        return;
    }
    if (name == "fig3") {
        sc.region.kappa = 2.0;
        sc.zone.q = 0.09;
        ex.experiment = "sweep-shape";
        return;
    }
    if (name == "fig4") {
        sc.zone.q = 0.03;
        ex.experiment = "sweep-shape";
        return;
    }
    if (name == "fig5") {
        ex.experiment = "sweep-q";
        return;
    }
    if (name == "fig6") {
        sc.zone.q = 0.2;
        ex.experiment = "sweep-power";
        return;
    }
    if (name == "fig7") {
        sc.rf.altitude_m = 50.0;
        sc.zone.q = 0.03;
        ex.experiment = "sweep-shape";
        return;
    }
    if (name == "fig8") {
        sc.rf.altitude_m = 50.0;
        sc.zone.q = 0.2;
        ex.experiment = "sweep-power";
        ex.evaluator = opt::Evaluator::MonteCarlo;
        ex.trials = 200000;
        return;
    }
    if (name == "fig9") {
        sc.zone.q = 0.05;
        sc.noma.eve_mode = analytic::EveMode::BestCase;
        ex.experiment = "sweep-power";
        return;
    }
    throw ConfigError("unknown scenario preset '" + name + "'");
}

void apply_key(LoadedConfig& cfg, const std::string& key, const std::string& value, int line_no) {
    auto& sc = cfg.scenario;
    auto& ex = cfg.experiment;

    if (key == "scenario") return;  // handled before the override pass
    if (key == "inner_radius_m") sc.region.l_i = parse_double(value, key, line_no);
    else if (key == "user_radius_m") sc.region.l_u = parse_double(value, key, line_no);
    else if (key == "user_half_angle_deg")
        sc.region.delta_u = units::deg_to_rad(parse_double(value, key, line_no));
    else if (key == "expansion_ratio") sc.region.kappa = parse_double(value, key, line_no);
    else if (key == "user_density_per_m2") sc.lambda_u = parse_double(value, key, line_no);
    else if (key == "eve_density_per_m2") sc.lambda_e = parse_double(value, key, line_no);
    else if (key == "antenna_count")
        sc.rf.antenna_count = static_cast<int>(parse_int(value, key, line_no));
    else if (key == "carrier_freq_ghz") sc.rf.carrier_freq_ghz = parse_double(value, key, line_no);
    else if (key == "bandwidth_hz") sc.rf.bandwidth_hz = parse_double(value, key, line_no);
    else if (key == "thermal_noise_dbm_per_hz")
        sc.rf.thermal_noise_dbm_per_hz = parse_double(value, key, line_no);
    else if (key == "noise_figure_db") sc.rf.noise_figure_db = parse_double(value, key, line_no);
    else if (key == "altitude_m") sc.rf.altitude_m = parse_double(value, key, line_no);
    else if (key == "tx_power_dbm") sc.rf.tx_power_dbm = parse_double(value, key, line_no);
    else if (key == "bs_antenna_gain_dbi")
        sc.rf.bs_antenna_gain_dbi = parse_double(value, key, line_no);
    else if (key == "apply_bs_antenna_gain")
        sc.rf.apply_bs_antenna_gain = parse_bool(value, key, line_no);
    else if (key == "weak_rank")
        sc.noma.weak_rank = static_cast<int>(parse_int(value, key, line_no));
    else if (key == "strong_rank")
        sc.noma.strong_rank = static_cast<int>(parse_int(value, key, line_no));
    else if (key == "power_frac_weak") sc.noma.beta_weak_sq = parse_double(value, key, line_no);
    else if (key == "power_frac_strong")
        sc.noma.beta_strong_sq = parse_double(value, key, line_no);
    else if (key == "target_rate_weak_bpcu")
        sc.noma.target_weak_bpcu = parse_double(value, key, line_no);
    else if (key == "target_rate_strong_bpcu")
        sc.noma.target_strong_bpcu = parse_double(value, key, line_no);
    else if (key == "eve_decoding") {
        if (value == "worst") sc.noma.eve_mode = analytic::EveMode::WorstCase;
        else if (value == "best") sc.noma.eve_mode = analytic::EveMode::BestCase;
        else fail("'eve_decoding' must be worst or best", line_no);
    } else if (key == "zone_area_fraction") sc.zone.q = parse_double(value, key, line_no);
    else if (key == "zone_angle_rule") {
        if (value == "min_angle") sc.zone.rule = ZoneAngleRule::MinAngle;
        else if (value == "fixed") sc.zone.rule = ZoneAngleRule::Fixed;
        else if (value == "optimal") sc.zone.rule = ZoneAngleRule::Optimal;
        else fail("'zone_angle_rule' must be min_angle, fixed or optimal", line_no);
    } else if (key == "zone_half_angle_deg")
        sc.zone.fixed_delta_p = units::deg_to_rad(parse_double(value, key, line_no));
    else if (key == "zone_kind") {
        if (value == "auto") sc.zone.fixed_kind.reset();
        else if (value == "type1") sc.zone.fixed_kind = geom::ZoneKind::TypeI;
        else if (value == "type2") sc.zone.fixed_kind = geom::ZoneKind::TypeII;
        else if (value == "type3") sc.zone.fixed_kind = geom::ZoneKind::TypeIII;
        else fail("'zone_kind' must be auto, type1, type2 or type3", line_no);
    } else if (key == "eve_mean_count_area") {
        if (value == "unprotected") sc.eve_mean_over_unprotected_area = true;
        else if (value == "full") sc.eve_mean_over_unprotected_area = false;
        else fail("'eve_mean_count_area' must be unprotected or full", line_no);
    } else if (key == "condition_on_eve_presence")
        sc.renormalize_eve_presence = parse_bool(value, key, line_no);
    else if (key == "experiment") {
        for (const char* k : {"validate", "sweep-shape", "sweep-q", "sweep-power", "optimize",
                              "simulate"}) {
            if (value == k) {
                ex.experiment = value;
                return;
            }
        }
        fail("unknown experiment '" + value + "'", line_no);
    } else if (key == "evaluator") {
        if (value == "analytic") ex.evaluator = opt::Evaluator::Analytic;
        else if (value == "mc") ex.evaluator = opt::Evaluator::MonteCarlo;
        else fail("'evaluator' must be analytic or mc", line_no);
    } else if (key == "seed")
        ex.seed = static_cast<std::uint64_t>(parse_int(value, key, line_no));
    else if (key == "trials") ex.trials = static_cast<std::size_t>(parse_int(value, key, line_no));
    else if (key == "threads")
        ex.threads = static_cast<unsigned>(parse_int(value, key, line_no));
    else if (key == "grid_resolution")
        ex.grid_resolution = static_cast<int>(parse_int(value, key, line_no));
    else if (key == "output_path") ex.output_path = value;
    else if (key == "axis_values") ex.axis_values = parse_list(value, key, line_no);
    else if (key == "axis_from") { ex.axis_from = parse_double(value, key, line_no); ex.has_axis_from = true; }
    else if (key == "axis_to") { ex.axis_to = parse_double(value, key, line_no); ex.has_axis_to = true; }
    else if (key == "axis_step") { ex.axis_step = parse_double(value, key, line_no); ex.has_axis_step = true; }
    else fail("unknown config key '" + key + "'", line_no);
}

void finalize(LoadedConfig& cfg) {
    auto& ex = cfg.experiment;
    if (ex.has_axis_from || ex.has_axis_to || ex.has_axis_step) {
        if (!(ex.has_axis_from && ex.has_axis_to && ex.has_axis_step) || !(ex.axis_step > 0.0))
            throw ConfigError("config: axis_from/axis_to/axis_step must all be set, step > 0");
        ex.axis_values.clear();
        for (double v = ex.axis_from; v <= ex.axis_to + 1e-12 * std::abs(ex.axis_step);
             v += ex.axis_step)
            ex.axis_values.push_back(v);
    }
    cfg.scenario.validate();
    if (cfg.experiment.grid_resolution < 8)
        throw ConfigError("config: grid_resolution must be at least 8");
    if (cfg.experiment.trials < 1) throw ConfigError("config: trials must be at least 1");
}

LoadedConfig load_config(const std::string& path) {
    LoadedConfig cfg = default_config();
    if (path.empty()) {
        finalize(cfg);
        return cfg;
    }
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");

    // First pass collects key/values; the scenario preset (if any) applies
    // before the other keys so file entries override preset values.
    std::vector<std::tuple<std::string, std::string, int>> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            const auto nonblank = line.find_first_not_of(" \t\r");
            if (nonblank != std::string::npos)
                fail("expected 'key = value', got '" + line + "'", line_no);
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string{};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail("missing key before '='", line_no);
        entries.emplace_back(key, value, line_no);
    }

    for (const auto& [key, value, ln] : entries) {
        if (key == "scenario") {
            apply_preset(cfg, value);
        }
        (void)ln;
    }
    for (const auto& [key, value, ln] : entries) apply_key(cfg, key, value, ln);
    finalize(cfg);
    return cfg;
}

} // namespace uavsec::cli
