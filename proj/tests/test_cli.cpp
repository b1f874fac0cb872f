#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "uavsec/config.hpp"
#include "uavsec/errors.hpp"
#include "uavsec/experiments.hpp"
#include "uavsec/units.hpp"

using namespace uavsec;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("uavsec_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string write_file(const TempDir& dir, const std::string& name, const std::string& text) {
    const auto p = dir.file(name);
    std::ofstream out(p);
    out << text;
    return p;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("empty config yields the reference defaults") {
    const auto cfg = cli::load_config("");
    CHECK(cfg.scenario.region.l_i == 5.0);
    CHECK(cfg.scenario.region.l_u == 50.0);
    CHECK(cfg.scenario.region.delta_u == doctest::Approx(units::deg_to_rad(2.5)));
    CHECK(cfg.scenario.region.kappa == 3.0);
    CHECK(cfg.scenario.lambda_u == 1.0);
    CHECK(cfg.scenario.lambda_e == 0.1);
    CHECK(cfg.scenario.rf.antenna_count == 100);
    CHECK(cfg.scenario.rf.thermal_noise_dbm_per_hz == -174.0);
    CHECK(cfg.scenario.rf.bandwidth_hz == 100e6);
    CHECK(cfg.scenario.rf.noise_figure_db == 9.0);
    CHECK(cfg.scenario.rf.carrier_freq_ghz == 28.0);
    CHECK(cfg.scenario.rf.altitude_m == 20.0);
    CHECK(cfg.scenario.noma.weak_rank == 10);
    CHECK(cfg.scenario.noma.strong_rank == 1);
    CHECK(cfg.scenario.noma.beta_weak_sq == 0.75);
    CHECK(cfg.scenario.noma.beta_strong_sq == 0.25);
    CHECK(cfg.scenario.noma.target_weak_bpcu == 1.0);
    CHECK(cfg.scenario.noma.target_strong_bpcu == 4.0);
    CHECK(cfg.scenario.noma.eve_mode == analytic::EveMode::WorstCase);
}

TEST_CASE("config validation failures name the constraint") {
    TempDir dir;
    const auto beta = write_file(dir, "beta.cfg", "power_frac_weak = 0.6\n");
    CHECK_THROWS_WITH_AS(cli::load_config(beta),
                         doctest::Contains("power fractions must sum to 1"), ArgumentError);

    const auto kappa = write_file(dir, "kappa.cfg", "expansion_ratio = 0.5\n");
    CHECK_THROWS_WITH_AS(cli::load_config(kappa),
                         doctest::Contains("expansion ratio must exceed 1"), ArgumentError);

    const auto unknown = write_file(dir, "unknown.cfg", "\n# comment\nno_such_key = 3\n");
    try {
        cli::load_config(unknown);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("no_such_key") != std::string::npos);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    const auto bad_enum = write_file(dir, "enum.cfg", "eve_decoding = sideways\n");
    CHECK_THROWS_AS(cli::load_config(bad_enum), ConfigError);
    const auto junk = write_file(dir, "junk.cfg", "altitude_m = twenty\n");
    CHECK_THROWS_AS(cli::load_config(junk), ConfigError);
    CHECK_THROWS_AS(cli::load_config(dir.file("missing.cfg")), ConfigError);
}

TEST_CASE("presets select figure settings; file keys override them") {
    TempDir dir;
    const auto p = write_file(dir, "fig4.cfg",
                              "scenario = fig4\n"
                              "tx_power_dbm = 40\n");
    const auto cfg = cli::load_config(p);
    CHECK(cfg.experiment.scenario == "fig4");
    CHECK(cfg.experiment.experiment == "sweep-shape");
    CHECK(cfg.scenario.zone.q == 0.03);
    CHECK(cfg.scenario.rf.tx_power_dbm == 40.0);

    auto bad = cli::default_config();
    CHECK_THROWS_AS(cli::apply_preset(bad, "fig99"), ConfigError);
    for (const auto& name : cli::preset_names()) {
        auto c = cli::default_config();
        cli::apply_preset(c, name);
        c.scenario.validate();
    }
}

TEST_CASE("axis range keys expand into values") {
    TempDir dir;
    const auto p = write_file(dir, "axis.cfg",
                              "axis_from = -2\naxis_to = 2\naxis_step = 1\n");
    const auto cfg = cli::load_config(p);
    REQUIRE(cfg.experiment.axis_values.size() == 5);
    CHECK(cfg.experiment.axis_values.front() == -2.0);
    CHECK(cfg.experiment.axis_values.back() == 2.0);

    const auto list = write_file(dir, "list.cfg", "axis_values = 0.1, 0.2, 0.5\n");
    CHECK(cli::load_config(list).experiment.axis_values.size() == 3);

    const auto broken = write_file(dir, "broken.cfg", "axis_from = 0\n");
    CHECK_THROWS_AS(cli::load_config(broken), ConfigError);
}

TEST_CASE("sweep experiment writes a parseable, round-trippable CSV") {
    TempDir dir;
    auto cfg = cli::default_config();
    cfg.experiment.experiment = "sweep-power";
    cfg.experiment.axis_values = {40.0, 45.0};
    cfg.experiment.output_path = dir.file("sweep.csv");
    REQUIRE(cli::run(cfg) == 0);

    std::ifstream in(cfg.experiment.output_path);
    std::string header, row1;
    REQUIRE(std::getline(in, header));
    REQUIRE(std::getline(in, row1));
    CHECK(header.find("rate_total_bpcu") != std::string::npos);
    CHECK(header.find("outage_weak_prob") != std::string::npos);
    CHECK(header.find("ptx_dbm") != std::string::npos);

    // Round trip: parsing a formatted value and reformatting reproduces it.
    std::stringstream ss(row1);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
        ++col;
        if (cell.empty() || cell.find_first_not_of("0123456789+-.eE") != std::string::npos)
            continue;
        const double v = std::stod(cell);
        CHECK(cli::format_value(v) == cell);
    }
    CHECK(col >= 20);

    // Manifest records the resolved configuration.
    const auto manifest = slurp(cfg.experiment.output_path + ".manifest");
    CHECK(manifest.find("config.tx_power_dbm = 45") != std::string::npos);
    CHECK(manifest.find("config.expansion_ratio = 3") != std::string::npos);
    CHECK(manifest.find("seed = 1") != std::string::npos);
    CHECK(manifest.find("wall_time_s") != std::string::npos);
}

TEST_CASE("seeded simulate runs are byte-identical") {
    TempDir dir;
    auto cfg = cli::default_config();
    cfg.experiment.experiment = "simulate";
    cfg.experiment.evaluator = opt::Evaluator::MonteCarlo;
    cfg.experiment.trials = 20000;
    cfg.experiment.seed = 9;

    cfg.experiment.output_path = dir.file("a.csv");
    cfg.experiment.threads = 1;
    REQUIRE(cli::run(cfg) == 0);
    cfg.experiment.output_path = dir.file("b.csv");
    cfg.experiment.threads = 2;
    REQUIRE(cli::run(cfg) == 0);
    CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));

    cfg.experiment.seed = 10;
    cfg.experiment.output_path = dir.file("c.csv");
    REQUIRE(cli::run(cfg) == 0);
    CHECK(slurp(dir.file("a.csv")) != slurp(dir.file("c.csv")));
}

TEST_CASE("optimize experiment emits the frontier and the optimum") {
    TempDir dir;
    auto cfg = cli::default_config();
    cli::apply_preset(cfg, "fig4");
    cfg.experiment.experiment = "optimize";
    cfg.experiment.grid_resolution = 8;
    cfg.scenario.rf.antenna_count = 32;  // light settings: machinery test only
    cfg.scenario.region.l_u = 30.0;
    cfg.scenario.noma.weak_rank = 4;
    cfg.scenario.lambda_u = 0.05;
    cfg.experiment.output_path = dir.file("opt.csv");
    REQUIRE(cli::run(cfg) == 0);

    std::ifstream in(cfg.experiment.output_path);
    std::string line;
    std::getline(in, line);  // header
    int rows = 0;
    std::string last;
    while (std::getline(in, line)) {
        ++rows;
        last = line;
    }
    CHECK(rows >= 9);  // frontier plus the optimum row
    CHECK(last.find("optimum regime=") != std::string::npos);
    const auto manifest = slurp(cfg.experiment.output_path + ".manifest");
    CHECK(manifest.find("result.regime") != std::string::npos);
    CHECK(manifest.find("result.best_delta_p_rad") != std::string::npos);
}

TEST_CASE("unwritable output path fails with a config error") {
    auto cfg = cli::default_config();
    cfg.experiment.experiment = "sweep-power";
    cfg.experiment.axis_values = {45.0};
    cfg.experiment.output_path = "/nonexistent_dir_xyz/out.csv";
    CHECK(cli::run(cfg) == 2);
}

TEST_SUITE_END();
