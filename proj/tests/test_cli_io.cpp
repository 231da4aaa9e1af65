/**
 * (C) Copyright 2026 the memsyn authors.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "memsyn/cli.hpp"
#include "memsyn/config.hpp"
#include "memsyn/csv.hpp"
#include "memsyn/manifest.hpp"
#include "memsyn/units.hpp"

using namespace memsyn;

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MEMSYN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("si suffixes parse to base units", "[cli-io]") {
    CHECK(parse_si("20nA") == Catch::Approx(20e-9));
    CHECK(parse_si("8ms") == Catch::Approx(8e-3));
    CHECK(parse_si("6kohm") == Catch::Approx(6000.0));
    CHECK(parse_si("600ohm") == Catch::Approx(600.0));
    CHECK(parse_si("1.8V") == Catch::Approx(1.8));
    CHECK(parse_si("25.85mV") == Catch::Approx(0.02585));
    CHECK(parse_si("-500pA") == Catch::Approx(-500e-12));
    CHECK(parse_si("100Hz") == Catch::Approx(100.0));
    CHECK(parse_si("50kHz") == Catch::Approx(50e3));
    CHECK(parse_si("0.7") == Catch::Approx(0.7));
    CHECK(parse_si("1e-4") == Catch::Approx(1e-4));
    CHECK_THROWS_AS(parse_si("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_si("3.5xA"), std::invalid_argument);
    // format/parse agree
    CHECK(parse_si(format_si(20e-9, "A")) == Catch::Approx(20e-9));
    CHECK(parse_si(format_si(0.0, "s")) == 0.0);
}

TEST_CASE("empty config text yields the built-in defaults", "[cli-io]") {
    const AppConfig cfg = parse_config_text("");
    CHECK(cfg.circuit.v_rd == Catch::Approx(1.8));
    CHECK(cfg.circuit.i_b == Catch::Approx(20e-9));
    CHECK(cfg.neuron.tau_m == Catch::Approx(8.9e-3));
    CHECK(cfg.neuron.i_spkthr == Catch::Approx(60e-12));
    CHECK(cfg.device_high_cv.high_state.mean_ohm == Catch::Approx(6000.0));
    CHECK(cfg.device_high_cv.low_state.std_ohm == Catch::Approx(600.0));
    CHECK(cfg.device_low_cv.high_state.mean_ohm == Catch::Approx(100e3));
    CHECK(cfg.mn_s0 == Catch::Approx(-500e-12));
    CHECK(cfg.sp_alpha == Catch::Approx(500e-12));
    CHECK(cfg.mn_p_bernoulli == Catch::Approx(0.01));
    CHECK(cfg.sp_p_bernoulli == Catch::Approx(0.001));
    CHECK(cfg.tau_syn == Catch::Approx(8e-3));
}

TEST_CASE("unknown and malformed keys are rejected by name", "[cli-io]") {
    try {
        parse_config_text("[circuit]\nv_rdd = 1.8V\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("circuit.v_rdd") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("[circuit]\nv_rd 1.8\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[circuit\nv_rd = 1.8\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[circuit]\nv_rd = banana\n"), ConfigError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("emitted configuration round-trips exactly", "[cli-io]") {
    AppConfig cfg;
    cfg.seed = 12345;
    cfg.circuit.v_s = 1.05;
    cfg.mn_n_c = 4;
    const std::string text = emit_config(cfg);
    const AppConfig back = parse_config_text(text);
    CHECK(emit_config(back) == text);
    CHECK(back.seed == 12345);
    CHECK(back.circuit.v_s == Catch::Approx(1.05));
    CHECK(back.mn_n_c == 4);

    // Overrides layer on top of file values.
    AppConfig layered = parse_config_text("[circuit]\nv_s = 1.2V\n");
    CHECK(layered.circuit.v_s == Catch::Approx(1.2));
    apply_config_value(layered, "circuit.v_s", "0.95V");
    CHECK(layered.circuit.v_s == Catch::Approx(0.95));
}

TEST_CASE("csv files carry 15 significant digits", "[cli-io]") {
    const fs::path dir = fresh_dir("memsyn_csv_test");
    CsvTable table;
    table.header = {"a", "b", "c"};
    table.add_row({0.123456789012345, 4.2e-7, std::string("x,y")});
    table.add_row({-273.15, 1234567.0, std::string("plain")});
    const fs::path path = dir / "t.csv";
    write_csv(table, path.string());

    std::ifstream in(path);
    std::string header, line1, line2;
    std::getline(in, header);
    std::getline(in, line1);
    std::getline(in, line2);
    CHECK(header == "a,b,c");
    CHECK(line1.find("0.123456789012345") != std::string::npos);
    CHECK(line1.find("e-07") != std::string::npos);  // scientific below 1e-3
    CHECK(line1.find("\"x,y\"") != std::string::npos);

    // Round trip to 15 significant digits.
    const double parsed = std::stod(line1.substr(line1.find(",") + 1));
    CHECK(parsed == Catch::Approx(4.2e-7).epsilon(1e-14));

    // Empty table writes the header only.
    CsvTable empty;
    empty.header = {"only"};
    write_csv(empty, (dir / "e.csv").string());
    CHECK(slurp(dir / "e.csv") == "only\n");

    // Nonexistent directory: error, no partial file.
    CsvTable t2 = table;
    CHECK_THROWS_AS(write_csv(t2, (dir / "missing" / "t.csv").string()), std::runtime_error);
    CHECK_FALSE(fs::exists(dir / "missing"));
}

TEST_CASE("manifest round-trips and embeds a loadable config", "[cli-io]") {
    const fs::path dir = fresh_dir("memsyn_manifest_test");
    RunManifest m;
    m.subcommand = "variability";
    m.seeds = {7};
    m.outputs = {"variability.csv"};
    m.wall_clock_s = 1.25;
    AppConfig cfg;
    cfg.seed = 7;
    cfg.variability_n = 5000;
    m.config_text = emit_config(cfg);
    const fs::path path = dir / "manifest.json";
    write_manifest(m, path.string());
    CHECK_FALSE(fs::exists(dir / "manifest.json.tmp"));  // atomic rename

    const RunManifest back = load_manifest(path.string());
    CHECK(back.subcommand == "variability");
    CHECK(back.seeds == std::vector<std::uint64_t>{7});
    CHECK(back.artifact_version == std::string(kArtifactVersion));
    const AppConfig rebuilt = parse_config_text(back.config_text);
    CHECK(rebuilt.seed == 7);
    CHECK(rebuilt.variability_n == 5000);
}

TEST_CASE("dispatch returns 2 without a subcommand", "[cli-io]") {
    CHECK(run_cli("") == 2);
    CHECK(run_cli("no-such-subcommand") == 2);
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("emit-defaults") == 0);
}

TEST_CASE("emit-defaults output is parseable and complete", "[cli-io]") {
    const fs::path dir = fresh_dir("memsyn_defaults_test");
    const std::string cmd = std::string(MEMSYN_CLI_PATH) + " emit-defaults > " +
                            (dir / "defaults.ini").string() + " 2>/dev/null";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    const AppConfig cfg = load_config_file((dir / "defaults.ini").string());
    CHECK(emit_config(cfg) == slurp(dir / "defaults.ini"));
}

TEST_CASE("fixed seeds give byte-identical output files", "[cli-io]") {
    const fs::path a = fresh_dir("memsyn_det_a");
    const fs::path b = fresh_dir("memsyn_det_b");
    const std::string base = "circuit-sweep --seed 7 --out-dir ";
    REQUIRE(run_cli(base + a.string()) == 0);
    REQUIRE(run_cli(base + b.string()) == 0);
    for (const char* name : {"circuit_sweep.csv", "branch_current.csv"}) {
        CHECK(slurp(a / name) == slurp(b / name));
        CHECK(!slurp(a / name).empty());
    }
    // Manifest records the emitted files.
    const RunManifest m = load_manifest((a / "manifest.json").string());
    CHECK(m.outputs == std::vector<std::string>{"circuit_sweep.csv", "branch_current.csv"});
}

TEST_CASE("event and weight trajectories are exportable", "[cli-io]") {
    const fs::path dir = fresh_dir("memsyn_events_test");
    const std::string cmd =
        "single-pattern --seed 2 --seeds 1 "
        "--set single_pattern.n_trials=4 --set single_pattern.grid=2 "
        "--set single_pattern.eval_present=50ms "
        "--set network.record_events=true --set network.snapshot_interval=100ms "
        "--out-dir " + dir.string();
    REQUIRE(run_cli(cmd) == 0);
    const std::string events = slurp(dir / "single_pattern_events.csv");
    REQUIRE(!events.empty());
    CHECK(events.substr(0, events.find('\n')) == "time_s,source,kind");
    CHECK(events.find("output") != std::string::npos);
    CHECK(events.find("input") != std::string::npos);
    const std::string weights = slurp(dir / "single_pattern_weights.csv");
    CHECK(weights.substr(0, weights.find('\n')) == "time_s,synapse,weight");
    CHECK(std::count(weights.begin(), weights.end(), '\n') > 1);
}

TEST_CASE("default output directory comes from the environment", "[cli-io]") {
    const fs::path dir = fresh_dir("memsyn_envdir_test");
    const std::string cmd = "MEMSYN_OUT_DIR=" + dir.string() + " " + MEMSYN_CLI_PATH +
                            " circuit-sweep --seed 1 > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(dir / "circuit_sweep.csv"));
    CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("config file and --set flags reach the run", "[cli-io]") {
    const fs::path dir = fresh_dir("memsyn_cfg_flag_test");
    {
        std::ofstream cfg(dir / "small.ini");
        cfg << "[variability]\nn = 500\nsweep_n = 500\nsweep_seeds = 1\n";
        cfg << "sweep_ratios = 2,5\nsweep_state_cvs = 0.2\n";
    }
    const std::string cmd = "--config " + (dir / "small.ini").string() +
                            " variability --seed 3 --out-dir " + dir.string();
    REQUIRE(run_cli(cmd) == 0);
    const RunManifest m = load_manifest((dir / "manifest.json").string());
    const AppConfig cfg = parse_config_text(m.config_text);
    CHECK(cfg.variability_n == 500);
    CHECK(cfg.seed == 3);
    // Re-running from the manifest's embedded config reproduces the file.
    const std::string first = slurp(dir / "variability.csv");
    const fs::path dir2 = fresh_dir("memsyn_cfg_flag_test2");
    {
        std::ofstream cfg2(dir2 / "resolved.ini");
        cfg2 << m.config_text;
    }
    REQUIRE(run_cli("--config " + (dir2 / "resolved.ini").string() + " variability --out-dir " +
                    dir2.string()) == 0);
    CHECK(slurp(dir2 / "variability.csv") == first);
}
