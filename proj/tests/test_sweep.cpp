#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "otto/error.hpp"
#include "otto/sweep.hpp"

#ifndef OTTO_TEST_DATA_DIR
#error "OTTO_TEST_DATA_DIR must point at tests/data"
#endif

using namespace otto;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream s(line);
    while (std::getline(s, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "otto_sta_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::string config_error_message(const std::string& yaml) {
    try {
        parse_config(yaml, "test.yaml");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("presets") {
    const SweepConfig f1 = load_config("fig1");
    CHECK(f1.model == ModelKind::LandauZener);
    CHECK(f1.b_x == 0.1);
    CHECK(f1.b_z_initial == 0.5);
    CHECK(f1.b_z_final == 0.0);
    CHECK(f1.t_hot == 10.0);
    CHECK(f1.t_cold == 1.0);
    const auto grid = f1.tau_grid();
    REQUIRE(grid.size() == 60);
    CHECK(grid.front() == 0.001);
    CHECK(grid.back() == 200.0);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        CHECK(grid[k] / grid[k - 1] == doctest::Approx(std::pow(200.0 / 0.001, 1.0 / 59)).epsilon(1e-12));
    }

    const SweepConfig f2 = load_config("fig2");
    CHECK(f2.b_x == 0.01);
    CHECK(f2.b_z_initial == 0.05);
    CHECK(f2.tau_grid().back() == 400.0);

    const SweepConfig f3 = load_config("fig3");
    CHECK(f3.model == ModelKind::XYTransverse);
    CHECK(f3.gamma == 0.7);
    CHECK(f3.h_initial == 0.5);
    CHECK(f3.h_final == 0.0);
    CHECK(f3.medium().transverse());

    CHECK_THROWS_AS(preset_config("fig4"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/run.yaml"), ConfigError);
}

TEST_CASE("config files override presets") {
    const SweepConfig c = parse_config(
        "preset: fig3\n"
        "taus: [0.5, 1.0]\n"
        "variants: [sta]\n"
        "cost_metric: mean\n"
        "absolute_cost: false\n"
        "steps_per_stroke: 4000\n");
    CHECK(c.model == ModelKind::XYTransverse);
    CHECK(c.gamma == 0.7);
    CHECK(c.tau_grid() == std::vector<double>{0.5, 1.0});
    REQUIRE(c.variants.size() == 1);
    CHECK(c.variants[0] == Variant::Sta);
    CHECK(c.cost_metric == CostMetric::Mean);
    CHECK_FALSE(c.absolute_cost);
    CHECK(c.steps_per_stroke == std::size_t{4000});

    const SweepConfig s = parse_config(
        "model: single_spin\n"
        "b_initial: [0.1, 0.2, 0.5]\n"
        "b_final: [0.1, 0.0, 0.0]\n"
        "tau_min: 0.1\n"
        "tau_max: 1\n"
        "tau_points: 3\n");
    CHECK(s.model == ModelKind::SingleSpin);
    CHECK(s.b_initial.y() == 0.2);
    CHECK(s.tau_grid().size() == 3);
}

TEST_CASE("invalid configs report every problem with its line") {
    const std::string msg = config_error_message(
        "preset: fig1\n"
        "t_hot: hot\n"
        "colour: blue\n"
        "variants: [sta, fast]\n");
    CHECK(msg.find("test.yaml:2") != std::string::npos);
    CHECK(msg.find("t_hot") != std::string::npos);
    CHECK(msg.find("test.yaml:3") != std::string::npos);
    CHECK(msg.find("colour") != std::string::npos);
    CHECK(msg.find("fast") != std::string::npos);

    const std::string invariants = config_error_message(
        "t_hot: 1\n"
        "t_cold: 2\n"
        "variants: []\n"
        "tau_points: 0\n");
    CHECK(invariants.find("t_hot must exceed t_cold") != std::string::npos);
    CHECK(invariants.find("variants must not be empty") != std::string::npos);
    CHECK(invariants.find("tau grid is empty") != std::string::npos);

    CHECK(config_error_message("taus: []\n").find("tau grid is empty") != std::string::npos);
    CHECK(config_error_message("taus: [1]\ntau_points: 4\n").find("either") != std::string::npos);
    CHECK(config_error_message("taus: [1, -2]\n").find("positive") != std::string::npos);
    CHECK(config_error_message("model: lz\nb_x: 0\n").find("b_x") != std::string::npos);
    CHECK(config_error_message("t_hot: [1\n").find("parse error") != std::string::npos);
    CHECK_FALSE(config_error_message("- 1\n- 2\n").empty());
}

TEST_CASE("resolved config round-trips through YAML") {
    for (const char* name : {"fig1", "fig2", "fig3"}) {
        SweepConfig c = preset_config(name);
        c.variants = {Variant::Sta, Variant::Adiabatic};
        c.absolute_cost = false;
        c.steps_per_stroke = 3000;
        const SweepConfig back = parse_config(config_to_yaml(c));
        CHECK(back.tau_grid() == c.tau_grid());
        CHECK(back.medium().initial_hamiltonian() == c.medium().initial_hamiltonian());
        CHECK(back.medium().final_hamiltonian() == c.medium().final_hamiltonian());
        CHECK(back.variants == c.variants);
        CHECK(back.absolute_cost == c.absolute_cost);
        CHECK(back.steps_per_stroke == c.steps_per_stroke);
        CHECK(config_to_yaml(back) == config_to_yaml(c));
    }
}

TEST_CASE("sweep rows are ordered and errors stay in their row") {
    SweepConfig c = preset_config("fig1");
    c.taus = {2.0, 0.01, 0.5};
    c.variants = {Variant::Sta, Variant::Adiabatic};
    c.threads = 3;
    const auto rows = run_sweep(c);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].tau == 0.01);
    CHECK(rows[0].variant == Variant::Adiabatic);
    CHECK(rows[1].variant == Variant::Sta);
    CHECK(rows[5].tau == 2.0);

    // a step budget too small to converge fails only the propagating rows
    SweepConfig bad = preset_config("fig1");
    bad.taus = {1.0};
    bad.steps_per_stroke = 2;
    const auto bad_rows = run_sweep(bad);
    REQUIRE(bad_rows.size() == 3);
    for (const auto& row : bad_rows) {
        if (row.error.empty()) CHECK(std::abs(row.result->closure()) < 1e-8);
    }

    SweepConfig empty = preset_config("fig1");
    empty.variants.clear();
    CHECK_THROWS_AS(run_sweep(empty), ConfigError);
}

TEST_CASE("CSV output") {
    SweepConfig c = preset_config("fig1");
    c.taus = {1.0};
    c.variants = {Variant::Adiabatic};
    const auto rows = run_sweep(c);
    const fs::path path = scratch("single.csv");
    emit_csv(rows, path.string());
    const std::string text = read_file(path);
    std::stringstream lines(text);
    std::string header, row, extra;
    std::getline(lines, header);
    std::getline(lines, row);
    CHECK_FALSE(std::getline(lines, extra));
    CHECK(header == "tau,variant,Q1,W_ext,eta,power,cost_expansion,cost_compression,engine_ok,error");
    const auto cells = split(row);
    REQUIRE(cells.size() == 10);
    CHECK(cells[0] == "1");
    CHECK(cells[1] == "adiabatic");
    CHECK(cells[8] == "true");
    CHECK(cells[9].empty());

    CHECK(format_real(0.1 + 0.2) == "0.3");
    CHECK(format_real(1.0 / 3.0) == "0.333333333333");

    CHECK_THROWS_AS(emit_csv(rows, "/nonexistent-dir/out.csv"), IoError);
    try {
        emit_csv(rows, "/nonexistent-dir/out.csv");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/nonexistent-dir/out.csv") != std::string::npos);
    }
    CHECK_THROWS_AS(emit_csv({}, path.string()), IoError);

    emit_sidecar(c, path.string());
    const SweepConfig echoed = load_config(sidecar_path(path.string()));
    CHECK(echoed.tau_grid() == c.tau_grid());
}

TEST_CASE("error messages are quoted in the CSV") {
    SweepRow row;
    row.tau = 1.0;
    row.error = "bad, \"worse\"";
    std::ostringstream out;
    write_csv({row}, out);
    CHECK(out.str().find(",false,\"bad, \"\"worse\"\"\"\n") != std::string::npos);
}

TEST_CASE("sweeps are deterministic across runs and thread counts") {
    SweepConfig c = preset_config("fig3");
    c.taus = log_grid(0.001, 5.0, 5);
    c.threads = 1;
    std::ostringstream a, b;
    write_csv(run_sweep(c), a);
    c.threads = 4;
    write_csv(run_sweep(c), b);
    CHECK(a.str() == b.str());
}

TEST_CASE("fig1 sweep matches the golden file") {
    const fs::path golden = fs::path(OTTO_TEST_DATA_DIR) / "fig1_golden.csv";
    REQUIRE(fs::exists(golden));
    std::ostringstream produced;
    write_csv(run_sweep(preset_config("fig1")), produced);

    std::stringstream want(read_file(golden)), got(produced.str());
    std::string lw, lg;
    std::size_t line = 0;
    while (std::getline(want, lw)) {
        ++line;
        REQUIRE(std::getline(got, lg));
        const auto cw = split(lw), cg = split(lg);
        REQUIRE(cw.size() == cg.size());
        for (std::size_t k = 0; k < cw.size(); ++k) {
            if (line == 1 || k == 1 || k >= 8 || cw[k].empty() || cg[k].empty()) {
                CHECK_MESSAGE(cw[k] == cg[k], "line " << line << " column " << k);
                continue;
            }
            const double w = std::stod(cw[k]), g = std::stod(cg[k]);
            CHECK_MESSAGE(std::abs(w - g) <= 1e-9 * std::max(1.0, std::abs(w)), "line " << line << " column " << k);
        }
    }
    CHECK_FALSE(std::getline(got, lg));
}

}  // TEST_SUITE
