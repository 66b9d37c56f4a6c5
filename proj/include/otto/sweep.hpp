// sweep.hpp - run configuration, tau sweeps and CSV output
//
// A SweepConfig is read from a flat YAML mapping (see README for the keys) or
// taken from one of the compiled-in presets fig1, fig2 and fig3.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "otto/thermo.hpp"

namespace otto {

enum class ModelKind { LandauZener, SingleSpin, XYTransverse, XYGeneral };

const char* to_string(ModelKind kind);

struct SweepConfig {
    std::string preset = "custom";
    ModelKind model = ModelKind::LandauZener;

    // Landau-Zener
    double b_x = 0.1;
    double b_z_initial = 0.5;
    double b_z_final = 0.0;
    // generic single spin
    FieldVector b_initial{0.1, 0.0, 0.5};
    FieldVector b_final{0.1, 0.0, 0.0};
    // transverse XY
    double gamma = 0.7;
    double h_initial = 0.5;
    double h_final = 0.0;
    // general XY
    XYCouplings xy_initial{1.7, 0.3, 0.5};
    XYCouplings xy_final{1.7, 0.3, 0.0};

    double t_hot = 10.0;
    double t_cold = 1.0;

    // Either an explicit list or 'tau_points' log-spaced values in [tau_min, tau_max].
    double tau_min = 0.001;
    double tau_max = 200.0;
    int tau_points = 60;
    std::vector<double> taus;

    std::vector<Variant> variants{Variant::Adiabatic, Variant::NonAdiabatic, Variant::Sta};
    CostMetric cost_metric = CostMetric::Derivative;
    bool absolute_cost = true;
    std::optional<std::size_t> steps_per_stroke;
    double tau_ref = 1e4;
    // 0 picks the hardware concurrency.
    unsigned threads = 0;

    MediumSpec medium() const;
    EngineParams engine_params(double tau) const;
    // taus if given, otherwise the log-spaced grid.
    std::vector<double> tau_grid() const;
    // Throws ConfigError listing every problem found.
    void validate() const;
};

std::vector<double> log_grid(double lo, double hi, int points);

// fig1, fig2 or fig3; throws ConfigError for anything else.
SweepConfig preset_config(const std::string& name);
bool is_preset_name(const std::string& name);

// A preset name or the path of a YAML file. A file may start from a preset
// ('preset: fig1') and override individual keys.
SweepConfig load_config(const std::string& name_or_path);
SweepConfig parse_config(const std::string& yaml_text, const std::string& origin = "<string>");

// Resolved configuration as YAML; parse_config of the result reproduces it.
std::string config_to_yaml(const SweepConfig& config);

Variant parse_variant(const std::string& name);
CostMetric parse_cost_metric(const std::string& name);

struct SweepRow {
    double tau = 0.0;
    Variant variant = Variant::Adiabatic;
    std::optional<CycleResult> result;
    std::optional<double> eta;
    double power = 0.0;
    std::string error;

    bool engine_ok() const { return result && result->engine_ok(); }
};

// Rows ordered by (tau, variant). A failing row keeps its error message and
// does not stop the sweep.
std::vector<SweepRow> run_sweep(const SweepConfig& config);

// 12 significant digits, the format used for every float in the CSV.
std::string format_real(double value);

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out);
// Throws IoError naming the path when it cannot be written.
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);
// <path>.meta.yaml next to the CSV; the file is itself a valid config.
std::string sidecar_path(const std::string& csv_path);
void emit_sidecar(const SweepConfig& config, const std::string& csv_path);

}  // namespace otto
