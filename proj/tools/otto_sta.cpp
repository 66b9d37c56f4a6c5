// otto-sta: tau sweeps of the spin Otto engine, written as CSV.
//
//   otto-sta sweep --preset fig1 --out fig1.csv
//   otto-sta sweep --config run.yaml --out out.csv --variants sta,nonadiabatic
//
// Exit status: 0 success, 1 configuration or I/O error, 2 at least one row failed
// numerically (the CSV is still written, with the message in the error column).

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otto/error.hpp"
#include "otto/sweep.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRowFailure = 2;

struct SweepOptions {
    std::string preset;
    std::string config;
    std::string out;
    std::vector<std::string> variants;
    std::optional<double> tau_min, tau_max;
    std::optional<int> tau_points;
    std::string cost_metric;
    bool absolute_cost = false;
    bool signed_cost = false;
    std::optional<std::size_t> steps_per_stroke;
    std::optional<double> tau_ref;
    std::optional<unsigned> threads;
    bool quiet = false;
};

otto::SweepConfig resolve(const SweepOptions& o) {
    otto::SweepConfig config = o.config.empty() ? otto::preset_config(o.preset) : otto::load_config(o.config);
    if (!o.variants.empty()) {
        config.variants.clear();
        for (const auto& name : o.variants) config.variants.push_back(otto::parse_variant(name));
    }
    if (o.tau_min || o.tau_max || o.tau_points) {
        config.taus.clear();
        if (o.tau_min) config.tau_min = *o.tau_min;
        if (o.tau_max) config.tau_max = *o.tau_max;
        if (o.tau_points) config.tau_points = *o.tau_points;
    }
    if (!o.cost_metric.empty()) config.cost_metric = otto::parse_cost_metric(o.cost_metric);
    if (o.absolute_cost) config.absolute_cost = true;
    if (o.signed_cost) config.absolute_cost = false;
    if (o.steps_per_stroke) config.steps_per_stroke = *o.steps_per_stroke;
    if (o.tau_ref) config.tau_ref = *o.tau_ref;
    if (o.threads) config.threads = *o.threads;
    config.validate();
    return config;
}

int run_sweep_command(const SweepOptions& options) {
    otto::SweepConfig config;
    try {
        config = resolve(options);
    } catch (const otto::Error& e) {
        std::cerr << "otto-sta: " << e.what() << "\n";
        return kExitConfig;
    }

    const std::vector<otto::SweepRow> rows = otto::run_sweep(config);
    std::size_t failed = 0;
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            ++failed;
            std::cerr << "otto-sta: tau = " << otto::format_real(row.tau) << " " << otto::to_string(row.variant)
                      << ": " << row.error << "\n";
        }
    }

    try {
        if (options.out.empty() || options.out == "-") {
            otto::write_csv(rows, std::cout);
        } else {
            otto::emit_csv(rows, options.out);
            otto::emit_sidecar(config, options.out);
            if (!options.quiet) {
                std::cerr << "otto-sta: wrote " << rows.size() << " rows to " << options.out << " (config in "
                          << otto::sidecar_path(options.out) << ")\n";
            }
        }
    } catch (const otto::Error& e) {
        std::cerr << "otto-sta: " << e.what() << "\n";
        return kExitConfig;
    }
    return failed ? kExitRowFailure : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin quantum Otto engine with counterdiabatic driving: parameter sweeps"};
    app.require_subcommand(1);

    SweepOptions o;
    CLI::App* sweep = app.add_subcommand("sweep", "Run every variant over a grid of stroke times and write CSV");
    auto* preset = sweep->add_option("--preset", o.preset, "Compiled-in parameter set")
                       ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
    auto* config = sweep->add_option("--config", o.config, "YAML configuration file");
    preset->excludes(config);
    sweep->add_option("--out", o.out, "Output CSV path ('-' or omitted: stdout)");
    sweep->add_option("--variants", o.variants, "Subset of adiabatic,nonadiabatic,sta")->delimiter(',');
    sweep->add_option("--tau-min", o.tau_min, "Smallest stroke time of the log grid");
    sweep->add_option("--tau-max", o.tau_max, "Largest stroke time of the log grid");
    sweep->add_option("--tau-points", o.tau_points, "Number of log-spaced stroke times");
    sweep->add_option("--cost-metric", o.cost_metric, "derivative, mean or frobenius")
        ->check(CLI::IsMember({"derivative", "mean", "frobenius"}));
    auto* absolute = sweep->add_flag("--absolute-cost", o.absolute_cost, "Charge |cost| (default)");
    auto* signed_cost = sweep->add_flag("--signed-cost", o.signed_cost, "Charge the signed cost integral");
    absolute->excludes(signed_cost);
    sweep->add_option("--steps-per-stroke", o.steps_per_stroke, "Fixed number of propagation steps per stroke")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 40));
    sweep->add_option("--tau-ref", o.tau_ref, "Stroke time of the quoted adiabatic reference power");
    sweep->add_option("--threads", o.threads, "Worker threads (0: all cores)");
    sweep->add_flag("-q,--quiet", o.quiet, "No summary line on stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    if (o.preset.empty() && o.config.empty()) {
        std::cerr << "otto-sta: one of --preset or --config is required\n";
        return kExitConfig;
    }
    return run_sweep_command(o);
}
