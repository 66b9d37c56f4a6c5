#include "otto/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "otto/error.hpp"

namespace otto {

namespace {

// Diagnostics collected while reading a config; reported together.
struct Problems {
    std::vector<std::string> items;
    void add(std::string message) { items.push_back(std::move(message)); }
    void raise(const std::string& header) const {
        if (items.empty()) return;
        std::ostringstream os;
        os << header;
        for (const auto& item : items) os << "\n  - " << item;
        throw ConfigError(os.str());
    }
};

std::string where(const YAML::Node& node, const std::string& origin) {
    std::ostringstream os;
    os << origin << ":" << node.Mark().line + 1;
    return os.str();
}

template <typename T>
bool read_scalar(const YAML::Node& node, const std::string& key, const std::string& origin, T& out,
                 Problems& problems) {
    try {
        out = node.as<T>();
        return true;
    } catch (const YAML::Exception&) {
        problems.add(where(node, origin) + ": field '" + key + "' has an invalid value");
        return false;
    }
}

bool read_vector(const YAML::Node& node, const std::string& key, const std::string& origin, FieldVector& out,
                 Problems& problems) {
    std::vector<double> values;
    if (!node.IsSequence() || !read_scalar(node, key, origin, values, problems) || values.size() != 3) {
        problems.add(where(node, origin) + ": field '" + key + "' must be a list of three numbers");
        return false;
    }
    out = FieldVector(values[0], values[1], values[2]);
    return true;
}

ModelKind parse_model(const std::string& name) {
    if (name == "landau_zener" || name == "lz") return ModelKind::LandauZener;
    if (name == "single_spin") return ModelKind::SingleSpin;
    if (name == "xy") return ModelKind::XYTransverse;
    if (name == "xy_general") return ModelKind::XYGeneral;
    throw ConfigError("unknown model '" + name + "' (expected landau_zener, single_spin, xy or xy_general)");
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys{
        "preset",      "model",       "b_x",         "b_z_initial", "b_z_final",   "b_initial",     "b_final",
        "gamma",       "h_initial",   "h_final",     "j_x_initial", "j_x_final",   "j_y_initial",   "j_y_final",
        "t_hot",       "t_cold",      "tau_min",     "tau_max",     "tau_points",  "taus",          "variants",
        "cost_metric", "absolute_cost", "steps_per_stroke", "tau_ref", "threads"};
    return keys;
}

}  // namespace

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::LandauZener: return "landau_zener";
        case ModelKind::SingleSpin: return "single_spin";
        case ModelKind::XYTransverse: return "xy";
        case ModelKind::XYGeneral: return "xy_general";
    }
    return "?";
}

MediumSpec SweepConfig::medium() const {
    switch (model) {
        case ModelKind::LandauZener: return MediumSpec::landau_zener(b_x, b_z_initial, b_z_final);
        case ModelKind::SingleSpin: return MediumSpec::single_spin(b_initial, b_final);
        case ModelKind::XYTransverse: return MediumSpec::xy_transverse(gamma, h_initial, h_final);
        case ModelKind::XYGeneral: return MediumSpec::xy_general(xy_initial, xy_final);
    }
    throw ConfigError("unknown model");
}

EngineParams SweepConfig::engine_params(double tau) const {
    EngineParams params{medium()};
    params.t_hot = t_hot;
    params.t_cold = t_cold;
    params.tau = tau;
    params.steps.fixed_steps = steps_per_stroke;
    params.cost_metric = cost_metric;
    params.absolute_cost = absolute_cost;
    params.tau_ref = tau_ref;
    return params;
}

std::vector<double> SweepConfig::tau_grid() const {
    if (!taus.empty()) return taus;
    return log_grid(tau_min, tau_max, tau_points);
}

void SweepConfig::validate() const {
    Problems problems;
    if (!std::isfinite(t_hot) || !std::isfinite(t_cold)) problems.add("temperatures must be finite");
    if (!(t_cold > 0.0)) problems.add("t_cold must be positive");
    if (!(t_hot > t_cold)) problems.add("t_hot must exceed t_cold");
    if (taus.empty()) {
        if (!(tau_min > 0.0) || !std::isfinite(tau_min)) problems.add("tau_min must be positive");
        if (!(tau_max >= tau_min) || !std::isfinite(tau_max)) problems.add("tau_max must be finite and >= tau_min");
        if (tau_points < 1) problems.add("tau grid is empty (tau_points < 1)");
    }
    for (double tau : taus) {
        if (!(tau > 0.0) || !std::isfinite(tau)) {
            problems.add("every tau must be positive and finite, got " + format_real(tau));
            break;
        }
    }
    if (variants.empty()) problems.add("variants must not be empty");
    if (!(tau_ref > 0.0) || !std::isfinite(tau_ref)) problems.add("tau_ref must be positive");
    if (steps_per_stroke && *steps_per_stroke < 2) problems.add("steps_per_stroke must be at least 2");
    try {
        (void)medium();
    } catch (const Error& e) {
        problems.add(std::string("model parameters: ") + e.what());
    }
    problems.raise("invalid configuration:");
}

std::vector<double> log_grid(double lo, double hi, int points) {
    if (points < 1) throw ConfigError("log_grid: need at least one point");
    if (!(lo > 0.0) || !(hi >= lo)) throw ConfigError("log_grid: need 0 < lo <= hi");
    std::vector<double> grid(static_cast<std::size_t>(points));
    if (points == 1) {
        grid[0] = lo;
        return grid;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (int k = 0; k < points; ++k) grid[k] = std::exp(a + (b - a) * k / (points - 1));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

bool is_preset_name(const std::string& name) { return name == "fig1" || name == "fig2" || name == "fig3"; }

SweepConfig preset_config(const std::string& name) {
    SweepConfig c;
    c.preset = name;
    c.t_hot = 10.0;
    c.t_cold = 1.0;
    c.tau_min = 0.001;
    c.tau_max = 200.0;
    c.tau_points = 60;
    if (name == "fig1") {
        c.model = ModelKind::LandauZener;
        c.b_x = 0.1;
        c.b_z_initial = 0.5;
        c.b_z_final = 0.0;
    } else if (name == "fig2") {
        c.model = ModelKind::LandauZener;
        c.b_x = 0.01;
        c.b_z_initial = 0.05;
        c.b_z_final = 0.0;
        c.tau_max = 400.0;
    } else if (name == "fig3") {
        c.model = ModelKind::XYTransverse;
        c.gamma = 0.7;
        c.h_initial = 0.5;
        c.h_final = 0.0;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected fig1, fig2 or fig3)");
    }
    return c;
}

Variant parse_variant(const std::string& name) {
    if (name == "adiabatic") return Variant::Adiabatic;
    if (name == "nonadiabatic") return Variant::NonAdiabatic;
    if (name == "sta") return Variant::Sta;
    throw ConfigError("unknown variant '" + name + "' (expected adiabatic, nonadiabatic or sta)");
}

CostMetric parse_cost_metric(const std::string& name) {
    if (name == "derivative") return CostMetric::Derivative;
    if (name == "mean") return CostMetric::Mean;
    if (name == "frobenius") return CostMetric::Frobenius;
    throw ConfigError("unknown cost metric '" + name + "' (expected derivative, mean or frobenius)");
}

SweepConfig parse_config(const std::string& yaml_text, const std::string& origin) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::ParserException& e) {
        std::ostringstream os;
        os << origin << ":" << e.mark.line + 1 << ": parse error: " << e.msg;
        throw ConfigError(os.str());
    }
    if (!root.IsMap()) throw ConfigError(origin + ": expected a mapping of configuration keys");

    Problems problems;
    SweepConfig c;
    if (const YAML::Node p = root["preset"]) {
        std::string name;
        if (read_scalar(p, "preset", origin, name, problems) && name != "custom") {
            if (is_preset_name(name)) {
                c = preset_config(name);
            } else {
                problems.add(where(p, origin) + ": unknown preset '" + name + "'");
            }
        }
    }

    bool grid_touched = false;
    for (const auto& entry : root) {
        const std::string key = entry.first.as<std::string>();
        const YAML::Node& v = entry.second;
        const auto& keys = known_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            problems.add(where(entry.first, origin) + ": unknown key '" + key + "'");
            continue;
        }
        if (key == "preset") continue;
        if (key == "model") {
            std::string name;
            if (read_scalar(v, key, origin, name, problems)) {
                try {
                    c.model = parse_model(name);
                } catch (const ConfigError& e) {
                    problems.add(where(v, origin) + ": " + e.what());
                }
            }
        } else if (key == "b_x") {
            read_scalar(v, key, origin, c.b_x, problems);
        } else if (key == "b_z_initial") {
            read_scalar(v, key, origin, c.b_z_initial, problems);
        } else if (key == "b_z_final") {
            read_scalar(v, key, origin, c.b_z_final, problems);
        } else if (key == "b_initial") {
            read_vector(v, key, origin, c.b_initial, problems);
        } else if (key == "b_final") {
            read_vector(v, key, origin, c.b_final, problems);
        } else if (key == "gamma") {
            read_scalar(v, key, origin, c.gamma, problems);
        } else if (key == "h_initial") {
            read_scalar(v, key, origin, c.h_initial, problems);
            c.xy_initial.h = c.h_initial;
        } else if (key == "h_final") {
            read_scalar(v, key, origin, c.h_final, problems);
            c.xy_final.h = c.h_final;
        } else if (key == "j_x_initial") {
            read_scalar(v, key, origin, c.xy_initial.j_x, problems);
        } else if (key == "j_x_final") {
            read_scalar(v, key, origin, c.xy_final.j_x, problems);
        } else if (key == "j_y_initial") {
            read_scalar(v, key, origin, c.xy_initial.j_y, problems);
        } else if (key == "j_y_final") {
            read_scalar(v, key, origin, c.xy_final.j_y, problems);
        } else if (key == "t_hot") {
            read_scalar(v, key, origin, c.t_hot, problems);
        } else if (key == "t_cold") {
            read_scalar(v, key, origin, c.t_cold, problems);
        } else if (key == "tau_min") {
            grid_touched = read_scalar(v, key, origin, c.tau_min, problems) || grid_touched;
        } else if (key == "tau_max") {
            grid_touched = read_scalar(v, key, origin, c.tau_max, problems) || grid_touched;
        } else if (key == "tau_points") {
            grid_touched = read_scalar(v, key, origin, c.tau_points, problems) || grid_touched;
        } else if (key == "taus") {
            if (!v.IsSequence()) {
                problems.add(where(v, origin) + ": field 'taus' must be a list of numbers");
            } else if (v.size() == 0) {
                problems.add(where(v, origin) + ": tau grid is empty (taus is an empty list)");
            } else {
                read_scalar(v, key, origin, c.taus, problems);
            }
        } else if (key == "variants") {
            std::vector<std::string> names;
            if (v.IsScalar()) names.push_back(v.as<std::string>());
            else if (!read_scalar(v, key, origin, names, problems)) continue;
            c.variants.clear();
            for (const auto& name : names) {
                try {
                    c.variants.push_back(parse_variant(name));
                } catch (const ConfigError& e) {
                    problems.add(where(v, origin) + ": " + e.what());
                }
            }
        } else if (key == "cost_metric") {
            std::string name;
            if (read_scalar(v, key, origin, name, problems)) {
                try {
                    c.cost_metric = parse_cost_metric(name);
                } catch (const ConfigError& e) {
                    problems.add(where(v, origin) + ": " + e.what());
                }
            }
        } else if (key == "absolute_cost") {
            read_scalar(v, key, origin, c.absolute_cost, problems);
        } else if (key == "steps_per_stroke") {
            long long steps = 0;
            if (read_scalar(v, key, origin, steps, problems)) {
                if (steps < 2) problems.add(where(v, origin) + ": steps_per_stroke must be at least 2");
                else c.steps_per_stroke = static_cast<std::size_t>(steps);
            }
        } else if (key == "tau_ref") {
            read_scalar(v, key, origin, c.tau_ref, problems);
        } else if (key == "threads") {
            read_scalar(v, key, origin, c.threads, problems);
        }
    }
    if (grid_touched && root["taus"]) problems.add(origin + ": give either 'taus' or the tau_min/tau_max/tau_points grid");
    problems.raise(origin + ": configuration errors:");
    c.validate();
    return c;
}

SweepConfig load_config(const std::string& name_or_path) {
    if (is_preset_name(name_or_path)) return preset_config(name_or_path);
    std::ifstream in(name_or_path);
    if (!in) throw ConfigError("cannot open config file '" + name_or_path + "' (and it is not a preset name)");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), name_or_path);
}

std::string config_to_yaml(const SweepConfig& c) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "preset" << YAML::Value << c.preset;
    out << YAML::Key << "model" << YAML::Value << to_string(c.model);
    switch (c.model) {
        case ModelKind::LandauZener:
            out << YAML::Key << "b_x" << YAML::Value << c.b_x;
            out << YAML::Key << "b_z_initial" << YAML::Value << c.b_z_initial;
            out << YAML::Key << "b_z_final" << YAML::Value << c.b_z_final;
            break;
        case ModelKind::SingleSpin:
            out << YAML::Key << "b_initial" << YAML::Value << YAML::Flow
                << std::vector<double>{c.b_initial.x(), c.b_initial.y(), c.b_initial.z()};
            out << YAML::Key << "b_final" << YAML::Value << YAML::Flow
                << std::vector<double>{c.b_final.x(), c.b_final.y(), c.b_final.z()};
            break;
        case ModelKind::XYTransverse:
            out << YAML::Key << "gamma" << YAML::Value << c.gamma;
            out << YAML::Key << "h_initial" << YAML::Value << c.h_initial;
            out << YAML::Key << "h_final" << YAML::Value << c.h_final;
            break;
        case ModelKind::XYGeneral:
            out << YAML::Key << "j_x_initial" << YAML::Value << c.xy_initial.j_x;
            out << YAML::Key << "j_y_initial" << YAML::Value << c.xy_initial.j_y;
            out << YAML::Key << "h_initial" << YAML::Value << c.xy_initial.h;
            out << YAML::Key << "j_x_final" << YAML::Value << c.xy_final.j_x;
            out << YAML::Key << "j_y_final" << YAML::Value << c.xy_final.j_y;
            out << YAML::Key << "h_final" << YAML::Value << c.xy_final.h;
            break;
    }
    out << YAML::Key << "t_hot" << YAML::Value << c.t_hot;
    out << YAML::Key << "t_cold" << YAML::Value << c.t_cold;
    out << YAML::Key << "taus" << YAML::Value << YAML::Flow << c.tau_grid();
    std::vector<std::string> variants;
    for (Variant v : c.variants) variants.emplace_back(to_string(v));
    out << YAML::Key << "variants" << YAML::Value << YAML::Flow << variants;
    out << YAML::Key << "cost_metric" << YAML::Value << to_string(c.cost_metric);
    out << YAML::Key << "absolute_cost" << YAML::Value << c.absolute_cost;
    if (c.steps_per_stroke) {
        out << YAML::Key << "steps_per_stroke" << YAML::Value << static_cast<unsigned long long>(*c.steps_per_stroke);
    }
    out << YAML::Key << "tau_ref" << YAML::Value << c.tau_ref;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    config.validate();
    const std::vector<double> taus = config.tau_grid();
    std::vector<SweepRow> rows;
    rows.reserve(taus.size() * config.variants.size());
    for (double tau : taus) {
        for (Variant v : config.variants) {
            SweepRow row;
            row.tau = tau;
            row.variant = v;
            rows.push_back(row);
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            SweepRow& row = rows[i];
            try {
                row.result = run_cycle(config.engine_params(row.tau), row.variant);
                row.eta = efficiency(*row.result);
                row.power = power(*row.result);
            } catch (const std::exception& e) {
                row.result.reset();
                row.error = e.what();
            }
        }
    };
    unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(rows.size(), 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        if (a.tau != b.tau) return a.tau < b.tau;
        return static_cast<int>(a.variant) < static_cast<int>(b.variant);
    });
    return rows;
}

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

namespace {

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char ch : text) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + "\"";
}

}  // namespace

void write_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "tau,variant,Q1,W_ext,eta,power,cost_expansion,cost_compression,engine_ok,error\n";
    for (const auto& row : rows) {
        out << format_real(row.tau) << ',' << to_string(row.variant) << ',';
        if (row.result) {
            const CycleResult& r = *row.result;
            out << format_real(r.q1) << ',' << format_real(r.w_ext) << ','
                << (row.eta ? format_real(*row.eta) : std::string()) << ',' << format_real(row.power) << ','
                << format_real(r.cost_expansion) << ',' << format_real(r.cost_compression) << ','
                << (r.engine_ok() ? "true" : "false") << ',';
        } else {
            out << ",,,,,,false,";
        }
        out << csv_field(row.error) << '\n';
    }
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    if (rows.empty()) throw IoError("emit_csv: refusing to write an empty table to '" + path + "'");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_csv(rows, out);
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string sidecar_path(const std::string& csv_path) { return csv_path + ".meta.yaml"; }

void emit_sidecar(const SweepConfig& config, const std::string& csv_path) {
    const std::string path = sidecar_path(csv_path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << config_to_yaml(config);
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace otto
