#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "otto/dynamics.hpp"
#include "otto/error.hpp"
#include "otto/sweep.hpp"
#include "otto/thermo.hpp"

namespace py = pybind11;
using namespace otto;

namespace {

py::dict record_dict(const StrokeRecord& r) {
    py::dict d;
    d["delta_u"] = r.delta_u;
    d["heat"] = r.heat;
    d["cd_cost"] = r.cd_cost;
    return d;
}

py::dict cycle_dict(const CycleResult& r) {
    py::dict d;
    d["variant"] = to_string(r.variant);
    d["tau"] = r.tau;
    d["Q1"] = r.q1;
    d["Q3"] = r.q3;
    d["W_ext"] = r.w_ext;
    d["cost_expansion"] = r.cost_expansion;
    d["cost_compression"] = r.cost_compression;
    d["eta"] = efficiency(r);
    d["power"] = power(r);
    d["engine_ok"] = r.engine_ok();
    d["closure"] = r.closure();
    d["strokes"] = py::make_tuple(record_dict(r.heating), record_dict(r.expansion), record_dict(r.cooling),
                                  record_dict(r.compression));
    return d;
}

SweepConfig resolve_config(const std::string& name_or_path, const py::kwargs& overrides) {
    SweepConfig c = load_config(name_or_path);
    for (const auto& item : overrides) {
        const std::string key = py::str(item.first);
        if (key == "tau") c.taus = {item.second.cast<double>()};
        else if (key == "taus") c.taus = item.second.cast<std::vector<double>>();
        else if (key == "tau_min" || key == "tau_max" || key == "tau_points") {
            if (key == "tau_min") c.tau_min = item.second.cast<double>();
            if (key == "tau_max") c.tau_max = item.second.cast<double>();
            if (key == "tau_points") c.tau_points = item.second.cast<decltype(c.tau_points)>();
            c.taus.clear();
        }
        else if (key == "variants") {
            c.variants.clear();
            for (const auto& name : item.second.cast<std::vector<std::string>>()) c.variants.push_back(parse_variant(name));
        } else if (key == "cost_metric") c.cost_metric = parse_cost_metric(item.second.cast<std::string>());
        else if (key == "absolute_cost") c.absolute_cost = item.second.cast<bool>();
        else if (key == "steps_per_stroke") c.steps_per_stroke = item.second.cast<std::size_t>();
        else if (key == "tau_ref") c.tau_ref = item.second.cast<double>();
        else if (key == "threads") c.threads = item.second.cast<unsigned>();
        else throw ConfigError("unknown override '" + key + "'");
    }
    c.validate();
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spin quantum Otto engine with counterdiabatic driving";

    static py::exception<Error> base(m, "OttoError", PyExc_RuntimeError);
    static py::exception<ConfigError> config_error(m, "ConfigError", base.ptr());
    static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
    static py::exception<SingularityError> singularity_error(m, "SingularityError", base.ptr());
    static py::exception<NumericError> numeric_error(m, "NumericError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ConfigError& e) {
            py::set_error(config_error, e.what());
        } catch (const DomainError& e) {
            py::set_error(domain_error, e.what());
        } catch (const SingularityError& e) {
            py::set_error(singularity_error, e.what());
        } catch (const NumericError& e) {
            py::set_error(numeric_error, e.what());
        } catch (const Error& e) {
            py::set_error(base, e.what());
        }
    });

    m.def("gibbs_state", &gibbs_state, py::arg("h"), py::arg("temperature"));
    m.def("lz_h0", &lz_h0, py::arg("b_x"), py::arg("b_z"));
    m.def("lz_cd", &lz_cd, py::arg("b_x"), py::arg("b_z"), py::arg("b_z_dot"));
    m.def("xy_h0", [](double j_x, double j_y, double h) { return xy_h0({j_x, j_y, h}); }, py::arg("j_x"),
          py::arg("j_y"), py::arg("h"));
    m.def("xy_cd_transverse", &xy_cd_transverse, py::arg("gamma"), py::arg("h"), py::arg("h_dot"));
    m.def("berry_cd_numeric", &berry_cd_numeric, py::arg("h0"), py::arg("h0_rate"));

    m.def(
        "analytic_single_spin",
        [](const FieldVector& bi, const FieldVector& bf, double t1, double t2) {
            const AnalyticCycle a = analytic_single_spin(bi, bf, t1, t2);
            return py::make_tuple(a.work, a.efficiency, a.engine_ok);
        },
        py::arg("b_initial"), py::arg("b_final"), py::arg("t_hot"), py::arg("t_cold"),
        "Quasi-static work, efficiency and engine flag of the single-spin cycle.");
    m.def(
        "analytic_two_spin",
        [](double gamma, double hi, double hf, double t1, double t2) {
            const AnalyticCycle a = analytic_two_spin(gamma, hi, hf, t1, t2);
            return py::make_tuple(a.work, a.efficiency);
        },
        py::arg("gamma"), py::arg("h_initial"), py::arg("h_final"), py::arg("t_hot"), py::arg("t_cold"));

    m.def("presets", []() { return std::vector<std::string>{"fig1", "fig2", "fig3"}; });
    m.def(
        "config_yaml", [](const std::string& name, const py::kwargs& kw) { return config_to_yaml(resolve_config(name, kw)); },
        py::arg("preset_or_path"));

    m.def(
        "run_cycle",
        [](const std::string& name, double tau, const std::string& variant, const py::kwargs& kw) {
            const SweepConfig c = resolve_config(name, kw);
            const EngineParams params = c.engine_params(tau);
            const Variant v = parse_variant(variant);
            CycleResult r;
            {
                py::gil_scoped_release release;
                r = run_cycle(params, v);
            }
            return cycle_dict(r);
        },
        py::arg("preset_or_path"), py::arg("tau"), py::arg("variant"),
        "One limit cycle of a preset or config file; keyword overrides as in run_sweep.");

    m.def(
        "cd_cost",
        [](const std::string& name, double tau, const std::string& direction, const std::string& metric,
           const py::kwargs& kw) {
            const SweepConfig c = resolve_config(name, kw);
            const Direction d = direction == "compression" ? Direction::Compression : Direction::Expansion;
            if (direction != "compression" && direction != "expansion") {
                throw DomainError("direction must be 'expansion' or 'compression'");
            }
            const EngineParams params = c.engine_params(tau);
            py::gil_scoped_release release;
            switch (parse_cost_metric(metric)) {
                case CostMetric::Mean: return cd_cost_mean_variant(params, d);
                case CostMetric::Frobenius: return cd_cost_frobenius(params, d);
                case CostMetric::Derivative: break;
            }
            return cd_cost(params, d);
        },
        py::arg("preset_or_path"), py::arg("tau"), py::arg("direction"), py::arg("metric") = "derivative");

    m.def(
        "run_sweep",
        [](const std::string& name, const py::kwargs& kw) {
            const SweepConfig c = resolve_config(name, kw);
            std::vector<SweepRow> rows;
            {
                py::gil_scoped_release release;
                rows = run_sweep(c);
            }
            py::list out;
            for (const auto& row : rows) {
                py::dict d = row.result ? cycle_dict(*row.result) : py::dict();
                d["tau"] = row.tau;
                d["variant"] = to_string(row.variant);
                d["error"] = row.error;
                out.append(d);
            }
            return out;
        },
        py::arg("preset_or_path"),
        "Rows of a tau sweep as dicts. Overrides: taus, variants, cost_metric, absolute_cost, steps_per_stroke, "
        "tau_ref, threads.");

    m.def(
        "sweep_csv",
        [](const std::string& name, const py::kwargs& kw) {
            const SweepConfig c = resolve_config(name, kw);
            std::ostringstream os;
            {
                py::gil_scoped_release release;
                write_csv(run_sweep(c), os);
            }
            return os.str();
        },
        py::arg("preset_or_path"));
}
