#include "otto/thermo.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "otto/error.hpp"

namespace otto {

namespace {

double energy(const ComplexMatrix& rho, const ComplexMatrix& h) { return linalg::expectation(rho, h); }

ComplexMatrix start_hamiltonian(const MediumSpec& medium, Direction direction) {
    return direction == Direction::Expansion ? medium.initial_hamiltonian() : medium.final_hamiltonian();
}

ComplexMatrix end_hamiltonian(const MediumSpec& medium, Direction direction) {
    return direction == Direction::Expansion ? medium.final_hamiltonian() : medium.initial_hamiltonian();
}

std::size_t cost_grid_steps(const WorkingMedium& stroke, const ComplexMatrix& rho_start, const StepControl& steps) {
    std::size_t n = 0;
    if (steps.fixed_steps) {
        n = *steps.fixed_steps;
    } else {
        const EvolutionSpec spec{[&stroke](double t) { return stroke.h0(t); }, stroke.duration(), steps};
        n = propagate(spec, rho_start).steps;
    }
    if (n < 2) n = 2;
    if (n % 2 != 0) ++n;
    return n;
}

double simpson(const std::vector<double>& f, double h) {
    const std::size_t n = f.size() - 1;
    double sum = f.front() + f.back();
    for (std::size_t k = 1; k < n; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * f[k];
    return sum * h / 3.0;
}

double charged(double cost, bool absolute) { return absolute ? std::abs(cost) : cost; }

double engine_cost(const EngineParams& params, Direction direction, CostMetric metric) {
    params.validate();
    const WorkingMedium stroke = params.medium.stroke(direction, params.tau);
    const bool expansion = direction == Direction::Expansion;
    const ComplexMatrix rho_start =
        expansion ? gibbs_state(params.medium.initial_hamiltonian(), params.t_hot)
                  : gibbs_state(params.medium.final_hamiltonian(), params.t_cold);
    return charged(stroke_cost(stroke, rho_start, metric, params.steps), params.absolute_cost);
}

}  // namespace

const char* to_string(Variant variant) {
    switch (variant) {
        case Variant::Adiabatic: return "adiabatic";
        case Variant::NonAdiabatic: return "nonadiabatic";
        case Variant::Sta: return "sta";
    }
    return "?";
}

const char* to_string(CostMetric metric) {
    switch (metric) {
        case CostMetric::Derivative: return "derivative";
        case CostMetric::Mean: return "mean";
        case CostMetric::Frobenius: return "frobenius";
    }
    return "?";
}

void EngineParams::validate() const {
    std::ostringstream os;
    int problems = 0;
    auto fail = [&](const std::string& what) { os << (problems++ ? "; " : "") << what; };
    if (!std::isfinite(t_hot) || !std::isfinite(t_cold)) fail("temperatures must be finite");
    if (!(t_cold > 0.0)) fail("T2 must be positive");
    if (!(t_hot > t_cold)) fail("T1 must exceed T2");
    if (!(tau > 0.0) || !std::isfinite(tau)) fail("tau must be positive and finite");
    if (!(tau_ref > 0.0) || !std::isfinite(tau_ref)) fail("tau_ref must be positive and finite");
    if (problems) throw DomainError("engine parameters: " + os.str());
}

double CycleResult::closure() const { return q1 + q3 + expansion.delta_u + compression.delta_u; }

StrokeOutcome isochore(const ComplexMatrix& rho_in, const ComplexMatrix& h, double temperature) {
    linalg::require_density_operator(rho_in, "isochore: input state");
    linalg::require_hermitian(h, "isochore: Hamiltonian");
    StrokeOutcome out{gibbs_state(h, temperature), {}};
    out.record.heat = energy(out.state, h) - energy(rho_in, h);
    out.record.delta_u = out.record.heat;
    return out;
}

StrokeOutcome work_stroke(const ComplexMatrix& rho_in, const MediumSpec& medium, Direction direction, double tau,
                          StrokeMode mode, const StrokeOptions& options) {
    const ComplexMatrix h_start = start_hamiltonian(medium, direction);
    const ComplexMatrix h_end = end_hamiltonian(medium, direction);

    StrokeOutcome out;
    if (mode == StrokeMode::Adiabatic) {
        linalg::require_density_operator(rho_in, "work_stroke: input state");
        out.state = adiabatic_map(rho_in, h_start, h_end);
    } else {
        const WorkingMedium stroke = medium.stroke(direction, tau);
        EvolutionSpec spec;
        spec.duration = tau;
        spec.steps = options.steps;
        if (mode == StrokeMode::Bare) {
            spec.hamiltonian = [&stroke](double t) { return stroke.h0(t); };
        } else {
            spec.hamiltonian = [&stroke](double t) { return stroke.driven(t); };
        }
        out.state = propagate(spec, rho_in).state;
        if (mode == StrokeMode::Sta) out.record.cd_cost = stroke_cost(stroke, rho_in, options.cost_metric, options.steps);
    }
    out.record.delta_u = energy(out.state, h_end) - energy(rho_in, h_start);
    return out;
}

double stroke_cost(const WorkingMedium& stroke, const ComplexMatrix& rho_start, CostMetric metric,
                   const StepControl& steps) {
    linalg::require_density_operator(rho_start, "stroke_cost: initial state");
    const std::size_t n = cost_grid_steps(stroke, rho_start, steps);
    const double tau = stroke.duration();
    std::vector<double> integrand(n + 1, 0.0);

    if (metric == CostMetric::Frobenius) {
        for (std::size_t k = 0; k <= n; ++k) {
            const double t = (k == n) ? tau : tau * static_cast<double>(k) / static_cast<double>(n);
            integrand[k] = linalg::frobenius_norm(stroke.cd(t));
        }
    } else {
        const StateObserver observer = [&](std::size_t k, double t, const ComplexMatrix& rho) {
            integrand[k] = metric == CostMetric::Derivative ? energy(rho, stroke.cd_rate(t))
                                                            : energy(rho, stroke.cd(t)) / tau;
        };
        evolve_fixed([&stroke](double t) { return stroke.h0(t); }, tau, n, rho_start, observer);
    }
    return simpson(integrand, tau / static_cast<double>(n));
}

double cd_cost(const EngineParams& params, Direction direction) {
    return engine_cost(params, direction, CostMetric::Derivative);
}

double cd_cost_mean_variant(const EngineParams& params, Direction direction) {
    return engine_cost(params, direction, CostMetric::Mean);
}

double cd_cost_frobenius(const EngineParams& params, Direction direction) {
    return engine_cost(params, direction, CostMetric::Frobenius);
}

CycleResult run_cycle(const EngineParams& params, Variant variant) {
    params.validate();
    const MediumSpec& medium = params.medium;
    const ComplexMatrix h_i = medium.initial_hamiltonian();
    const ComplexMatrix h_f = medium.final_hamiltonian();

    StrokeMode mode = StrokeMode::Adiabatic;
    if (variant == Variant::NonAdiabatic) mode = StrokeMode::Bare;
    if (variant == Variant::Sta) mode = StrokeMode::Sta;
    const StrokeOptions options{params.steps, params.cost_metric};

    CycleResult result;
    result.variant = variant;
    result.tau = params.tau;
    result.tau_ref = params.tau_ref;

    // First traversal from the cold Gibbs state at the compression-end Hamiltonian.
    const StrokeOutcome heat_in = isochore(gibbs_state(h_i, params.t_cold), h_i, params.t_hot);
    const StrokeOutcome expand = work_stroke(heat_in.state, medium, Direction::Expansion, params.tau, mode, options);
    const StrokeOutcome cool = isochore(expand.state, h_f, params.t_cold);
    const StrokeOutcome compress = work_stroke(cool.state, medium, Direction::Compression, params.tau, mode, options);

    // Re-heating the compression output lands on the same Gibbs state as the
    // first heating, so strokes 2-4 repeat unchanged and this is the limit cycle.
    const StrokeOutcome reheat = isochore(compress.state, h_i, params.t_hot);
    const double repeat_gap = linalg::trace_distance(reheat.state, heat_in.state);
    if (repeat_gap > 1e-12) {
        std::ostringstream os;
        os << "run_cycle: hot isochore output differs between traversals (" << repeat_gap << ")";
        throw NumericError(os.str());
    }

    result.heating = reheat.record;
    result.expansion = expand.record;
    result.cooling = cool.record;
    result.compression = compress.record;
    result.q1 = reheat.record.heat;
    result.q3 = cool.record.heat;
    result.w_ext = -(expand.record.delta_u + compress.record.delta_u);
    if (variant == Variant::Sta) {
        result.cost_expansion = charged(expand.record.cd_cost, params.absolute_cost);
        result.cost_compression = charged(compress.record.cd_cost, params.absolute_cost);
    }
    return result;
}

std::optional<double> efficiency(const CycleResult& result) {
    if (!(result.q1 > 0.0)) return std::nullopt;
    double denominator = result.q1;
    if (result.variant == Variant::Sta) denominator += result.cost_expansion + result.cost_compression;
    if (!(denominator > 0.0)) return std::nullopt;
    return result.w_ext / denominator;
}

double power(const CycleResult& result) {
    switch (result.variant) {
        case Variant::Adiabatic: return result.w_ext / (2.0 * result.tau_ref);
        case Variant::NonAdiabatic: return result.w_ext / (2.0 * result.tau);
        case Variant::Sta:
            return (result.w_ext - result.cost_expansion - result.cost_compression) / (2.0 * result.tau);
    }
    return 0.0;
}

AnalyticCycle analytic_single_spin(const FieldVector& b_initial, const FieldVector& b_final, double t_hot,
                                   double t_cold) {
    const double bi = b_initial.norm();
    const double bf = b_final.norm();
    if (!(bi > 0.0) || !(bf > 0.0)) throw DomainError("analytic_single_spin: fields must have nonzero norm");
    if (!(t_hot > 0.0) || !(t_cold > 0.0)) throw DomainError("analytic_single_spin: temperatures must be positive");

    AnalyticCycle out;
    out.work = -(bi - bf) * (std::tanh(bi / t_hot) - std::tanh(bf / t_cold));
    out.efficiency = 1.0 - bf / bi;
    const bool condition = t_hot > t_cold * bi / bf;
    out.engine_ok = bf < bi && condition;

    // With |b_f| < |b_i| the engine condition and W > 0 must agree, up to rounding at the boundary.
    if (bf < bi && condition != (out.work > 0.0) && std::abs(out.work) > 1e-14 * bi) {
        throw NumericError("analytic_single_spin: engine condition disagrees with the sign of the work");
    }
    return out;
}

AnalyticCycle analytic_two_spin(double gamma, double h_initial, double h_final, double t_hot, double t_cold) {
    if (!(t_hot > 0.0) || !(t_cold > 0.0)) throw DomainError("analytic_two_spin: temperatures must be positive");
    const double fi = std::hypot(h_initial, gamma);
    const double ff = std::hypot(h_final, gamma);
    if (!(fi > 0.0) || !(ff > 0.0)) throw DomainError("analytic_two_spin: need h^2 + gamma^2 > 0 at both ends");

    const double t1 = t_hot, t2 = t_cold;
    const double m = std::sinh(2.0 * fi / t1) * (std::cosh(2.0 * ff / t2) + std::cosh(2.0 / t2)) -
                     std::sinh(2.0 * ff / t2) * (std::cosh(2.0 * fi / t1) + std::cosh(2.0 / t1));
    const double work_den = (std::cosh(2.0 * ff / t2) + std::cosh(2.0 / t2)) * (std::cosh(2.0 * fi / t1) + std::cosh(2.0 / t1));
    const double eta_den = std::sinh(2.0 / t1) * std::cosh(2.0 * ff / t2) - std::sinh(2.0 / t2) * std::cosh(2.0 * fi / t1) +
                           std::sinh(2.0 * (t2 - t1) / (t1 * t2)) + fi * m;
    if (!std::isfinite(work_den) || !std::isfinite(eta_den) || work_den == 0.0 || eta_den == 0.0) {
        std::ostringstream os;
        os << "analytic_two_spin: vanishing or overflowing denominator at gamma = " << gamma << ", h_i = " << h_initial
           << ", h_f = " << h_final << ", T1 = " << t1 << ", T2 = " << t2;
        throw NumericError(os.str());
    }

    AnalyticCycle out;
    out.work = 2.0 * (ff - fi) * m / work_den;
    out.efficiency = -(ff - fi) * m / eta_den;
    out.engine_ok = out.work > 0.0;
    return out;
}

}  // namespace otto
