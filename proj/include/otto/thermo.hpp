// thermo.hpp - Otto-cycle strokes, counterdiabatic driving cost and figures of merit
//
// Sign conventions: every stroke records the change of internal energy
// delta_u = Tr(rho_end H_end) - Tr(rho_start H_start). Heat is nonzero only on
// the two isochores. The extracted work of a cycle is
//   w_ext = -(delta_u_expansion + delta_u_compression),
// so w_ext > 0 means the cycle runs as an engine.

#pragma once

#include <optional>

#include "otto/dynamics.hpp"
#include "otto/models.hpp"

namespace otto {

enum class StrokeMode { Adiabatic, Bare, Sta };
enum class Variant { Adiabatic, NonAdiabatic, Sta };

// Integrand of the driving cost along the bare trajectory rho0(t):
//   Derivative  Tr(rho0 dH_CD/dt)
//   Mean        Tr(rho0 H_CD) / tau
//   Frobenius   ||H_CD||_F (state independent, not normalized)
enum class CostMetric { Derivative, Mean, Frobenius };

const char* to_string(Variant variant);
const char* to_string(CostMetric metric);

struct StrokeRecord {
    double delta_u = 0.0;
    double heat = 0.0;
    // Signed value of the cost integral; only STA work strokes set it.
    double cd_cost = 0.0;
};

struct StrokeOutcome {
    ComplexMatrix state;
    StrokeRecord record;
};

struct EngineParams {
    MediumSpec medium;
    double t_hot = 10.0;
    double t_cold = 1.0;
    double tau = 1.0;
    StepControl steps{};
    CostMetric cost_metric = CostMetric::Derivative;
    // Charge |cost| rather than the signed integral in efficiency and power.
    bool absolute_cost = true;
    // Stroke time used to quote a reference power for the quasi-static cycle.
    double tau_ref = 1e4;

    // Throws DomainError listing every violated invariant.
    void validate() const;
};

struct CycleResult {
    Variant variant = Variant::Adiabatic;
    double tau = 0.0;
    double tau_ref = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double w_ext = 0.0;
    StrokeRecord heating;
    StrokeRecord expansion;
    StrokeRecord cooling;
    StrokeRecord compression;
    // Costs as charged to the engine (absolute values unless configured otherwise).
    double cost_expansion = 0.0;
    double cost_compression = 0.0;

    // Q1 + Q3 + dU_expansion + dU_compression; zero for a closed cycle.
    double closure() const;
    bool engine_ok() const { return w_ext > 0.0 && q1 > 0.0; }
};

// Ideal thermalization: state replaced by gibbs_state(h, temperature).
StrokeOutcome isochore(const ComplexMatrix& rho_in, const ComplexMatrix& h, double temperature);

// Options for the unitary strokes.
struct StrokeOptions {
    StepControl steps{};
    CostMetric cost_metric = CostMetric::Derivative;
};

// One work stroke from rho_in. Adiabatic mode applies adiabatic_map, Bare
// evolves under H0 and Sta under H0 + H_CD; Sta also fills record.cd_cost.
StrokeOutcome work_stroke(const ComplexMatrix& rho_in, const MediumSpec& medium, Direction direction, double tau,
                          StrokeMode mode, const StrokeOptions& options = {});

// Signed cost integral over [0, tau] along rho0(t), the solution of
// d rho0/dt = -i [H0(t), rho0(t)] from rho_start, using composite Simpson on
// the propagation grid.
double stroke_cost(const WorkingMedium& stroke, const ComplexMatrix& rho_start, CostMetric metric,
                   const StepControl& steps = {});

// Cost of one stroke of the engine, starting from the Gibbs state the stroke
// begins in at the limit cycle (hot bath before expansion, cold before compression).
double cd_cost(const EngineParams& params, Direction direction);
double cd_cost_mean_variant(const EngineParams& params, Direction direction);
double cd_cost_frobenius(const EngineParams& params, Direction direction);

CycleResult run_cycle(const EngineParams& params, Variant variant);

// W/Q1, or W/(Q1 + costs) for STA. Empty when Q1 <= 0 (not a heat engine regime).
std::optional<double> efficiency(const CycleResult& result);

// W/(2 tau); STA subtracts the costs; Adiabatic uses 2 tau_ref as a reference.
double power(const CycleResult& result);

struct AnalyticCycle {
    double work = 0.0;
    double efficiency = 0.0;
    bool engine_ok = false;
};

// Closed-form quasi-static single-spin cycle.
AnalyticCycle analytic_single_spin(const FieldVector& b_initial, const FieldVector& b_final, double t_hot,
                                   double t_cold);

// Closed-form quasi-static transverse XY cycle.
AnalyticCycle analytic_two_spin(double gamma, double h_initial, double h_final, double t_hot, double t_cold);

}  // namespace otto
