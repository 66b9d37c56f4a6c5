// dynamics.hpp - unitary evolution of density operators and thermal states

#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "otto/linalg.hpp"
#include "otto/models.hpp"

namespace otto {

using TimeDependentHamiltonian = std::function<ComplexMatrix(double)>;

// Step-count policy for piecewise-constant propagation.
//
// With fixed_steps set, exactly that many midpoint steps are taken. Otherwise
// the step count starts at max(min_steps, ceil(steps_per_radian * tau * max||H||))
// and is doubled until runs with N and 2N steps agree to `tolerance` in trace
// distance.
struct StepControl {
    std::optional<std::size_t> fixed_steps;
    double tolerance = 1e-7;
    std::size_t min_steps = 2000;
    double steps_per_radian = 200.0;
    int max_doublings = 8;
    // Samples used to estimate max||H(t)|| over the stroke.
    int norm_samples = 64;
};

struct EvolutionSpec {
    TimeDependentHamiltonian hamiltonian;
    double duration = 0.0;
    StepControl steps;
};

struct PropagationResult {
    ComplexMatrix state;
    std::size_t steps = 0;
    // Trace distance between the N- and 2N-step runs; zero for fixed step counts.
    double self_check = 0.0;
};

// Called at every grid node t_k = k tau / N, k = 0..N, with the state at t_k.
using StateObserver = std::function<void(std::size_t k, double t, const ComplexMatrix& rho)>;

// exp(-H/T) / Z, evaluated spectrally with the ground energy shifted out.
ComplexMatrix gibbs_state(const ComplexMatrix& h, double temperature);

// rho(tau) = U rho0 U^dagger with U the time-ordered product of exp(-i H(t_k + dt/2) dt).
PropagationResult propagate(const EvolutionSpec& spec, const ComplexMatrix& rho0);

// Fixed-grid propagation with an optional per-node observer.
ComplexMatrix evolve_fixed(const TimeDependentHamiltonian& hamiltonian, double duration, std::size_t steps,
                           const ComplexMatrix& rho0, const StateObserver& observer = {});

// Initial step count of the automatic policy; always even.
std::size_t initial_step_count(const TimeDependentHamiltonian& hamiltonian, double duration,
                               const StepControl& control);

// <n|rho|n> over the ascending eigenbasis of h.
RealVector instantaneous_populations(const ComplexMatrix& rho, const ComplexMatrix& h);

// Ideal quantum-adiabatic transport: populations of rho0 in the eigenbasis of
// h_initial, ordered by energy, placed on the eigenbasis of h_final.
ComplexMatrix adiabatic_map(const ComplexMatrix& rho0, const ComplexMatrix& h_initial, const ComplexMatrix& h_final);

// Smallest adjacent-level gap of H0(t) over `samples` evenly spaced times.
double min_gap_along(const WorkingMedium& medium, int samples);

}  // namespace otto
