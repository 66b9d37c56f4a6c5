#include "otto/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "otto/error.hpp"

namespace otto {

namespace {

constexpr double kTraceDriftLimit = 1e-6;
constexpr double kCommutationTolerance = 1e-9;

void check_output(const ComplexMatrix& rho, std::size_t steps) {
    const double drift = std::abs(rho.trace().real() - 1.0);
    if (!(drift <= kTraceDriftLimit)) {
        std::ostringstream os;
        os << "propagate: trace drifted by " << drift << " with " << steps << " steps; use smaller steps";
        throw NumericError(os.str());
    }
}

}  // namespace

ComplexMatrix gibbs_state(const ComplexMatrix& h, double temperature) {
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        std::ostringstream os;
        os << "gibbs_state: temperature must be positive and finite, got " << temperature;
        throw DomainError(os.str());
    }
    const EigenSystem es = linalg::hermitian_eigendecomposition(h);
    const double ground = es.values(0);
    RealVector weights = ((ground - es.values.array()) / temperature).exp().matrix();
    weights /= weights.sum();
    return es.vectors * weights.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

ComplexMatrix evolve_fixed(const TimeDependentHamiltonian& hamiltonian, double duration, std::size_t steps,
                           const ComplexMatrix& rho0, const StateObserver& observer) {
    if (steps == 0) throw DomainError("evolve_fixed: need at least one step");
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw DomainError("evolve_fixed: duration must be positive and finite");
    }
    const double n = static_cast<double>(steps);
    const double dt = duration / n;
    ComplexMatrix rho = rho0;
    if (observer) observer(0, 0.0, rho);
    for (std::size_t k = 0; k < steps; ++k) {
        const double midpoint = duration * (static_cast<double>(k) + 0.5) / n;
        const ComplexMatrix u = linalg::step_propagator(hamiltonian(midpoint), dt);
        rho = u * rho * u.adjoint();
        // Re-symmetrize to keep rounding from accumulating an anti-Hermitian part.
        rho = 0.5 * (rho + rho.adjoint()).eval();
        if (observer) {
            const double t = (k + 1 == steps) ? duration : duration * static_cast<double>(k + 1) / n;
            observer(k + 1, t, rho);
        }
    }
    return rho;
}

std::size_t initial_step_count(const TimeDependentHamiltonian& hamiltonian, double duration,
                               const StepControl& control) {
    double max_norm = 0.0;
    const int samples = std::max(2, control.norm_samples);
    for (int j = 0; j < samples; ++j) {
        const double t = duration * static_cast<double>(j) / (samples - 1);
        max_norm = std::max(max_norm, linalg::spectral_norm(hamiltonian(t)));
    }
    const double wanted = std::ceil(control.steps_per_radian * duration * max_norm);
    if (!std::isfinite(wanted) || wanted > 1e9) {
        throw NumericError("propagate: Hamiltonian norm too large for step control");
    }
    std::size_t steps = std::max(control.min_steps, static_cast<std::size_t>(wanted));
    if (steps % 2 != 0) ++steps;
    return steps;
}

PropagationResult propagate(const EvolutionSpec& spec, const ComplexMatrix& rho0) {
    linalg::require_density_operator(rho0, "propagate: initial state");
    if (!spec.hamiltonian) throw DomainError("propagate: missing Hamiltonian");

    if (spec.steps.fixed_steps) {
        const std::size_t steps = *spec.steps.fixed_steps;
        ComplexMatrix rho = evolve_fixed(spec.hamiltonian, spec.duration, steps, rho0);
        check_output(rho, steps);
        return {std::move(rho), steps, 0.0};
    }

    std::size_t steps = initial_step_count(spec.hamiltonian, spec.duration, spec.steps);
    ComplexMatrix coarse = evolve_fixed(spec.hamiltonian, spec.duration, steps, rho0);
    double distance = std::numeric_limits<double>::infinity();
    for (int round = 0; round <= spec.steps.max_doublings; ++round) {
        ComplexMatrix fine = evolve_fixed(spec.hamiltonian, spec.duration, 2 * steps, rho0);
        distance = linalg::trace_distance(coarse, fine);
        steps *= 2;
        if (distance < spec.steps.tolerance) {
            check_output(fine, steps);
            return {std::move(fine), steps, distance};
        }
        coarse = std::move(fine);
    }
    std::ostringstream os;
    os << "propagate: no convergence after " << spec.steps.max_doublings << " doublings (N = " << steps
       << ", trace distance between N/2 and N runs " << distance << ")";
    throw NumericError(os.str());
}

RealVector instantaneous_populations(const ComplexMatrix& rho, const ComplexMatrix& h) {
    const EigenSystem es = linalg::hermitian_eigendecomposition(h);
    return (es.vectors.adjoint() * rho * es.vectors).diagonal().real();
}

ComplexMatrix adiabatic_map(const ComplexMatrix& rho0, const ComplexMatrix& h_initial, const ComplexMatrix& h_final) {
    const double scale = std::max(1.0, linalg::max_abs(h_initial));
    const double off = linalg::max_abs(linalg::commutator(rho0, h_initial));
    if (off > kCommutationTolerance * scale) {
        std::ostringstream os;
        os << "adiabatic_map: initial state does not commute with the initial Hamiltonian (|[rho, H]| = " << off
           << ")";
        throw ValidationError(os.str());
    }
    if (h_initial.rows() != h_final.rows()) throw ValidationError("adiabatic_map: dimension mismatch");
    const RealVector populations = instantaneous_populations(rho0, h_initial);
    const EigenSystem target = linalg::hermitian_eigendecomposition(h_final);
    return target.vectors * populations.cast<Complex>().asDiagonal() * target.vectors.adjoint();
}

double min_gap_along(const WorkingMedium& medium, int samples) {
    if (samples < 2) throw DomainError("min_gap_along: need at least two samples");
    double smallest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < samples; ++j) {
        const double t = medium.duration() * static_cast<double>(j) / (samples - 1);
        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(medium.h0(t), Eigen::EigenvaluesOnly);
        const RealVector& e = solver.eigenvalues();
        for (Eigen::Index k = 0; k + 1 < e.size(); ++k) smallest = std::min(smallest, e(k + 1) - e(k));
    }
    return smallest;
}

}  // namespace otto
