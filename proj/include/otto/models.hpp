// models.hpp - working-medium Hamiltonians, cubic ramps and counterdiabatic terms
//
// Natural units throughout (hbar = k_B = 1). A MediumSpec describes the
// engine's working medium by its two endpoint control settings; a
// WorkingMedium is one work stroke of that medium, i.e. the same family with
// a cubic ramp of duration tau between the endpoints.

#pragma once

#include <array>
#include <optional>

#include <Eigen/Dense>

#include "otto/linalg.hpp"

namespace otto {

// Counterdiabatic denominators (squared gaps, |b|, ...) at or below this
// value raise SingularityError.
inline constexpr double kGapFloor = 1e-10;

using FieldVector = Eigen::Vector3d;

// Control schedule x(t) = D + C (t/tau)^2 (1/2 - t/(3 tau)) on [0, tau].
// Its rate C (t/tau^2)(1 - t/tau) and its second derivative vanish at both
// ends, so any counterdiabatic term built from it is switched off there.
class RampProtocol {
public:
    RampProtocol(double initial_value, double total_swing, double duration);

    // Ramp that starts at x_initial and ends at x_final: D = x_initial, C = 6 (x_final - x_initial).
    static RampProtocol from_endpoints(double x_initial, double x_final, double duration);
    static RampProtocol constant(double value, double duration);

    double initial_value() const { return initial_; }
    double total_swing() const { return swing_; }
    double duration() const { return duration_; }
    // D + C/6; exactly x_final for ramps made by from_endpoints.
    double final_value() const { return final_; }

    double value(double t) const;
    double rate(double t) const;
    double acceleration(double t) const;

private:
    double clamp_time(double t) const;

    double initial_;
    double swing_;
    double duration_;
    double final_;
};

// Spin-spin couplings and transverse field of the two-spin XY medium.
struct XYCouplings {
    double j_x = 0.0;
    double j_y = 0.0;
    double h = 0.0;
};

// ---- single spin: H0 = b . sigma ---------------------------------------------

ComplexMatrix single_spin_h0(const FieldVector& b);

// (b x b_dot) / (2 |b|^2) . sigma
ComplexMatrix single_spin_cd(const FieldVector& b, const FieldVector& b_dot);
FieldVector single_spin_cd_field(const FieldVector& b, const FieldVector& b_dot);
// Time derivative of single_spin_cd along a trajectory with acceleration b_ddot.
ComplexMatrix single_spin_cd_rate(const FieldVector& b, const FieldVector& b_dot, const FieldVector& b_ddot);

// ---- Landau-Zener: H0 = b_x sigma_x + b_z sigma_z ------------------------------

ComplexMatrix lz_h0(double b_x, double b_z);
// -b_x b_z_dot / (2 (b_x^2 + b_z^2)) sigma_y
ComplexMatrix lz_cd(double b_x, double b_z, double b_z_dot);
ComplexMatrix lz_cd_rate(double b_x, double b_z, double b_z_dot, double b_z_ddot);

// ---- two spins: H0 = J_x XX + J_y YY + h (Z1 + Z2) -----------------------------

ComplexMatrix xy_h0(const XYCouplings& c);
// sigma_x^a sigma_y^b + sigma_y^a sigma_x^b, the operator every XY CD term is proportional to.
ComplexMatrix xy_cd_operator();
ComplexMatrix xy_cd_general(const XYCouplings& value, const XYCouplings& rate);
ComplexMatrix xy_cd_general_rate(const XYCouplings& value, const XYCouplings& rate,
                                 const XYCouplings& acceleration);
// J_x = 1 + gamma, J_y = 1 - gamma held fixed, field h(t) ramped.
ComplexMatrix xy_cd_transverse(double gamma, double h, double h_dot);
ComplexMatrix xy_cd_transverse_rate(double gamma, double h, double h_dot, double h_ddot);

// Counterdiabatic term from the spectral form
//   H_CD = i sum_{m != n} |m><m| dH0/dt |n><n| / (E_n - E_m),
// valid for any non-degenerate H0. Used as the reference for the closed forms.
ComplexMatrix berry_cd_numeric(const ComplexMatrix& h0, const ComplexMatrix& h0_rate);

// ---- working media --------------------------------------------------------

enum class MediumKind { SingleSpinGeneric, LandauZener, TwoSpinXY };

enum class Direction { Expansion, Compression };

const char* to_string(MediumKind kind);
const char* to_string(Direction direction);

// Three control parameters: (b_x, b_y, b_z) for one spin, (J_x, J_y, h) for two.
using ControlVector = std::array<double, 3>;

// One work stroke: the medium's Hamiltonian family driven by cubic ramps.
class WorkingMedium {
public:
    // Pass `anisotropy` only for the transverse XY medium.
    WorkingMedium(MediumKind kind, std::array<RampProtocol, 3> ramps,
                  std::optional<double> anisotropy = std::nullopt);

    MediumKind kind() const { return kind_; }
    // True for the XY medium parametrized by its anisotropy (J_x = 1 + gamma, J_y = 1 - gamma).
    bool transverse() const { return anisotropy_.has_value(); }
    double gamma() const { return anisotropy_.value_or(0.0); }
    double duration() const { return ramps_[0].duration(); }
    Eigen::Index dim() const { return kind_ == MediumKind::TwoSpinXY ? 4 : 2; }
    const std::array<RampProtocol, 3>& ramps() const { return ramps_; }

    ControlVector controls(double t) const;

    ComplexMatrix h0(double t) const;
    ComplexMatrix h0_rate(double t) const;
    ComplexMatrix cd(double t) const;
    ComplexMatrix cd_rate(double t) const;
    // h0(t) + cd(t)
    ComplexMatrix driven(double t) const;

private:
    MediumKind kind_;
    std::array<RampProtocol, 3> ramps_;
    std::optional<double> anisotropy_;
};

// Working medium of an Otto engine: the family plus its two endpoint settings.
// The expansion stroke goes initial -> final, the compression stroke final -> initial.
class MediumSpec {
public:
    static MediumSpec single_spin(const FieldVector& b_initial, const FieldVector& b_final);
    static MediumSpec landau_zener(double b_x, double b_z_initial, double b_z_final);
    static MediumSpec xy_transverse(double gamma, double h_initial, double h_final);
    static MediumSpec xy_general(const XYCouplings& initial, const XYCouplings& final);

    MediumKind kind() const { return kind_; }
    bool transverse() const { return anisotropy_.has_value(); }
    double gamma() const { return anisotropy_.value_or(0.0); }
    Eigen::Index dim() const { return kind_ == MediumKind::TwoSpinXY ? 4 : 2; }
    const ControlVector& initial_controls() const { return initial_; }
    const ControlVector& final_controls() const { return final_; }

    ComplexMatrix hamiltonian(const ControlVector& controls) const;
    ComplexMatrix initial_hamiltonian() const { return hamiltonian(initial_); }
    ComplexMatrix final_hamiltonian() const { return hamiltonian(final_); }

    WorkingMedium stroke(Direction direction, double duration) const;

private:
    MediumSpec(MediumKind kind, ControlVector initial, ControlVector final,
               std::optional<double> anisotropy);

    MediumKind kind_;
    ControlVector initial_;
    ControlVector final_;
    std::optional<double> anisotropy_;
};

}  // namespace otto
