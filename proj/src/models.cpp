#include "otto/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "otto/error.hpp"

namespace otto {

namespace {

constexpr double kTimeSlack = 1e-12;

const ComplexMatrix& sigma_x() {
    static const ComplexMatrix m = linalg::pauli_x();
    return m;
}
const ComplexMatrix& sigma_y() {
    static const ComplexMatrix m = linalg::pauli_y();
    return m;
}
const ComplexMatrix& sigma_z() {
    static const ComplexMatrix m = linalg::pauli_z();
    return m;
}

struct TwoSpinOperators {
    ComplexMatrix xx;
    ComplexMatrix yy;
    ComplexMatrix z_sum;
    ComplexMatrix xy_plus_yx;
};

const TwoSpinOperators& two_spin() {
    static const TwoSpinOperators ops = [] {
        const ComplexMatrix id = linalg::identity(2);
        return TwoSpinOperators{
            linalg::tensor_product(sigma_x(), sigma_x()),
            linalg::tensor_product(sigma_y(), sigma_y()),
            linalg::tensor_product(sigma_z(), id) + linalg::tensor_product(id, sigma_z()),
            linalg::tensor_product(sigma_x(), sigma_y()) + linalg::tensor_product(sigma_y(), sigma_x()),
        };
    }();
    return ops;
}

void require_gap(double squared, const char* what) {
    if (!(squared > kGapFloor * kGapFloor)) {
        std::ostringstream os;
        os << what << ": counterdiabatic term undefined, squared gap parameter " << squared
           << " is at or below the gap floor";
        throw SingularityError(os.str());
    }
}

void require_finite(const ControlVector& c, const char* what) {
    for (double v : c) {
        if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite control value");
    }
}

}  // namespace

// ---- RampProtocol ------------------------------------------------------------

RampProtocol::RampProtocol(double initial_value, double total_swing, double duration)
    : initial_(initial_value), swing_(total_swing), duration_(duration),
      final_(initial_value + total_swing / 6.0) {
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw DomainError("RampProtocol: duration must be positive and finite");
    }
    if (!std::isfinite(initial_value) || !std::isfinite(total_swing)) {
        throw DomainError("RampProtocol: endpoint constants must be finite");
    }
}

RampProtocol RampProtocol::from_endpoints(double x_initial, double x_final, double duration) {
    RampProtocol ramp(x_initial, 6.0 * (x_final - x_initial), duration);
    ramp.final_ = x_final;
    return ramp;
}

RampProtocol RampProtocol::constant(double value, double duration) { return RampProtocol(value, 0.0, duration); }

double RampProtocol::clamp_time(double t) const {
    const double slack = kTimeSlack * duration_;
    if (!(t >= -slack && t <= duration_ + slack)) {
        std::ostringstream os;
        os << "RampProtocol: t = " << t << " outside [0, " << duration_ << "]";
        throw DomainError(os.str());
    }
    return std::clamp(t, 0.0, duration_);
}

double RampProtocol::value(double t) const {
    const double s = clamp_time(t) / duration_;
    if (s == 1.0) return final_;
    return initial_ + swing_ * s * s * (3.0 - 2.0 * s) / 6.0;
}

double RampProtocol::rate(double t) const {
    const double s = clamp_time(t) / duration_;
    return swing_ * s * (1.0 - s) / duration_;
}

double RampProtocol::acceleration(double t) const {
    const double s = clamp_time(t) / duration_;
    return swing_ * (1.0 - 2.0 * s) / (duration_ * duration_);
}

// ---- single spin ---------------------------------------------------------------

ComplexMatrix single_spin_h0(const FieldVector& b) {
    return b.x() * sigma_x() + b.y() * sigma_y() + b.z() * sigma_z();
}

FieldVector single_spin_cd_field(const FieldVector& b, const FieldVector& b_dot) {
    const double norm2 = b.squaredNorm();
    require_gap(norm2, "single_spin_cd");
    return b.cross(b_dot) / (2.0 * norm2);
}

ComplexMatrix single_spin_cd(const FieldVector& b, const FieldVector& b_dot) {
    return single_spin_h0(single_spin_cd_field(b, b_dot));
}

ComplexMatrix single_spin_cd_rate(const FieldVector& b, const FieldVector& b_dot, const FieldVector& b_ddot) {
    const double norm2 = b.squaredNorm();
    require_gap(norm2, "single_spin_cd_rate");
    const FieldVector field_rate =
        b.cross(b_ddot) / (2.0 * norm2) - b.cross(b_dot) * (b.dot(b_dot) / (norm2 * norm2));
    return single_spin_h0(field_rate);
}

// ---- Landau-Zener ----------------------------------------------------------------

ComplexMatrix lz_h0(double b_x, double b_z) { return b_x * sigma_x() + b_z * sigma_z(); }

ComplexMatrix lz_cd(double b_x, double b_z, double b_z_dot) {
    const double n = b_x * b_x + b_z * b_z;
    require_gap(n, "lz_cd");
    return (-b_x * b_z_dot / (2.0 * n)) * sigma_y();
}

ComplexMatrix lz_cd_rate(double b_x, double b_z, double b_z_dot, double b_z_ddot) {
    const double n = b_x * b_x + b_z * b_z;
    require_gap(n, "lz_cd_rate");
    const double coefficient = -b_x * b_z_ddot / (2.0 * n) + b_x * b_z * b_z_dot * b_z_dot / (n * n);
    return coefficient * sigma_y();
}

// ---- two-spin XY -------------------------------------------------------------------

ComplexMatrix xy_h0(const XYCouplings& c) {
    const auto& ops = two_spin();
    return c.j_x * ops.xx + c.j_y * ops.yy + c.h * ops.z_sum;
}

ComplexMatrix xy_cd_operator() { return two_spin().xy_plus_yx; }

ComplexMatrix xy_cd_general(const XYCouplings& value, const XYCouplings& rate) {
    const double anisotropy = value.j_x - value.j_y;
    const double denominator = 4.0 * value.h * value.h + anisotropy * anisotropy;
    require_gap(denominator, "xy_cd_general");
    const double numerator = value.h * (rate.j_x - rate.j_y) - rate.h * anisotropy;
    return (0.5 * numerator / denominator) * two_spin().xy_plus_yx;
}

ComplexMatrix xy_cd_general_rate(const XYCouplings& value, const XYCouplings& rate,
                                 const XYCouplings& acceleration) {
    const double anisotropy = value.j_x - value.j_y;
    const double anisotropy_rate = rate.j_x - rate.j_y;
    const double denominator = 4.0 * value.h * value.h + anisotropy * anisotropy;
    require_gap(denominator, "xy_cd_general_rate");
    const double numerator = value.h * anisotropy_rate - rate.h * anisotropy;
    const double numerator_rate =
        value.h * (acceleration.j_x - acceleration.j_y) - acceleration.h * anisotropy;
    const double denominator_rate = 8.0 * value.h * rate.h + 2.0 * anisotropy * anisotropy_rate;
    const double coefficient =
        0.5 * (numerator_rate * denominator - numerator * denominator_rate) / (denominator * denominator);
    return coefficient * two_spin().xy_plus_yx;
}

ComplexMatrix xy_cd_transverse(double gamma, double h, double h_dot) {
    const double n = h * h + gamma * gamma;
    require_gap(n, "xy_cd_transverse");
    return (-h_dot * gamma / (4.0 * n)) * two_spin().xy_plus_yx;
}

ComplexMatrix xy_cd_transverse_rate(double gamma, double h, double h_dot, double h_ddot) {
    const double n = h * h + gamma * gamma;
    require_gap(n, "xy_cd_transverse_rate");
    const double coefficient = -gamma * h_ddot / (4.0 * n) + gamma * h * h_dot * h_dot / (2.0 * n * n);
    return coefficient * two_spin().xy_plus_yx;
}

// ---- spectral form -----------------------------------------------------------------

ComplexMatrix berry_cd_numeric(const ComplexMatrix& h0, const ComplexMatrix& h0_rate) {
    linalg::require_hermitian(h0_rate, "berry_cd_numeric: dH0/dt");
    const EigenSystem es = linalg::hermitian_eigendecomposition(h0);
    const ComplexMatrix rate = es.vectors.adjoint() * h0_rate * es.vectors;
    const double coupling_floor = kGapFloor * std::max(1.0, linalg::max_abs(h0_rate));

    const Eigen::Index dim = h0.rows();
    ComplexMatrix in_basis = ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index m = 0; m < dim; ++m) {
        for (Eigen::Index n = 0; n < dim; ++n) {
            if (m == n) continue;
            const double gap = es.values(n) - es.values(m);
            if (std::abs(gap) <= kGapFloor) {
                // Degenerate levels that the drive does not couple contribute nothing.
                if (std::abs(rate(m, n)) <= coupling_floor) continue;
                std::ostringstream os;
                os << "berry_cd_numeric: levels " << m << " and " << n << " are degenerate (gap " << gap
                   << ") but coupled by dH0/dt";
                throw SingularityError(os.str());
            }
            in_basis(m, n) = Complex{0.0, 1.0} * rate(m, n) / gap;
        }
    }
    return es.vectors * in_basis * es.vectors.adjoint();
}

// ---- working media -------------------------------------------------------------------

const char* to_string(MediumKind kind) {
    switch (kind) {
        case MediumKind::SingleSpinGeneric: return "single_spin";
        case MediumKind::LandauZener: return "landau_zener";
        case MediumKind::TwoSpinXY: return "xy";
    }
    return "unknown";
}

const char* to_string(Direction direction) {
    return direction == Direction::Expansion ? "expansion" : "compression";
}

WorkingMedium::WorkingMedium(MediumKind kind, std::array<RampProtocol, 3> ramps,
                             std::optional<double> anisotropy)
    : kind_(kind), ramps_(std::move(ramps)), anisotropy_(anisotropy) {
    const double tau = ramps_[0].duration();
    for (const auto& r : ramps_) {
        if (r.duration() != tau) throw DomainError("WorkingMedium: ramps must share one duration");
    }
    if (anisotropy_ && kind_ != MediumKind::TwoSpinXY) {
        throw DomainError("WorkingMedium: anisotropy only applies to the two-spin medium");
    }
}

ControlVector WorkingMedium::controls(double t) const {
    return {ramps_[0].value(t), ramps_[1].value(t), ramps_[2].value(t)};
}

ComplexMatrix WorkingMedium::h0(double t) const {
    const ControlVector c = controls(t);
    switch (kind_) {
        case MediumKind::SingleSpinGeneric: return single_spin_h0(FieldVector(c[0], c[1], c[2]));
        case MediumKind::LandauZener: return lz_h0(c[0], c[2]);
        case MediumKind::TwoSpinXY: return xy_h0({c[0], c[1], c[2]});
    }
    throw DomainError("WorkingMedium: unknown kind");
}

ComplexMatrix WorkingMedium::h0_rate(double t) const {
    // Every family is linear in its controls.
    const ControlVector r{ramps_[0].rate(t), ramps_[1].rate(t), ramps_[2].rate(t)};
    switch (kind_) {
        case MediumKind::SingleSpinGeneric: return single_spin_h0(FieldVector(r[0], r[1], r[2]));
        case MediumKind::LandauZener: return lz_h0(r[0], r[2]);
        case MediumKind::TwoSpinXY: return xy_h0({r[0], r[1], r[2]});
    }
    throw DomainError("WorkingMedium: unknown kind");
}

ComplexMatrix WorkingMedium::cd(double t) const {
    const ControlVector c = controls(t);
    const ControlVector r{ramps_[0].rate(t), ramps_[1].rate(t), ramps_[2].rate(t)};
    switch (kind_) {
        case MediumKind::SingleSpinGeneric:
            return single_spin_cd(FieldVector(c[0], c[1], c[2]), FieldVector(r[0], r[1], r[2]));
        case MediumKind::LandauZener: return lz_cd(c[0], c[2], r[2]);
        case MediumKind::TwoSpinXY:
            if (anisotropy_) return xy_cd_transverse(*anisotropy_, c[2], r[2]);
            return xy_cd_general({c[0], c[1], c[2]}, {r[0], r[1], r[2]});
    }
    throw DomainError("WorkingMedium: unknown kind");
}

ComplexMatrix WorkingMedium::cd_rate(double t) const {
    const ControlVector c = controls(t);
    const ControlVector r{ramps_[0].rate(t), ramps_[1].rate(t), ramps_[2].rate(t)};
    const ControlVector a{ramps_[0].acceleration(t), ramps_[1].acceleration(t), ramps_[2].acceleration(t)};
    switch (kind_) {
        case MediumKind::SingleSpinGeneric:
            return single_spin_cd_rate(FieldVector(c[0], c[1], c[2]), FieldVector(r[0], r[1], r[2]),
                                       FieldVector(a[0], a[1], a[2]));
        case MediumKind::LandauZener: return lz_cd_rate(c[0], c[2], r[2], a[2]);
        case MediumKind::TwoSpinXY:
            if (anisotropy_) return xy_cd_transverse_rate(*anisotropy_, c[2], r[2], a[2]);
            return xy_cd_general_rate({c[0], c[1], c[2]}, {r[0], r[1], r[2]}, {a[0], a[1], a[2]});
    }
    throw DomainError("WorkingMedium: unknown kind");
}

ComplexMatrix WorkingMedium::driven(double t) const { return h0(t) + cd(t); }

MediumSpec::MediumSpec(MediumKind kind, ControlVector initial, ControlVector final,
                       std::optional<double> anisotropy)
    : kind_(kind), initial_(initial), final_(final), anisotropy_(anisotropy) {
    require_finite(initial_, "MediumSpec");
    require_finite(final_, "MediumSpec");
}

MediumSpec MediumSpec::single_spin(const FieldVector& b_initial, const FieldVector& b_final) {
    if (!(b_initial.norm() > kGapFloor) || !(b_final.norm() > kGapFloor)) {
        throw DomainError("single_spin medium: endpoint fields must be nonzero");
    }
    return MediumSpec(MediumKind::SingleSpinGeneric, {b_initial.x(), b_initial.y(), b_initial.z()},
                      {b_final.x(), b_final.y(), b_final.z()}, std::nullopt);
}

MediumSpec MediumSpec::landau_zener(double b_x, double b_z_initial, double b_z_final) {
    if (!(std::abs(b_x) > kGapFloor)) {
        throw DomainError("landau_zener medium: b_x must be nonzero (closed crossing)");
    }
    return MediumSpec(MediumKind::LandauZener, {b_x, 0.0, b_z_initial}, {b_x, 0.0, b_z_final}, std::nullopt);
}

MediumSpec MediumSpec::xy_transverse(double gamma, double h_initial, double h_final) {
    if (!(std::abs(gamma) > kGapFloor)) {
        throw DomainError("xy_transverse medium: anisotropy gamma must be nonzero");
    }
    return MediumSpec(MediumKind::TwoSpinXY, {1.0 + gamma, 1.0 - gamma, h_initial},
                      {1.0 + gamma, 1.0 - gamma, h_final}, gamma);
}

MediumSpec MediumSpec::xy_general(const XYCouplings& initial, const XYCouplings& final) {
    return MediumSpec(MediumKind::TwoSpinXY, {initial.j_x, initial.j_y, initial.h},
                      {final.j_x, final.j_y, final.h}, std::nullopt);
}

ComplexMatrix MediumSpec::hamiltonian(const ControlVector& c) const {
    switch (kind_) {
        case MediumKind::SingleSpinGeneric: return single_spin_h0(FieldVector(c[0], c[1], c[2]));
        case MediumKind::LandauZener: return lz_h0(c[0], c[2]);
        case MediumKind::TwoSpinXY: return xy_h0({c[0], c[1], c[2]});
    }
    throw DomainError("MediumSpec: unknown kind");
}

WorkingMedium MediumSpec::stroke(Direction direction, double duration) const {
    const ControlVector& from = direction == Direction::Expansion ? initial_ : final_;
    const ControlVector& to = direction == Direction::Expansion ? final_ : initial_;
    std::array<RampProtocol, 3> ramps{
        RampProtocol::from_endpoints(from[0], to[0], duration),
        RampProtocol::from_endpoints(from[1], to[1], duration),
        RampProtocol::from_endpoints(from[2], to[2], duration),
    };
    return WorkingMedium(kind_, ramps, anisotropy_);
}

}  // namespace otto
