#include <doctest.h>

#include "otto/error.hpp"
#include "otto/models.hpp"
#include "support.hpp"

using namespace otto;
using namespace otto::testing;

namespace {

ComplexMatrix xy_plus_yx() { return kron(sx(), sy()) + kron(sy(), sx()); }

// Coefficient c of m = c * basis, for m proportional to basis.
double coefficient(const ComplexMatrix& m, const ComplexMatrix& basis) {
    return (basis.adjoint() * m).trace().real() / (basis.adjoint() * basis).trace().real();
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("ramp value and rate examples") {
    const RampProtocol p(0.5, -3.0, 1.0);
    CHECK(p.value(0.0) == 0.5);
    CHECK(p.value(1.0) == doctest::Approx(0.0));
    CHECK(p.value(0.5) == doctest::Approx(0.25));
    CHECK(p.rate(0.0) == 0.0);
    CHECK(p.rate(1.0) == 0.0);
    CHECK(p.rate(0.5) == doctest::Approx(-0.75));
    CHECK(p.acceleration(0.0) == doctest::Approx(-3.0));
    CHECK(p.acceleration(0.5) == doctest::Approx(0.0));
    CHECK_THROWS_AS(p.value(1.5), DomainError);
    CHECK_THROWS_AS(p.rate(-0.1), DomainError);
    CHECK_THROWS_AS(RampProtocol(0.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(RampProtocol(0.0, 1.0, -1.0), DomainError);
}

TEST_CASE("ramp from endpoints") {
    const RampProtocol a = RampProtocol::from_endpoints(0.5, 0.0, 1.0);
    CHECK(a.initial_value() == 0.5);
    CHECK(a.total_swing() == -3.0);
    const RampProtocol b = RampProtocol::from_endpoints(0.05, 0.0, 2.0);
    CHECK(b.initial_value() == 0.05);
    CHECK(b.total_swing() == doctest::Approx(-0.3));
    const RampProtocol c = RampProtocol::from_endpoints(0.3, 0.3, 4.0);
    CHECK(c.total_swing() == 0.0);
    CHECK(c.value(1.7) == 0.3);
    CHECK_THROWS_AS(RampProtocol::from_endpoints(0.5, 0.0, 0.0), DomainError);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-5.0, 5.0), tau(1e-3, 1e3);
    for (int trial = 0; trial < 1000; ++trial) {
        const double xi = u(rng), xf = u(rng), duration = tau(rng);
        const RampProtocol r = RampProtocol::from_endpoints(xi, xf, duration);
        CHECK(r.value(0.0) == xi);
        CHECK(r.value(duration) == xf);
    }
}

TEST_CASE("ramp derivatives match central differences") {
    const RampProtocol p(0.5, -3.0, 1.0);
    const double d = 1e-6;
    for (double t : {0.1, 0.3, 0.5, 0.77, 0.9}) {
        CHECK(std::abs((p.value(t + d) - p.value(t - d)) / (2 * d) - p.rate(t)) < 1e-9);
        CHECK(std::abs((p.rate(t + d) - p.rate(t - d)) / (2 * d) - p.acceleration(t)) < 1e-8);
    }
    // rate integrates back to the value change (Simpson on 2000 panels)
    const int n = 2000;
    double integral = p.rate(0.0) + p.rate(0.6);
    for (int k = 1; k < n; ++k) integral += (k % 2 ? 4.0 : 2.0) * p.rate(0.6 * k / n);
    integral *= 0.6 / n / 3.0;
    CHECK(integral == doctest::Approx(p.value(0.6) - p.value(0.0)).epsilon(1e-12));
}

TEST_CASE("single-spin Hamiltonian") {
    CHECK(max_entry(single_spin_h0({0, 0, 1}) - sz()) == 0.0);
    CHECK(max_entry(single_spin_h0({0, 0, 0})) == 0.0);
    const EigenSystem es = linalg::hermitian_eigendecomposition(single_spin_h0({0.1, 0, 0.5}));
    CHECK(es.values(1) == doctest::Approx(std::sqrt(0.26)).epsilon(1e-12));
    CHECK(es.values(1) == doctest::Approx(0.50990).epsilon(1e-4));
    CHECK(es.values(0) == doctest::Approx(-std::sqrt(0.26)).epsilon(1e-12));
}

TEST_CASE("single-spin CD examples") {
    CHECK(max_entry(single_spin_cd({0.1, 0, 0.25}, {0, 0, 0})) == 0.0);
    CHECK(max_entry(single_spin_cd({0.1, 0.2, 0.3}, {0.2, 0.4, 0.6})) < 1e-15);
    const ComplexMatrix cd = single_spin_cd({0.1, 0, 0.25}, {0, 0, -0.75});
    CHECK(max_entry(cd - (0.075 / 0.145) * sy()) < 1e-14);
    CHECK(coefficient(cd, sy()) == doctest::Approx(0.5172).epsilon(1e-4));
    CHECK_THROWS_AS(single_spin_cd({0, 0, 0}, {1, 0, 0}), SingularityError);
    CHECK_THROWS_AS(single_spin_cd({1e-11, 0, 0}, {1, 0, 0}), SingularityError);
}

TEST_CASE("single-spin CD properties on random fields") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const FieldVector b(u(rng), u(rng), u(rng)), b_dot(u(rng), u(rng), u(rng));
        const ComplexMatrix cd = single_spin_cd(b, b_dot);
        const FieldVector field = single_spin_cd_field(b, b_dot);
        CHECK(linalg::is_hermitian(cd));
        CHECK(std::abs(cd.trace()) < 1e-14);
        CHECK(std::abs(field.dot(b)) < 1e-12);
        CHECK(linalg::frobenius_norm(cd) == doctest::Approx(std::sqrt(2.0) * field.norm()).epsilon(1e-12));
        const ComplexMatrix spectral = berry_cd_numeric(single_spin_h0(b), single_spin_h0(b_dot));
        CHECK(max_entry(spectral - cd) < 1e-8);
    }
}

TEST_CASE("Landau-Zener Hamiltonian and CD examples") {
    const EigenSystem gap = linalg::hermitian_eigendecomposition(lz_h0(0.1, 0.0));
    CHECK(gap.values(1) - gap.values(0) == doctest::Approx(0.2));
    CHECK(linalg::hermitian_eigendecomposition(lz_h0(0.1, 0.5)).values(1) == doctest::Approx(0.50990).epsilon(1e-4));
    CHECK(linalg::hermitian_eigendecomposition(lz_h0(0.01, 0.05)).values(1) == doctest::Approx(0.050990).epsilon(1e-4));

    CHECK(max_entry(lz_cd(0.1, 0.3, 0.0)) == 0.0);
    CHECK(coefficient(lz_cd(0.1, 0.25, -0.75), sy()) == doctest::Approx(0.075 / 0.145).epsilon(1e-13));
    // scaling (b_x, b_z) by s and the rate by s leaves the coefficient unchanged
    CHECK(coefficient(lz_cd(0.01, 0.025, -0.075), sy()) == doctest::Approx(0.075 / 0.145).epsilon(1e-12));
    CHECK(max_entry(lz_cd(0.1, 0.25, -0.75) - single_spin_cd({0.1, 0, 0.25}, {0, 0, -0.75})) < 1e-15);
    CHECK_THROWS_AS(lz_cd(0.0, 0.0, 1.0), SingularityError);
}

TEST_CASE("XY Hamiltonian examples") {
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected.diagonal() << 2.0, 0.0, 0.0, -2.0;
    CHECK(max_entry(xy_h0({0, 0, 1}) - expected) == 0.0);
    const ComplexMatrix literal = 1.7 * kron(sx(), sx()) + 0.3 * kron(sy(), sy()) + 0.5 * (kron(sz(), id2()) + kron(id2(), sz()));
    CHECK(max_entry(xy_h0({1.7, 0.3, 0.5}) - literal) < 1e-15);
    const RealVector e = linalg::hermitian_eigendecomposition(xy_h0({1.7, 0.3, 0.0})).values;
    CHECK(e(0) == doctest::Approx(-2.0));
    CHECK(e(1) == doctest::Approx(-1.4));
    CHECK(e(2) == doctest::Approx(1.4));
    CHECK(e(3) == doctest::Approx(2.0));
    CHECK(max_entry(xy_cd_operator() - xy_plus_yx()) == 0.0);
}

TEST_CASE("XY CD examples") {
    CHECK(max_entry(xy_cd_general({1.7, 0.3, 0.25}, {0, 0, 0})) == 0.0);
    CHECK(max_entry(xy_cd_general({1.0, 1.0, 0.25}, {0.3, 0.3, 0.0})) == 0.0);
    const ComplexMatrix general = xy_cd_general({1.7, 0.3, 0.25}, {0, 0, -0.75});
    CHECK(coefficient(general, xy_plus_yx()) == doctest::Approx(0.525 / 2.21).epsilon(1e-13));
    CHECK(coefficient(general, xy_plus_yx()) == doctest::Approx(0.23756).epsilon(1e-4));
    CHECK(max_entry(berry_cd_numeric(xy_h0({1.7, 0.3, 0.25}), xy_h0({0, 0, -0.75})) - general) < 1e-8);

    const ComplexMatrix transverse = xy_cd_transverse(0.7, 0.25, -0.75);
    CHECK(max_entry(transverse - general) < 1e-15);
    CHECK(max_entry(xy_cd_transverse(0.7, 0.25, 0.0)) == 0.0);
    CHECK(max_entry(xy_cd_transverse(-0.7, 0.25, -0.75) + transverse) < 1e-15);
    CHECK_THROWS_AS(xy_cd_transverse(0.0, 0.0, 1.0), SingularityError);
    CHECK_THROWS_AS(xy_cd_general({1.0, 1.0, 0.0}, {0, 0, 1.0}), SingularityError);
}

TEST_CASE("closed-form CD terms agree with the spectral form") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const XYCouplings c{1.0 + u(rng), 1.0 + u(rng), u(rng)}, r{u(rng), u(rng), u(rng)};
        const ComplexMatrix h = xy_h0(c);
        const RealVector e = linalg::hermitian_eigendecomposition(h).values;
        bool gapped = true;
        for (int k = 0; k < 3; ++k) gapped = gapped && e(k + 1) - e(k) > 1e-3;
        if (!gapped) continue;
        const ComplexMatrix spectral = berry_cd_numeric(h, xy_h0(r));
        CHECK(max_entry(spectral - xy_cd_general(c, r)) < 1e-8);
        // zero diagonal in the instantaneous eigenbasis
        const EigenSystem es = linalg::hermitian_eigendecomposition(h);
        CHECK((es.vectors.adjoint() * spectral * es.vectors).diagonal().cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("berry_cd_numeric edge cases") {
    CHECK(max_entry(berry_cd_numeric(lz_h0(0.1, 0.3), ComplexMatrix::Zero(2, 2))) == 0.0);
    CHECK(max_entry(berry_cd_numeric(lz_h0(0.1, 0.25), lz_h0(0.0, -0.75)) - lz_cd(0.1, 0.25, -0.75)) < 1e-8);
    // exactly degenerate levels coupled by the drive
    CHECK_THROWS_AS(berry_cd_numeric(ComplexMatrix::Zero(2, 2), sx()), SingularityError);
    // degenerate but uncoupled: no contribution
    CHECK(max_entry(berry_cd_numeric(ComplexMatrix::Zero(2, 2), sz())) == 0.0);
}

TEST_CASE("CD rates match finite differences of the CD terms") {
    const double tau = 2.0;
    const MediumSpec media[] = {
        MediumSpec::landau_zener(0.1, 0.5, 0.0),
        MediumSpec::xy_transverse(0.7, 0.5, 0.0),
        MediumSpec::xy_general({1.4, 0.2, 0.6}, {1.9, 0.5, -0.1}),
        MediumSpec::single_spin({0.1, 0.3, 0.5}, {-0.2, 0.1, 0.05}),
    };
    for (const auto& medium : media) {
        for (Direction d : {Direction::Expansion, Direction::Compression}) {
            const WorkingMedium w = medium.stroke(d, tau);
            for (double t : {0.1, 0.5, 0.9, 1.3, 1.9}) {
                const double dt = 1e-5;
                const ComplexMatrix fd = (w.cd(t + dt) - w.cd(t - dt)) / (2 * dt);
                CHECK(max_entry(fd - w.cd_rate(t)) < 1e-7 * std::max(1.0, max_entry(w.cd_rate(t))));
                const ComplexMatrix fd_h = (w.h0(t + dt) - w.h0(t - dt)) / (2 * dt);
                CHECK(max_entry(fd_h - w.h0_rate(t)) < 1e-8);
            }
        }
    }
}

TEST_CASE("working media switch the CD term off at both ends") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0), tau_dist(1e-3, 100.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double tau = tau_dist(rng);
        const MediumSpec m = trial % 3 == 0   ? MediumSpec::landau_zener(0.05 + std::abs(u(rng)), u(rng), u(rng))
                             : trial % 3 == 1 ? MediumSpec::xy_transverse(0.1 + std::abs(u(rng)), u(rng), u(rng))
                                              : MediumSpec::single_spin({u(rng), u(rng), 1.5}, {u(rng), u(rng), 1.2});
        const WorkingMedium w = m.stroke(Direction::Expansion, tau);
        CHECK(linalg::spectral_norm(w.cd(0.0)) < 1e-12);
        CHECK(linalg::spectral_norm(w.cd(tau)) < 1e-12);
        CHECK(max_entry(w.h0(0.0) - m.initial_hamiltonian()) == 0.0);
        CHECK(max_entry(w.h0(tau) - m.final_hamiltonian()) == 0.0);
    }
}

TEST_CASE("medium construction rejects closed gaps") {
    CHECK_THROWS_AS(MediumSpec::landau_zener(0.0, 0.5, 0.0), DomainError);
    CHECK_THROWS_AS(MediumSpec::xy_transverse(0.0, 0.5, 0.0), DomainError);
    CHECK_THROWS_AS(MediumSpec::single_spin({0, 0, 0}, {0, 0, 1}), DomainError);
    const MediumSpec m = MediumSpec::xy_transverse(0.7, 0.5, 0.0);
    CHECK(m.transverse());
    CHECK(m.initial_controls()[0] == doctest::Approx(1.7));
    CHECK(m.initial_controls()[1] == doctest::Approx(0.3));
    CHECK(to_string(MediumKind::LandauZener) == std::string("landau_zener"));
}

}  // TEST_SUITE
