// Shared helpers for the unit tests. Reference matrices here are written out
// entry by entry so they do not depend on the library under test.

#pragma once

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "otto/linalg.hpp"

namespace otto::testing {

inline const Complex I{0.0, 1.0};

inline ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    ComplexMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

inline ComplexMatrix sx() { return mat2(0.0, 1.0, 1.0, 0.0); }
inline ComplexMatrix sy() { return mat2(0.0, -I, I, 0.0); }
inline ComplexMatrix sz() { return mat2(1.0, 0.0, 0.0, -1.0); }
inline ComplexMatrix id2() { return mat2(1.0, 0.0, 0.0, 1.0); }

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

// exp(-i h dt) by scaling and squaring Pade, independent of the spectral route.
inline ComplexMatrix expm_oracle(const ComplexMatrix& h, double dt) {
    const ComplexMatrix a = (-I * dt) * h;
    return a.exp();
}

inline double max_entry(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index dim, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    ComplexMatrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        m(r, r) = u(rng);
        for (Eigen::Index c = r + 1; c < dim; ++c) {
            m(r, c) = Complex(u(rng), u(rng));
            m(c, r) = std::conj(m(r, c));
        }
    }
    return m;
}

inline ComplexMatrix random_density(std::mt19937_64& rng, Eigen::Index dim) {
    const ComplexMatrix a = random_hermitian(rng, dim) + I * random_hermitian(rng, dim);
    ComplexMatrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return rho;
}

// exp(-h/T)/Z via the matrix exponential.
inline ComplexMatrix gibbs_oracle(const ComplexMatrix& h, double t) {
    const ComplexMatrix a = (-1.0 / t) * h;
    ComplexMatrix e = a.exp();
    return e / e.trace();
}

inline double re_trace(const ComplexMatrix& a, const ComplexMatrix& b) { return (a * b).trace().real(); }

}  // namespace otto::testing
