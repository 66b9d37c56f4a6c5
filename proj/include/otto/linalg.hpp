// linalg.hpp - dense complex matrix helpers for 2- and 4-level systems

#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace otto {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Spectrum of a Hermitian matrix. values are ascending; column k of vectors
// is the normalized eigenvector of values[k], with its largest-magnitude
// component made real and positive.
struct EigenSystem {
    RealVector values;
    ComplexMatrix vectors;
};

namespace linalg {

// Absolute tolerances, scaled by max(1, max|entry|) where noted.
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-9;
inline constexpr double kPositivityTolerance = 1e-10;
inline constexpr double kImaginaryTolerance = 1e-10;
inline constexpr double kEigenResidualTolerance = 1e-10;

ComplexMatrix identity(Eigen::Index dim);
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

// Largest entry magnitude.
double max_abs(const ComplexMatrix& m);

// max|m_ij - conj(m_ji)| <= tol * max(1, max|m|).
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTolerance);

// Throws ValidationError naming `what` when the invariant fails.
void require_hermitian(const ComplexMatrix& m, std::string_view what);
void require_density_operator(const ComplexMatrix& rho, std::string_view what);

EigenSystem hermitian_eigendecomposition(const ComplexMatrix& h);

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// exp(-i h dt), built from the spectral decomposition of h.
ComplexMatrix step_propagator(const ComplexMatrix& h, double dt);

// Re Tr(rho op). Throws NumericError if the imaginary part is not negligible.
double expectation(const ComplexMatrix& rho, const ComplexMatrix& op);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

// (1/2) sum |eigenvalues(a - b)| for Hermitian a, b.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// Largest |eigenvalue| of a Hermitian matrix.
double spectral_norm(const ComplexMatrix& h);

double frobenius_norm(const ComplexMatrix& m);

}  // namespace linalg
}  // namespace otto
