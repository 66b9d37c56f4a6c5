#include "otto/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "otto/error.hpp"

namespace otto::linalg {

namespace {

double scale_of(const ComplexMatrix& m) { return std::max(1.0, max_abs(m)); }

void require_square(const ComplexMatrix& m, std::string_view what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream os;
        os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw ValidationError(os.str());
    }
}

}  // namespace

ComplexMatrix identity(Eigen::Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix pauli_y() {
    const Complex i{0.0, 1.0};
    ComplexMatrix m(2, 2);
    m << 0.0, -i, i, 0.0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const double deviation = max_abs(m - m.adjoint());
    return deviation <= tol * scale_of(m);
}

void require_hermitian(const ComplexMatrix& m, std::string_view what) {
    require_square(m, what);
    if (!is_hermitian(m)) {
        std::ostringstream os;
        os << what << " is not Hermitian (max |H - H^dagger| = " << max_abs(m - m.adjoint()) << ")";
        throw ValidationError(os.str());
    }
}

void require_density_operator(const ComplexMatrix& rho, std::string_view what) {
    require_hermitian(rho, what);
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > kTraceTolerance) {
        std::ostringstream os;
        os << what << " has trace " << tr << ", expected 1";
        throw ValidationError(os.str());
    }
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
    const double lowest = solver.eigenvalues().minCoeff();
    if (lowest < -kPositivityTolerance) {
        std::ostringstream os;
        os << what << " has negative eigenvalue " << lowest;
        throw ValidationError(os.str());
    }
}

EigenSystem hermitian_eigendecomposition(const ComplexMatrix& h) {
    require_hermitian(h, "hermitian_eigendecomposition input");

    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw NumericError("hermitian_eigendecomposition: solver did not converge");
    }

    EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index k = 0; k < es.vectors.cols(); ++k) {
        auto column = es.vectors.col(k);
        Eigen::Index pivot = 0;
        column.cwiseAbs().maxCoeff(&pivot);
        const Complex phase = std::conj(column(pivot)) / std::abs(column(pivot));
        column *= phase;
        column(pivot) = Complex{column(pivot).real(), 0.0};
    }

    const ComplexMatrix residual =
        h * es.vectors - es.vectors * es.values.cast<Complex>().asDiagonal();
    const double worst = max_abs(residual);
    if (worst > kEigenResidualTolerance * scale_of(h)) {
        std::ostringstream os;
        os << "hermitian_eigendecomposition: residual " << worst << " above tolerance";
        throw NumericError(os.str());
    }
    return es;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix step_propagator(const ComplexMatrix& h, double dt) {
    if (!std::isfinite(dt)) throw DomainError("step_propagator: dt must be finite");
    const EigenSystem es = hermitian_eigendecomposition(h);
    Eigen::VectorXcd phases(es.values.size());
    for (Eigen::Index k = 0; k < es.values.size(); ++k) {
        phases(k) = std::polar(1.0, -es.values(k) * dt);
    }
    return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

double expectation(const ComplexMatrix& rho, const ComplexMatrix& op) {
    if (rho.rows() != op.rows() || rho.cols() != op.cols()) {
        throw ValidationError("expectation: dimension mismatch");
    }
    // Tr(rho op) without forming the product.
    const Complex value = (rho.transpose().array() * op.array()).sum();
    if (std::abs(value.imag()) > kImaginaryTolerance * scale_of(op)) {
        std::ostringstream os;
        os << "expectation: imaginary residual " << value.imag() << " (operator not Hermitian?)";
        throw NumericError(os.str());
    }
    return value.real();
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    const ComplexMatrix diff = a - b;
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(diff, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double spectral_norm(const ComplexMatrix& h) {
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double frobenius_norm(const ComplexMatrix& m) { return m.norm(); }

}  // namespace otto::linalg
