// Dense complex linear algebra helpers on top of Eigen.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "lzs/errors.hpp"

namespace lzs {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

namespace numerics {

inline double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// max |M - M^dagger|
inline double hermiticity_defect(const ComplexMatrix& m) {
    return max_abs(m - m.adjoint());
}

/// max |U^dagger U - I|
inline double unitarity_defect(const ComplexMatrix& u) {
    return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols()));
}

inline void require_square(const ComplexMatrix& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        std::ostringstream os;
        os << who << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw ValidationError(os.str());
    }
}

/// Throws unless max|M - M^dagger| <= rel_tol * max|M|.
inline void require_hermitian(const ComplexMatrix& m, const char* who, double rel_tol = 1e-13) {
    require_square(m, who);
    const double dev = hermiticity_defect(m);
    const double scale = max_abs(m);
    if (dev > rel_tol * scale) {
        std::ostringstream os;
        os.precision(3);
        os << who << ": matrix is not Hermitian (max |M - M^dagger| = " << dev
           << ", allowed " << rel_tol * scale << ")";
        throw ValidationError(os.str());
    }
}

struct Eigensystem {
    RealVector values;      // ascending
    ComplexMatrix vectors;  // orthonormal columns
};

/// Eigen-decomposition of a Hermitian matrix. Degenerate eigenspaces come back
/// with an arbitrary orthonormal basis.
inline Eigensystem hermitian_eigs(const ComplexMatrix& m) {
    require_hermitian(m, "hermitian_eigs");
    // Symmetrize so that round-off in the lower triangle cannot leak in.
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eigs: eigen decomposition did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        std::ostringstream os;
        os << "commutator: dimension mismatch (" << a.rows() << "x" << a.cols() << " vs "
           << b.rows() << "x" << b.cols() << ")";
        throw ValidationError(os.str());
    }
    return a * b - b * a;
}

/// Pauli matrices sigma_1..sigma_3 (index 1-based).
inline ComplexMatrix pauli(int i) {
    ComplexMatrix s(2, 2);
    switch (i) {
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, -kI, kI, 0; break;
        case 3: s << 1, 0, 0, -1; break;
        default: throw ValidationError("pauli: index must be 1, 2 or 3");
    }
    return s;
}

}  // namespace numerics
}  // namespace lzs
