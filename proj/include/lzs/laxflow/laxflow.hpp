// Lax-equation engine for the spin families: the isospectral flow
// i dV/dt = [V, H], spectral projectors, and the resulting exact S-matrices.
#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "lzs/models/catalog.hpp"
#include "lzs/numerics/linalg.hpp"
#include "lzs/numerics/ode.hpp"
#include "lzs/scatter_matrix.hpp"

namespace lzs::laxflow {

/// Coefficients of V = v1 X + v2 Y + v3 Z.
struct BlochVector {
    double v1 = 0.0, v2 = 0.0, v3 = 0.0;

    double norm() const { return std::sqrt(v1 * v1 + v2 * v2 + v3 * v3); }
};

namespace detail {

inline void require_positive_slope(double a, const char* who) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        std::ostringstream os;
        os << who << ": slope must be positive, got " << a;
        throw ValidationError(os.str());
    }
}

}  // namespace detail

/// Survival probability of a single linear crossing.
inline double lz_survival(double delta, double slope) {
    detail::require_positive_slope(slope, "lz_survival");
    return std::exp(-M_PI * delta * delta / slope);
}

inline ScatterMatrix lz_closed_form(double delta, double slope) {
    detail::require_positive_slope(slope, "lz_closed_form");
    const double u = lz_survival(delta, slope);
    RealMatrix s(2, 2);
    s << u, 1.0 - u, 1.0 - u, u;
    return ScatterMatrix::from_probabilities(s, 1e-15);
}

/// Late-time Z-component of a unit Bloch vector started along Z.
inline double asymptotic_v3(double delta, double slope) {
    detail::require_positive_slope(slope, "asymptotic_v3");
    return 1.0 - 2.0 * lz_survival(delta, slope);
}

/// Spin matrices expressed in the model's own row order.
inline models::SpinRep spin_rep_for(const models::AffineModel& model) {
    using models::Family;
    if (model.family() != Family::spin && model.family() != Family::lz2 && model.family() != Family::adjoint3) {
        throw ValidationError("laxflow: model must belong to a spin family (spin, lz2, adjoint3), got " +
                              std::string(models::family_name(model.family())));
    }
    models::SpinRep rep = models::build_spin_rep(model.dim());
    const auto& perm = model.basis_to_spin();
    if (!perm.empty()) {
        auto permute = [&](const ComplexMatrix& m) {
            ComplexMatrix out(m.rows(), m.cols());
            for (int i = 0; i < m.rows(); ++i) {
                for (int j = 0; j < m.cols(); ++j) out(i, j) = m(perm[i], perm[j]);
            }
            return out;
        };
        rep.x = permute(rep.x);
        rep.y = permute(rep.y);
        rep.z = permute(rep.z);
    }
    return rep;
}

inline ComplexMatrix bloch_matrix(const models::SpinRep& rep, const BlochVector& v) {
    return v.v1 * rep.x + v.v2 * rep.y + v.v3 * rep.z;
}

/// v_i = Tr(V S_i) / Tr(S_i^2).
inline BlochVector bloch_coefficients(const models::SpinRep& rep, const ComplexMatrix& v) {
    auto coeff = [&](const ComplexMatrix& s) { return (v * s).trace().real() / (s * s).trace().real(); };
    return {coeff(rep.x), coeff(rep.y), coeff(rep.z)};
}

struct LaxResult {
    ComplexMatrix v;
    BlochVector bloch;
};

/// Integrates i dV/dt = [V, H(t)] from t0 to t1 with V(t0) = v0 . (X, Y, Z).
inline LaxResult evolve_lax(const models::AffineModel& model, const BlochVector& v0, double t0, double t1,
                            const numerics::OdeSettings& settings = {}) {
    if (!(t0 < t1)) throw ValidationError("evolve_lax: requires t0 < t1");
    const models::SpinRep rep = spin_rep_for(model);
    const ComplexMatrix a = model.a(0.0);
    const ComplexMatrix b = model.b();
    ComplexMatrix h(a.rows(), a.cols());
    auto rhs = [&](double t, const ComplexMatrix& v, ComplexMatrix& dv) {
        h = a + t * b;
        dv.noalias() = -kI * (v * h);
        dv.noalias() += kI * (h * v);
    };
    ComplexMatrix v = numerics::integrate(rhs, bloch_matrix(rep, v0), t0, t1, settings);
    return {v, bloch_coefficients(rep, v)};
}

/// Spectral projector of M for ladder value ladder[index], as the Lagrange
/// interpolation product over the remaining ladder values.
inline ComplexMatrix lagrange_projector(const ComplexMatrix& m, const std::vector<double>& ladder, int index) {
    numerics::require_square(m, "lagrange_projector");
    const int n = static_cast<int>(m.rows());
    if (static_cast<int>(ladder.size()) != n) {
        throw ValidationError("lagrange_projector: ladder length must equal the matrix dimension");
    }
    if (index < 0 || index >= n) throw ValidationError("lagrange_projector: index out of range");
    std::vector<double> sorted = ladder;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i + 1 < n; ++i) {
        if (sorted[i + 1] - sorted[i] <= 1e-12 * std::max(1.0, std::abs(sorted[i]))) {
            throw ValidationError("lagrange_projector: ladder values must be pairwise distinct");
        }
    }
    // Flowed matrices are Hermitian only up to integration error.
    numerics::require_hermitian(m, "lagrange_projector", 1e-8);
    const numerics::Eigensystem es = numerics::hermitian_eigs(0.5 * (m + m.adjoint()));
    for (int i = 0; i < n; ++i) {
        if (std::abs(es.values(i) - sorted[i]) > 1e-8) {
            std::ostringstream os;
            os << "lagrange_projector: spectrum does not match the ladder (eigenvalue " << es.values(i)
               << " vs " << sorted[i] << ")";
            throw ValidationError(os.str());
        }
    }
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    ComplexMatrix p = id;
    const double li = ladder[index];
    for (int c = 0; c < n; ++c) {
        if (c == index) continue;
        p = p * (m - ladder[c] * id) / (li - ladder[c]);
    }
    return p;
}

/// Ascending ladder -(k-1)/2, ..., (k-1)/2.
inline std::vector<double> spin_ladder(int k) {
    std::vector<double> out(k);
    for (int i = 0; i < k; ++i) out[i] = -0.5 * (k - 1) + i;
    return out;
}

/// S(i, j) = Tr(P_i(V_inf) P_j(-Z)), indices running over the ascending ladder.
/// With the descending-m basis, index j of the ladder for -Z is basis row j.
inline ScatterMatrix projector_smatrix(const models::SpinRep& rep, const BlochVector& v_inf) {
    const int k = rep.k;
    const std::vector<double> ladder = spin_ladder(k);
    const double norm = v_inf.norm();
    if (std::abs(norm - 1.0) > 1e-10) throw ValidationError("projector_smatrix: Bloch vector must be a unit vector");
    const ComplexMatrix v = bloch_matrix(rep, v_inf);
    const ComplexMatrix mz = -rep.z;
    std::vector<ComplexMatrix> pv, pz;
    for (int i = 0; i < k; ++i) {
        pv.push_back(lagrange_projector(v, ladder, i));
        pz.push_back(lagrange_projector(mz, ladder, i));
    }
    RealMatrix s(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) s(i, j) = (pv[i] * pz[j]).trace().real();
    }
    return ScatterMatrix::from_probabilities(s, 1e-10);
}

/// Exact S-matrix of the spin-(k-1)/2 crossing H = 2 (a t Z + delta X).
inline ScatterMatrix smatrix_spin(int k, double delta, double slope) {
    if (k < 2) throw ValidationError("smatrix_spin: k must be >= 2");
    const double v3 = asymptotic_v3(delta, slope);
    const BlochVector v{std::sqrt(std::max(0.0, 1.0 - v3 * v3)), 0.0, v3};
    return projector_smatrix(models::build_spin_rep(k), v);
}

inline double binomial(int n, int r) {
    double out = 1.0;
    for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
    return out;
}

/// Row 1 of the spin S-matrix: C(N-1, j-1) u^(N-j) v^(j-1), j 1-based.
inline double first_row_element(int n, double delta, double slope, int column) {
    if (n < 2) throw ValidationError("first_row_element: N must be >= 2");
    if (column < 1 || column > n) throw ValidationError("first_row_element: column out of range");
    const double u = lz_survival(delta, slope);
    const double v = 1.0 - u;
    return binomial(n - 1, column - 1) * std::pow(u, n - column) * std::pow(v, column - 1);
}

}  // namespace lzs::laxflow
