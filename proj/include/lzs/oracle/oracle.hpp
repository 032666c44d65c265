// Numerical ground truth: time-ordered propagation of i du/dt = H(t, eps) u,
// transition probabilities with a finite-horizon error estimate, horizon
// extrapolation, and continuously tracked adiabatic spectra.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "lzs/models/affine_model.hpp"
#include "lzs/numerics/linalg.hpp"
#include "lzs/numerics/ode.hpp"
#include "lzs/scatter_matrix.hpp"

namespace lzs::oracle {

namespace detail {

inline void require_horizon(double horizon, const char* who) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        std::ostringstream os;
        os << who << ": horizon T must be positive, got " << horizon;
        throw ValidationError(os.str());
    }
}

/// Per-step tolerances three decades below the requested accuracy, so the
/// accumulated unitarity defect stays within 10 rtol.
inline numerics::OdeSettings local_settings(numerics::OdeSettings s) {
    s.rtol = std::max(s.rtol * 1e-3, 1e-15);
    s.atol = std::max(s.atol * 1e-3, 1e-17);
    return s;
}

/// Evolves u from t0 to t1 (either direction) under -i H(t) u.
inline ComplexMatrix evolve(const models::AffineModel& model, double eps, const ComplexMatrix& u0, double t0,
                            double t1, const numerics::OdeSettings& settings, numerics::IntegrationStats* stats) {
    const ComplexMatrix a = model.a(eps);
    const ComplexVector slopes = model.slopes().cast<Complex>();
    ComplexMatrix h = a;
    auto rhs = [&](double t, const ComplexMatrix& u, ComplexMatrix& du) {
        h.diagonal() = a.diagonal() + t * slopes;
        du.noalias() = -kI * (h * u);
    };
    return numerics::integrate(rhs, u0, t0, t1, local_settings(settings), stats);
}

/// Model eps, or 0 for families whose Hamiltonian does not depend on eps.
inline double model_eps(const models::AffineModel& model, double eps) {
    return model.a_series().lin.isZero(0.0) && !model.a_series().has_pole() ? 0.0 : eps;
}

}  // namespace detail

/// U(T, -T), built as U(T, 0) U(0, -T).
inline ComplexMatrix propagate(const models::AffineModel& model, double eps, double horizon,
                               const numerics::OdeSettings& settings = {},
                               numerics::IntegrationStats* stats = nullptr) {
    detail::require_horizon(horizon, "propagate");
    settings.validate();
    const ComplexMatrix id = ComplexMatrix::Identity(model.dim(), model.dim());
    const double e = detail::model_eps(model, eps);
    const ComplexMatrix fwd = detail::evolve(model, e, id, 0.0, horizon, settings, stats);
    const ComplexMatrix bwd = detail::evolve(model, e, id, 0.0, -horizon, settings, stats);
    return fwd * bwd.adjoint();
}

/// Propagator from t0 to t1 (t1 < t0 allowed).
inline ComplexMatrix propagate_between(const models::AffineModel& model, double eps, double t0, double t1,
                                       const numerics::OdeSettings& settings = {}) {
    settings.validate();
    const ComplexMatrix id = ComplexMatrix::Identity(model.dim(), model.dim());
    return detail::evolve(model, detail::model_eps(model, eps), id, t0, t1, settings, nullptr);
}

inline RealMatrix probabilities(const ComplexMatrix& u) { return u.cwiseAbs2(); }

struct OracleResult {
    ScatterMatrix s;
    double horizon = 0.0;
    double error_estimate = 0.0;
    double unitarity_defect = 0.0;
    /// Spread over the horizons exceeded 0.1.
    bool flagged = false;
    /// (T, S(T)) for T/2, T/sqrt2, T.
    std::vector<std::pair<double, RealMatrix>> horizons = {};
};

inline constexpr double kSpreadFlag = 0.1;

/// 300 max(1, |eps|, delta^2 / min |slope|).
inline double default_horizon(const models::AffineModel& model, double eps) {
    double delta = 0.0;
    for (double d : models::as_list(model.descriptor().delta)) delta = std::max(delta, std::abs(d));
    double min_slope = std::numeric_limits<double>::infinity();
    for (double s : models::as_list(model.descriptor().slope)) {
        if (s != 0.0) min_slope = std::min(min_slope, std::abs(s));
    }
    const double ratio = std::isfinite(min_slope) ? delta * delta / min_slope : 0.0;
    return 300.0 * std::max({1.0, std::abs(detail::model_eps(model, eps)), ratio});
}

/// S(i, j) = |U(T, -T)(i, j)|^2 with the spread over {T/2, T/sqrt2, T} as the
/// error estimate.
inline OracleResult numeric_smatrix(const models::AffineModel& model, double eps, double horizon,
                                    const numerics::OdeSettings& settings = {}) {
    detail::require_horizon(horizon, "numeric_smatrix");
    settings.validate();
    const int k = model.dim();
    const double e = detail::model_eps(model, eps);
    const std::array<double, 3> marks{horizon / 2.0, horizon / std::sqrt(2.0), horizon};
    std::array<ComplexMatrix, 3> fwd, bwd;
    ComplexMatrix uf = ComplexMatrix::Identity(k, k), ub = uf;
    double last = 0.0;
    for (int i = 0; i < 3; ++i) {
        uf = detail::evolve(model, e, uf, last, marks[i], settings, nullptr);
        ub = detail::evolve(model, e, ub, -last, -marks[i], settings, nullptr);
        fwd[i] = uf;
        bwd[i] = ub;
        last = marks[i];
    }
    OracleResult out{ScatterMatrix::identity(k)};
    out.horizon = horizon;
    RealMatrix lo, hi;
    for (int i = 0; i < 3; ++i) {
        const ComplexMatrix u = fwd[i] * bwd[i].adjoint();
        const RealMatrix p = probabilities(u);
        out.horizons.emplace_back(marks[i], p);
        lo = i == 0 ? p : RealMatrix(lo.cwiseMin(p));
        hi = i == 0 ? p : RealMatrix(hi.cwiseMax(p));
        if (i == 2) {
            out.unitarity_defect = std::max(numerics::unitarity_defect(fwd[i]), numerics::unitarity_defect(bwd[i]));
            out.unitarity_defect = std::max({out.unitarity_defect, numerics::unitarity_defect(u),
                                             numerics::unitarity_defect(ComplexMatrix(u.adjoint()))});
            out.s = ScatterMatrix::from_probabilities(p, std::max(1e-10, 10.0 * out.unitarity_defect));
        }
    }
    out.error_estimate = (hi - lo).maxCoeff();
    out.flagged = out.error_estimate > kSpreadFlag;
    return out;
}

inline OracleResult numeric_smatrix(const models::AffineModel& model, double eps,
                                    const numerics::OdeSettings& settings = {}) {
    return numeric_smatrix(model, eps, default_horizon(model, eps), settings);
}

struct Extrapolation {
    RealMatrix value;
    double radius = 0.0;
    /// Successive changes did not shrink; value is the largest-T input.
    bool fallback = false;
};

/// Entrywise least-squares fit S(T) = S_inf + c / T. The radius is the
/// largest fit residual; non-monotone convergence returns the largest-T
/// matrix with the full spread of the sequence as radius.
inline Extrapolation extrapolate(const std::vector<std::pair<double, RealMatrix>>& results) {
    if (results.size() < 3) throw ValidationError("extrapolate: needs at least 3 horizons");
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!(results[i].first > 0.0)) throw ValidationError("extrapolate: horizons must be positive");
        if (i > 0 && !(results[i].first > results[i - 1].first)) {
            throw ValidationError("extrapolate: horizons must be strictly increasing");
        }
        if (results[i].second.rows() != results[0].second.rows() ||
            results[i].second.cols() != results[0].second.cols()) {
            throw ValidationError("extrapolate: matrices differ in shape");
        }
    }
    const std::size_t n = results.size();
    std::vector<double> steps;
    for (std::size_t i = 1; i < n; ++i) steps.push_back((results[i].second - results[i - 1].second).cwiseAbs().maxCoeff());
    bool monotone = true;
    for (std::size_t i = 1; i < steps.size(); ++i) {
        if (steps[i] > steps[i - 1] * (1.0 + 1e-9) + 1e-15) monotone = false;
    }
    if (!monotone) {
        RealMatrix lo = results[0].second, hi = results[0].second;
        for (const auto& [t, m] : results) {
            lo = lo.cwiseMin(m);
            hi = hi.cwiseMax(m);
        }
        return {results.back().second, (hi - lo).maxCoeff(), true};
    }
    Eigen::MatrixXd design(n, 2);
    for (std::size_t i = 0; i < n; ++i) design.row(i) << 1.0, 1.0 / results[i].first;
    const auto qr = design.colPivHouseholderQr();
    const Eigen::Index rows = results[0].second.rows(), cols = results[0].second.cols();
    Extrapolation out{RealMatrix(rows, cols), 0.0, false};
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            Eigen::VectorXd y(n);
            for (std::size_t i = 0; i < n; ++i) y(i) = results[i].second(r, c);
            const Eigen::VectorXd coef = qr.solve(y);
            out.value(r, c) = coef(0);
            out.radius = std::max(out.radius, (design * coef - y).cwiseAbs().maxCoeff());
        }
    }
    return out;
}

struct Spectrum {
    std::vector<double> t;
    /// curves(p, c): eigenvalue of curve c at grid point p.
    RealMatrix curves;
    /// Grid points where degenerate eigenvalues made the assignment ambiguous.
    std::vector<bool> flagged;
};

/// Eigenvalues of H(t, eps) on the grid, tracked by eigenvector overlap.
/// Exactly degenerate eigenvalues are matched as a group and their curves
/// keep the sorted order of the previous point; such points are flagged.
inline Spectrum adiabatic_spectrum(const models::AffineModel& model, double eps, const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw ValidationError("adiabatic_spectrum: empty grid");
    for (double t : t_grid) {
        if (!std::isfinite(t)) throw ValidationError("adiabatic_spectrum: grid values must be finite");
    }
    const int k = model.dim();
    const double e = detail::model_eps(model, eps);
    Spectrum out{t_grid, RealMatrix(t_grid.size(), k), std::vector<bool>(t_grid.size(), false)};
    ComplexMatrix prev_vecs;
    for (std::size_t p = 0; p < t_grid.size(); ++p) {
        const ComplexMatrix h = models::hamiltonian_at(model, t_grid[p], e);
        const numerics::Eigensystem es = numerics::hermitian_eigs(h);
        const double tol = 1e-9 * std::max(1.0, es.values.cwiseAbs().maxCoeff());
        // clusters of (numerically) equal eigenvalues, ascending
        std::vector<std::vector<int>> clusters;
        for (int j = 0; j < k; ++j) {
            if (j > 0 && es.values(j) - es.values(j - 1) <= tol) {
                clusters.back().push_back(j);
            } else {
                clusters.push_back({j});
            }
        }
        const bool degenerate = static_cast<int>(clusters.size()) < k;
        if (p == 0) {
            out.curves.row(0) = es.values.transpose();
            prev_vecs = es.vectors;
            out.flagged[0] = degenerate;
            continue;
        }
        // weight(c, g): overlap of curve c with cluster g
        const int ng = static_cast<int>(clusters.size());
        RealMatrix weight(k, ng);
        for (int c = 0; c < k; ++c) {
            for (int g = 0; g < ng; ++g) {
                double w = 0.0;
                for (int j : clusters[g]) w += std::norm(es.vectors.col(j).dot(prev_vecs.col(c)));
                weight(c, g) = w;
            }
        }
        std::vector<int> capacity(ng), owner(k, -1);
        for (int g = 0; g < ng; ++g) capacity[g] = static_cast<int>(clusters[g].size());
        for (int round = 0; round < k; ++round) {
            double best = -1.0;
            int bc = -1, bg = -1;
            for (int c = 0; c < k; ++c) {
                if (owner[c] >= 0) continue;
                for (int g = 0; g < ng; ++g) {
                    if (capacity[g] > 0 && weight(c, g) > best) {
                        best = weight(c, g);
                        bc = c;
                        bg = g;
                    }
                }
            }
            owner[bc] = bg;
            --capacity[bg];
        }
        ComplexMatrix next(k, k);
        for (int g = 0; g < ng; ++g) {
            std::vector<int> members;
            for (int c = 0; c < k; ++c) {
                if (owner[c] == g) members.push_back(c);
            }
            std::sort(members.begin(), members.end(), [&](int x, int y) {
                return out.curves(p - 1, x) < out.curves(p - 1, y);
            });
            if (clusters[g].size() == 1) {
                const int j = clusters[g][0];
                out.curves(p, members[0]) = es.values(j);
                next.col(members[0]) = es.vectors.col(j);
                continue;
            }
            // carry each curve's previous vector projected onto the cluster
            ComplexMatrix basis(k, clusters[g].size());
            for (std::size_t q = 0; q < clusters[g].size(); ++q) basis.col(q) = es.vectors.col(clusters[g][q]);
            for (std::size_t q = 0; q < members.size(); ++q) {
                const int c = members[q];
                out.curves(p, c) = es.values(clusters[g][q]);
                ComplexVector v = basis * (basis.adjoint() * prev_vecs.col(c));
                next.col(c) = v.norm() > 1e-8 ? ComplexVector(v / v.norm()) : ComplexVector(basis.col(q));
            }
        }
        prev_vecs = next;
        out.flagged[p] = degenerate;
    }
    return out;
}

}  // namespace lzs::oracle
