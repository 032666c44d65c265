// Zero-curvature check for (H, E) pairs:
//   dH/d eps - dE/dt + i [E, H] = 0  on the (t, eps) plane.
#pragma once

#include <json.hpp>

#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "lzs/models/affine_model.hpp"
#include "lzs/models/catalog.hpp"
#include "lzs/numerics/linalg.hpp"

namespace lzs::zerocurv {

/// Residual at (t, eps). Without a step the eps-derivative of H is exact;
/// with a step it is a central difference.
inline ComplexMatrix curvature_residual(const models::AffineModel& model, double t, double eps,
                                        std::optional<double> step = std::nullopt) {
    const models::Partner& partner = model.partner();
    partner.check_pole(eps);
    ComplexMatrix dh;
    if (step) {
        const double d = *step;
        if (!(d > 0.0) || d > 1e-3 * std::abs(eps)) {
            std::ostringstream os;
            os << "curvature_residual: step must lie in (0, 1e-3 |eps|], got " << d;
            throw ValidationError(os.str());
        }
        partner.check_pole(eps - d);
        partner.check_pole(eps + d);
        dh = (models::hamiltonian_at(model, t, eps + d) - models::hamiltonian_at(model, t, eps - d)) / (2.0 * d);
    } else {
        dh = model.a_series().d_eps(eps);
    }
    const ComplexMatrix h = models::hamiltonian_at(model, t, eps);
    const ComplexMatrix e = partner.at(t, eps);
    return dh - partner.e_t + kI * numerics::commutator(e, h);
}

inline double residual_norm(const ComplexMatrix& r) { return r.norm(); }

struct CurvatureReport {
    models::Family family = models::Family::lz2;
    double max_residual = 0.0;
    double worst_t = 0.0;
    double worst_eps = 0.0;
    ComplexMatrix worst_residual;
    bool pass = false;
};

inline constexpr double kCurvatureTolerance = 1e-10;

inline std::vector<double> default_t_grid() { return {-10.0, -1.0, 0.0, 1.0, 10.0}; }
inline std::vector<double> default_eps_grid() { return {-3.0, -1.0, -0.5, 0.5, 1.0, 3.0}; }

/// Maximum residual (Frobenius norm) over the grid; PASS iff <= 1e-10.
inline CurvatureReport verify_pair(const models::AffineModel& model, const std::vector<double>& t_grid,
                                   const std::vector<double>& eps_grid) {
    if (t_grid.empty() || eps_grid.empty()) throw ValidationError("verify_pair: empty grid");
    CurvatureReport rep;
    rep.family = model.family();
    bool first = true;
    for (double eps : eps_grid) {
        for (double t : t_grid) {
            ComplexMatrix r = curvature_residual(model, t, eps);
            const double n = residual_norm(r);
            if (first || n > rep.max_residual) {
                rep.max_residual = n;
                rep.worst_t = t;
                rep.worst_eps = eps;
                rep.worst_residual = std::move(r);
                first = false;
            }
        }
    }
    rep.pass = rep.max_residual <= kCurvatureTolerance;
    return rep;
}

inline CurvatureReport verify_pair(const models::AffineModel& model) {
    return verify_pair(model, default_t_grid(), default_eps_grid());
}

/// {family, max_residual, worst_point: {t, eps}, pass}
inline nlohmann::ordered_json report_to_json(const CurvatureReport& r) {
    nlohmann::ordered_json j;
    j["family"] = std::string(models::family_name(r.family));
    j["max_residual"] = r.max_residual;
    j["worst_point"] = {{"t", r.worst_t}, {"eps", r.worst_eps}};
    j["pass"] = r.pass;
    return j;
}

}  // namespace lzs::zerocurv
