// Constructors for every Hamiltonian family and its zero-curvature partner.
#pragma once

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lzs/models/affine_model.hpp"
#include "lzs/models/representations.hpp"
#include "lzs/models/spin_rep.hpp"

namespace lzs::models {

/// Which su3six partner to attach. The default is the verified one; the other
/// settings reproduce alternative readings of individual entries so the
/// curvature check can tell them apart.
struct Su3SixPartnerForm {
    /// Put K (instead of K/sqrt2) on the (4,5) and (5,4) entries.
    bool k_on_flat_pair = false;
    /// Use -delta/b with this b at (5,2) instead of -delta/a.
    std::optional<double> slope_at_52;
};

enum class Su3Adj8PartnerForm {
    adjoint_of_bowtie3,  // ad(E) of the three-level partner; satisfies zero curvature
    tabulated,           // the alternative closed-form table, kept for comparison
};

namespace detail {

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw ValidationError(std::string(what) + " must be finite");
}

inline void require_positive_slope(double a, Family f) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        std::ostringstream os;
        os << family_name(f) << ": slope must be a positive finite number, got " << a;
        throw ValidationError(os.str());
    }
}

inline void reject_eps(const ModelDescriptor& d) {
    if (d.eps) {
        throw ValidationError(std::string(family_name(d.family)) + " takes no eps parameter");
    }
}

inline void check_k(const ModelDescriptor& d, int dim) {
    if (d.k && *d.k != dim) {
        std::ostringstream os;
        os << family_name(d.family) << ": k = " << *d.k << " does not match dimension " << dim;
        throw ValidationError(os.str());
    }
}

inline RealVector real_vec(std::initializer_list<double> xs) {
    RealVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

/// Three-level bow-tie partner as an eps-Laurent series plus t-part.
inline Partner bowtie3_partner(double delta, double a) {
    Partner p{EpsLaurent::zero(3), ComplexMatrix::Zero(3, 3)};
    const double d2a = delta * delta / a;
    p.e.inv(0, 1) = p.e.inv(1, 0) = -d2a;
    p.e.inv(2, 2) = -d2a;
    p.e.c0(0, 2) = p.e.c0(2, 0) = -delta / a;
    p.e.c0(1, 2) = p.e.c0(2, 1) = delta / a;
    p.e.lin(2, 2) = 1.0 / a;
    p.e_t.diagonal() << 1.0, -1.0, 0.0;
    return p;
}

inline EpsLaurent bowtie3_a(double delta) {
    EpsLaurent a = EpsLaurent::zero(3);
    a.c0(0, 2) = a.c0(2, 0) = delta;
    a.c0(1, 2) = a.c0(2, 1) = delta;
    a.lin.diagonal() << 1.0, -1.0, 0.0;
    return a;
}

}  // namespace detail

inline AffineModel build_lz2(double delta, double slope) {
    ModelDescriptor d{Family::lz2, std::nullopt, delta, slope, std::nullopt};
    detail::require_finite(delta, "delta");
    detail::require_positive_slope(slope, d.family);
    EpsLaurent a = EpsLaurent::zero(2);
    a.c0(0, 1) = a.c0(1, 0) = delta;
    return AffineModel(d, a, detail::real_vec({slope, -slope}));
}

/// H = 2 (a t Z + delta X) in the descending-m basis of spin (k-1)/2.
inline AffineModel build_spin(int k, double delta, double slope) {
    ModelDescriptor d{Family::spin, k, delta, slope, std::nullopt};
    detail::require_finite(delta, "delta");
    detail::require_positive_slope(slope, d.family);
    const SpinRep rep = build_spin_rep(k);
    EpsLaurent a = EpsLaurent::zero(k);
    a.c0 = 2.0 * delta * rep.x;
    RealVector slopes = 2.0 * slope * rep.z.diagonal().real();
    return AffineModel(d, a, slopes);
}

/// Spin-1 crossing written with the flat level last.
inline AffineModel build_adjoint3(double delta, double slope) {
    ModelDescriptor d{Family::adjoint3, std::nullopt, delta, slope, std::nullopt};
    detail::require_finite(delta, "delta");
    detail::require_positive_slope(slope, d.family);
    EpsLaurent a = EpsLaurent::zero(3);
    a.c0(0, 2) = a.c0(2, 0) = M_SQRT2 * delta;
    a.c0(1, 2) = a.c0(2, 1) = M_SQRT2 * delta;
    AffineModel model(d, a, detail::real_vec({2.0 * slope, -2.0 * slope, 0.0}));
    // rows are m = +1, -1, 0; spin(3) rows are m = +1, 0, -1
    model.set_basis_to_spin({0, 2, 1});
    return model;
}

inline AffineModel build_bowtie3(double delta, double slope, std::optional<double> eps = std::nullopt) {
    ModelDescriptor d{Family::bowtie3, std::nullopt, delta, slope, eps};
    detail::require_finite(delta, "delta");
    detail::require_positive_slope(slope, d.family);
    if (eps) detail::require_finite(*eps, "eps");
    return AffineModel(d, detail::bowtie3_a(delta), detail::real_vec({0.0, 0.0, slope}),
                       detail::bowtie3_partner(delta, slope));
}

/// k-level bow-tie: two flat levels at +-eps coupled to k-2 sloped levels.
/// Slopes must be nonzero with strictly increasing magnitudes.
inline AffineModel build_bowtieN(const std::vector<double>& deltas, const std::vector<double>& slopes,
                                 std::optional<double> eps = std::nullopt,
                                 std::optional<int> k = std::nullopt) {
    if (slopes.empty()) throw ValidationError("bowtieN: at least one slope is required");
    std::vector<double> cpl = deltas;
    if (cpl.size() == 1 && slopes.size() > 1) cpl.assign(slopes.size(), deltas.front());
    if (cpl.size() != slopes.size()) {
        std::ostringstream os;
        os << "bowtieN: " << deltas.size() << " couplings given for " << slopes.size() << " slopes";
        throw ValidationError(os.str());
    }
    const int n = static_cast<int>(slopes.size());
    for (int i = 0; i < n; ++i) {
        detail::require_finite(cpl[i], "delta");
        detail::require_finite(slopes[i], "slope");
        if (slopes[i] == 0.0) throw ValidationError("bowtieN: slopes must be nonzero");
        if (i > 0 && !(std::abs(slopes[i]) > std::abs(slopes[i - 1]))) {
            std::ostringstream os;
            os << "bowtieN: slope magnitudes must be distinct and strictly increasing (|"
               << slopes[i - 1] << "| then |" << slopes[i] << "|)";
            throw ValidationError(os.str());
        }
    }
    if (eps) detail::require_finite(*eps, "eps");

    ModelDescriptor d{Family::bowtieN, k,
                      deltas.size() == 1 ? ScalarOrList(deltas.front()) : ScalarOrList(deltas),
                      ScalarOrList(slopes), eps};
    const int dim = n + 2;
    detail::check_k(d, dim);

    EpsLaurent a = EpsLaurent::zero(dim);
    a.lin(0, 0) = 1.0;
    a.lin(1, 1) = -1.0;
    RealVector b = RealVector::Zero(dim);
    Partner p{EpsLaurent::zero(dim), ComplexMatrix::Zero(dim, dim)};
    p.e_t(0, 0) = 1.0;
    p.e_t(1, 1) = -1.0;
    double pole = 0.0;  // h(eps) = pole / eps
    for (int i = 0; i < n; ++i) pole -= cpl[i] * cpl[i] / slopes[i];
    p.e.inv(0, 1) = p.e.inv(1, 0) = pole;
    for (int i = 0; i < n; ++i) {
        const int r = i + 2;
        a.c0(0, r) = a.c0(r, 0) = cpl[i];
        a.c0(1, r) = a.c0(r, 1) = cpl[i];
        b(r) = slopes[i];
        p.e.c0(0, r) = p.e.c0(r, 0) = -cpl[i] / slopes[i];
        p.e.c0(1, r) = p.e.c0(r, 1) = cpl[i] / slopes[i];
        p.e.inv(r, r) = pole;
        p.e.lin(r, r) = 1.0 / slopes[i];
    }
    return AffineModel(d, a, b, p);
}

/// Six-level model obtained from bowtie3 in the symmetric square.
inline AffineModel build_su3six(double delta, double slope, std::optional<double> eps = std::nullopt,
                                const Su3SixPartnerForm& form = {}) {
    ModelDescriptor d{Family::su3six, std::nullopt, delta, slope, eps};
    detail::require_finite(delta, "delta");
    detail::require_positive_slope(slope, d.family);
    if (eps) detail::require_finite(*eps, "eps");
    const double s2 = M_SQRT2;
    const double da = delta / slope;

    EpsLaurent a = EpsLaurent::zero(6);
    a.c0 << 0, 0, 0, s2 * delta, 0, 0,
            0, 0, 0, delta, delta, 0,
            0, 0, 0, 0, s2 * delta, 0,
            s2 * delta, delta, 0, 0, 0, s2 * delta,
            0, delta, s2 * delta, 0, 0, s2 * delta,
            0, 0, 0, s2 * delta, s2 * delta, 0;
    a.lin.diagonal() << 2.0, 0.0, -2.0, 1.0, -1.0, 0.0;
    const RealVector b = detail::real_vec({0.0, 0.0, 0.0, slope, slope, 2.0 * slope});

    // E = K-block (1/eps), coupling block (const), L-part (eps), t-part.
    const double kk = -s2 * delta * delta / slope;  // K * eps
    const double ll = -delta * delta / slope;       // (L - eps/a) * eps
    const double flat_pair = form.k_on_flat_pair ? kk : ll;
    const double b52 = form.slope_at_52.value_or(slope);
    Partner p{EpsLaurent::zero(6), ComplexMatrix::Zero(6, 6)};
    p.e.inv(0, 1) = p.e.inv(1, 0) = kk;
    p.e.inv(1, 2) = p.e.inv(2, 1) = kk;
    p.e.inv(3, 4) = p.e.inv(4, 3) = flat_pair;
    p.e.inv(3, 3) = p.e.inv(4, 4) = ll;
    p.e.inv(5, 5) = 2.0 * ll;
    p.e.c0 << 0, 0, 0, -s2 * da, 0, 0,
              0, 0, 0, da, -da, 0,
              0, 0, 0, 0, s2 * da, 0,
              -s2 * da, da, 0, 0, 0, -s2 * da,
              0, -delta / b52, s2 * da, 0, 0, s2 * da,
              0, 0, 0, -s2 * da, s2 * da, 0;
    p.e.lin.diagonal() << 0, 0, 0, 1.0 / slope, 1.0 / slope, 2.0 / slope;
    p.e_t.diagonal() << 2.0, 0.0, -2.0, 1.0, -1.0, 0.0;
    return AffineModel(d, a, b, p);
}

/// Eight-level model obtained from bowtie3 in the adjoint representation.
inline AffineModel build_su3adj8(double delta, double slope, std::optional<double> eps = std::nullopt,
                                 Su3Adj8PartnerForm form = Su3Adj8PartnerForm::adjoint_of_bowtie3) {
    ModelDescriptor d{Family::su3adj8, std::nullopt, delta, slope, eps};
    detail::require_finite(delta, "delta");
    detail::require_positive_slope(slope, d.family);
    if (eps) detail::require_finite(*eps, "eps");
    const double s2 = M_SQRT2;
    const double s32 = std::sqrt(1.5);
    const double h = M_SQRT1_2;
    const Complex i = kI;
    const double D = delta;

    EpsLaurent a = EpsLaurent::zero(8);
    a.c0 << 0, 0, 0, 0, 0, -i * s32 * D, -i * s32 * D, 0,
            0, 0, 0, 0, i * s2 * D, i * h * D, i * h * D, i * s2 * D,
            0, 0, 0, 0, D, 0, D, 0,
            0, 0, 0, 0, 0, -D, 0, -D,
            0, -i * s2 * D, D, 0, 0, 0, 0, 0,
            i * s32 * D, -i * h * D, 0, -D, 0, 0, 0, 0,
            i * s32 * D, -i * h * D, D, 0, 0, 0, 0, 0,
            0, -i * s2 * D, 0, -D, 0, 0, 0, 0;
    a.lin.diagonal() << 0, 0, -2, 2, -1, 1, -1, 1;
    const RealVector b = detail::real_vec({0, 0, 0, 0, -slope, -slope, slope, slope});

    Partner p{EpsLaurent::zero(8), ComplexMatrix::Zero(8, 8)};
    if (form == Su3Adj8PartnerForm::adjoint_of_bowtie3) {
        const Partner parent = detail::bowtie3_partner(delta, slope);
        p.e = map_laurent(parent.e, [](const ComplexMatrix& m) { return adjoint_action(m); });
        p.e_t = adjoint_action(parent.e_t);
    } else {
        const double da = D / slope;
        const double q = D * D / slope;  // coefficient of 1/eps
        p.e.c0 << 0, 0, 0, 0, -i * s32 * da, i * s32 * da, i * s32 * da, -i * s32 * da,
                  0, 0, 0, 0, i * h * da, i * h * da, i * h * da, i * h * da,
                  0, 0, 0, 0, -da, 0, da, 0,
                  0, 0, 0, 0, 0, -da, 0, da,
                  i * s32 * da, -i * h * da, -da, 0, 0, 0, 0, 0,
                  -i * s32 * da, -i * h * da, 0, -da, 0, 0, 0, 0,
                  -i * s32 * da, -i * h * da, da, 0, 0, 0, 0, 0,
                  i * s32 * da, -i * h * da, 0, da, 0, 0, 0, 0;
        p.e.inv(1, 2) = p.e.inv(1, 3) = i * s2 * q;
        p.e.inv(2, 1) = p.e.inv(3, 1) = -i * s2 * q;
        p.e.inv(4, 4) = q;
        p.e.inv(5, 5) = q;
        p.e.inv(6, 6) = -q;
        p.e.inv(7, 7) = -q;
        p.e.inv(4, 5) = p.e.inv(5, 4) = -q;
        p.e.inv(6, 7) = p.e.inv(7, 6) = q;
        p.e.lin.diagonal() << 0, 0, 0, 0, -1.0 / slope, -1.0 / slope, 1.0 / slope, 1.0 / slope;
        p.e_t.diagonal() << 0, 0, -2, 2, -1, 1, -1, 1;
    }
    return AffineModel(d, a, b, p);
}

/// Builds the model a descriptor names, with the default (verified) partners.
inline AffineModel build_model(const ModelDescriptor& d) {
    switch (d.family) {
        case Family::lz2:
        case Family::spin:
        case Family::adjoint3: {
            detail::reject_eps(d);
            const double delta = as_scalar(d.delta, "delta");
            const double slope = as_scalar(d.slope, "slope");
            if (d.family == Family::spin) {
                if (!d.k) throw ValidationError("spin: k (dimension, >= 2) is required");
                AffineModel m = build_spin(*d.k, delta, slope);
                return AffineModel(d, m.a_series(), m.slopes());
            }
            AffineModel m = d.family == Family::lz2 ? build_lz2(delta, slope) : build_adjoint3(delta, slope);
            detail::check_k(d, m.dim());
            AffineModel out(d, m.a_series(), m.slopes());
            out.set_basis_to_spin(m.basis_to_spin());
            return out;
        }
        case Family::bowtieN: {
            AffineModel m = build_bowtieN(as_list(d.delta), as_list(d.slope), d.eps, d.k);
            return AffineModel(d, m.a_series(), m.slopes(), m.partner());
        }
        case Family::bowtie3:
        case Family::su3six:
        case Family::su3adj8: {
            const double delta = as_scalar(d.delta, "delta");
            const double slope = as_scalar(d.slope, "slope");
            AffineModel m = d.family == Family::bowtie3  ? build_bowtie3(delta, slope, d.eps)
                            : d.family == Family::su3six ? build_su3six(delta, slope, d.eps)
                                                         : build_su3adj8(delta, slope, d.eps);
            detail::check_k(d, m.dim());
            return AffineModel(d, m.a_series(), m.slopes(), m.partner());
        }
    }
    throw ValidationError("build_model: unhandled family");
}

}  // namespace lzs::models
