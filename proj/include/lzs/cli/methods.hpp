// S-matrix by method: algebraic (Lax projectors), crossings (path
// deformation) or numeric (oracle).
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lzs/cli/formats.hpp"
#include "lzs/crossings/generic.hpp"
#include "lzs/crossings/schedules.hpp"
#include "lzs/laxflow/laxflow.hpp"
#include "lzs/models/catalog.hpp"
#include "lzs/oracle/oracle.hpp"

namespace lzs::cli {

/// Method not available for the family (an input error, not a failure).
class UnsupportedMethodError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

enum class Method { algebraic, crossings, numeric };

inline std::string_view method_name(Method m) {
    switch (m) {
        case Method::algebraic: return "algebraic";
        case Method::crossings: return "crossings";
        case Method::numeric: return "numeric";
    }
    return "unknown";
}

inline Method parse_method(std::string_view s) {
    if (s == "algebraic") return Method::algebraic;
    if (s == "crossings") return Method::crossings;
    if (s == "numeric") return Method::numeric;
    throw ValidationError("unknown method '" + std::string(s) + "' (valid: algebraic, crossings, numeric)");
}

inline bool is_spin_family(models::Family f) {
    return f == models::Family::lz2 || f == models::Family::spin || f == models::Family::adjoint3;
}

inline Method default_method(models::Family f) {
    if (is_spin_family(f)) return Method::algebraic;
    if (f == models::Family::bowtie3 || f == models::Family::bowtieN || f == models::Family::su3six) {
        return Method::crossings;
    }
    return Method::numeric;
}

inline std::vector<Method> supported_methods(const models::AffineModel& model) {
    if (is_spin_family(model.family())) return {Method::algebraic, Method::numeric};
    if (model.has_partner()) return {Method::crossings, Method::numeric};
    return {Method::numeric};
}

struct NumericOptions {
    std::optional<double> horizon;
    double rtol = 1e-10;
};

inline SmatrixReport algebraic_smatrix(const models::AffineModel& model) {
    const models::ModelDescriptor& d = model.descriptor();
    const double delta = models::as_scalar(d.delta, "delta");
    const double slope = models::as_scalar(d.slope, "slope");
    RealMatrix s = laxflow::smatrix_spin(model.dim(), delta, slope).matrix();
    const auto& perm = model.basis_to_spin();
    if (!perm.empty()) {
        RealMatrix p(s.rows(), s.cols());
        for (Eigen::Index i = 0; i < s.rows(); ++i) {
            for (Eigen::Index j = 0; j < s.cols(); ++j) p(i, j) = s(perm[i], perm[j]);
        }
        s = p;
    }
    return {d, "algebraic", s};
}

inline SmatrixReport crossings_smatrix(const models::AffineModel& model) {
    const models::ModelDescriptor& d = model.descriptor();
    const double eps = model.default_eps();
    std::vector<crossings::CrossingEvent> schedule;
    bool unverified = false;
    switch (d.family) {
        case models::Family::bowtie3:
            schedule = crossings::schedule_bowtie3(models::as_scalar(d.delta, "delta"),
                                                   models::as_scalar(d.slope, "slope"), eps);
            break;
        case models::Family::bowtieN:
            schedule = crossings::schedule_bowtieN(models::as_list(d.delta), models::as_list(d.slope), eps);
            break;
        case models::Family::su3six:
            if (eps > 0.0) {
                schedule = crossings::schedule_su3six(models::as_scalar(d.delta, "delta"),
                                                      models::as_scalar(d.slope, "slope"), eps);
            } else {
                schedule = crossings::derive_schedule_generic(model, eps);
                unverified = true;
            }
            break;
        default:
            schedule = crossings::derive_schedule_generic(model, eps);
    }
    SmatrixReport r{d, "crossings", crossings::compose(schedule, model.dim()).matrix()};
    r.unverified = unverified;
    return r;
}

inline SmatrixReport numeric_smatrix(const models::AffineModel& model, const NumericOptions& opt) {
    numerics::OdeSettings settings;
    settings.rtol = opt.rtol;
    settings.validate();
    const double eps = model.default_eps();
    const double horizon = opt.horizon.value_or(oracle::default_horizon(model, eps));
    const oracle::OracleResult res = oracle::numeric_smatrix(model, eps, horizon, settings);
    SmatrixReport r{model.descriptor(), "numeric", res.s.matrix()};
    r.horizon = horizon;
    r.rtol = opt.rtol;
    r.error_estimate = res.error_estimate;
    r.unitarity_defect = res.unitarity_defect;
    return r;
}

inline SmatrixReport compute_smatrix(const models::AffineModel& model, Method method, const NumericOptions& opt) {
    const auto supported = supported_methods(model);
    if (std::find(supported.begin(), supported.end(), method) == supported.end()) {
        std::string list;
        for (Method m : supported) list += (list.empty() ? "" : ", ") + std::string(method_name(m));
        throw UnsupportedMethodError("method '" + std::string(method_name(method)) + "' is not available for family '" +
                                     std::string(models::family_name(model.family())) + "' (available: " + list + ")");
    }
    switch (method) {
        case Method::algebraic: return algebraic_smatrix(model);
        case Method::crossings: return crossings_smatrix(model);
        case Method::numeric: return numeric_smatrix(model, opt);
    }
    throw ValidationError("unknown method");
}

}  // namespace lzs::cli
