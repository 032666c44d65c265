// Hamiltonian families affine in t:  H(t, eps) = A(eps) + t B,
// with an optional zero-curvature partner E(t, eps) = E0(eps) + t E1.
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lzs/errors.hpp"
#include "lzs/numerics/linalg.hpp"

namespace lzs::models {

enum class Family { lz2, spin, adjoint3, bowtie3, bowtieN, su3six, su3adj8 };

inline constexpr std::array<std::pair<Family, std::string_view>, 7> kFamilyNames{{
    {Family::lz2, "lz2"},
    {Family::spin, "spin"},
    {Family::adjoint3, "adjoint3"},
    {Family::bowtie3, "bowtie3"},
    {Family::bowtieN, "bowtieN"},
    {Family::su3six, "su3six"},
    {Family::su3adj8, "su3adj8"},
}};

inline std::string_view family_name(Family f) {
    for (const auto& [fam, name] : kFamilyNames) {
        if (fam == f) return name;
    }
    return "unknown";
}

inline std::string valid_family_list() {
    std::string out;
    for (const auto& [fam, name] : kFamilyNames) {
        if (!out.empty()) out += ", ";
        out += name;
    }
    return out;
}

inline Family parse_family(std::string_view name) {
    for (const auto& [fam, n] : kFamilyNames) {
        if (n == name) return fam;
    }
    throw ValidationError("unknown family '" + std::string(name) +
                          "'; valid families: " + valid_family_list());
}

/// A parameter that is either a single number or a list (bowtieN couplings/slopes).
using ScalarOrList = std::variant<double, std::vector<double>>;

inline std::vector<double> as_list(const ScalarOrList& p) {
    if (const auto* d = std::get_if<double>(&p)) return {*d};
    return std::get<std::vector<double>>(p);
}

inline double as_scalar(const ScalarOrList& p, const char* what) {
    if (const auto* d = std::get_if<double>(&p)) return *d;
    const auto& v = std::get<std::vector<double>>(p);
    if (v.size() == 1) return v.front();
    throw ValidationError(std::string(what) + " must be a single number for this family");
}

/// User-facing description of a model instance (the JSON descriptor).
struct ModelDescriptor {
    Family family = Family::lz2;
    std::optional<int> k;
    ScalarOrList delta = 0.0;
    ScalarOrList slope = 1.0;
    std::optional<double> eps;

    bool operator==(const ModelDescriptor&) const = default;
};

/// Matrix-valued Laurent polynomial in eps:  inv/eps + c0 + eps*lin.
/// Every family in the catalog depends on eps in this form.
struct EpsLaurent {
    ComplexMatrix inv, c0, lin;

    static EpsLaurent zero(int n) {
        return {ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n)};
    }

    bool has_pole() const { return inv.size() > 0 && numerics::max_abs(inv) > 0.0; }

    ComplexMatrix at(double eps) const {
        ComplexMatrix out = c0 + eps * lin;
        if (has_pole()) out += inv / eps;
        return out;
    }

    /// Exact d/d eps.
    ComplexMatrix d_eps(double eps) const {
        ComplexMatrix out = lin;
        if (has_pole()) out -= inv / (eps * eps);
        return out;
    }
};

/// Smallest |eps| at which a partner with 1/eps entries may be evaluated.
inline constexpr double kPoleGuard = 1e-12;

/// E(t, eps) = e(eps) + t * e_t.
struct Partner {
    EpsLaurent e;
    ComplexMatrix e_t;

    void check_pole(double eps) const {
        if (e.has_pole() && std::abs(eps) < kPoleGuard) {
            std::ostringstream os;
            os << "zero-curvature partner is singular at eps = " << eps
               << " (it has 1/eps entries)";
            throw SingularPartnerError(os.str());
        }
    }

    ComplexMatrix at(double t, double eps) const {
        check_pole(eps);
        return e.at(eps) + t * e_t;
    }
};

class AffineModel {
public:
    AffineModel(ModelDescriptor descriptor, EpsLaurent a, RealVector slopes,
                std::optional<Partner> partner = std::nullopt)
        : descriptor_(std::move(descriptor)),
          a_(std::move(a)),
          slopes_(std::move(slopes)),
          partner_(std::move(partner)) {}

    const ModelDescriptor& descriptor() const { return descriptor_; }
    Family family() const { return descriptor_.family; }
    int dim() const { return static_cast<int>(slopes_.size()); }

    const EpsLaurent& a_series() const { return a_; }
    ComplexMatrix a(double eps) const { return a_.at(eps); }
    /// Diabatic slopes (the diagonal of B).
    const RealVector& slopes() const { return slopes_; }
    ComplexMatrix b() const { return slopes_.cast<Complex>().asDiagonal(); }

    bool has_partner() const { return partner_.has_value(); }
    const Partner& partner() const {
        if (!partner_) {
            throw MissingPartnerError(std::string("family '") +
                                      std::string(family_name(family())) +
                                      "' has no zero-curvature partner");
        }
        return *partner_;
    }

    /// The eps stored in the descriptor (1 when the descriptor leaves it out).
    double default_eps() const { return descriptor_.eps.value_or(1.0); }

    /// For adjoint3 only: row i of this model is row basis_to_spin()[i] of spin(3).
    const std::vector<int>& basis_to_spin() const { return basis_to_spin_; }
    void set_basis_to_spin(std::vector<int> perm) { basis_to_spin_ = std::move(perm); }

private:
    ModelDescriptor descriptor_;
    EpsLaurent a_;
    RealVector slopes_;
    std::optional<Partner> partner_;
    std::vector<int> basis_to_spin_;
};

inline ComplexMatrix hamiltonian_at(const AffineModel& model, double t, double eps) {
    ComplexMatrix h = model.a(eps);
    h.diagonal() += t * model.slopes().cast<Complex>();
    return h;
}

}  // namespace lzs::models
