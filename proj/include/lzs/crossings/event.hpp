// Localized crossings on a deformed path and the composition of their
// probability blocks into a total S-matrix.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lzs/errors.hpp"
#include "lzs/numerics/linalg.hpp"
#include "lzs/scatter_matrix.hpp"

namespace lzs::crossings {

enum class CrossingKind { two_level, three_level, trivial };

inline std::string_view kind_name(CrossingKind k) {
    switch (k) {
        case CrossingKind::two_level: return "two-level";
        case CrossingKind::three_level: return "three-level";
        case CrossingKind::trivial: return "trivial";
    }
    return "unknown";
}

inline CrossingKind parse_kind(std::string_view s) {
    if (s == "two-level") return CrossingKind::two_level;
    if (s == "three-level") return CrossingKind::three_level;
    if (s == "trivial") return CrossingKind::trivial;
    throw ValidationError("unknown crossing kind '" + std::string(s) + "'");
}

/// One crossing. Levels are 1-based. For a three-level crossing the first two
/// levels carry the sloped (outer) roles and the rest form the flat role:
/// normally a single level, or a group of degenerate levels of which only the
/// combination `flat_mixing` couples.
struct CrossingEvent {
    int index = 0;
    double t_over_r = 0.0;
    double eps_over_r = 0.0;
    std::vector<int> levels;
    double delta_eff = 0.0;
    double slope_eff = 0.0;
    CrossingKind kind = CrossingKind::trivial;
    std::vector<Complex> flat_mixing;

    /// pi * delta_eff^2 / slope_eff (zero for trivial events).
    double exponent() const {
        if (kind == CrossingKind::trivial) return 0.0;
        return M_PI * delta_eff * delta_eff / slope_eff;
    }

    /// Single-crossing survival probability exp(-exponent).
    double survival() const { return std::exp(-exponent()); }
};

inline CrossingKind kind_for(double delta_eff, int n_levels) {
    if (delta_eff == 0.0) return CrossingKind::trivial;
    return n_levels >= 3 ? CrossingKind::three_level : CrossingKind::two_level;
}

inline void validate_event(const CrossingEvent& e, int k) {
    std::ostringstream os;
    os << "crossing event " << e.index << ": ";
    const auto n = e.levels.size();
    const bool bad_count = (e.kind == CrossingKind::two_level && n != 2) ||
                           (e.kind == CrossingKind::three_level && n < 3) || n < 2;
    if (bad_count) {
        os << "kind " << kind_name(e.kind) << " cannot have " << n << " levels";
        throw ValidationError(os.str());
    }
    std::vector<int> sorted = e.levels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        os << "levels must be distinct";
        throw ValidationError(os.str());
    }
    for (int l : e.levels) {
        if (l < 1 || l > k) {
            os << "level " << l << " outside 1.." << k;
            throw ValidationError(os.str());
        }
    }
    if ((e.kind == CrossingKind::trivial) != (e.delta_eff == 0.0)) {
        os << "kind must be trivial exactly when delta_eff = 0";
        throw ValidationError(os.str());
    }
    if (!std::isfinite(e.delta_eff) || e.delta_eff < 0.0) {
        os << "delta_eff must be finite and nonnegative";
        throw ValidationError(os.str());
    }
    if (e.kind != CrossingKind::trivial && !(e.slope_eff > 0.0 && std::isfinite(e.slope_eff))) {
        os << "slope_eff must be positive";
        throw ValidationError(os.str());
    }
    const std::size_t flat = n - 2;
    if (e.kind == CrossingKind::three_level && flat > 1) {
        if (e.flat_mixing.size() != flat) {
            os << "a flat group of " << flat << " levels needs " << flat << " mixing amplitudes";
            throw ValidationError(os.str());
        }
        double norm2 = 0.0;
        for (const auto& w : e.flat_mixing) norm2 += std::norm(w);
        if (std::abs(norm2 - 1.0) > 1e-9) {
            os << "flat mixing vector must be normalized";
            throw ValidationError(os.str());
        }
    }
}

/// Probability block of one crossing embedded in dimension k (identity elsewhere).
inline ScatterMatrix local_smatrix(const CrossingEvent& e, int k) {
    validate_event(e, k);
    RealMatrix s = RealMatrix::Identity(k, k);
    if (e.kind == CrossingKind::trivial) return ScatterMatrix::identity(k);
    const double u = e.survival();
    const double v = 1.0 - u;
    const int o1 = e.levels[0] - 1, o2 = e.levels[1] - 1;
    if (e.kind == CrossingKind::two_level) {
        s(o1, o1) = s(o2, o2) = u;
        s(o1, o2) = s(o2, o1) = v;
        return ScatterMatrix::from_probabilities(s, 1e-12);
    }
    s(o1, o1) = s(o2, o2) = u * u;
    s(o1, o2) = s(o2, o1) = v * v;
    const std::size_t n_flat = e.levels.size() - 2;
    if (n_flat == 1) {
        const int m = e.levels[2] - 1;
        s(o1, m) = s(m, o1) = s(o2, m) = s(m, o2) = 2.0 * u * v;
        s(m, m) = (1.0 - 2.0 * u) * (1.0 - 2.0 * u);
        return ScatterMatrix::from_probabilities(s, 1e-12);
    }
    // Degenerate flat group: the coupled combination w picks up amplitude
    // 2u - 1, its orthogonal complement is untouched.
    const double c = 2.0 * u - 1.0;
    for (std::size_t g = 0; g < n_flat; ++g) {
        const int gi = e.levels[2 + g] - 1;
        const double wg2 = std::norm(e.flat_mixing[g]);
        s(o1, gi) = s(gi, o1) = s(o2, gi) = s(gi, o2) = 2.0 * u * v * wg2;
        for (std::size_t h = 0; h < n_flat; ++h) {
            const int hi = e.levels[2 + h] - 1;
            const Complex amp = (g == h ? 1.0 : 0.0) + (c - 1.0) * e.flat_mixing[g] * std::conj(e.flat_mixing[h]);
            s(gi, hi) = std::norm(amp);
        }
    }
    return ScatterMatrix::from_probabilities(s, 1e-12);
}

/// Product of local blocks with the latest event leftmost.
inline ScatterMatrix compose(const std::vector<CrossingEvent>& schedule, int k) {
    if (k < 1) throw ValidationError("compose: dimension must be positive");
    RealMatrix total = RealMatrix::Identity(k, k);
    for (const auto& e : schedule) total = local_smatrix(e, k).matrix() * total;
    return ScatterMatrix::from_probabilities(total, 1e-12);
}

}  // namespace lzs::crossings
