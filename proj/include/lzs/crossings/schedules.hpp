// Closed-form crossing schedules for the bow-tie families and su3six.
#pragma once

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "lzs/crossings/event.hpp"

namespace lzs::crossings {

namespace detail {

inline void require_positive(double a, const char* who) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        std::ostringstream os;
        os << who << ": slope must be positive, got " << a;
        throw ValidationError(os.str());
    }
}

inline void require_nonzero_eps(double eps, const char* who) {
    if (eps == 0.0 || !std::isfinite(eps)) {
        throw SingularPartnerError(std::string(who) +
                                   ": eps = 0 has no crossing schedule (the partner is singular there); "
                                   "use the numeric method");
    }
}

inline CrossingEvent make_event(int index, double t, double eps, std::vector<int> levels, double delta_eff,
                                double slope_eff) {
    CrossingEvent e;
    e.index = index;
    e.t_over_r = t;
    e.eps_over_r = eps;
    e.kind = kind_for(delta_eff, static_cast<int>(levels.size()));
    e.levels = std::move(levels);
    e.delta_eff = delta_eff;
    e.slope_eff = slope_eff;
    return e;
}

/// Mirror eps -> -eps: swaps the two flat levels and flips the eps location.
inline std::vector<CrossingEvent> mirror_flat_pair(std::vector<CrossingEvent> schedule) {
    for (auto& e : schedule) {
        for (int& l : e.levels) l = l == 1 ? 2 : (l == 2 ? 1 : l);
        if (e.levels.size() == 2 && e.levels[0] > e.levels[1]) std::swap(e.levels[0], e.levels[1]);
        e.eps_over_r = -e.eps_over_r;
    }
    return schedule;
}

}  // namespace detail

/// k-level bow-tie. Pass 1 at t = -R climbs through eps = |a_i| R in
/// ascending order; level i+2 meets flat level 2 if a_i > 0, else level 1.
/// Pass 2 at t = +R descends with the roles of the flat levels exchanged.
inline std::vector<CrossingEvent> schedule_bowtieN(const std::vector<double>& deltas,
                                                   const std::vector<double>& slopes, double eps) {
    detail::require_nonzero_eps(eps, "schedule_bowtieN");
    if (slopes.empty()) throw ValidationError("schedule_bowtieN: at least one slope is required");
    std::vector<double> cpl = deltas;
    if (cpl.size() == 1 && slopes.size() > 1) cpl.assign(slopes.size(), deltas.front());
    if (cpl.size() != slopes.size()) throw ValidationError("schedule_bowtieN: couplings and slopes differ in length");
    const int n = static_cast<int>(slopes.size());
    for (int i = 0; i < n; ++i) {
        if (slopes[i] == 0.0 || !std::isfinite(slopes[i])) throw ValidationError("schedule_bowtieN: zero slope");
        if (i > 0 && !(std::abs(slopes[i]) > std::abs(slopes[i - 1]))) {
            throw ValidationError("schedule_bowtieN: slope magnitudes must be distinct and increasing");
        }
    }
    std::vector<CrossingEvent> out;
    int index = 1;
    auto add = [&](double t, int i, int flat) {
        const double mag = std::abs(slopes[i]);
        out.push_back(detail::make_event(index++, t, mag, {flat, i + 3}, std::abs(cpl[i]) / mag, 0.5 / mag));
    };
    for (int i = 0; i < n; ++i) add(-1.0, i, slopes[i] > 0 ? 2 : 1);
    for (int i = n - 1; i >= 0; --i) add(1.0, i, slopes[i] > 0 ? 1 : 2);
    return eps > 0 ? out : detail::mirror_flat_pair(std::move(out));
}

/// Three-level bow-tie: (2,3) at (-R, aR) then (1,3) at (R, aR) for eps > 0;
/// the flat levels swap roles for eps < 0.
inline std::vector<CrossingEvent> schedule_bowtie3(double delta, double slope, double eps) {
    detail::require_positive(slope, "schedule_bowtie3");
    detail::require_nonzero_eps(eps, "schedule_bowtie3");
    return schedule_bowtieN({delta}, {slope}, eps);
}

/// Path deformation height for the su3six top segment, in units of aR.
inline constexpr double kSu3SixTopHeight = 4.0;

/// The seven crossings of the six-level model (eps > 0).
inline std::vector<CrossingEvent> schedule_su3six(double delta, double slope, double eps) {
    detail::require_positive(slope, "schedule_su3six");
    if (!(eps > 0.0)) {
        throw ValidationError("schedule_su3six: only eps > 0 is tabulated; use the generic derivation (unverified)");
    }
    const double a = slope;
    const double d1 = std::abs(delta) / a;
    const double d3 = std::sqrt(2.0) * std::abs(delta) / a;
    using detail::make_event;
    return {
        make_event(1, -1.0, a, {2, 4}, d1, 0.5 / a),
        make_event(2, -1.0, a, {6, 3, 5}, d3, 1.0 / a),
        make_event(3, -1.0, 3.0 * a, {3, 4}, 0.0, 0.5 / a),
        make_event(4, 0.0, kSu3SixTopHeight * a, {2, 6}, 0.0, a),
        make_event(5, 1.0, 3.0 * a, {1, 5}, 0.0, 0.5 / a),
        make_event(6, 1.0, a, {2, 5}, d1, 0.5 / a),
        make_event(7, 1.0, a, {1, 6, 4}, d3, 1.0 / a),
    };
}

}  // namespace lzs::crossings
