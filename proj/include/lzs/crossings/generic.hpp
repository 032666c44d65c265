// Crossing schedule of any (H, E) pair along a piecewise-straight path in the
// (t, eps) plane, in the limit where the path is scaled by R -> infinity.
//
// On a segment through (t, eps) = R (p + sigma d), the path generator
// d_t H + d_eps E has diagonal entries R (alpha_i + beta_i sigma) + O(1) and an
// O(1) off-diagonal part C = d_t A0 + d_eps E0. Crossings of the lines
// alpha_i + beta_i sigma are isolated Landau-Zener problems whose couplings
// are the entries of C.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

#include "lzs/crossings/event.hpp"
#include "lzs/models/affine_model.hpp"

namespace lzs::crossings {

struct PathPoint {
    double t = 0.0;
    double eps = 0.0;
};

struct PathSegment {
    PathPoint from, to;

    double length() const { return std::hypot(to.t - from.t, to.eps - from.eps); }
};

/// Straight segments in units of R. A valid path starts at (-1, 0) and ends
/// at (1, 0): the endpoints of the undeformed sweep.
struct PathSpec {
    std::vector<PathSegment> segments;

    void validate() const {
        if (segments.empty()) throw ValidationError("PathSpec: no segments");
        auto close = [](const PathPoint& a, const PathPoint& b) {
            return std::abs(a.t - b.t) <= 1e-12 && std::abs(a.eps - b.eps) <= 1e-12;
        };
        if (!close(segments.front().from, {-1.0, 0.0}) || !close(segments.back().to, {1.0, 0.0})) {
            throw ValidationError("PathSpec: path must run from (-1, 0) to (1, 0) in units of R");
        }
        for (std::size_t s = 0; s < segments.size(); ++s) {
            if (!(segments[s].length() > 0.0)) throw ValidationError("PathSpec: zero-length segment");
            if (s > 0 && !close(segments[s - 1].to, segments[s].from)) {
                throw ValidationError("PathSpec: segments are not contiguous");
            }
        }
    }
};

/// Up at t = -R, across at eps = height * R, down at t = +R.
inline PathSpec rectangle_path(double height) {
    if (height == 0.0 || !std::isfinite(height)) throw ValidationError("rectangle_path: height must be nonzero");
    return {{{{-1.0, 0.0}, {-1.0, height}}, {{-1.0, height}, {1.0, height}}, {{1.0, height}, {1.0, 0.0}}}};
}

/// Rectangle on the side of eps_sign, one third higher than the last crossing
/// met on the vertical sides.
inline PathSpec default_path(const models::AffineModel& model, double eps_sign) {
    if (eps_sign == 0.0) throw SingularPartnerError("default_path: eps = 0 has no deformed path");
    const double s = eps_sign > 0 ? 1.0 : -1.0;
    const models::Partner& p = model.partner();
    const RealVector et = p.e_t.diagonal().real();
    const RealVector el = p.e.lin.diagonal().real();
    double reach = 0.0;
    for (double t0 : {-1.0, 1.0}) {
        for (int i = 0; i < model.dim(); ++i) {
            for (int j = i + 1; j < model.dim(); ++j) {
                const double dl = el(i) - el(j);
                if (std::abs(dl) <= 1e-14) continue;
                const double e = t0 * (et(j) - et(i)) / dl;
                if (e * s > 0.0) reach = std::max(reach, std::abs(e));
            }
        }
    }
    return rectangle_path(s * (reach > 0.0 ? 4.0 / 3.0 * reach : 1.0));
}

namespace detail {

inline constexpr double kCouplingZero = 1e-12;

inline double offdiag_max(const ComplexMatrix& m) {
    ComplexMatrix o = m;
    o.diagonal().setZero();
    return numerics::max_abs(o);
}

struct Crossing {
    double sigma;
    double energy;
    int i, j;
};

}  // namespace detail

inline std::vector<CrossingEvent> derive_schedule_generic(const models::AffineModel& model, const PathSpec& path) {
    path.validate();
    const models::Partner& partner = model.partner();
    const int n = model.dim();
    const models::EpsLaurent& a = model.a_series();
    const ComplexMatrix b = model.b();

    struct Pending {
        int segment;
        double sigma;
        CrossingEvent event;
    };
    std::vector<Pending> pending;

    for (std::size_t seg = 0; seg < path.segments.size(); ++seg) {
        const PathSegment& sg = path.segments[seg];
        const double len = sg.length();
        const double dt = (sg.to.t - sg.from.t) / len, de = (sg.to.eps - sg.from.eps) / len;
        const ComplexMatrix lead0 = dt * (sg.from.eps * a.lin + sg.from.t * b) +
                                    de * (sg.from.eps * partner.e.lin + sg.from.t * partner.e_t);
        const ComplexMatrix lead1 = dt * (de * a.lin + dt * b) + de * (de * partner.e.lin + dt * partner.e_t);
        const double scale = std::max({1.0, numerics::max_abs(lead0), numerics::max_abs(lead1)});
        if (detail::offdiag_max(lead0) > 1e-12 * scale || detail::offdiag_max(lead1) > 1e-12 * scale) {
            throw UnsupportedCrossingError(
                "derive_schedule_generic: path generator has off-diagonal entries growing with R");
        }
        const ComplexMatrix cpl = dt * a.c0 + de * partner.e.c0;
        const RealVector alpha = lead0.diagonal().real(), beta = lead1.diagonal().real();
        const double tol = 1e-9 * scale * std::max(1.0, len);

        // identical lines form degenerate groups
        std::vector<int> group(n);
        std::iota(group.begin(), group.end(), 0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j) {
                if (std::abs(alpha(i) - alpha(j)) <= tol && std::abs(beta(i) - beta(j)) <= tol) {
                    group[i] = group[j];
                    break;
                }
            }
        }

        auto coupled = [&](int i, int j) { return std::abs(cpl(i, j)) > detail::kCouplingZero; };

        std::vector<detail::Crossing> found;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (group[i] == group[j]) continue;
                const double db = beta(i) - beta(j);
                if (std::abs(db) <= tol) continue;
                const double sigma = (alpha(j) - alpha(i)) / db;
                const double stol = 1e-9 * std::max(1.0, len);
                if (sigma < -stol || sigma > len + stol) continue;
                const bool at_start = std::abs(sigma) <= stol, at_end = std::abs(sigma - len) <= stol;
                if (at_start || at_end) {
                    const bool path_end = (at_start && seg == 0) || (at_end && seg + 1 == path.segments.size());
                    if (!path_end) {
                        std::ostringstream os;
                        os << "derive_schedule_generic: levels " << i + 1 << " and " << j + 1
                           << " cross at a path corner; use a different path";
                        throw UnsupportedCrossingError(os.str());
                    }
                    if (coupled(i, j)) {
                        std::ostringstream os;
                        os << "derive_schedule_generic: coupled levels " << i + 1 << " and " << j + 1
                           << " cross at the end of the path";
                        throw UnsupportedCrossingError(os.str());
                    }
                    continue;
                }
                found.push_back({sigma, alpha(i) + beta(i) * sigma, i, j});
            }
        }
        std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) {
            return x.sigma != y.sigma ? x.sigma < y.sigma : x.energy < y.energy;
        });

        // clusters: crossings sharing one point of the (sigma, energy) plane
        std::vector<std::vector<detail::Crossing>> clusters;
        for (const auto& c : found) {
            bool placed = false;
            for (auto& cl : clusters) {
                if (std::abs(cl.front().sigma - c.sigma) <= tol / scale &&
                    std::abs(cl.front().energy - c.energy) <= tol) {
                    cl.push_back(c);
                    placed = true;
                    break;
                }
            }
            if (!placed) clusters.push_back({c});
        }

        for (const auto& cl : clusters) {
            const double sigma = cl.front().sigma;
            auto snap = [](double x) { return std::abs(x) < 1e-12 ? 0.0 : x; };
            const PathPoint at{snap(sg.from.t + sigma * dt), snap(sg.from.eps + sigma * de)};
            auto emit = [&](std::vector<int> levels, double delta_eff, double slope_eff, CrossingKind kind,
                            std::vector<Complex> mixing = {}) {
                CrossingEvent e;
                e.t_over_r = at.t;
                e.eps_over_r = at.eps;
                for (int& l : levels) ++l;
                e.levels = std::move(levels);
                e.delta_eff = delta_eff;
                e.slope_eff = slope_eff;
                e.kind = kind;
                e.flat_mixing = std::move(mixing);
                pending.push_back({static_cast<int>(seg), sigma, std::move(e)});
            };

            // nodes: one per distinct line, holding all its levels
            std::map<int, std::vector<int>> members;
            for (const auto& c : cl) {
                for (int l : {c.i, c.j}) {
                    for (int m = 0; m < n; ++m) {
                        if (group[m] == group[l]) members[group[l]].push_back(m);
                    }
                }
            }
            std::vector<std::vector<int>> nodes;
            for (auto& [g, lv] : members) {
                std::sort(lv.begin(), lv.end());
                lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
                nodes.push_back(lv);
            }
            const int nn = static_cast<int>(nodes.size());
            auto node_coupled = [&](int p, int q) {
                for (int x : nodes[p]) {
                    for (int y : nodes[q]) {
                        if (coupled(x, y)) return true;
                    }
                }
                return false;
            };
            for (int p = 0; p < nn; ++p) {
                for (std::size_t x = 0; x < nodes[p].size(); ++x) {
                    for (std::size_t y = x + 1; y < nodes[p].size(); ++y) {
                        if (coupled(nodes[p][x], nodes[p][y])) {
                            throw UnsupportedCrossingError(
                                "derive_schedule_generic: degenerate levels coupled to each other");
                        }
                    }
                }
            }
            // connected components of the coupling graph
            std::vector<int> comp(nn);
            std::iota(comp.begin(), comp.end(), 0);
            auto find = [&](int x) {
                while (comp[x] != x) x = comp[x] = comp[comp[x]];
                return x;
            };
            for (int p = 0; p < nn; ++p) {
                for (int q = p + 1; q < nn; ++q) {
                    if (node_coupled(p, q)) comp[find(p)] = find(q);
                }
            }
            std::map<int, std::vector<int>> components;
            for (int p = 0; p < nn; ++p) components[find(p)].push_back(p);

            // uncoupled pairs meeting here are trivial crossings
            auto node_of = [&](int level) {
                for (int p = 0; p < nn; ++p) {
                    if (std::find(nodes[p].begin(), nodes[p].end(), level) != nodes[p].end()) return p;
                }
                return -1;
            };
            for (const auto& c : cl) {
                const int p = node_of(c.i), q = node_of(c.j);
                if (find(p) == find(q)) continue;
                for (int x : nodes[p]) {
                    for (int y : nodes[q]) {
                        emit({std::min(x, y), std::max(x, y)}, 0.0, 0.5 * std::abs(beta(x) - beta(y)),
                             CrossingKind::trivial);
                    }
                }
            }

            for (const auto& [root, comp_nodes] : components) {
                if (comp_nodes.size() < 2) continue;
                std::ostringstream where;
                where << " at (t, eps)/R = (" << at.t << ", " << at.eps << ")";
                if (comp_nodes.size() == 2) {
                    const auto& n1 = nodes[comp_nodes[0]];
                    const auto& n2 = nodes[comp_nodes[1]];
                    if (n1.size() != 1 || n2.size() != 1) {
                        throw UnsupportedCrossingError(
                            "derive_schedule_generic: two-level crossing with a degenerate level" + where.str());
                    }
                    const int x = n1[0], y = n2[0];
                    emit({std::min(x, y), std::max(x, y)}, std::abs(cpl(x, y)), 0.5 * std::abs(beta(x) - beta(y)),
                         CrossingKind::two_level);
                    continue;
                }
                if (comp_nodes.size() > 3) {
                    std::ostringstream os;
                    os << "derive_schedule_generic: " << comp_nodes.size()
                       << " mutually coupled lines cross" << where.str() << "; only two- and three-level "
                       << "crossings are supported";
                    throw UnsupportedCrossingError(os.str());
                }
                // three lines: find the node coupled to both others
                int mid = -1;
                for (int idx = 0; idx < 3; ++idx) {
                    const int p = comp_nodes[idx], q = comp_nodes[(idx + 1) % 3], r = comp_nodes[(idx + 2) % 3];
                    if (node_coupled(p, q) && node_coupled(p, r) && !node_coupled(q, r)) mid = idx;
                }
                if (mid < 0) {
                    throw UnsupportedCrossingError(
                        "derive_schedule_generic: three coupled lines without the chain structure of a "
                        "spin-1 crossing" + where.str());
                }
                const auto& flat = nodes[comp_nodes[mid]];
                const auto& outer1 = nodes[comp_nodes[(mid + 1) % 3]];
                const auto& outer2 = nodes[comp_nodes[(mid + 2) % 3]];
                if (outer1.size() != 1 || outer2.size() != 1) {
                    throw UnsupportedCrossingError(
                        "derive_schedule_generic: degenerate sloped level in a three-level crossing" + where.str());
                }
                const int o1 = std::min(outer1[0], outer2[0]), o2 = std::max(outer1[0], outer2[0]);
                const int m0 = flat.front();
                if (std::abs(2 * alpha(m0) - alpha(o1) - alpha(o2)) > tol ||
                    std::abs(2 * beta(m0) - beta(o1) - beta(o2)) > tol) {
                    throw UnsupportedCrossingError(
                        "derive_schedule_generic: flat line is not midway between the sloped lines" + where.str());
                }
                ComplexVector c1(flat.size()), c2(flat.size());
                for (std::size_t g = 0; g < flat.size(); ++g) {
                    c1(g) = cpl(flat[g], o1);
                    c2(g) = cpl(flat[g], o2);
                }
                const double n1 = c1.norm(), n2 = c2.norm();
                const double overlap = std::abs(c1.dot(c2));
                if (std::abs(n1 - n2) > 1e-9 * std::max(n1, n2) || std::abs(overlap - n1 * n2) > 1e-9 * n1 * n2) {
                    throw UnsupportedCrossingError(
                        "derive_schedule_generic: unequal couplings to the flat line" + where.str());
                }
                std::vector<int> levels{o1, o2};
                levels.insert(levels.end(), flat.begin(), flat.end());
                std::vector<Complex> mixing;
                if (flat.size() > 1) {
                    for (std::size_t g = 0; g < flat.size(); ++g) mixing.push_back(c1(g) / n1);
                }
                emit(levels, n1, std::abs(beta(o1) - beta(m0)), CrossingKind::three_level, std::move(mixing));
            }
        }
    }

    std::stable_sort(pending.begin(), pending.end(), [](const Pending& x, const Pending& y) {
        if (x.segment != y.segment) return x.segment < y.segment;
        if (x.sigma != y.sigma) return x.sigma < y.sigma;
        if (x.event.levels.size() != y.event.levels.size()) return x.event.levels.size() < y.event.levels.size();
        return x.event.levels < y.event.levels;
    });
    std::vector<CrossingEvent> out;
    for (auto& p : pending) {
        p.event.index = static_cast<int>(out.size()) + 1;
        out.push_back(std::move(p.event));
    }
    return out;
}

/// Generic schedule along the default rectangle on the side of eps.
inline std::vector<CrossingEvent> derive_schedule_generic(const models::AffineModel& model, double eps) {
    return derive_schedule_generic(model, default_path(model, eps));
}

}  // namespace lzs::crossings
