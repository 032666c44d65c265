// Adaptive explicit Runge-Kutta integration of matrix-valued ODEs.
//
// The stepper is Dormand-Prince 8(5,3): an eighth-order solution with the
// combined fifth/third-order error estimate of Hairer's DOP853, driven by a
// PI step-size controller. States are Eigen matrices (real or complex); the
// right-hand side writes dy/dt into its third argument.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>

#include "lzs/errors.hpp"
#include "lzs/numerics/dop853_tableau.hpp"
#include "lzs/numerics/linalg.hpp"

namespace lzs::numerics {

struct OdeSettings {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    /// Only 8 is implemented; kept so callers can state what they asked for.
    int order_hint = 8;

    void validate() const {
        auto in_range = [](double x) { return x > 0.0 && x <= 1e-2; };
        if (!in_range(rtol) || !in_range(atol)) {
            std::ostringstream os;
            os << "OdeSettings: tolerances must lie in (0, 1e-2], got rtol=" << rtol
               << " atol=" << atol;
            throw ValidationError(os.str());
        }
        if (!(max_step > 0.0)) throw ValidationError("OdeSettings: max_step must be positive");
        if (order_hint < 5) throw ValidationError("OdeSettings: order_hint must be >= 5");
    }
};

struct IntegrationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evals = 0;
};

namespace detail {

// PI controller constants: exponent alpha on the current error, beta on the
// previous accepted error.
inline constexpr double kBeta = 0.04;
inline constexpr double kAlpha = 1.0 / 8.0 - 0.75 * kBeta;
inline constexpr double kSafety = 0.9;
inline constexpr double kMinFactor = 0.2;
inline constexpr double kMaxFactor = 10.0;

template <class State>
double rms_scaled(const State& v, const State& scale) {
    const double n = static_cast<double>(v.size());
    return std::sqrt((v.cwiseAbs2().array() / scale.cwiseAbs2().array()).sum() / n);
}

}  // namespace detail

/// Integrates y' = rhs(t, y) from t0 to t1 (either direction).
///
/// Steps are accepted when the DOP853 error norm, measured against
/// atol + rtol*max(|y_old|, |y_new|), is at most one. Throws DivergenceError
/// if the step size falls below 1e-12*|t1 - t0|.
template <class State, class Rhs>
State integrate(Rhs&& rhs, const State& y0, double t0, double t1, const OdeSettings& settings,
                IntegrationStats* stats = nullptr) {
    using namespace dop853;
    settings.validate();
    if (t0 == t1) throw ValidationError("integrate: t0 and t1 must differ");
    if (!std::isfinite(t0) || !std::isfinite(t1)) throw ValidationError("integrate: non-finite time");

    IntegrationStats local;
    IntegrationStats& st = stats ? *stats : local;

    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    const double min_step = 1e-12 * span;
    const double max_step = std::min(settings.max_step, span);

    std::array<State, kStages> k;
    for (auto& ki : k) ki.resizeLike(y0);
    State y = y0;
    State y_new, y_stage, err5, err3;
    RealMatrix scale;

    auto eval = [&](double t, const State& state, State& out) {
        rhs(t, state, out);
        ++st.rhs_evals;
    };

    double t = t0;
    eval(t, y, k[0]);

    // Initial step guess (Hairer, Norsett & Wanner, II.4).
    double h;
    {
        scale = (settings.atol + settings.rtol * y.cwiseAbs().array()).matrix();
        const double d0 = detail::rms_scaled(RealMatrix(y.cwiseAbs()), scale);
        const double d1 = detail::rms_scaled(RealMatrix(k[0].cwiseAbs()), scale);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, max_step);
        y_stage = y + dir * h0 * k[0];
        eval(t + dir * h0, y_stage, k[1]);
        const double d2 = detail::rms_scaled(RealMatrix((k[1] - k[0]).cwiseAbs()), scale) / h0;
        const double h1 = (std::max(d1, d2) <= 1e-15)
                              ? std::max(1e-6, h0 * 1e-3)
                              : std::pow(0.01 / std::max(d1, d2), 1.0 / 8.0);
        h = std::min({100.0 * h0, h1, max_step});
    }

    double err_prev = 1e-4;
    bool last_rejected = false;

    while (dir * (t1 - t) > 0.0) {
        if (h < min_step) {
            std::ostringstream os;
            os << "integrate: step size underflow (h=" << h << ") at t=" << t;
            throw DivergenceError(os.str(), t);
        }
        double step = h;
        bool hits_end = false;
        if (step >= std::abs(t1 - t)) {
            step = std::abs(t1 - t);
            hits_end = true;
        }
        const double hs = dir * step;

        for (int s = 1; s < kStages; ++s) {
            y_stage = y;
            for (int j = 0; j < s; ++j) {
                if (a[s][j] != 0.0) y_stage += (hs * a[s][j]) * k[j];
            }
            eval(t + c[s] * hs, y_stage, k[s]);
        }
        y_new = y;
        err5.setZero(y.rows(), y.cols());
        err3.setZero(y.rows(), y.cols());
        for (int j = 0; j < kStages; ++j) {
            if (b[j] != 0.0) y_new += (hs * b[j]) * k[j];
            if (e5[j] != 0.0) err5 += e5[j] * k[j];
            if (e3[j] != 0.0) err3 += e3[j] * k[j];
        }

        scale = (settings.atol +
                 settings.rtol * y.cwiseAbs().array().max(y_new.cwiseAbs().array()))
                    .matrix();
        const double n = static_cast<double>(y.size());
        const double e5sq = (err5.cwiseAbs2().array() / scale.cwiseAbs2().array()).sum();
        const double e3sq = (err3.cwiseAbs2().array() / scale.cwiseAbs2().array()).sum();
        double err = 0.0;
        if (e5sq > 0.0 || e3sq > 0.0) {
            err = step * e5sq / std::sqrt((e5sq + 0.01 * e3sq) * n);
        }
        if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();

        if (err <= 1.0) {
            ++st.accepted;
            t = hits_end ? t1 : t + hs;
            y.swap(y_new);
            double factor;
            if (err == 0.0) {
                factor = detail::kMaxFactor;
            } else {
                factor = detail::kSafety * std::pow(err, -detail::kAlpha) *
                         std::pow(err_prev, detail::kBeta);
                factor = std::clamp(factor, detail::kMinFactor, detail::kMaxFactor);
            }
            if (last_rejected) factor = std::min(factor, 1.0);
            err_prev = std::max(err, 1e-4);
            last_rejected = false;
            h = std::min(step * factor, max_step);
            if (dir * (t1 - t) > 0.0) eval(t, y, k[0]);
        } else {
            ++st.rejected;
            const double factor =
                std::isfinite(err)
                    ? std::max(detail::kMinFactor, detail::kSafety * std::pow(err, -1.0 / 8.0))
                    : detail::kMinFactor;
            h = step * factor;
            last_rejected = true;
        }
    }
    return y;
}

}  // namespace lzs::numerics
