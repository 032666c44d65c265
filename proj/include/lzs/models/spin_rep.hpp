// Irreducible spin-(k-1)/2 representation of su(2).
#pragma once

#include <cmath>
#include <string>

#include "lzs/errors.hpp"
#include "lzs/numerics/linalg.hpp"

namespace lzs::models {

/// Spin matrices in the basis |m>, m = (k-1)/2, ..., -(k-1)/2 (descending).
struct SpinRep {
    int k = 0;
    ComplexMatrix x, y, z;

    double spin() const { return 0.5 * (k - 1); }
    /// Magnetic quantum number of basis row `row` (0-based).
    double m_of(int row) const { return spin() - row; }
};

/// Ladder amplitude a^{+/-}_{k,m} = sqrt((j +- m)(j -+ m + 1)), j = (k-1)/2.
/// a^+_{k,m} is the matrix element <m| T_+ |m - 1>.
inline double ladder_amplitude(int k, double m, int sign) {
    const double j = 0.5 * (k - 1);
    const double s = sign > 0 ? 1.0 : -1.0;
    return std::sqrt(std::max(0.0, (j + s * m) * (j - s * m + 1.0)));
}

inline SpinRep build_spin_rep(int k) {
    if (k < 2) throw ValidationError("build_spin_rep: k must be >= 2, got " + std::to_string(k));
    SpinRep rep;
    rep.k = k;
    rep.z = ComplexMatrix::Zero(k, k);
    ComplexMatrix raise = ComplexMatrix::Zero(k, k);
    for (int r = 0; r < k; ++r) {
        const double m = rep.m_of(r);
        rep.z(r, r) = m;
        // column r+1 holds |m - 1>
        if (r + 1 < k) raise(r, r + 1) = ladder_amplitude(k, m, +1);
    }
    const ComplexMatrix lower = raise.adjoint();
    rep.x = 0.5 * (raise + lower);
    rep.y = (-0.5 * kI) * (raise - lower);
    return rep;
}

}  // namespace lzs::models
