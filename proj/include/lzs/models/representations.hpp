// Higher representations of 3x3 operators: the symmetric square (6-dim) and
// the adjoint action on traceless 3x3 matrices (8-dim). Both are linear in
// their argument, so they can be applied term by term to an EpsLaurent.
#pragma once

#include <array>
#include <cmath>

#include "lzs/models/affine_model.hpp"

namespace lzs::models {

namespace detail {

inline void require_3x3(const ComplexMatrix& m, const char* who) {
    if (m.rows() != 3 || m.cols() != 3) throw ValidationError(std::string(who) + ": expects a 3x3 matrix");
}

inline ComplexMatrix unit(int i, int j) {
    ComplexMatrix e = ComplexMatrix::Zero(3, 3);
    e(i, j) = 1.0;
    return e;
}

}  // namespace detail

/// Isometry from Sym^2(C^3) into C^3 (x) C^3; columns ordered 11, 12, 22, 13, 23, 33.
inline ComplexMatrix symmetric_square_basis() {
    static constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 0}, {0, 1}, {1, 1}, {0, 2}, {1, 2}, {2, 2}}};
    ComplexMatrix w = ComplexMatrix::Zero(9, 6);
    for (int col = 0; col < 6; ++col) {
        const auto [i, j] = kPairs[col];
        if (i == j) {
            w(3 * i + i, col) = 1.0;
        } else {
            w(3 * i + j, col) = M_SQRT1_2;
            w(3 * j + i, col) = M_SQRT1_2;
        }
    }
    return w;
}

/// M acting on the symmetric square: M(x)1 + 1(x)M restricted to Sym^2.
inline ComplexMatrix symmetric_square(const ComplexMatrix& m) {
    detail::require_3x3(m, "symmetric_square");
    static const ComplexMatrix w = symmetric_square_basis();
    const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
    ComplexMatrix lifted = ComplexMatrix::Zero(9, 9);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            lifted.block(3 * i, 3 * j, 3, 3) = m(i, j) * id + id(i, j) * m;
        }
    }
    return w.adjoint() * lifted * w;
}

/// Orthonormal basis (trace form) of traceless 3x3 matrices used by su3adj8:
/// two Cartan elements followed by -E21, E12, E23, E13, -E31, -E32.
inline std::array<ComplexMatrix, 8> adjoint_basis() {
    using detail::unit;
    std::array<ComplexMatrix, 8> basis;
    basis[0] = ComplexMatrix::Zero(3, 3);
    basis[0].diagonal() << 2.0, -1.0, -1.0;
    basis[0] *= -kI / std::sqrt(6.0);
    basis[1] = ComplexMatrix::Zero(3, 3);
    basis[1].diagonal() << 0.0, 1.0, -1.0;
    basis[1] *= kI * M_SQRT1_2;
    basis[2] = -unit(1, 0);
    basis[3] = unit(0, 1);
    basis[4] = unit(1, 2);
    basis[5] = unit(0, 2);
    basis[6] = -unit(2, 0);
    basis[7] = -unit(2, 1);
    return basis;
}

/// Matrix of X -> [M, X] in adjoint_basis():  entry (p, q) = Tr(B_p^dagger [M, B_q]).
inline ComplexMatrix adjoint_action(const ComplexMatrix& m) {
    detail::require_3x3(m, "adjoint_action");
    static const std::array<ComplexMatrix, 8> basis = adjoint_basis();
    ComplexMatrix out(8, 8);
    for (int q = 0; q < 8; ++q) {
        const ComplexMatrix image = m * basis[q] - basis[q] * m;
        for (int p = 0; p < 8; ++p) out(p, q) = (basis[p].adjoint() * image).trace();
    }
    return out;
}

template <class Map>
EpsLaurent map_laurent(const EpsLaurent& series, Map&& rep) {
    return {rep(series.inv), rep(series.c0), rep(series.lin)};
}

}  // namespace lzs::models
