#include <gtest/gtest.h>

#include <cmath>

#include "lzs/laxflow/laxflow.hpp"
#include "support.hpp"

using namespace lzs;
using namespace lzs::laxflow;
using lzs::testing::Gen;
using lzs::testing::max_diff;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

/// Independent reference: |d^j_{m'm}(beta)|^2 with cos^2(beta/2) = u, rows
/// and columns in descending m.
RealMatrix wigner_probabilities(int k, double u) {
    const double j = 0.5 * (k - 1);
    const double c = std::sqrt(u), s = std::sqrt(1.0 - u);
    RealMatrix out(k, k);
    for (int r = 0; r < k; ++r) {
        for (int col = 0; col < k; ++col) {
            const double mp = j - r, m = j - col;
            const int jpmp = static_cast<int>(std::lround(j + mp)), jmmp = static_cast<int>(std::lround(j - mp));
            const int jpm = static_cast<int>(std::lround(j + m)), jmm = static_cast<int>(std::lround(j - m));
            const int dm = static_cast<int>(std::lround(mp - m));
            const double pref = std::sqrt(factorial(jpmp) * factorial(jmmp) * factorial(jpm) * factorial(jmm));
            double d = 0.0;
            for (int q = std::max(0, -dm); q <= std::min(jpm, jmmp); ++q) {
                const double sign = ((dm + q) % 2 == 0) ? 1.0 : -1.0;
                const double den = factorial(jpm - q) * factorial(q) * factorial(dm + q) * factorial(jmmp - q);
                d += sign * pref / den * std::pow(c, jpm + jmmp - 2 * q) * std::pow(s, dm + 2 * q);
            }
            out(r, col) = d * d;
        }
    }
    return out;
}

}  // namespace

TEST(LzClosedForm, Values) {
    const ScatterMatrix id = lz_closed_form(0.0, 1.0);
    EXPECT_EQ(max_diff(id.matrix(), RealMatrix::Identity(2, 2)), 0.0);
    const ScatterMatrix half = lz_closed_form(std::sqrt(std::log(2.0) / M_PI), 1.0);
    EXPECT_NEAR(half(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(half(0, 1), 0.5, 1e-15);
    EXPECT_NEAR(lz_closed_form(1.0, 1.0)(0, 0), 0.043214, 1e-6);
    EXPECT_THROW(lz_closed_form(1.0, 0.0), ValidationError);
    EXPECT_THROW(lz_closed_form(1.0, -2.0), ValidationError);
}

TEST(AsymptoticV3, Limits) {
    EXPECT_DOUBLE_EQ(asymptotic_v3(0.0, 1.0), -1.0);
    EXPECT_NEAR(asymptotic_v3(std::sqrt(std::log(2.0) / M_PI), 1.0), 0.0, 1e-15);
    EXPECT_NEAR(asymptotic_v3(1.0, 1e-4), 1.0, 1e-15);
    EXPECT_THROW(asymptotic_v3(1.0, 0.0), ValidationError);
}

TEST(LagrangeProjector, DiagonalExamples) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m.diagonal() << 0.5, -0.5;
    ComplexMatrix want = ComplexMatrix::Zero(2, 2);
    want(0, 0) = 1.0;
    EXPECT_LE(max_diff(lagrange_projector(m, {-0.5, 0.5}, 1), want), 1e-15);
    ComplexMatrix m3 = ComplexMatrix::Zero(3, 3);
    m3.diagonal() << 1.0, 0.0, -1.0;
    ComplexMatrix want3 = ComplexMatrix::Zero(3, 3);
    want3(1, 1) = 1.0;
    EXPECT_LE(max_diff(lagrange_projector(m3, {-1.0, 0.0, 1.0}, 1), want3), 1e-15);
}

TEST(LagrangeProjector, SpinHalfRankOne) {
    Gen gen(41);
    const models::SpinRep rep = models::build_spin_rep(2);
    for (int trial = 0; trial < 10; ++trial) {
        BlochVector v{gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(-1, 1)};
        const double n = v.norm();
        v = {v.v1 / n, v.v2 / n, v.v3 / n};
        const ComplexMatrix p = lagrange_projector(bloch_matrix(rep, v), {-0.5, 0.5}, 1);
        const ComplexMatrix want = 0.5 * ComplexMatrix::Identity(2, 2) + bloch_matrix(rep, v);
        EXPECT_LE(max_diff(p, want), 1e-14);
    }
}

TEST(LagrangeProjector, Errors) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m.diagonal() << 0.5, -0.5;
    EXPECT_THROW(lagrange_projector(m, {-1.0, 1.0}, 0), ValidationError);
    EXPECT_THROW(lagrange_projector(m, {0.5, 0.5}, 0), ValidationError);
    EXPECT_THROW(lagrange_projector(m, {-0.5, 0.5}, 2), ValidationError);
}

TEST(LagrangeProjectorProperty, IdempotentAndComplete) {
    Gen gen(43);
    for (int k = 2; k <= 8; ++k) {
        const models::SpinRep rep = models::build_spin_rep(k);
        BlochVector v{gen.uniform(-1, 1), gen.uniform(-1, 1), gen.uniform(-1, 1)};
        const double n = v.norm();
        v = {v.v1 / n, v.v2 / n, v.v3 / n};
        const ComplexMatrix m = bloch_matrix(rep, v);
        const auto ladder = spin_ladder(k);
        ComplexMatrix sum = ComplexMatrix::Zero(k, k);
        for (int i = 0; i < k; ++i) {
            const ComplexMatrix p = lagrange_projector(m, ladder, i);
            EXPECT_LE(max_diff(p * p, p), 1e-10) << k;
            sum += p;
        }
        EXPECT_LE(max_diff(sum, ComplexMatrix::Identity(k, k)), 1e-10) << k;
    }
}

TEST(SmatrixSpin, SpinHalfEqualsClosedForm) {
    for (double d : {0.1, 0.5, 1.3}) {
        for (double a : {0.2, 1.0, 1.9}) {
            EXPECT_LE(max_diff(smatrix_spin(2, d, a).matrix(), lz_closed_form(d, a).matrix()), 1e-12);
        }
    }
}

TEST(SmatrixSpin, SpinOneHasCorrectedCenter) {
    const double d = 0.7, a = 1.1;
    const double u = std::exp(-M_PI * d * d / a), v = 1 - u;
    RealMatrix want(3, 3);
    want << u * u, 2 * u * v, v * v, 2 * u * v, (1 - 2 * u) * (1 - 2 * u), 2 * u * v, v * v, 2 * u * v, u * u;
    EXPECT_LE(max_diff(smatrix_spin(3, d, a).matrix(), want), 1e-12);
}

TEST(SmatrixSpin, SpinThreeHalves) {
    const double d = 0.5, a = 1.0;
    const double u = std::exp(-M_PI * d * d / a), v = 1 - u;
    const ScatterMatrix s = smatrix_spin(4, d, a);
    RealMatrix want(4, 4);
    want << u * u * u, 3 * u * u * v, 3 * u * v * v, v * v * v,
            3 * u * u * v, u * std::pow(3 * u - 2, 2), std::pow(1 - 3 * u, 2) * v, 3 * u * v * v,
            3 * u * v * v, std::pow(1 - 3 * u, 2) * v, u * std::pow(3 * u - 2, 2), 3 * u * u * v,
            v * v * v, 3 * u * v * v, 3 * u * u * v, u * u * u;
    EXPECT_LE(max_diff(s.matrix(), want), 1e-12);
}

TEST(SmatrixSpin, ZeroCouplingIsIdentity) {
    for (int k = 2; k <= 7; ++k) EXPECT_LE(max_diff(smatrix_spin(k, 0.0, 1.0).matrix(), RealMatrix::Identity(k, k)), 1e-14);
}

TEST(SmatrixSpinProperty, MatchesWignerReference) {
    Gen gen(47);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = gen.integer(2, 9);
        const double d = gen.uniform(0.0, 1.5), a = gen.uniform(0.1, 3.0);
        const double u = std::exp(-M_PI * d * d / a);
        EXPECT_LE(max_diff(smatrix_spin(k, d, a).matrix(), wigner_probabilities(k, u)), 1e-11) << k;
    }
}

TEST(SmatrixSpinProperty, StochasticSymmetricPersymmetric) {
    Gen gen(53);
    for (int trial = 0; trial < 30; ++trial) {
        const int k = gen.integer(2, 9);
        const RealMatrix s = smatrix_spin(k, gen.uniform(0, 2), gen.uniform(0.1, 2)).matrix();
        EXPECT_LE(lzs::testing::stochastic_defect(s), 1e-12);
        EXPECT_LE(max_diff(s, RealMatrix(s.transpose())), 1e-12);
        EXPECT_LE(max_diff(s, RealMatrix(s.reverse())), 1e-12);
        EXPECT_GE(s.minCoeff(), 0.0);
    }
}

TEST(SmatrixSpinProperty, AzimuthalInvariance) {
    Gen gen(59);
    for (int trial = 0; trial < 10; ++trial) {
        const int k = gen.integer(2, 7);
        const double d = gen.uniform(0.1, 1.2), a = gen.uniform(0.3, 2);
        const double v3 = asymptotic_v3(d, a);
        const double r = std::sqrt(1 - v3 * v3), phi = gen.uniform(0, 2 * M_PI);
        const ScatterMatrix rotated =
            projector_smatrix(models::build_spin_rep(k), {r * std::cos(phi), r * std::sin(phi), v3});
        EXPECT_LE(max_diff(rotated.matrix(), smatrix_spin(k, d, a).matrix()), 1e-12);
    }
}

TEST(FirstRow, ExamplesAndLaw) {
    const double d = 0.6, a = 0.9;
    const double u = std::exp(-M_PI * d * d / a), v = 1 - u;
    EXPECT_NEAR(first_row_element(4, d, a, 1), u * u * u, 1e-15);
    EXPECT_NEAR(first_row_element(4, d, a, 2), 3 * u * u * v, 1e-15);
    EXPECT_NEAR(first_row_element(3, d, a, 3), v * v, 1e-15);
    for (int n = 2; n <= 8; ++n) {
        const ScatterMatrix s = smatrix_spin(n, d, a);
        double total = 0;
        for (int j = 1; j <= n; ++j) {
            EXPECT_NEAR(first_row_element(n, d, a, j), s(0, j - 1), 1e-12);
            total += first_row_element(n, d, a, j);
        }
        EXPECT_NEAR(total, 1.0, 1e-14);
    }
    EXPECT_THROW(first_row_element(4, d, a, 0), ValidationError);
    EXPECT_THROW(first_row_element(4, d, a, 5), ValidationError);
}

TEST(EvolveLax, ZeroCouplingLeavesVUnchanged) {
    const models::AffineModel m = models::build_spin(3, 0.0, 1.0);
    const LaxResult r = evolve_lax(m, {0, 0, 1}, -50, 50);
    const ComplexMatrix v0 = bloch_matrix(models::build_spin_rep(3), {0, 0, 1});
    EXPECT_EQ(max_diff(r.v, v0), 0.0);
}

TEST(EvolveLax, IsospectralAndAsymptote) {
    numerics::OdeSettings s;
    s.rtol = 1e-10;
    for (int k : {2, 3, 4}) {
        const models::AffineModel m = models::build_spin(k, 1.0, 1.0);
        const LaxResult r = evolve_lax(m, {0, 0, 1}, -200, 200, s);
        const auto ev0 = numerics::hermitian_eigs(bloch_matrix(models::build_spin_rep(k), {0, 0, 1})).values;
        const auto ev1 = numerics::hermitian_eigs(0.5 * (r.v + r.v.adjoint())).values;
        EXPECT_LE((ev1 - ev0).cwiseAbs().maxCoeff(), 1e-8) << k;
        EXPECT_NEAR(std::abs(r.bloch.v3), std::abs(1 - 2 * std::exp(-M_PI)), 2e-2) << k;
        EXPECT_NEAR(r.bloch.norm(), 1.0, 1e-8) << k;
        // realized sign: v3 ends near -(1 - 2u)
        EXPECT_LT(r.bloch.v3, 0.0);
    }
}

TEST(EvolveLax, ProjectorsOfFlowedMatrixGiveSMatrix) {
    // S(i, j) = Tr(P_i(V(T)) P_j(-Z)) with the V actually reached by the flow.
    const double d = 0.5, a = 1.0;
    const int k = 3;
    const models::AffineModel m = models::build_spin(k, d, a);
    const LaxResult r = evolve_lax(m, {0, 0, 1}, -300, 300);
    const double n = r.bloch.norm();
    const BlochVector flipped{r.bloch.v1 / n, r.bloch.v2 / n, -r.bloch.v3 / n};
    const ScatterMatrix s = projector_smatrix(models::build_spin_rep(k), flipped);
    EXPECT_LE(max_diff(s.matrix(), smatrix_spin(k, d, a).matrix()), 1e-2);
}

TEST(EvolveLax, AdjointOrderingAndErrors) {
    const models::AffineModel adj = models::build_adjoint3(0.4, 1.0);
    const LaxResult r = evolve_lax(adj, {0, 0, 1}, -100, 100);
    EXPECT_NEAR(r.bloch.norm(), 1.0, 1e-8);
    EXPECT_THROW(evolve_lax(models::build_bowtie3(0.4, 1.0), {0, 0, 1}, -1, 1), ValidationError);
    EXPECT_THROW(evolve_lax(adj, {0, 0, 1}, 1, -1), ValidationError);
}
