#include <gtest/gtest.h>

#include <cmath>

#include "lzs/numerics/linalg.hpp"
#include "lzs/numerics/ode.hpp"
#include "support.hpp"

using namespace lzs;
using namespace lzs::numerics;
using lzs::testing::Gen;
using lzs::testing::max_diff;

TEST(HermitianEigs, DiagonalInputSortsAscending) {
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m.diagonal() << 1.0, 0.0, -1.0;
    const auto es = hermitian_eigs(m);
    EXPECT_NEAR(es.values(0), -1.0, 1e-15);
    EXPECT_NEAR(es.values(1), 0.0, 1e-15);
    EXPECT_NEAR(es.values(2), 1.0, 1e-15);
}

TEST(HermitianEigs, PauliX) {
    const auto es = hermitian_eigs(pauli(1));
    EXPECT_NEAR(es.values(0), -1.0, 1e-15);
    EXPECT_NEAR(es.values(1), 1.0, 1e-15);
    // (1, -1)/sqrt2 up to phase
    EXPECT_NEAR(std::abs(es.vectors(0, 0) + es.vectors(1, 0)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(es.vectors(0, 1) - es.vectors(1, 1)), 0.0, 1e-14);
}

TEST(HermitianEigs, RejectsNonHermitianWithDeviation) {
    ComplexMatrix m(2, 2);
    m << 1, 2, 0, 1;
    try {
        hermitian_eigs(m);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("max |M - M^dagger| = 2"), std::string::npos) << e.what();
    }
}

TEST(HermitianEigs, RandomResidualOrthonormalityReconstruction) {
    Gen gen(11);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = gen.integer(1, 9);
        const ComplexMatrix m = gen.hermitian(n, gen.uniform(0.1, 50.0));
        const auto es = hermitian_eigs(m);
        const double scale = max_abs(m);
        for (int i = 0; i + 1 < n; ++i) EXPECT_LE(es.values(i), es.values(i + 1));
        for (int i = 0; i < n; ++i) {
            const ComplexVector r = m * es.vectors.col(i) - es.values(i) * es.vectors.col(i);
            EXPECT_LE(r.cwiseAbs().maxCoeff(), 1e-12 * scale);
        }
        EXPECT_LE(unitarity_defect(es.vectors), 1e-12);
        const ComplexMatrix rebuilt = es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
        EXPECT_LE(max_diff(rebuilt, m), 1e-11 * scale);
    }
}

TEST(HermitianEigs, DegenerateSpectrumStillOrthonormal) {
    ComplexMatrix m = ComplexMatrix::Identity(4, 4);
    m(3, 3) = 2.0;
    const auto es = hermitian_eigs(m);
    EXPECT_LE(unitarity_defect(es.vectors), 1e-13);
}

TEST(Commutator, PauliAlgebra) {
    EXPECT_LE(max_diff(commutator(pauli(1), pauli(2)), 2.0 * kI * pauli(3)), 1e-15);
    EXPECT_LE(max_diff(commutator(pauli(2), pauli(3)), 2.0 * kI * pauli(1)), 1e-15);
}

TEST(Commutator, SelfAndDiagonalVanish) {
    Gen gen(3);
    const ComplexMatrix m = gen.hermitian(5);
    EXPECT_EQ(max_abs(commutator(m, m)), 0.0);
    ComplexMatrix d1 = ComplexMatrix::Zero(3, 3), d2 = ComplexMatrix::Zero(3, 3);
    d1.diagonal() << 1.0, 2.0, 3.0;
    d2.diagonal() << -4.0, 0.5, 7.0;
    EXPECT_EQ(max_abs(commutator(d1, d2)), 0.0);
}

TEST(Commutator, DimensionMismatchThrows) {
    EXPECT_THROW(commutator(ComplexMatrix::Zero(2, 2), ComplexMatrix::Zero(3, 3)), ValidationError);
}

TEST(Integrate, ScalarDecay) {
    OdeSettings s;
    s.rtol = 1e-10;
    RealMatrix y0 = RealMatrix::Ones(1, 1);
    auto rhs = [](double, const RealMatrix& y, RealMatrix& dy) { dy = -y; };
    const RealMatrix y = integrate(rhs, y0, 0.0, 1.0, s);
    EXPECT_NEAR(y(0, 0), std::exp(-1.0), 1e-10 * std::exp(-1.0) * 10);
}

TEST(Integrate, PurePhase) {
    OdeSettings s;
    ComplexMatrix y0(2, 1);
    y0 << 1.0, 1.0;
    auto rhs = [](double, const ComplexMatrix& y, ComplexMatrix& dy) {
        dy.resize(2, 1);
        dy(0, 0) = -kI * 1.0 * y(0, 0);
        dy(1, 0) = -kI * 2.0 * y(1, 0);
    };
    const ComplexMatrix y = integrate(rhs, y0, 0.0, M_PI, s);
    EXPECT_NEAR(std::abs(y(0, 0) - Complex(-1.0, 0.0)), 0.0, 1e-8);
    EXPECT_NEAR(std::abs(y(1, 0) - Complex(1.0, 0.0)), 0.0, 1e-8);
}

TEST(Integrate, BackwardDirection) {
    OdeSettings s;
    RealMatrix y0 = RealMatrix::Ones(1, 1);
    auto rhs = [](double, const RealMatrix& y, RealMatrix& dy) { dy = y; };
    const RealMatrix y = integrate(rhs, y0, 1.0, 0.0, s);
    EXPECT_NEAR(y(0, 0), std::exp(-1.0), 1e-9);
}

TEST(Integrate, DeterministicAndCountsSteps) {
    OdeSettings s;
    RealMatrix y0 = RealMatrix::Ones(2, 2);
    auto rhs = [](double t, const RealMatrix& y, RealMatrix& dy) { dy = std::cos(t) * y; };
    IntegrationStats st1, st2;
    const RealMatrix a = integrate(rhs, y0, 0.0, 5.0, s, &st1);
    const RealMatrix b = integrate(rhs, y0, 0.0, 5.0, s, &st2);
    EXPECT_EQ(max_diff(a, b), 0.0);
    EXPECT_EQ(st1.accepted, st2.accepted);
    EXPECT_GT(st1.accepted, 0u);
    EXPECT_GT(st1.rhs_evals, 12 * st1.accepted - 1);
}

TEST(Integrate, RejectsBadSettingsAndSpan) {
    OdeSettings s;
    RealMatrix y0 = RealMatrix::Ones(1, 1);
    auto rhs = [](double, const RealMatrix& y, RealMatrix& dy) { dy = y; };
    EXPECT_THROW(integrate(rhs, y0, 0.0, 0.0, s), ValidationError);
    s.rtol = 0.5;
    EXPECT_THROW(integrate(rhs, y0, 0.0, 1.0, s), ValidationError);
    s.rtol = 0.0;
    EXPECT_THROW(integrate(rhs, y0, 0.0, 1.0, s), ValidationError);
}

TEST(Integrate, UnderflowReportsLastTime) {
    OdeSettings s;
    RealMatrix y0 = RealMatrix::Ones(1, 1);
    // y' = y^2 blows up at t = 1
    auto rhs = [](double, const RealMatrix& y, RealMatrix& dy) { dy = y.cwiseAbs2(); };
    try {
        integrate(rhs, y0, 0.0, 2.0, s);
        FAIL() << "expected DivergenceError";
    } catch (const DivergenceError& e) {
        EXPECT_GT(e.last_time(), 0.9);
        EXPECT_LT(e.last_time(), 1.0);
    }
}

namespace {

ComplexMatrix propagate_random_hamiltonian(const ComplexMatrix& h0, const ComplexMatrix& h1, double t0,
                                           double t1, const ComplexMatrix& u0, const OdeSettings& s) {
    auto rhs = [&](double t, const ComplexMatrix& u, ComplexMatrix& du) { du.noalias() = -kI * ((h0 + t * h1) * u); };
    return integrate(rhs, u0, t0, t1, s);
}

}  // namespace

TEST(IntegrateProperty, UnitaryPropagationAndReversibility) {
    Gen gen(2024);
    OdeSettings s;
    s.rtol = 1e-10;
    for (int trial = 0; trial < 12; ++trial) {
        const int n = gen.integer(2, 6);
        const ComplexMatrix h0 = gen.hermitian(n, 2.0);
        const ComplexMatrix h1 = gen.hermitian(n, 0.5);
        const double t0 = gen.uniform(-8.0, -1.0), t1 = gen.uniform(1.0, 8.0);
        const ComplexMatrix id = ComplexMatrix::Identity(n, n);
        const ComplexMatrix u = propagate_random_hamiltonian(h0, h1, t0, t1, id, s);
        EXPECT_LE(unitarity_defect(u), 10 * s.rtol) << "trial " << trial;
        const ComplexMatrix back = propagate_random_hamiltonian(h0, h1, t1, t0, u, s);
        EXPECT_LE(max_diff(back, id), 20 * s.rtol) << "trial " << trial;
    }
}
