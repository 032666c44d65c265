// Shared helpers for the test binaries: seeded generators and matrix checks.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "lzs/numerics/linalg.hpp"

namespace lzs::testing {

/// Deterministic source of random parameters for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    ComplexMatrix hermitian(int n, double scale = 1.0) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) m(i, j) = Complex(uniform(-scale, scale), uniform(-scale, scale));
        }
        return 0.5 * (m + m.adjoint());
    }

    /// Nonzero slopes with strictly increasing magnitudes and random signs.
    std::vector<double> bowtie_slopes(int count) {
        std::vector<double> out;
        double mag = uniform(0.3, 0.8);
        for (int i = 0; i < count; ++i) {
            out.push_back(coin() ? mag : -mag);
            mag += uniform(0.2, 0.9);
        }
        return out;
    }

private:
    std::mt19937_64 rng_;
};

inline double max_diff(const RealMatrix& a, const RealMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }
inline double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline double stochastic_defect(const RealMatrix& s) {
    const RealVector ones = RealVector::Ones(s.rows());
    return std::max((s.rowwise().sum() - ones).cwiseAbs().maxCoeff(),
                    (s.colwise().sum().transpose() - ones).cwiseAbs().maxCoeff());
}

}  // namespace lzs::testing
