// Transition-probability matrix between diabatic states, S(i, j) = P(j -> i).
#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lzs/errors.hpp"
#include "lzs/numerics/linalg.hpp"

namespace lzs {

class ScatterMatrix {
public:
    /// Entries down to -1e-12 are clamped to zero; anything more negative,
    /// above 1 + 1e-12, or non-finite is rejected. Row and column sums must
    /// equal one within `sum_tol`.
    static ScatterMatrix from_probabilities(RealMatrix p, double sum_tol = 1e-10) {
        if (p.rows() != p.cols() || p.rows() < 1) throw ValidationError("ScatterMatrix: must be square and non-empty");
        for (Eigen::Index i = 0; i < p.rows(); ++i) {
            for (Eigen::Index j = 0; j < p.cols(); ++j) {
                double& x = p(i, j);
                if (!std::isfinite(x) || x < -1e-12 || x > 1.0 + 1e-12) {
                    std::ostringstream os;
                    os << "ScatterMatrix: entry (" << i + 1 << "," << j + 1 << ") = " << x << " is not a probability";
                    throw ValidationError(os.str());
                }
                x = std::clamp(x, 0.0, 1.0);
            }
        }
        ScatterMatrix s(std::move(p));
        if (s.stochastic_defect() > sum_tol) {
            std::ostringstream os;
            os << "ScatterMatrix: row/column sums deviate from 1 by " << s.stochastic_defect()
               << " (allowed " << sum_tol << ")";
            throw ValidationError(os.str());
        }
        return s;
    }

    static ScatterMatrix identity(int k) { return ScatterMatrix(RealMatrix::Identity(k, k)); }

    int dim() const { return static_cast<int>(p_.rows()); }
    const RealMatrix& matrix() const { return p_; }
    double operator()(int i, int j) const { return p_(i, j); }

    /// max over rows and columns of |sum - 1|.
    double stochastic_defect() const {
        const RealVector ones = RealVector::Ones(p_.rows());
        return std::max((p_.rowwise().sum() - ones).cwiseAbs().maxCoeff(),
                        (p_.colwise().sum().transpose() - ones).cwiseAbs().maxCoeff());
    }

private:
    explicit ScatterMatrix(RealMatrix p) : p_(std::move(p)) {}
    RealMatrix p_;
};

}  // namespace lzs
