#pragma once

#include <stdexcept>
#include <string>

namespace lzs {

/// Bad input: wrong dimension, non-Hermitian matrix, out-of-range parameter.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The adaptive integrator could not make progress.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, double last_time)
        : std::runtime_error(what), last_time_(last_time) {}

    /// Last time reached by an accepted step.
    double last_time() const noexcept { return last_time_; }

private:
    double last_time_;
};

/// A zero-curvature partner was requested at a pole (the 1/eps entries at eps = 0).
class SingularPartnerError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A model without a zero-curvature partner was passed where one is required.
class MissingPartnerError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A crossing cluster that cannot be reduced to a two- or three-level block.
class UnsupportedCrossingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lzs
