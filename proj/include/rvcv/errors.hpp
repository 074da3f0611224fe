#pragma once

#include <stdexcept>
#include <string>

namespace rvcv {

/// Empirical variance matrix of the control-variate basis is singular or too
/// ill-conditioned to solve for coefficients. Carries the measured condition
/// number (infinity if the matrix is exactly singular).
class DegenerateDesignError : public std::runtime_error {
public:
    DegenerateDesignError(std::string what, double condition_number)
        : std::runtime_error(std::move(what)), condition_number_(condition_number) {}

    double condition_number() const noexcept { return condition_number_; }

private:
    double condition_number_;
};

/// Problem size exceeds what an exact enumeration/recursion can handle.
class ResourceError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A diffusion transition matrix stayed singular after regularisation.
/// Carries the 0-based index of the offending transition.
class SdeDegeneracyError : public std::runtime_error {
public:
    SdeDegeneracyError(std::string what, std::size_t step_index)
        : std::runtime_error(std::move(what)), step_index_(step_index) {}

    std::size_t step_index() const noexcept { return step_index_; }

private:
    std::size_t step_index_;
};

/// A forward simulation produced non-finite state.
class SimulationFailure : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quadrature grid too coarse for the requested accuracy.
class GridError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rvcv
