#pragma once

#include <stdexcept>
#include <string>

namespace fbl {

// Adaptive quadrature ran out of subdivisions. Carries the best estimate
// reached so far together with the error bound attached to it.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_estimate, double error_bound)
        : std::runtime_error(what), best_estimate_(best_estimate), error_bound_(error_bound) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double best_estimate_;
    double error_bound_;
};

// A closed-form expression left its validity region (negative discriminant,
// nonpositive denominator). The message names the offending term.
class OutOfRegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Monte Carlo trial failed; carries the trial index.
class SimulationError : public std::runtime_error {
public:
    SimulationError(const std::string& what, long trial_index)
        : std::runtime_error(what), trial_index_(trial_index) {}

    long trial_index() const noexcept { return trial_index_; }

private:
    long trial_index_;
};

} // namespace fbl
