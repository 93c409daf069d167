#pragma once

#include <stdexcept>
#include <string>

namespace censim {

// Structural failure of a fit: invalid input shape, no score root in the
// expanded bracket, too few events. Distinct from a fit that merely did not
// converge (reported via FitResult::converged).
struct FitError : std::runtime_error {
    explicit FitError(const std::string& msg) : std::runtime_error(msg) {}
};

// A calibration target that cannot be reached (e.g. asking a cure-model grid
// search for a censored fraction below the cure fraction).
struct CalibrationError : std::runtime_error {
    explicit CalibrationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Simulation-study abort (e.g. more than 10% of replications failed to fit).
struct McError : std::runtime_error {
    explicit McError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace censim
