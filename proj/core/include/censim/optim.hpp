#pragma once

#include <functional>
#include <vector>

namespace censim {

struct OptimResult {
    std::vector<double> argmax;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

using ObjectiveFn = std::function<double(const std::vector<double>&)>;

// Derivative-free maximization (Nelder-Mead) under per-coordinate box
// constraints, handled by smooth coordinate transforms so the simplex moves
// in an unconstrained space. Bounds may be +/-inf (or pass empty vectors for
// a fully unconstrained search). Objective values of NaN are treated as -inf
// (the step is simply rejected).
//
// Convergence: simplex diameter in the original coordinates < 1e-8, with an
// iteration cap of 10^4 per run and one polishing restart from the best
// point. The returned value is never below f(init).
OptimResult maximize(const ObjectiveFn& f, const std::vector<double>& init,
                     const std::vector<double>& lower = {},
                     const std::vector<double>& upper = {});

// Central-difference Hessian of f at point. step <= 0 selects the default
// per-coordinate step max(1e-5, 1e-4 * |point_i|).
std::vector<std::vector<double>> hessian_fd(const ObjectiveFn& f,
                                            const std::vector<double>& point,
                                            double step = 0.0);

// Gauss-Jordan inverse with partial pivoting for the small symmetric
// matrices used here. Returns false (leaving out unspecified) on a
// numerically singular input.
bool invert_matrix(const std::vector<std::vector<double>>& m,
                   std::vector<std::vector<double>>& out);

} // namespace censim
