#pragma once

#include <functional>
#include <vector>

namespace polycop {

struct OptimOptions {
    double tolerance = 1e-5;   // relative gradient norm for convergence
    int max_iterations = 300;
    double fd_step = 1e-5;     // central-difference step scale: h = fd_step * (1 + |x|)
};

struct OptimResult {
    std::vector<double> x;
    double value = 0.0;
    double gradient_norm = 0.0;  // relative, as used by the stopping rule
    int iterations = 0;
    bool converged = false;
    int evaluations = 0;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Central-difference gradient with per-coordinate step fd_step * (1 + |x_i|).
// The objective must be deterministic in x (simulated objectives achieve this
// with common random numbers), otherwise the differences are meaningless.
std::vector<double> numeric_gradient(const Objective& f, const std::vector<double>& x,
                                     double fd_step);

// BFGS minimization with numeric gradients and a backtracking line search.
OptimResult minimize_bfgs(const Objective& f, std::vector<double> x0,
                          const OptimOptions& opts = {});

}  // namespace polycop
