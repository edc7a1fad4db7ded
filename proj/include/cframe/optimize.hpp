#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cframe {

// Objective for minimization: returns f(x) and writes the gradient into grad.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

enum class OptimizerKind { Lbfgs, GradientDescent };

struct MinimizeOptions {
    OptimizerKind method = OptimizerKind::Lbfgs;
    int max_iters = 500;
    double grad_tol = 1e-6;  // stop when the max-norm of the gradient drops below this
    int history = 10;        // L-BFGS memory
};

struct MinimizeResult {
    std::vector<double> x;
    double value = 0.0;
    std::vector<double> values;  // objective at the start and after every accepted step
    int iterations = 0;
    bool converged = false;
    int fallback_steps = 0;  // steps taken by the gradient-descent fallback
};

// L-BFGS with a strong-Wolfe line search. When the line search fails the step
// falls back to backtracking gradient descent. Accepted steps always satisfy
// the sufficient-decrease condition, so `values` is non-increasing.
MinimizeResult minimize(const Objective& objective, std::vector<double> x0, const MinimizeOptions& options);

}  // namespace cframe
