#include "cframe/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "cframe/errors.hpp"

namespace cframe {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kCurvature = 0.9;
constexpr int kMaxLineSearchEvals = 30;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

struct Trial {
    double step = 0.0;
    double value = 0.0;
    double slope = 0.0;  // directional derivative at step
    std::vector<double> x;
    std::vector<double> grad;
};

class LineSearch {
public:
    LineSearch(const Objective& f, std::span<const double> x, std::span<const double> dir, double f0, double slope0)
        : f_(f), x_(x), dir_(dir), f0_(f0), slope0_(slope0) {}

    Trial evaluate(double step) {
        Trial t;
        t.step = step;
        t.x.resize(x_.size());
        t.grad.resize(x_.size());
        for (std::size_t i = 0; i < x_.size(); ++i) t.x[i] = x_[i] + step * dir_[i];
        t.value = f_(t.x, t.grad);
        t.slope = dot(t.grad, dir_);
        ++evals_;
        return t;
    }

    bool sufficient(const Trial& t) const {
        return std::isfinite(t.value) && t.value <= f0_ + kArmijo * t.step * slope0_;
    }
    bool curvature(const Trial& t) const { return std::abs(t.slope) <= -kCurvature * slope0_; }

    // Strong-Wolfe search; returns false when no acceptable step is found.
    bool wolfe(double initial, Trial& out) {
        Trial prev{0.0, f0_, slope0_, {}, {}};
        double step = initial;
        for (int i = 0; evals_ < kMaxLineSearchEvals; ++i) {
            Trial cur = evaluate(step);
            if (!sufficient(cur) || (i > 0 && cur.value >= prev.value)) return zoom(std::move(prev), std::move(cur), out);
            if (curvature(cur)) {
                out = std::move(cur);
                return true;
            }
            if (cur.slope >= 0) return zoom(std::move(cur), std::move(prev), out);
            prev = std::move(cur);
            step *= 2.0;
        }
        return false;
    }

    // Backtracking Armijo search.
    bool armijo(double initial, Trial& out) {
        double step = initial;
        while (evals_ < 2 * kMaxLineSearchEvals) {
            Trial cur = evaluate(step);
            if (sufficient(cur)) {
                out = std::move(cur);
                return true;
            }
            step *= 0.5;
        }
        return false;
    }

private:
    bool zoom(Trial lo, Trial hi, Trial& out) {
        while (evals_ < kMaxLineSearchEvals) {
            const double width = hi.step - lo.step;
            // Minimizer of the quadratic through (lo.value, lo.slope) and hi.value, kept inside the bracket.
            double step = lo.step + 0.5 * width;
            const double denom = 2.0 * (hi.value - lo.value - lo.slope * width);
            if (denom != 0.0 && std::isfinite(hi.value)) {
                const double q = lo.step - lo.slope * width * width / denom;
                const double a = std::min(lo.step, hi.step) + 0.1 * std::abs(width);
                const double b = std::max(lo.step, hi.step) - 0.1 * std::abs(width);
                if (std::isfinite(q) && q >= a && q <= b) step = q;
            }
            Trial cur = evaluate(step);
            if (!sufficient(cur) || cur.value >= lo.value) {
                hi = std::move(cur);
            } else {
                if (curvature(cur)) {
                    out = std::move(cur);
                    return true;
                }
                if (cur.slope * (hi.step - lo.step) >= 0) hi = std::move(lo);
                lo = std::move(cur);
            }
            if (std::abs(hi.step - lo.step) < 1e-16) break;
        }
        // Accept the best sufficient-decrease point found, even without curvature.
        if (lo.step > 0.0 && !lo.x.empty() && sufficient(lo)) {
            out = std::move(lo);
            return true;
        }
        return false;
    }

    const Objective& f_;
    std::span<const double> x_;
    std::span<const double> dir_;
    double f0_;
    double slope0_;
    int evals_ = 0;
};

}  // namespace

MinimizeResult minimize(const Objective& objective, std::vector<double> x0, const MinimizeOptions& options) {
    if (options.max_iters < 0) throw InputError("max_iters must be non-negative");
    if (!(options.grad_tol > 0.0)) throw InputError("grad_tol must be positive");

    MinimizeResult result;
    const std::size_t n = x0.size();
    std::vector<double> x = std::move(x0);
    std::vector<double> grad(n);
    double value = objective(x, grad);
    if (!std::isfinite(value)) throw DomainError("objective is not finite at the starting point");
    result.values.push_back(value);

    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    std::vector<double> dir(n);
    double gd_step = 1.0;

    for (int iter = 0; iter < options.max_iters; ++iter) {
        if (max_abs(grad) < options.grad_tol) {
            result.converged = true;
            break;
        }

        bool accepted = false;
        Trial next;
        if (options.method == OptimizerKind::Lbfgs) {
            // Two-loop recursion for dir = -H * grad.
            std::vector<double> q = grad;
            std::vector<double> alpha(s_hist.size());
            for (std::size_t k = s_hist.size(); k-- > 0;) {
                alpha[k] = rho_hist[k] * dot(s_hist[k], q);
                for (std::size_t i = 0; i < n; ++i) q[i] -= alpha[k] * y_hist[k][i];
            }
            double gamma = 1.0;
            if (!s_hist.empty()) gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
            for (double& v : q) v *= gamma;
            for (std::size_t k = 0; k < s_hist.size(); ++k) {
                const double beta = rho_hist[k] * dot(y_hist[k], q);
                for (std::size_t i = 0; i < n; ++i) q[i] += s_hist[k][i] * (alpha[k] - beta);
            }
            for (std::size_t i = 0; i < n; ++i) dir[i] = -q[i];
            double slope = dot(grad, dir);
            if (slope < 0.0) {
                const double initial = s_hist.empty() ? 1.0 / std::max(1.0, std::sqrt(dot(grad, grad))) : 1.0;
                LineSearch ls(objective, x, dir, value, slope);
                accepted = ls.wolfe(initial, next);
            }
        }
        if (!accepted) {
            for (std::size_t i = 0; i < n; ++i) dir[i] = -grad[i];
            const double slope = -dot(grad, grad);
            LineSearch ls(objective, x, dir, value, slope);
            const double initial = options.method == OptimizerKind::Lbfgs
                                       ? 1.0 / std::max(1.0, std::sqrt(-slope))
                                       : gd_step;
            accepted = ls.armijo(initial, next);
            if (accepted) {
                gd_step = next.step * 2.0;
                if (options.method == OptimizerKind::Lbfgs) {
                    ++result.fallback_steps;
                    s_hist.clear();
                    y_hist.clear();
                    rho_hist.clear();
                }
            }
        }
        if (!accepted) break;

        if (options.method == OptimizerKind::Lbfgs) {
            std::vector<double> s(n), y(n);
            for (std::size_t i = 0; i < n; ++i) {
                s[i] = next.x[i] - x[i];
                y[i] = next.grad[i] - grad[i];
            }
            const double sy = dot(s, y);
            if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
                s_hist.push_back(std::move(s));
                y_hist.push_back(std::move(y));
                rho_hist.push_back(1.0 / sy);
                if (static_cast<int>(s_hist.size()) > options.history) {
                    s_hist.pop_front();
                    y_hist.pop_front();
                    rho_hist.pop_front();
                }
            }
        }
        x = std::move(next.x);
        grad = std::move(next.grad);
        value = next.value;
        result.values.push_back(value);
        ++result.iterations;
    }
    if (!result.converged && max_abs(grad) < options.grad_tol) result.converged = true;

    result.x = std::move(x);
    result.value = value;
    return result;
}

}  // namespace cframe
