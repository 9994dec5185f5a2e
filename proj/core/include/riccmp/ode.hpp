#pragma once

// Explicit adaptive Runge-Kutta 5(4) (Dormand-Prince) with the standard
// fourth-order continuous extension. States are flat Eigen vectors; the
// matrix-valued systems in this library pack their operators column-major.

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace riccmp::ode {

using Vector = Eigen::VectorXd;

struct Controls {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double initial_step = 1e-3;
    double max_step = 0.1;
    /// Relative to max(1, |t|).
    double min_step = 1e-14;
    long max_steps = 2'000'000;
};

/// One accepted step [t0, t0 + h] and the coefficients of its interpolant.
struct DenseStep {
    double t0 = 0.0;
    double h = 0.0;
    Vector r1, r2, r3, r4, r5;

    double t1() const { return t0 + h; }
    Vector value(double t) const;
    Vector derivative(double t) const;
};

/// Piecewise interpolant built from consecutive accepted steps.
class DenseSolution {
public:
    void append(DenseStep step) { steps_.push_back(std::move(step)); }
    bool empty() const { return steps_.empty(); }
    double t_begin() const { return steps_.front().t0; }
    double t_end() const { return steps_.back().t1(); }
    const std::vector<DenseStep>& steps() const { return steps_; }

    /// t is clamped into [t_begin, t_end].
    Vector value(double t) const;
    Vector derivative(double t) const;

private:
    const DenseStep& locate(double t) const;
    std::vector<DenseStep> steps_;
};

enum class StopReason { reached_end, escaped, step_underflow, step_limit };

struct Result {
    StopReason reason = StopReason::reached_end;
    double t = 0.0;
    Vector y;
    double last_step = 0.0;
    long accepted = 0;
    long rejected = 0;
};

using Rhs = std::function<void(double t, const Vector& y, Vector& dy)>;

struct Hooks {
    /// Applied to every accepted state (e.g. projection onto a constraint manifold).
    std::function<void(Vector& y)> project;
    /// Called after every accepted step; returning true stops the integration.
    std::function<bool(double t, const Vector& y)> stop;
};

/// Integrates y' = f(t, y) from t0 to t_end, appending accepted steps to `out`.
Result integrate(const Rhs& f, double t0, const Vector& y0, double t_end, const Controls& controls,
                 DenseSolution& out, const Hooks& hooks = {});

}  // namespace riccmp::ode
