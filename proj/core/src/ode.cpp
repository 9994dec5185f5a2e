#include "riccmp/ode.hpp"

#include <algorithm>
#include <cmath>

#include "riccmp/error.hpp"

namespace riccmp::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer, Norsett & Wanner, DOPRI5 "contd5").
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

}  // namespace

Vector DenseStep::value(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    return r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
}

Vector DenseStep::derivative(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    const Vector q = r3 + th * (r4 + th1 * r5);
    const Vector dq = r4 + (1.0 - 2.0 * th) * r5;
    const Vector m = r2 + th1 * q;
    const Vector dm = -q + th1 * dq;
    return (m + th * dm) / h;
}

const DenseStep& DenseSolution::locate(double t) const {
    if (steps_.empty()) throw PreconditionError("DenseSolution: no steps");
    auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                               [](double v, const DenseStep& s) { return v < s.t0; });
    if (it == steps_.begin()) return steps_.front();
    return *std::prev(it);
}

Vector DenseSolution::value(double t) const {
    t = std::clamp(t, t_begin(), t_end());
    return locate(t).value(t);
}

Vector DenseSolution::derivative(double t) const {
    t = std::clamp(t, t_begin(), t_end());
    return locate(t).derivative(t);
}

Result integrate(const Rhs& f, double t0, const Vector& y0, double t_end, const Controls& controls,
                 DenseSolution& out, const Hooks& hooks) {
    Result res;
    res.t = t0;
    res.y = y0;
    if (hooks.project) hooks.project(res.y);
    if (!(t_end > t0)) {
        res.last_step = controls.initial_step;
        return res;
    }

    const Eigen::Index n = y0.size();
    Vector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y1(n), err(n);
    double t = t0;
    Vector y = res.y;
    f(t, y, k1);
    double h = std::min({controls.initial_step, controls.max_step, t_end - t0});

    while (true) {
        if (res.accepted + res.rejected >= controls.max_steps) {
            res.reason = StopReason::step_limit;
            break;
        }
        const double h_floor = controls.min_step * std::max(1.0, std::abs(t));
        if (h < h_floor) {
            res.reason = StopReason::step_underflow;
            break;
        }
        bool last = false;
        if (t + h >= t_end) {
            h = t_end - t;
            last = true;
        }

        ytmp = y + h * a21 * k1;
        f(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + h, ytmp, k6);
        y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        f(t + h, y1, k7);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double acc = 0.0;
        bool finite = y1.allFinite() && k7.allFinite();
        for (Eigen::Index i = 0; finite && i < n; ++i) {
            const double sc = controls.abs_tol + controls.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
            const double r = err[i] / sc;
            acc += r * r;
        }
        const double enorm = finite ? std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(n, 1))) : INFINITY;

        if (enorm <= 1.0) {
            if (hooks.project) hooks.project(y1);
            DenseStep step;
            step.t0 = t;
            step.h = h;
            const Vector ydiff = y1 - y;
            const Vector bspl = h * k1 - ydiff;
            step.r1 = y;
            step.r2 = ydiff;
            step.r3 = bspl;
            step.r4 = ydiff - h * k7 - bspl;
            step.r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            out.append(std::move(step));

            t = last ? t_end : t + h;
            y = y1;
            k1 = k7;
            ++res.accepted;
            res.last_step = h;

            const double fac = enorm == 0.0 ? kMaxFactor
                                            : std::clamp(kSafety * std::pow(enorm, -0.2), kMinFactor, kMaxFactor);
            const double h_next = std::min(h * fac, controls.max_step);
            if (hooks.stop && hooks.stop(t, y)) {
                res.reason = StopReason::escaped;
                res.last_step = h;
                break;
            }
            if (last) {
                res.reason = StopReason::reached_end;
                break;
            }
            h = h_next;
        } else {
            ++res.rejected;
            const double fac = std::isfinite(enorm) ? std::max(kMinFactor, kSafety * std::pow(enorm, -0.2))
                                                    : kMinFactor;
            h *= fac;
        }
    }

    res.t = t;
    res.y = y;
    return res;
}

}  // namespace riccmp::ode
