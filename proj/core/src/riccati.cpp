#include "riccmp/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "riccmp/error.hpp"

namespace riccmp {

namespace {

Vector pack(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unpack(const Vector& v, int n) { return Eigen::Map<const Matrix>(v.data(), n, n); }

Matrix self_adjoint_part(const Matrix& s, const Matrix& g, const Matrix& g_inv) {
    return 0.5 * (s + g_inv * s.transpose() * g);
}

// Zero of the straight line through (t0, 1/n0), (t1, 1/n1); NaN if 1/n is not decreasing.
double extrapolate_escape(double t0, double n0, double t1, double n1) {
    const double u0 = 1.0 / n0, u1 = 1.0 / n1;
    if (!(u0 > u1) || !(t1 > t0)) return std::numeric_limits<double>::quiet_NaN();
    return t1 + u1 * (t1 - t0) / (u0 - u1);
}

}  // namespace

// ---------------------------------------------------------------------------
// Riccati

RiccatiTrajectory::RiccatiTrajectory(CurvatureProfile profile, Operator initial, double t_end_requested)
    : profile_(std::move(profile)), initial_(std::move(initial)), t_end_requested_(t_end_requested) {}

Operator RiccatiTrajectory::at(double t) const {
    if (t < 0.0 || t > t_reached_ * (1.0 + 1e-14) + 1e-300) {
        std::ostringstream msg;
        msg << "RiccatiTrajectory::at: t = " << t << " outside [0, " << t_reached_ << "]";
        throw PreconditionError(msg.str());
    }
    const int n = initial_.dim();
    const InnerSpace& sp = initial_.space();
    return Operator(sp, self_adjoint_part(unpack(dense_.value(t), n), sp.gram(), sp.gram_inverse()));
}

Operator RiccatiTrajectory::derivative_at(double t) const {
    if (t < 0.0 || t > t_reached_ * (1.0 + 1e-14) + 1e-300) {
        throw PreconditionError("RiccatiTrajectory::derivative_at: t outside the integrated range");
    }
    const int n = initial_.dim();
    const InnerSpace& sp = initial_.space();
    return Operator(sp, self_adjoint_part(unpack(dense_.derivative(t), n), sp.gram(), sp.gram_inverse()));
}

RiccatiTrajectory integrate_riccati(const CurvatureProfile& profile, const Operator& s0, double t_end,
                                    const RiccatiControls& controls) {
    if (profile.space() != s0.space()) throw DimensionError("integrate_riccati: profile and S0 spaces differ");
    if (!is_self_adjoint(s0)) throw PreconditionError("integrate_riccati: S0 is not self-adjoint");
    if (!(t_end > 0.0)) throw PreconditionError("integrate_riccati: t_end must be positive");

    RiccatiTrajectory traj(profile, s0, t_end);
    const InnerSpace& sp = s0.space();
    const int n = sp.dim();
    const Matrix g = sp.gram();
    const Matrix g_inv = sp.gram_inverse();

    ode::Hooks hooks;
    if (controls.symmetrize) {
        hooks.project = [&](Vector& y) { y = pack(self_adjoint_part(unpack(y, n), g, g_inv)); };
    }
    double threshold = controls.escape_threshold;
    hooks.stop = [&](double, const Vector& y) { return y.norm() > threshold; };

    auto record_new_steps = [&](std::size_t from) {
        const auto& steps = traj.dense_.steps();
        for (std::size_t i = from; i < steps.size(); ++i) {
            traj.times_.push_back(steps[i].t1());
            traj.samples_.push_back(unpack(steps[i].r1 + steps[i].r2, n));
        }
    };

    Vector y = pack(s0.matrix());
    if (hooks.project) hooks.project(y);
    traj.times_.push_back(0.0);
    traj.samples_.push_back(unpack(y, n));

    const std::vector<double> bounds = segment_bounds(profile, t_end);
    double t = 0.0;
    double h = controls.ode.initial_step;
    std::size_t seg = 0;

    while (t < t_end) {
        while (seg + 1 < bounds.size() && bounds[seg + 1] <= t) ++seg;
        const double seg_end = bounds[seg + 1];
        const std::size_t piece = profile.piece_index(0.5 * (bounds[seg] + seg_end));
        ode::Rhs rhs = [&, piece](double tt, const Vector& yy, Vector& dy) {
            const Matrix s = unpack(yy, n);
            dy = pack(s * s + profile.matrix_in_piece(tt, piece));
        };

        ode::Controls c = controls.ode;
        c.initial_step = std::max(h, c.min_step * 10.0);
        const std::size_t before = traj.dense_.steps().size();
        const ode::Result res = ode::integrate(rhs, t, y, seg_end, c, traj.dense_, hooks);
        record_new_steps(before);
        t = res.t;
        y = res.y;
        h = res.last_step;

        if (res.reason == ode::StopReason::reached_end) continue;
        if (res.reason != ode::StopReason::escaped) {
            std::ostringstream msg;
            msg << "stiff-failure: integrator stalled at t = " << t << " with ||S|| = " << y.norm()
                << (res.reason == ode::StopReason::step_limit ? " (step limit)" : " (step underflow)");
            throw IntegrationError(msg.str());
        }

        // Blow-up protocol: halve the distance to the extrapolated escape time
        // and require the norm to keep growing like a pole.
        const std::size_t k = traj.times_.size();
        double t_prev = k >= 2 ? traj.times_[k - 2] : 0.0;
        double n_prev = k >= 2 ? traj.samples_[k - 2].norm() : 1.0;
        double n_cur = y.norm();
        double t_ext = extrapolate_escape(t_prev, n_prev, t, n_cur);
        int confirmations = 0;
        bool confirmed = false;
        double hi = t;
        for (int iter = 0; iter < 200; ++iter) {
            if (!std::isfinite(t_ext) || !(t_ext > t)) break;
            if (confirmations >= 2 && 2.0 * (t_ext - t) <= controls.bracket_width) {
                confirmed = true;
                hi = t + 2.0 * (t_ext - t);
                break;
            }
            const double target = t + 0.5 * (t_ext - t);
            ode::Controls cc = controls.ode;
            cc.initial_step = std::min(h, 0.25 * (target - t));
            cc.min_step = 1e-16;
            ode::Hooks no_stop;
            no_stop.project = hooks.project;
            const std::size_t before2 = traj.dense_.steps().size();
            const ode::Result r2 = ode::integrate(rhs, t, y, target, cc, traj.dense_, no_stop);
            record_new_steps(before2);
            if (r2.reason != ode::StopReason::reached_end) {
                // Could not even reach the half-way point: the pole lies before it.
                confirmed = confirmations >= 1;
                t = r2.t;
                y = r2.y;
                hi = target;
                break;
            }
            const double n_new = r2.y.norm();
            if (n_new > 1.5 * n_cur) ++confirmations;
            else confirmations = 0;
            t_prev = t;
            n_prev = n_cur;
            t = r2.t;
            y = r2.y;
            n_cur = n_new;
            h = std::max(r2.last_step, 1e-16);
            t_ext = extrapolate_escape(t_prev, n_prev, t, n_cur);
        }

        if (confirmed) {
            BlowUp bu;
            bu.bracket_lo = t;
            bu.bracket_hi = std::max(hi, t);
            bu.t_star = 0.5 * (bu.bracket_lo + bu.bracket_hi);
            traj.blow_up_ = bu;
            traj.t_reached_ = t;
            return traj;
        }
        // Large but not a pole: keep integrating with a raised threshold.
        threshold *= 100.0;
        if (!std::isfinite(y.norm()) || threshold > 1e300) {
            throw IntegrationError("stiff-failure: norm escape could not be confirmed as a blow-up");
        }
    }

    traj.t_reached_ = t_end;
    return traj;
}

// ---------------------------------------------------------------------------
// Jacobi

JacobiTrajectory::JacobiTrajectory(CurvatureProfile profile, Operator f0, Operator f0_prime, double t_end)
    : profile_(std::move(profile)), f0_(std::move(f0)), f0_prime_(std::move(f0_prime)), t_end_(t_end) {}

Operator JacobiTrajectory::f(double t) const {
    const int n = f0_.dim();
    return Operator(f0_.space(), unpack(dense_.value(t).head(n * n), n));
}

Operator JacobiTrajectory::f_prime(double t) const {
    const int n = f0_.dim();
    return Operator(f0_.space(), unpack(dense_.value(t).tail(n * n), n));
}

Matrix JacobiTrajectory::wronskian(double t) const {
    const Operator fv = f(t);
    const Operator fp = f_prime(t);
    return (fv.adjoint() * fp - fp.adjoint() * fv).matrix();
}

namespace {

struct ScanSample {
    double t;
    double det;
    double ratio;
};

// sigma_min(F) relative to the size of the full state [F; F'], which has
// rank n everywhere, so the ratio vanishes exactly at singular times.
double singularity_ratio(const Vector& state, int n) {
    const Matrix f = unpack(state.head(n * n), n);
    Matrix stacked(2 * n, n);
    stacked << f, unpack(state.tail(n * n), n);
    const double scale = Eigen::JacobiSVD<Matrix>(stacked).singularValues()[0];
    const Vector sv = Eigen::JacobiSVD<Matrix>(f).singularValues();
    return scale > 0.0 ? sv[n - 1] / scale : 0.0;
}

double det_of(const Vector& state, int n) { return unpack(state.head(n * n), n).determinant(); }

std::vector<double> locate_singular_times(const ode::DenseSolution& dense, int n, double t_from,
                                          const JacobiControls& controls) {
    std::vector<ScanSample> scan;
    for (const auto& step : dense.steps()) {
        for (int k = 0; k < controls.scan_per_step; ++k) {
            const double t = step.t0 + step.h * k / controls.scan_per_step;
            if (t < t_from) continue;
            const Vector s = step.value(t);
            scan.push_back({t, det_of(s, n), singularity_ratio(s, n)});
        }
    }
    if (!dense.empty()) {
        const Vector s = dense.value(dense.t_end());
        scan.push_back({dense.t_end(), det_of(s, n), singularity_ratio(s, n)});
    }

    std::vector<double> found;
    const double tol = controls.singular_tolerance;
    for (std::size_t i = 1; i < scan.size(); ++i) {
        if (scan[i - 1].det * scan[i].det < 0.0) {
            double a = scan[i - 1].t, b = scan[i].t;
            double fa = scan[i - 1].det;
            while (b - a > tol) {
                const double m = 0.5 * (a + b);
                const double fm = det_of(dense.value(m), n);
                if (fa * fm <= 0.0) b = m;
                else {
                    a = m;
                    fa = fm;
                }
            }
            found.push_back(0.5 * (a + b));
        }
    }
    // Even-multiplicity zeros of det F do not change sign; find them as
    // minima of the singularity ratio.
    for (std::size_t i = 1; i + 1 < scan.size(); ++i) {
        if (!(scan[i].ratio <= scan[i - 1].ratio && scan[i].ratio <= scan[i + 1].ratio)) continue;
        if (scan[i].ratio > 1e-2) continue;
        double a = scan[i - 1].t, b = scan[i + 1].t;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = singularity_ratio(dense.value(c), n), fd = singularity_ratio(dense.value(d), n);
        while (b - a > tol) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = singularity_ratio(dense.value(c), n);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = singularity_ratio(dense.value(d), n);
            }
        }
        const double tm = 0.5 * (a + b);
        if (singularity_ratio(dense.value(tm), n) < 1e-6) found.push_back(tm);
    }

    std::sort(found.begin(), found.end());
    std::vector<double> unique;
    for (double t : found) {
        if (unique.empty() || t - unique.back() > 1e-6) unique.push_back(t);
    }
    return unique;
}

}  // namespace

JacobiTrajectory integrate_jacobi(const CurvatureProfile& profile, const Operator& f0, const Operator& f0_prime,
                                  double t_end, const JacobiControls& controls) {
    if (profile.space() != f0.space() || f0.space() != f0_prime.space()) {
        throw DimensionError("integrate_jacobi: inconsistent spaces");
    }
    if (!(t_end > 0.0)) throw PreconditionError("integrate_jacobi: t_end must be positive");

    JacobiTrajectory traj(profile, f0, f0_prime, t_end);
    const int n = f0.dim();
    Vector y(2 * n * n);
    y << pack(f0.matrix()), pack(f0_prime.matrix());
    traj.times_.push_back(0.0);

    const std::vector<double> bounds = segment_bounds(profile, t_end);
    double h = controls.ode.initial_step;
    for (std::size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
        const std::size_t piece = profile.piece_index(0.5 * (bounds[seg] + bounds[seg + 1]));
        ode::Rhs rhs = [&, piece](double tt, const Vector& yy, Vector& dy) {
            const Matrix fm = unpack(yy.head(n * n), n);
            dy.resize(yy.size());
            dy.head(n * n) = yy.tail(n * n);
            dy.tail(n * n) = pack(-profile.matrix_in_piece(tt, piece) * fm);
        };
        ode::Controls c = controls.ode;
        c.initial_step = std::max(h, c.min_step * 10.0);
        const std::size_t before = traj.dense_.steps().size();
        const ode::Result res = ode::integrate(rhs, bounds[seg], y, bounds[seg + 1], c, traj.dense_);
        for (std::size_t i = before; i < traj.dense_.steps().size(); ++i) {
            traj.times_.push_back(traj.dense_.steps()[i].t1());
        }
        if (res.reason != ode::StopReason::reached_end) {
            std::ostringstream msg;
            msg << "integrate_jacobi: integrator stalled at t = " << res.t;
            throw IntegrationError(msg.str());
        }
        y = res.y;
        h = res.last_step;
    }
    traj.singular_times_ = locate_singular_times(traj.dense_, n, 0.0, controls);
    return traj;
}

double self_adjoint_defect(const Operator& s) {
    const Matrix gs = s.form_matrix();
    return (gs - gs.transpose()).norm() / std::max(1.0, gs.norm());
}

Operator shape_from_jacobi(const JacobiTrajectory& j, double t) {
    if (t < j.t_min_cutoff() || t > j.t_end() || t < 0.0) {
        std::ostringstream msg;
        msg << "shape_from_jacobi: t = " << t << " outside [" << j.t_min_cutoff() << ", " << j.t_end() << "]";
        throw PreconditionError(msg.str());
    }
    double nearest = std::numeric_limits<double>::infinity();
    for (double s : j.singular_times()) {
        if (std::abs(s - t) < std::abs(nearest - t)) nearest = s;
    }
    const Operator f = j.f(t);
    const Operator fp = j.f_prime(t);
    const int n = f.dim();
    Vector state(2 * n * n);
    state << pack(f.matrix()), pack(fp.matrix());
    if (std::abs(nearest - t) < 1e-6 || singularity_ratio(state, n) < 1e-12) {
        std::ostringstream msg;
        msg << "shape_from_jacobi: F is singular near t = " << t << " (nearest singular time "
            << nearest << ")";
        throw PreconditionError(msg.str());
    }
    const Matrix s = -f.matrix().transpose().partialPivLu().solve(fp.matrix().transpose()).transpose();
    return Operator(f.space(), s);
}

JacobiTrajectory tube_jacobi(const Operator& p, const Operator& p_perp, const Operator& a_tangent,
                             const CurvatureProfile& profile, double t_end, const JacobiControls& controls) {
    const InnerSpace& sp = p.space();
    if (p_perp.space() != sp || a_tangent.space() != sp) throw DimensionError("tube_jacobi: inconsistent spaces");
    const int n = sp.dim();
    const Matrix id = Matrix::Identity(n, n);
    const double tol = 1e-10;
    if ((p.matrix() * p.matrix() - p.matrix()).norm() > tol ||
        (p.matrix() + p_perp.matrix() - id).norm() > tol || !is_self_adjoint(p)) {
        throw PreconditionError("tube_jacobi: P and P_perp are not complementary orthogonal projections");
    }
    if (!is_self_adjoint(a_tangent)) throw PreconditionError("tube_jacobi: A is not self-adjoint");

    const Operator fp0 = Operator(sp, -a_tangent.matrix() * p.matrix() + p_perp.matrix());
    JacobiTrajectory traj = integrate_jacobi(profile, p, fp0, t_end, controls);
    if (p_perp.matrix().norm() > 0.0) {
        traj.t_min_cutoff_ = kTubeCutoff;
        auto& st = traj.singular_times_;
        st.erase(std::remove_if(st.begin(), st.end(), [](double s) { return s < kTubeCutoff; }), st.end());
    }
    return traj;
}

}  // namespace riccmp
