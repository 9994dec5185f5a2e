#include "riccmp/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "riccmp/error.hpp"

namespace riccmp {

namespace {

double min_eig_sym(const Matrix& m) {
    const Matrix s = 0.5 * (m + m.transpose());
    return Eigen::SelfAdjointEigenSolver<Matrix>(s, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

}  // namespace

ComparisonResult compare_trajectories(const RiccatiTrajectory& t1, const RiccatiTrajectory& t2,
                                      const ComparisonOptions& options) {
    if (t1.space() != t2.space()) throw DimensionError("compare_trajectories: different spaces");
    ComparisonResult out;
    out.common_end = std::min(t1.t_reached(), t2.t_reached());
    if (!(out.common_end > 0.0)) return out;

    std::set<double> grid;
    for (int i = 0; i <= options.uniform_points; ++i) {
        grid.insert(out.common_end * i / options.uniform_points);
    }
    for (const auto* tr : {&t1, &t2}) {
        for (double t : tr->times()) {
            if (t <= out.common_end) grid.insert(t);
        }
    }

    const Matrix& g = t1.space().gram();
    out.min_gap = std::numeric_limits<double>::infinity();
    out.min_gap_curve.reserve(grid.size());
    for (double t : grid) {
        const double gap = min_eig_sym(g * (t2.at(t).matrix() - t1.at(t).matrix()));
        out.min_gap_curve.push_back({t, gap});
        out.min_gap = std::min(out.min_gap, gap);
    }
    out.verdict = out.min_gap >= -options.gap_tolerance ? Verdict::holds : Verdict::violated;
    return out;
}

RigidityReport rigidity_probe(const CurvatureProfile& r1, const CurvatureProfile& r2, const Operator& a1,
                              const Operator& a2, double b, const RiccatiControls& controls) {
    if (!order_leq(a1, a2)) throw PreconditionError("rigidity_probe: A1 <= A2 fails");
    if (!profile_leq(r1, r2, b)) throw PreconditionError("rigidity_probe: R1 <= R2 fails");

    RigidityReport rep;
    const RiccatiTrajectory s1 = integrate_riccati(r1, a1, b, controls);
    const RiccatiTrajectory s2 = integrate_riccati(r2, a2, b, controls);
    if (!s1.defined_on(b) || !s2.defined_on(b)) {
        rep.cause = "blow-up before b";
        return rep;
    }

    const Matrix g = a1.space().gram();
    const Matrix gap = g * (s2.at(b).matrix() - s1.at(b).matrix());
    rep.gap_min_eigenvalue = min_eig_sym(gap);
    rep.gap_norm = gap.norm();
    const double scale = 1.0 + (g * s2.at(b).matrix()).norm();
    rep.equal_at_b = rep.gap_norm <= 1e-9 * scale;
    rep.strict_gap = rep.gap_min_eigenvalue > 0.0;

    double data_diff = (a2.matrix() - a1.matrix()).norm();
    const int grid = 256;
    for (int i = 0; i <= grid; ++i) {
        const double t = b * i / grid;
        data_diff = std::max(data_diff, (r2.matrix_at(t) - r1.matrix_at(t)).norm());
    }
    rep.data_equal = data_diff <= 1e-12;

    if (rep.gap_min_eigenvalue < -1e-7) {
        rep.verdict = Verdict::violated;
        rep.cause = "S1(b) <= S2(b) fails";
    } else if (rep.equal_at_b != rep.data_equal) {
        rep.verdict = Verdict::violated;
        rep.cause = rep.equal_at_b ? "S1(b) = S2(b) although the data differ"
                                   : "identical data produced different S(b)";
    } else {
        rep.verdict = Verdict::holds;
    }
    return rep;
}

BracketReport domain_bracket_check(const CurvatureProfile& r1, const CurvatureProfile& r2,
                                   const CurvatureProfile& r3, const Operator& s1, const Operator& s2,
                                   const Operator& s3, double b, const RiccatiControls& controls) {
    if (!order_leq(s1, s2) || !order_leq(s2, s3)) {
        throw PreconditionError("domain_bracket_check: initial operators are not ordered");
    }
    if (!profile_leq(r1, r2, b) || !profile_leq(r2, r3, b)) {
        throw PreconditionError("domain_bracket_check: profiles are not ordered");
    }
    BracketReport rep;
    const CurvatureProfile* rs[3] = {&r1, &r2, &r3};
    const Operator* ss[3] = {&s1, &s2, &s3};
    bool reach[3];
    for (int i = 0; i < 3; ++i) {
        const RiccatiTrajectory tr = integrate_riccati(*rs[i], *ss[i], b, controls);
        rep.reach[i] = tr.t_reached();
        reach[i] = tr.defined_on(b);
    }
    rep.outer_reach = reach[0] && reach[2];
    rep.middle_reaches = reach[1];
    rep.holds = !rep.outer_reach || rep.middle_reaches;
    return rep;
}

TraceChannel trace_channel(const RiccatiTrajectory& tr, int uniform_points) {
    if (!tr.space().is_definite()) {
        throw PreconditionError("trace_channel: the form is indefinite, Cauchy-Schwarz does not apply");
    }
    TraceChannel out;
    const double m = tr.space().dim();
    const double end = tr.t_reached();
    out.min_cs_slack = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= uniform_points; ++i) {
        const double t = end * i / uniform_points;
        const Matrix s = tr.at(t).matrix();
        const Matrix ds = tr.derivative_at(t).matrix();
        const Matrix r = tr.profile().matrix_at(t);
        const double tr_s = s.trace();
        const double tr_s2 = (s * s).trace();
        const double tr_r = r.trace();
        const double tr_ds = ds.trace();

        TracePoint p;
        p.t = t;
        p.identity_residual = std::abs(tr_ds - tr_s2 - tr_r);
        p.cs_slack = m * tr_s2 - tr_s * tr_s;
        p.cs_equality = std::abs(p.cs_slack) <= 1e-8 * (1.0 + m * std::abs(tr_s2));
        const double h_n = tr_s / m;
        p.slack_normalized = tr_ds / m - h_n * h_n - tr_r / m;
        p.slack_unnormalized = tr_ds - tr_s * tr_s / m - tr_r;

        out.max_identity_residual = std::max(out.max_identity_residual, p.identity_residual);
        out.min_cs_slack = std::min(out.min_cs_slack, p.cs_slack);
        if (p.cs_equality) out.cs_equality_times.push_back(t);
        out.points.push_back(p);
    }
    return out;
}

TubeExpansion tube_expansion_check(const JacobiTrajectory& j, double r, const Vector& x) {
    const InnerSpace& sp = j.space();
    if (x.size() != sp.dim()) throw DimensionError("tube_expansion_check: vector size mismatch");
    auto quad = [&](double t) {
        const Vector fx = j.f(t).apply(x);
        return sp.inner(fx, fx);
    };
    TubeExpansion out;
    out.lhs = quad(r);
    out.rhs_r2 = r * r * sp.inner(x, x);
    out.rhs_inv_r2 = sp.inner(x, x) / (r * r);

    const double h = std::min(1e-4, 0.5 * (r - j.t_min_cutoff()));
    // Second-order differences; one-sided at the end of the integrated range.
    const double fd = r + h <= j.t_end()
                          ? (quad(r + h) - quad(r - h)) / (2.0 * h)
                          : (3.0 * quad(r) - 4.0 * quad(r - h) + quad(r - 2.0 * h)) / (2.0 * h);
    const Operator s = shape_from_jacobi(j, r);
    const Vector fx = j.f(r).apply(x);
    const double identity = -2.0 * sp.inner(s.apply(fx), fx);
    out.derivative_residual = std::abs(fd - identity);
    return out;
}

}  // namespace riccmp
