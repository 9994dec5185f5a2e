// Acceptance run: one line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "riccmp/comparison.hpp"
#include "riccmp/riccati.hpp"
#include "riccmp/suites.hpp"
#include "riccmp/surface.hpp"
#include "riccmp/warped_models.hpp"

using namespace riccmp;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool ok = false;
    std::string detail;
};

struct Criterion {
    const char* id;
    const char* title;
    double time_limit;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

InnerSpace lorentz2() { return InnerSpace::from_gram(Eigen::Vector2d(1.0, -1.0).asDiagonal()); }

Operator diag2(const InnerSpace& s, double a, double b) {
    return Operator(s, Eigen::Vector2d(a, b).asDiagonal().toDenseMatrix());
}

Outcome c1_counterexample() {
    const InnerSpace g = lorentz2();
    const auto upper = integrate_riccati(CurvatureProfile::constant(diag2(g, 1, 0)), Operator::zero(g), 3.0);
    const auto lower = integrate_riccati(CurvatureProfile::constant(Operator::zero(g)), Operator::zero(g), 10.0);
    const auto mirror = integrate_riccati(CurvatureProfile::constant(diag2(g, 0, 1)), Operator::zero(g), 3.0);
    double zero_dev = 0.0;
    for (int i = 0; i <= 1000; ++i) zero_dev = std::max(zero_dev, lower.at(10.0 * i / 1000).matrix().norm());
    const bool ok_upper = upper.blow_up() && std::abs(upper.blow_up()->t_star - kPi / 2) < 1e-6;
    const bool ok_lower = !lower.blow_up() && lower.defined_on(10.0) && zero_dev < 1e-10;
    const bool ok_mirror = mirror.blow_up() && std::abs(mirror.blow_up()->t_star - kPi / 2) < 1e-6;
    const double e1 = upper.blow_up() ? std::abs(upper.blow_up()->t_star - kPi / 2) : INFINITY;
    const double e2 = mirror.blow_up() ? std::abs(mirror.blow_up()->t_star - kPi / 2) : INFINITY;
    return {ok_upper && ok_lower && ok_mirror,
            fmt("|t*-pi/2| = %.2e (mirror %.2e), max |S1| on [0,10] = %.1e", e1, e2, zero_dev)};
}

Outcome c2_determinant() {
    const InnerSpace g = lorentz2();
    const Operator id = Operator::identity(g), z = Operator::zero(g);
    const double t_end = kPi / 2 - 1e-4;
    auto jac = [&](const Operator& r) { return integrate_jacobi(CurvatureProfile::constant(r), id, z, t_end); };
    const auto f1 = jac(z), f2 = jac(diag2(g, 1, 0));
    const auto h1 = jac(diag2(g, 0, 1)), h2 = jac(z);
    double err = 0.0, max_second = -INFINITY, min_first = INFINITY;
    for (int i = 0; i <= 2000; ++i) {
        const double t = 0.01 + (t_end - 0.01) * i / 2000;
        const double d1 = f1.f(t).matrix().determinant() - f2.f(t).matrix().determinant();
        const double d2 = h1.f(t).matrix().determinant() - h2.f(t).matrix().determinant();
        err = std::max(err, std::abs(d1 - (1.0 - std::cos(t))));
        min_first = std::min(min_first, d1);
        max_second = std::max(max_second, d2);
    }
    return {err < 1e-8 && min_first > 0.0 && max_second < 0.0,
            fmt("max |d - (1 - cos t)| = %.2e, min first = %.2e, max second = %.2e", err, min_first, max_second)};
}

Outcome c3_table1() {
    bool ok = true;
    double res = 0, integ = 0, amb = 0;
    for (int row = 1; row <= 6; ++row) {
        const Table1Check c = table1_check(row, table1_default_k0(row), 3, 100);
        ok = ok && c.riccati_residual < 1e-10 && c.integration_error < 1e-7 && c.ambient_variation < 1e-10;
        res = std::max(res, c.riccati_residual);
        integ = std::max(integ, c.integration_error);
        amb = std::max(amb, c.ambient_variation);
    }
    return {ok, fmt("6 rows: residual %.1e, integration %.1e, ambient variation %.1e", res, integ, amb)};
}

Outcome suite_outcome(const SuiteReport& r, double floor) {
    std::ostringstream os;
    os << r.name << ": " << r.completed << "/" << r.instances << " completed, " << r.violations
       << " violations, worst " << r.worst << ", resample rate " << r.resample_rate();
    return {r.passed() && r.worst >= floor, os.str()};
}

Outcome c4_comparison() {
    SuiteOptions o;
    o.instances = 500;
    o.seed = 20240601;
    return suite_outcome(comparison_suite(o), -1e-7);
}

Outcome c5_bracket() {
    SuiteOptions o;
    o.instances = 50;
    o.seed = 20240602;
    const SuiteReport r = bracket_suite(o);
    return {r.passed(), suite_outcome(r, -INFINITY).detail};
}

Outcome c6_wedge() {
    SuiteOptions o;
    o.instances = 200;
    o.seed = 20240603;
    const SuiteReport a = wedge_positivity_suite(o);
    const SuiteReport b = scalar_wedge_suite(o, WedgeBranch::lower);
    const SuiteReport c = scalar_wedge_suite(o, WedgeBranch::upper);
    bool ok = true;
    std::ostringstream os;
    for (const SuiteReport* r : {&a, &b, &c}) {
        ok = ok && r->passed() && r->worst >= -1e-7;
        os << r->name << " " << r->completed << "/" << r->instances << " v=" << r->violations << " worst=" << r->worst
           << "; ";
    }
    return {ok, os.str()};
}

double note(const SuiteReport& r, const std::string& key) {
    for (const auto& [k, v] : r.notes) {
        if (k == key) return v;
    }
    return NAN;
}

Outcome c7_calabi() {
    SuiteOptions o;
    o.instances = 200;
    o.seed = 20240601;
    const SuiteReport r = calabi_suite(o);
    const double closest = note(r, "non_step_min_yprime_plus_one");
    return {r.passed() && closest > 1e-3,
            fmt("violations %g, step beta err %.1e, step y' err %.1e, non-step min y'+1 = %.4f", r.violations,
                note(r, "step_beta_error"), note(r, "step_yprime_error"), closest)};
}

Outcome c8_gauss_bonnet() {
    SuiteOptions o;
    o.instances = 20;
    o.seed = 20240601;
    bool ok = true;
    double defect = 0, order = INFINITY, frame = 0;
    for (auto [e1, e2] : {std::pair{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
        const SuiteReport r = gauss_bonnet_suite(o, e1, e2);
        ok = ok && r.passed();
        defect = std::max({defect, note(r, "worst_compact_defect"), note(r, "worst_cut_defect")});
        order = std::min(order, note(r, "min_observed_order"));
        if (e1 * e2 < 0) frame = std::max(frame, note(r, "worst_frame_defect"));
    }
    ok = ok && defect < 1e-4 && order >= 1.8 && frame <= 1e-10;
    return {ok, fmt("80 bumps: worst |defect| %.1e, min order %.3f, index-1 frame defect %.1e", defect, order, frame)};
}

// E(s,t) = 1 for t <= t1, cos(c (t - t1)) afterwards: flat cylinder capped by curvature c^2.
ScalarField2 capped(double t1, double c) {
    return [t1, c](double, double t) {
        ScalarJet j;
        if (t <= t1) {
            j.value = 1.0;
            return j;
        }
        const double u = c * (t - t1);
        j.value = std::cos(u);
        j.grad << 0.0, -c * std::sin(u);
        j.hess(1, 1) = -c * c * std::cos(u);
        return j;
    };
}

Outcome c9_length() {
    const double l = 2 * kPi;
    const LengthBound sphere =
        geodesic_length_bound(SurfaceMetric::fermi(capped(0.0, 1.0), l), [](double) { return kPi / 2; });
    const LengthBound cyl =
        geodesic_length_bound(SurfaceMetric::fermi(capped(0.7, 1.0), l), [](double) { return 0.7 + kPi / 2; });
    // K = 1/4 cap: boundary-normal flux is L/2.
    const LengthBound sub =
        geodesic_length_bound(SurfaceMetric::fermi(capped(0.7, 0.5), l), [](double) { return 0.7 + kPi; });
    const bool ok = std::abs(sphere.total_curvature - l) < 1e-6 && std::abs(cyl.total_curvature - l) < 1e-6 &&
                    sub.total_curvature < l - 1e-6;
    return {ok, fmt("sphere %.12f, capped cylinder %.12f, sub-critical %.6f (L = %.12f)", sphere.total_curvature,
                    cyl.total_curvature, sub.total_curvature, l)};
}

Outcome c10_gauss_and_trace() {
    std::mt19937_64 rng(20240610);
    std::normal_distribution<double> nd;
    double gauss = 0.0;
    double trace_res = 0.0;
    bool umbilic_ok = true, strict_ok = true;
    // S' is read from the continuous extension, whose derivative is third order.
    RiccatiControls fine;
    fine.ode.max_step = 0.002;
    for (int row = 1; row <= 6; ++row) {
        const auto [m, r] = table1_model(row, table1_default_k0(row), 4);
        const double lo = std::max(-1.0, m.warp().lo + 0.05), hi = std::min(1.0, m.warp().hi - 0.05);
        std::uniform_real_distribution<double> ut(lo, hi);
        for (int k = 0; k < 100; ++k) {
            Vector x(3), y(3);
            for (int i = 0; i < 3; ++i) x(i) = nd(rng), y(i) = nd(rng);
            x.normalize();
            y -= y.dot(x) * x;
            y.normalize();
            gauss = std::max(gauss, gauss_equation_residual(m, ut(rng), x, y));
        }
        // Umbilic row trajectory: S' = S^2 + eps Kbar I from s(0) I.
        const InnerSpace e = InnerSpace::standard(3, 0);
        const double t_end = std::min(1.0, 0.8 * (m.warp().hi > 10 ? 10.0 : m.warp().hi));
        const auto tr = integrate_riccati(
            CurvatureProfile::constant(r.eps * r.ambient_curvature * Operator::identity(e)),
            r.weingarten(0.0) * Operator::identity(e), t_end, fine);
        const TraceChannel tc = trace_channel(tr, 256);
        trace_res = std::max(trace_res, tc.max_identity_residual);
        umbilic_ok = umbilic_ok && tc.cs_equality_times.size() == tc.points.size();
    }
    // Non-umbilic definite trajectories. S(0), R <= 0 as matrices keeps the
    // spectrum in a bounded interval below zero on [0, 1].
    for (int i = 0; i < 20; ++i) {
        const InnerSpace s = InnerSpace::standard(3, i % 2 ? 3 : 0);
        std::vector<Operator> pieces;
        for (int k = 0; k < 3; ++k) pieces.emplace_back(s, -random_psd_form(3, rng, 0.5));
        const auto prof = CurvatureProfile::piecewise_constant({0.3, 0.7}, pieces);
        const auto tr = integrate_riccati(prof, Operator(s, -random_psd_form(3, rng, 0.5)), 1.0, fine);
        const TraceChannel tc = trace_channel(tr, 256);
        trace_res = std::max(trace_res, tc.max_identity_residual);
        strict_ok = strict_ok && tr.defined_on(1.0) && tc.cs_equality_times.empty() && tc.min_cs_slack > 0.0;
    }
    return {gauss < 1e-10 && trace_res < 1e-8 && umbilic_ok && strict_ok,
            fmt("Gauss residual %.1e, trace residual %.1e, umbilic CS equality %g, strict elsewhere %g",
                gauss, trace_res, umbilic_ok ? 1.0 : 0.0, strict_ok ? 1.0 : 0.0)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"C1", "counterexample blow-up", 1, c1_counterexample},
        {"C2", "determinant non-comparison", 1, c2_determinant},
        {"C3", "Table-1 Riccati residuals", 2, c3_table1},
        {"C4", "comparison suite (500)", 60, c4_comparison},
        {"C5", "two-sided domain (50)", 20, c5_bracket},
        {"C6", "wedge comparison (3 x 200)", 60, c6_wedge},
        {"C7", "Calabi suite (200)", 10, c7_calabi},
        {"C8", "Gauss-Bonnet flux (4 x 20)", 120, c8_gauss_bonnet},
        {"C9", "geodesic length identity", 5, c9_length},
        {"C10", "Gauss equation and trace identity", 5, c10_gauss_and_trace},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.time_limit;
        const bool pass = o.ok && in_time;
        failed += !pass;
        std::printf("%s %-4s %-36s %7.2fs (limit %gs)  %s%s\n", pass ? "PASS" : "FAIL", c.id, c.title, secs,
                    c.time_limit, o.detail.c_str(), in_time ? "" : "  [over time limit]");
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
