// Documented input/output examples, one test per operation.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "riccmp/comparison.hpp"
#include "riccmp/riccati.hpp"
#include "riccmp/surface.hpp"
#include "riccmp/warped_models.hpp"

using namespace riccmp;

namespace {

constexpr double kPi = std::numbers::pi;

InnerSpace lorentz2() { return InnerSpace::from_gram(Eigen::Vector2d(1.0, -1.0).asDiagonal()); }

Operator diag2(const InnerSpace& s, double a, double b) {
    return Operator(s, Eigen::Vector2d(a, b).asDiagonal().toDenseMatrix());
}

CurvatureProfile constant(const Operator& a) { return CurvatureProfile::constant(a); }

WarpFunction warp(ScalarFunction w, ScalarFunction dw, ScalarFunction ddw, double lo = -INFINITY,
                  double hi = INFINITY) {
    WarpFunction f;
    f.w = std::move(w);
    f.dw = std::move(dw);
    f.ddw = std::move(ddw);
    f.lo = lo;
    f.hi = hi;
    return f;
}

WarpFunction unit_warp() {
    return warp([](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; });
}
WarpFunction exp_minus() {
    auto e = [](double t) { return std::exp(-t); };
    return warp(e, [](double t) { return -std::exp(-t); }, e);
}
WarpFunction cosh_w() {
    return warp([](double t) { return std::cosh(t); }, [](double t) { return std::sinh(t); },
                [](double t) { return std::cosh(t); });
}
WarpFunction cos_w() {
    return warp([](double t) { return std::cos(t); }, [](double t) { return -std::sin(t); },
                [](double t) { return -std::cos(t); }, -kPi / 2, kPi / 2);
}

}  // namespace

TEST(Examples, IntegrateRiccati) {
    const InnerSpace g = lorentz2();
    const auto tr = integrate_riccati(constant(diag2(g, 1, 0)), Operator::zero(g), 3.0);
    for (double t = 0.0; t < 1.4; t += 0.1) {
        EXPECT_TRUE(tr.at(t).matrix().isApprox(diag2(g, std::tan(t), 0).matrix(), 1e-8) || t == 0.0);
    }
    ASSERT_TRUE(tr.blow_up());
    EXPECT_NEAR(tr.blow_up()->t_star, kPi / 2, 1e-6);

    const InnerSpace e = InnerSpace::standard(2, 0);
    const auto tan_i = integrate_riccati(constant(Operator::identity(e)), Operator::zero(e), kPi / 2 - 0.1);
    for (double t = 0.0; t <= kPi / 2 - 0.1; t += 0.01) {
        EXPECT_LE((tan_i.at(t).matrix() - std::tan(t) * Matrix::Identity(2, 2)).norm(), 1e-8 * (1 + std::tan(t) * std::tan(t)));
    }
}

TEST(Examples, IntegrateJacobi) {
    const InnerSpace g = lorentz2();
    const Operator id = Operator::identity(g), z = Operator::zero(g);
    const auto flat = integrate_jacobi(constant(z), id, z, 5.0);
    EXPECT_TRUE(flat.singular_times().empty());
    EXPECT_LE((flat.f(4.0).matrix() - Matrix::Identity(2, 2)).norm(), 1e-12);

    const auto ce = integrate_jacobi(constant(diag2(g, 1, 0)), id, z, 2.0);
    ASSERT_EQ(ce.singular_times().size(), 1u);
    EXPECT_NEAR(ce.singular_times()[0], kPi / 2, 1e-8);
    EXPECT_NEAR(ce.f(1.0).matrix()(0, 0), std::cos(1.0), 1e-9);
    EXPECT_NEAR(ce.f(1.0).matrix()(1, 1), 1.0, 1e-12);

    const InnerSpace e = InnerSpace::standard(2, 0);
    const auto c = integrate_jacobi(constant(Operator::identity(e)), Operator::identity(e), Operator::zero(e), 3.0);
    EXPECT_LE((c.f(2.5).matrix() - std::cos(2.5) * Matrix::Identity(2, 2)).norm(), 1e-9);
}

TEST(Examples, ShapeFromJacobi) {
    const InnerSpace g = lorentz2();
    const Operator id = Operator::identity(g), z = Operator::zero(g);
    EXPECT_LE(shape_from_jacobi(integrate_jacobi(constant(z), id, z, 2.0), 1.3).matrix().norm(), 1e-12);
    const auto ce = integrate_jacobi(constant(diag2(g, 1, 0)), id, z, 1.5);
    EXPECT_LE((shape_from_jacobi(ce, 1.2).matrix() - diag2(g, std::tan(1.2), 0).matrix()).norm(), 1e-7);
    const InnerSpace e = InnerSpace::standard(2, 0);
    const auto j = integrate_jacobi(constant(Operator::identity(e)), Operator::identity(e), Operator::zero(e), 1.0);
    EXPECT_LE((shape_from_jacobi(j, 0.5).matrix() - 0.5463 * Matrix::Identity(2, 2)).norm(), 1e-4);
    EXPECT_NEAR(shape_from_jacobi(j, 0.5).matrix()(0, 0), std::tan(0.5), 1e-6);
}

TEST(Examples, CompareTrajectories) {
    const InnerSpace g = lorentz2();
    const auto t1 = integrate_riccati(constant(Operator::zero(g)), Operator::zero(g), kPi / 2 - 0.1);
    const ComparisonResult same = compare_trajectories(t1, t1);
    EXPECT_TRUE(same.holds());
    EXPECT_EQ(same.min_gap, 0.0);
    const auto t2 = integrate_riccati(constant(diag2(g, 1, 0)), Operator::zero(g), kPi / 2 - 0.1);
    const ComparisonResult c = compare_trajectories(t1, t2);
    EXPECT_TRUE(c.holds());
    EXPECT_NEAR(c.common_end, kPi / 2 - 0.1, 1e-12);
    // Gap operator diag(tan t, 0): its least form eigenvalue is 0.
    for (const auto& p : c.min_gap_curve) EXPECT_NEAR(p.min_gap, 0.0, 1e-9);
    EXPECT_NEAR((t2.at(1.0) - t1.at(1.0)).matrix()(0, 0), std::tan(1.0), 1e-8);
}

TEST(Examples, RigidityProbe) {
    const InnerSpace e = InnerSpace::standard(2, 0);
    const auto r1 = constant(Operator::zero(e));
    const Operator z = Operator::zero(e);
    const RigidityReport same = rigidity_probe(r1, r1, z, z, 1.0);
    EXPECT_LE(same.gap_norm, 1e-9);
    // Increment 0.1 G^{-1} Q on [0.2, 0.4] only.
    const Operator bump = Operator::from_form(e, 0.1 * Matrix::Identity(2, 2));
    const auto r2 = CurvatureProfile::piecewise_constant({0.2, 0.4}, {z, bump, z});
    const RigidityReport strict = rigidity_probe(r1, r2, z, z, 1.0);
    EXPECT_EQ(strict.verdict, Verdict::holds);
    EXPECT_TRUE(strict.strict_gap);
    EXPECT_GT(strict.gap_min_eigenvalue, 0.0);

    const InnerSpace g = lorentz2();
    const RigidityReport ce =
        rigidity_probe(constant(Operator::zero(g)), constant(diag2(g, 1, 0)), Operator::zero(g), Operator::zero(g), 1.0);
    EXPECT_FALSE(ce.equal_at_b);
    EXPECT_NEAR(ce.gap_norm, std::tan(1.0), 1e-8);
}

TEST(Examples, DomainBracket) {
    const InnerSpace e = InnerSpace::standard(2, 0);
    const Operator z = Operator::zero(e);
    const auto r = constant(z);
    EXPECT_TRUE(domain_bracket_check(r, r, r, z, z, z, 1.0).holds);
}

TEST(Examples, TraceChannel) {
    RiccatiControls fine;
    fine.ode.max_step = 0.002;
    const InnerSpace e = InnerSpace::standard(2, 0);
    const double c = 0.7;
    // S = c I is stationary for R = -c^2 I.
    const auto st = integrate_riccati(constant(-c * c * Operator::identity(e)), c * Operator::identity(e), 2.0, fine);
    const TraceChannel a = trace_channel(st, 64);
    EXPECT_EQ(a.cs_equality_times.size(), a.points.size());
    EXPECT_LT(a.max_identity_residual, 1e-8);

    const auto nu = integrate_riccati(constant(Operator::zero(e)), diag2(e, -1, -2), 2.0, fine);
    const TraceChannel b = trace_channel(nu, 64);
    EXPECT_TRUE(b.cs_equality_times.empty());
    EXPECT_GT(b.min_cs_slack, 0.0);

    const InnerSpace e3 = InnerSpace::standard(3, 0);
    const auto sphere = integrate_riccati(constant(Operator::identity(e3)), Operator::zero(e3), 1.2, fine);
    const TraceChannel s = trace_channel(sphere, 64);
    EXPECT_EQ(s.cs_equality_times.size(), s.points.size());
    EXPECT_LT(s.max_identity_residual, 1e-8);
}

TEST(Examples, TubeExpansion) {
    const InnerSpace e = InnerSpace::standard(2, 0);
    const Operator z = Operator::zero(e), id = Operator::identity(e);
    Vector x(2);
    x << 0.6, 0.8;
    const auto flat = tube_jacobi(z, id, z, constant(z), 3.0);
    EXPECT_NEAR(tube_expansion_check(flat, 2.0, x).lhs, 4.0, 1e-10);
    const auto hyp = tube_jacobi(z, id, z, constant(-1.0 * id), 2.0);
    const TubeExpansion te = tube_expansion_check(hyp, 1.0, x);
    EXPECT_NEAR(te.lhs, std::sinh(1.0) * std::sinh(1.0), 1e-9);
    EXPECT_NEAR(te.lhs, 1.3811, 1e-4);
    EXPECT_GE(te.lhs, te.rhs_r2);
}

TEST(Examples, WarpedFunctions) {
    const WarpedModel one(2, 0.0, unit_warp(), 1);
    const WarpedModel ex(2, 0.0, exp_minus(), 1);
    const WarpedModel ch(2, 0.0, cosh_w(), 1);
    const WarpedModel co(2, 1.0, cos_w(), 1);
    const WarpedModel strip(2, -1.0, cos_w(), -1);
    const WarpedModel ex4(3, 0.0, exp_minus(), 1);

    EXPECT_NEAR(slice_weingarten(ex, 0.4), 1.0, 1e-15);
    EXPECT_EQ(slice_weingarten(one, 0.4), 0.0);
    EXPECT_NEAR(slice_weingarten(ch, 1.0), -std::tanh(1.0), 1e-15);
    EXPECT_NEAR(slice_weingarten(ch, 1.0), -0.76159, 1e-5);

    EXPECT_NEAR(normal_curvature_operator(ex, 0.4), -1.0, 1e-15);
    EXPECT_EQ(normal_curvature_operator(one, 0.4), 0.0);
    EXPECT_NEAR(normal_curvature_operator(co, 0.0), 1.0, 1e-15);

    EXPECT_EQ(ambient_sectional(one, 0.3), 0.0);
    EXPECT_NEAR(ambient_sectional(strip, 0.0), -1.0, 1e-15);

    EXPECT_NEAR(ricci_normal(ex4, 0.2), -3.0, 1e-14);
    EXPECT_EQ(ricci_normal(one, 0.2), 0.0);
    EXPECT_NEAR(ricci_normal(co, 0.0), 2.0, 1e-14);
}

TEST(Examples, GaussResidual) {
    const WarpedModel one(2, 0.0, unit_warp(), 1);
    Vector x(2), y(2);
    x << 1, 0;
    y << 0, 1;
    EXPECT_EQ(gauss_equation_residual(one, 0.5, x, y), 0.0);
    const auto [m, r] = table1_model(4, -0.5);
    EXPECT_LT(gauss_equation_residual(m, 0.7, x, y), 1e-10);
    for (int row = 1; row <= 6; ++row) EXPECT_LT(table1_check(row, table1_default_k0(row)).gauss_residual, 1e-10);
}

TEST(Examples, CurvatureBound) {
    const BoundResult flat = curvature_bound_check(resolve_model("flat/3/1"), 0.0, BoundDirection::geq);
    EXPECT_TRUE(flat.holds());
    EXPECT_EQ(flat.worst, 0.0);
    EXPECT_TRUE(curvature_bound_check(resolve_model("flat/3/1"), 0.0, BoundDirection::leq).holds());
    EXPECT_TRUE(curvature_bound_check(resolve_model("desitter/cosh"), 1.0, BoundDirection::geq).holds());
}

TEST(Examples, ModifiedWarp) {
    const ModifiedWarp sub = modified_warp_example(WarpBranch::sub);
    const ModifiedWarp sup = modified_warp_example(WarpBranch::super);
    EXPECT_LT(-sub.model.ddw(2.0) / sub.model.w(2.0), -1.0);
    EXPECT_GT(-sup.model.ddw(3.0) / sup.model.w(3.0), -1.0);
    EXPECT_EQ(sub.model.w(0.5), std::exp(0.5));
    EXPECT_EQ(sup.model.w(0.5), std::exp(0.5));
}

TEST(Examples, FrameExtensionStandard) {
    for (auto [e1, e2] : {std::pair{1, 1}, {1, -1}, {-1, -1}}) {
        const Frame f = frame_extension(SurfaceMetric::flat(e1, e2), 0.3, -0.2);
        EXPECT_EQ(f.e1, Vec2(1, 0));
        EXPECT_EQ(f.e2, Vec2(0, 1));
    }
}

TEST(Examples, CalabiRigidConstant) {
    const CalabiRigidity r = calabi_rigidity_scan(calabi_ode(CalabiProfile::constant(1.0)));
    EXPECT_TRUE(r.reaches_minus_one);
    EXPECT_NEAR(r.t1, 0.0, 1e-9);
    EXPECT_TRUE(r.matches_step);
    const CalabiSolution z = calabi_ode(CalabiProfile::constant(0.0), 20.0);
    EXPECT_TRUE(std::isinf(z.beta));
    EXPECT_EQ(z.y_prime(10.0), 0.0);
}

TEST(Examples, LengthBoundFlattened) {
    // Cap curvature c(s)^2 <= 1 with flux c(s); c chosen so the flux integrates to 2 pi on L = 2 pi + 0.3.
    const double l = 2 * kPi + 0.3, t1 = 0.5;
    const double a = 2.0 * (l - 2 * kPi) / l;
    auto c = [=](double s) { return 1.0 - 0.5 * a * (1.0 - std::cos(2 * kPi * s / l)); };
    auto dc = [=](double s) { return -0.5 * a * std::sin(2 * kPi * s / l) * 2 * kPi / l; };
    const ScalarField2 e = [=](double s, double t) {
        ScalarJet j;
        if (t <= t1) {
            j.value = 1.0;
            return j;
        }
        const double u = t - t1, cs = c(s);
        j.value = std::cos(cs * u);
        j.grad << -std::sin(cs * u) * dc(s) * u, -cs * std::sin(cs * u);
        j.hess(1, 1) = -cs * cs * std::cos(cs * u);
        return j;
    };
    const LengthBound lb =
        geodesic_length_bound(SurfaceMetric::fermi(e, l), [=](double s) { return t1 + kPi / (2 * c(s)); });
    EXPECT_NEAR(lb.total_curvature, 2 * kPi, 1e-9);
    EXPECT_LT(lb.total_curvature, l);
    EXPECT_TRUE(lb.holds);

    const double beta = 2.0;
    const ScalarField2 cap = [=](double, double t) {
        ScalarJet j;
        const double u = t - (beta - kPi / 2);
        if (u <= 0) {
            j.value = 1.0;
            return j;
        }
        j.value = std::cos(u);
        j.grad << 0.0, -std::sin(u);
        j.hess(1, 1) = -std::cos(u);
        return j;
    };
    EXPECT_NEAR(geodesic_length_bound(SurfaceMetric::fermi(cap, 2 * kPi), [=](double) { return beta; }).total_curvature,
                2 * kPi, 1e-9);
}
