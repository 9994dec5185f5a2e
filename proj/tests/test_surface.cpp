#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "riccmp/error.hpp"
#include "riccmp/surface.hpp"

using namespace riccmp;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField2 zero_field() {
    return [](double, double) { return ScalarJet{}; };
}

// E(s,t) = cos(c(s) t), c = 1 + 0.3 sin s; K = c^2.
ScalarField2 fermi_wave() {
    return [](double s, double t) {
        const double c = 1.0 + 0.3 * std::sin(s), dc = 0.3 * std::cos(s), ddc = -0.3 * std::sin(s);
        const double co = std::cos(c * t), si = std::sin(c * t);
        ScalarJet j;
        j.value = co;
        j.grad << -si * dc * t, -si * c;
        j.hess(0, 0) = -co * dc * dc * t * t - si * ddc * t;
        j.hess(0, 1) = j.hess(1, 0) = -co * c * dc * t - si * dc;
        j.hess(1, 1) = -co * c * c;
        return j;
    };
}

// Capped cylinder: E = 1 for t <= t1, cos(t - t1) afterwards.
ScalarField2 capped_cylinder(double t1) {
    return [t1](double, double t) {
        ScalarJet j;
        if (t <= t1) {
            j.value = 1.0;
            return j;
        }
        j.value = std::cos(t - t1);
        j.grad << 0.0, -std::sin(t - t1);
        j.hess(1, 1) = -std::cos(t - t1);
        return j;
    };
}

// K of e^{2 phi}(eps1 dx^2 + eps2 dy^2) by finite differences of log g11 only.
double conformal_k_fd(const SurfaceMetric& m, double x, double y) {
    const double h = 2e-3;
    auto phi = [&](double a, double b) { return 0.5 * std::log(std::abs(m.g(a, b)(0, 0))); };
    // Fourth-order five-point second derivative.
    auto d2 = [&](auto f) { return (-f(2 * h) + 16 * f(h) - 30 * f(0.0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h); };
    const double pxx = d2([&](double d) { return phi(x + d, y); });
    const double pyy = d2([&](double d) { return phi(x, y + d); });
    return -std::exp(-2.0 * phi(x, y)) * (m.eps1() * pxx + m.eps2() * pyy);
}

}  // namespace

TEST(Curvature, FlatAndWarpedExamples) {
    const SurfaceMetric flat = SurfaceMetric::flat(1, -1);
    EXPECT_EQ(gaussian_curvature(flat, 0.3, 0.4), 0.0);
    const SurfaceMetric w1 = SurfaceMetric::warped2d([](double) { return 1.0; }, [](double) { return 0.0; },
                                                     [](double) { return 0.0; }, 1, 1);
    EXPECT_EQ(gaussian_curvature(w1, 1.0, 2.0), 0.0);
    // w = cosh y with eps2 = +1: hyperbolic, K = -1.
    const SurfaceMetric hyp = SurfaceMetric::warped2d([](double y) { return std::cosh(y); },
                                                      [](double y) { return std::sinh(y); },
                                                      [](double y) { return std::cosh(y); }, 1, 1);
    EXPECT_NEAR(gaussian_curvature(hyp, 0.0, 0.5), -1.0, 1e-14);
    EXPECT_NEAR(curvature_from_jet(hyp.jet(0.0, 0.5)), -1.0, 1e-12);
}

TEST(Curvature, FermiUnitSphere) {
    const SurfaceMetric m = SurfaceMetric::fermi(
        [](double, double t) {
            ScalarJet j;
            j.value = std::cos(t);
            j.grad << 0.0, -std::sin(t);
            j.hess(1, 1) = -std::cos(t);
            return j;
        },
        2 * kPi);
    for (double t : {0.0, 0.4, 1.2}) {
        EXPECT_NEAR(gaussian_curvature(m, 0.7, t), 1.0, 1e-14);
        EXPECT_NEAR(curvature_from_jet(m.jet(0.7, t)), 1.0, 1e-12);
    }
}

TEST(Curvature, FermiAgreesWithFiniteDifferences) {
    const SurfaceMetric m = SurfaceMetric::fermi(fermi_wave(), 2 * kPi);
    const double h = 1e-4;
    for (double s : {0.0, 1.0, 4.0}) {
        for (double t : {0.1, 0.5, 0.9}) {
            auto e = [&](double tt) { return fermi_wave()(s, tt).value; };
            const double ett = (e(t + h) - 2 * e(t) + e(t - h)) / (h * h);
            const double c = 1.0 + 0.3 * std::sin(s);
            EXPECT_NEAR(gaussian_curvature(m, s, t), c * c, 1e-12);
            EXPECT_NEAR(-ett / e(t), c * c, 1e-6);
            EXPECT_NEAR(curvature_from_jet(m.jet(s, t)), c * c, 1e-8);
        }
    }
}

TEST(Curvature, FermiRequiresGeodesicInitialData) {
    EXPECT_THROW(SurfaceMetric::fermi(
                     [](double, double t) {
                         ScalarJet j;
                         j.value = 1.0 + t;
                         j.grad << 0.0, 1.0;
                         return j;
                     },
                     1.0),
                 PreconditionError);
}

TEST(Curvature, ConformalBumpMatchesFiniteDifferences) {
    for (auto [e1, e2] : {std::pair{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
        const SurfaceMetric m =
            SurfaceMetric::conformal_flat(bump_field(0.4, 0.1, -0.2, 0.9, 0.7), e1, e2, Box{-0.8, 1.0, -0.9, 0.5});
        for (double x : {-0.3, 0.1, 0.5}) {
            for (double y : {-0.5, -0.2, 0.1}) {
                const double k = gaussian_curvature(m, x, y);
                EXPECT_NEAR(k, conformal_k_fd(m, x, y), 1e-6) << e1 << e2;
                EXPECT_NEAR(curvature_from_jet(m.jet(x, y)), k, 1e-10);
            }
        }
    }
}

TEST(GaussBonnet, FlatDomainHasZeroDefect) {
    const GaussBonnetResult r = gauss_bonnet_defect(SurfaceMetric::flat(1, -1), Box{-1, 1, -1, 1});
    EXPECT_EQ(r.interior, 0.0);
    EXPECT_LT(std::abs(r.boundary), 1e-12);
    EXPECT_LT(std::abs(r.defect), 1e-12);
}

TEST(GaussBonnet, CompactBumpEverySignature) {
    GaussBonnetOptions opt;
    opt.grids = {128, 256};
    for (auto [e1, e2] : {std::pair{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
        const SurfaceMetric m =
            SurfaceMetric::conformal_flat(bump_field(0.3, 0.0, 0.0, 1.0, 1.0), e1, e2, Box{-1, 1, -1, 1});
        const GaussBonnetResult r = gauss_bonnet_defect(m, Box{-2, 2, -2, 2}, opt);
        EXPECT_LT(std::abs(r.defect), 1e-4) << e1 << e2;
        EXPECT_LT(std::abs(r.boundary), 1e-12) << e1 << e2;
        // Interior integral of a compact bump vanishes too.
        EXPECT_LT(std::abs(r.interior), 1e-4) << e1 << e2;
        ASSERT_EQ(r.levels.size(), 2u);
    }
}

TEST(GaussBonnet, CutDomainConvergesAtSecondOrder) {
    const SurfaceMetric m =
        SurfaceMetric::conformal_flat(bump_field(0.3, 0.0, 0.0, 1.0, 1.0), 1, -1, Box{-1, 1, -1, 1});
    GaussBonnetOptions opt;
    EXPECT_THROW(gauss_bonnet_defect(m, Box{-1.2, 0.3, -1.2, 0.2}, opt), PreconditionError);
    opt.allow_curved_boundary = true;
    const GaussBonnetResult r = gauss_bonnet_defect(m, Box{-1.2, 0.3, -1.2, 0.2}, opt);
    EXPECT_GT(std::abs(r.boundary), 1e-3);
    EXPECT_LT(std::abs(r.defect), 1e-4);
    EXPECT_GT(r.observed_order, 1.8);
}

TEST(GaussBonnet, IndexOneGeneralMetric) {
    Mat2 h;
    h << 0, 1, 1, 0;
    const Box support{-0.6, 0.6, 0.4, 1.6};
    const SurfaceMetric m = SurfaceMetric::general(bump_field(0.2, 0.0, 1.0, 0.6, 0.6),
                                                   bump_field(0.3, 0.0, 1.0, 0.6, 0.6), h, 1, -1, support);
    EXPECT_FALSE(m.closed_form_curvature(0.0, 1.0));
    GaussBonnetOptions opt;
    opt.grids = {128, 256};
    const GaussBonnetResult r = gauss_bonnet_defect(m, Box{-1, 1, 0, 2}, opt);
    EXPECT_LT(std::abs(r.defect), 1e-4);
}

TEST(Frame, OrthonormalAndStandardOutsideSupport) {
    Mat2 h;
    h << 0, 1, 1, 0;
    const Box support{-1, 1, -1, 1};
    for (auto [e1, e2] : {std::pair{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
        const SurfaceMetric m = SurfaceMetric::general(bump_field(0.3, 0, 0, 1, 1), bump_field(0.3, 0, 0, 1, 1), h,
                                                       e1, e2, support);
        EXPECT_LE(frame_orthonormality_defect(m, support, 64), 1e-10);
        const Frame f = frame_extension(m, 1.5, -1.3);
        EXPECT_EQ(f.e1, Vec2(1, 0));
        EXPECT_EQ(f.e2, Vec2(0, 1));
        EXPECT_EQ(f.boost_angle, 0.0);
        const Box outer = support.enlarged(1e-2);
        for (double t : {-1.5, -0.3, 0.8}) {
            EXPECT_LE(std::abs(connection_form(m, outer.x1 + 0.1, t, Vec2(0.3, 1.0))), 1e-12);
            EXPECT_LE(std::abs(connection_form(m, t, outer.y0 - 0.1, Vec2(1.0, 0.0))), 1e-12);
        }
    }
}

TEST(Frame, IndexOneRapidity) {
    // Constant boost: g = [[1, b], [b, -1]] with b from H.
    Mat2 h;
    h << 0, 1, 1, 0;
    const ScalarField2 one = [](double, double) {
        ScalarJet j;
        j.value = 0.5;
        return j;
    };
    const SurfaceMetric m = SurfaceMetric::general(zero_field(), one, h, 1, -1, Box{-1, 1, -1, 1});
    const Frame f = frame_extension(m, 0, 0);
    const Mat2 g = m.g(0, 0);
    EXPECT_NEAR(f.e1.dot(g * f.e1), 1.0, 1e-14);
    EXPECT_NEAR(f.e2.dot(g * f.e2), -1.0, 1e-14);
    EXPECT_NEAR(f.e1.dot(g * f.e2), 0.0, 1e-14);
    EXPECT_GT(f.e1.x() * f.e2.y() - f.e1.y() * f.e2.x(), 0.0);
    EXPECT_NE(f.boost_angle, 0.0);
}

TEST(Calabi, ConstantProfiles) {
    const CalabiSolution one = calabi_ode(CalabiProfile::constant(1.0));
    EXPECT_NEAR(one.beta, kPi / 2, 1e-10);
    EXPECT_NEAR(one.y_prime_at_beta, -1.0, 1e-9);
    EXPECT_NEAR(one.y(1.0), std::cos(1.0), 1e-9);

    const CalabiSolution zero = calabi_ode(CalabiProfile::constant(0.0), 50.0);
    EXPECT_FALSE(zero.has_zero());
    EXPECT_NEAR(zero.y(30.0), 1.0, 1e-12);

    const CalabiSolution quarter = calabi_ode(CalabiProfile::constant(0.25));
    EXPECT_NEAR(quarter.beta, kPi, 1e-9);
    EXPECT_NEAR(quarter.y_prime_at_beta, -0.5, 1e-9);
    EXPECT_TRUE(calabi_invariants(quarter).holds);

    EXPECT_THROW(calabi_ode(CalabiProfile::constant(1.5)), PreconditionError);
}

TEST(Calabi, StepIsRigid) {
    const CalabiSolution s = calabi_ode(CalabiProfile::step(0.8));
    EXPECT_NEAR(s.beta, 0.8 + kPi / 2, 1e-10);
    EXPECT_NEAR(s.y_prime_at_beta, -1.0, 1e-9);
    const CalabiInvariants inv = calabi_invariants(s);
    EXPECT_TRUE(inv.holds);
    EXPECT_GE(inv.min_neg_yp, -1e-12);
    EXPECT_LE(inv.max_neg_yp, 1.0 + 1e-9);
    const CalabiRigidity r = calabi_rigidity_scan(s);
    EXPECT_TRUE(r.reaches_minus_one);
    EXPECT_NEAR(r.t1, 0.8, 1e-9);
    EXPECT_TRUE(r.matches_step);
    EXPECT_TRUE(r.beta_at_least_half_pi);
    EXPECT_TRUE(r.consistent);
}

TEST(Calabi, NonStepStaysAboveMinusOne) {
    const CalabiSolution s = calabi_ode(CalabiProfile::piecewise({0.5, 1.0}, {0.2, 1.0, 0.6}));
    const CalabiRigidity r = calabi_rigidity_scan(s);
    EXPECT_FALSE(r.reaches_minus_one);
    EXPECT_GT(r.min_y_prime, -1.0 + 1e-3);
    EXPECT_TRUE(r.consistent);
    EXPECT_TRUE(calabi_invariants(s).holds);
}

TEST(LengthBound, SphereAndCappedCylinder) {
    const SurfaceMetric sphere = SurfaceMetric::fermi(capped_cylinder(0.0), 2 * kPi);
    const LengthBound eq = geodesic_length_bound(sphere, [](double) { return kPi / 2; });
    EXPECT_NEAR(eq.total_curvature, 2 * kPi, 1e-10);
    EXPECT_TRUE(eq.holds);

    const double t1 = 2.0 - kPi / 2;
    const SurfaceMetric cyl = SurfaceMetric::fermi(capped_cylinder(t1), 3.0);
    const LengthBound at_beta = geodesic_length_bound(cyl, [](double) { return 2.0; });
    EXPECT_NEAR(at_beta.total_curvature, 3.0, 1e-10);
    EXPECT_TRUE(at_beta.holds);
    const LengthBound sub = geodesic_length_bound(cyl, [](double) { return 1.5; });
    EXPECT_NEAR(sub.total_curvature, 3.0 * std::sin(1.5 - t1), 1e-10);
    EXPECT_LT(sub.total_curvature, 3.0);
}

TEST(FlatOutside, Cases) {
    for (auto [e1, e2] : {std::pair{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
        const FlatOutsideResult ok = construct_flat_outside_halfplane(-e2, e1, e2);
        EXPECT_EQ(ok.status, FlatOutsideResult::Status::certified);
        ASSERT_TRUE(ok.metric);
        EXPECT_EQ(gaussian_curvature(*ok.metric, 0.0, 0.5), 0.0);
        EXPECT_NE(gaussian_curvature(*ok.metric, 0.0, 2.0), 0.0);
        const FlatOutsideResult no = construct_flat_outside_halfplane(e2, e1, e2);
        EXPECT_EQ(no.status, FlatOutsideResult::Status::unrealized_by_ansatz);
        EXPECT_FALSE(no.cause.empty());
    }
    EXPECT_EQ(construct_flat_outside_halfplane(1, 1, -1, 0.0).status, FlatOutsideResult::Status::zero_curvature);
}

TEST(GridIo, RoundTrip) {
    const SurfaceMetric m =
        SurfaceMetric::conformal_flat(bump_field(0.3, 0, 0, 1, 1), 1, -1, Box{-1, 1, -1, 1});
    const GridField f = curvature_grid(m, Box{-1, 1, -1, 1}, 17, 9);
    std::stringstream ss;
    write_grid_field(ss, f);
    const GridField g = read_grid_field(ss);
    EXPECT_EQ(g.nx, 17);
    EXPECT_EQ(g.ny, 9);
    EXPECT_EQ(g.values, f.values);
    EXPECT_EQ(g.dx, f.dx);
    std::stringstream bad("nx,ny\n3,x\n");
    EXPECT_THROW(read_grid_field(bad), PreconditionError);
}
