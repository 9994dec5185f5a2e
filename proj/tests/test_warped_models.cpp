#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "riccmp/error.hpp"
#include "riccmp/warped_models.hpp"

using namespace riccmp;

namespace {

constexpr double kPi = std::numbers::pi;

Vector basis(int n, int i) {
    Vector v = Vector::Zero(n);
    v(i) = 1.0;
    return v;
}

}  // namespace

TEST(Table1, WeingartenExamples) {
    const auto [m1, r1] = table1_model(1, 0.0);
    EXPECT_DOUBLE_EQ(r1.weingarten(0.7), 1.0);
    EXPECT_NEAR(slice_weingarten(m1, 0.7), 1.0, 1e-15);

    const auto [m3, r3] = table1_model(3, 2.0);
    EXPECT_NEAR(r3.alpha, kPi / 4, 1e-15);
    EXPECT_NEAR(r3.weingarten(0.0), 1.0, 1e-15);
    EXPECT_NEAR(slice_weingarten(m3, 0.0), 1.0, 1e-14);
    EXPECT_NEAR(r3.slice_curvature(0.0), 2.0, 1e-14);

    const auto [m4, r4] = table1_model(4, -0.5);
    EXPECT_NEAR(r4.alpha, std::acosh(std::sqrt(2.0)), 1e-15);
    EXPECT_NEAR(r4.weingarten(0.0), -std::tanh(r4.alpha), 1e-15);
    EXPECT_NEAR(slice_weingarten(m4, 0.3), r4.weingarten(0.3), 1e-14);
}

TEST(Table1, RangeChecks) {
    EXPECT_THROW(table1_model(1, 0.5), PreconditionError);
    EXPECT_THROW(table1_model(3, 0.5), PreconditionError);
    EXPECT_THROW(table1_model(4, 0.0), PreconditionError);
    EXPECT_THROW(table1_model(5, 1.5), PreconditionError);
    EXPECT_THROW(table1_model(6, -0.5), PreconditionError);
    EXPECT_THROW(table1_model(7, 0.0), PreconditionError);
    EXPECT_NO_THROW(table1_model(3, 1.0));
    EXPECT_NO_THROW(table1_model(4, -1.0));
    EXPECT_NO_THROW(table1_model(5, 1.0));
    EXPECT_NO_THROW(table1_model(6, -1.0));
}

TEST(Table1, AllRowsPassClosedFormAndIntegratedChecks) {
    for (int row = 1; row <= 6; ++row) {
        const Table1Check c = table1_check(row, table1_default_k0(row));
        EXPECT_TRUE(c.passed) << "row " << row;
        EXPECT_LT(c.riccati_residual, 1e-10) << "row " << row;
        EXPECT_LT(c.integration_error, 1e-7) << "row " << row;
        EXPECT_LT(c.ambient_variation, 1e-10) << "row " << row;
        EXPECT_LT(c.gauss_residual, 1e-10) << "row " << row;
        EXPECT_GT(c.t_end, 0.0);
    }
}

TEST(Table1, OtherAdmissibleK0) {
    EXPECT_TRUE(table1_check(3, 4.0).passed);
    EXPECT_TRUE(table1_check(5, 0.25, 4).passed);
    EXPECT_TRUE(table1_check(6, -3.0).passed);
}

TEST(Warped, CurvatureFormulas) {
    const auto [m, r] = table1_model(3, 1.0);  // w = cos t, unit sphere
    for (double t : {-1.0, 0.0, 0.8}) {
        EXPECT_NEAR(normal_curvature_operator(m, t), 1.0, 1e-14);
        EXPECT_NEAR(ambient_sectional(m, t), 1.0, 1e-13);
        EXPECT_NEAR(mixed_sectional(m, t), 1.0, 1e-14);
        EXPECT_NEAR(ricci_normal(m, t), -2.0 * (-1.0), 1e-13);
    }
    EXPECT_THROW(m.w(2.0), PreconditionError);
}

TEST(Warped, GaussResidualOnRandomPairs) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    for (int row = 1; row <= 6; ++row) {
        const auto [m, r] = table1_model(row, table1_default_k0(row), 4);
        for (int k = 0; k < 20; ++k) {
            Vector x(3), y(3);
            for (int i = 0; i < 3; ++i) x(i) = nd(rng), y(i) = nd(rng);
            EXPECT_LT(gauss_equation_residual(m, 0.1, x, y), 1e-9) << "row " << row;
        }
    }
}

TEST(Warped, CurvatureFormMatchesConstantCurvature) {
    const auto [m, r] = table1_model(6, -1.0);
    const InnerSpace s = warped_frame_space(m);
    const Vector x = basis(3, 0), y = basis(3, 2);
    const double q = s.inner(x, x) * s.inner(y, y) - std::pow(s.inner(x, y), 2);
    EXPECT_NEAR(warped_curvature_form(m, 0.2, x, y), -1.0 * q, 1e-12);
}

TEST(Warped, DerivativeGate) {
    WarpFunction bad;
    bad.w = [](double t) { return std::exp(t); };
    bad.dw = [](double t) { return 2 * std::exp(t); };
    bad.ddw = [](double t) { return std::exp(t); };
    EXPECT_GT(warp_derivative_residual(bad), 1e-6);
    EXPECT_THROW(WarpedModel(2, 0.0, bad, 1), PreconditionError);
    bad.dw = bad.w;
    EXPECT_LT(warp_derivative_residual(bad), 1e-6);
    EXPECT_THROW(WarpedModel(2, 0.0, bad, 0), PreconditionError);
    EXPECT_THROW(WarpedModel(0, 0.0, bad, 1), PreconditionError);
}

TEST(CurvatureBound, ConstantCurvatureHoldsBothWays) {
    for (const char* id : {"table1/row3?K0=2", "halfspace", "strip", "desitter/cosh"}) {
        const CurvatureExample ex = resolve_model(id);
        const double k = std::get<WarpedModel>(ex).ambient_constant().value();
        EXPECT_TRUE(curvature_bound_check(ex, k, BoundDirection::geq).holds()) << id;
        EXPECT_TRUE(curvature_bound_check(ex, k, BoundDirection::leq).holds()) << id;
    }
}

TEST(CurvatureBound, Products) {
    const CurvatureExample p = resolve_model("product/S2xH2-");
    EXPECT_TRUE(curvature_bound_check(p, 0.0, BoundDirection::geq).holds());
    EXPECT_EQ(curvature_bound_check(p, 0.0, BoundDirection::leq).verdict, Verdict::violated);
    const CurvatureExample f = resolve_model("flat/4/2");
    EXPECT_TRUE(curvature_bound_check(f, 0.0, BoundDirection::geq).holds());
    EXPECT_TRUE(curvature_bound_check(f, 0.0, BoundDirection::leq).holds());
    EXPECT_EQ(std::get<ProductExample>(f).index(), 2);
    EXPECT_THROW(validate(ProductExample{}), PreconditionError);
    EXPECT_THROW(validate(ProductExample{{{2, 1.0, 3}}}), PreconditionError);
}

TEST(CurvatureBound, SphereFailsLowerBoundAboveOne) {
    const CurvatureExample s = resolve_model("product/S2xS2");
    EXPECT_EQ(curvature_bound_check(s, 0.5, BoundDirection::geq).verdict, Verdict::violated);
}

TEST(ModifiedWarp, BothBranchesCertified) {
    for (WarpBranch b : {WarpBranch::sub, WarpBranch::super}) {
        const ModifiedWarp mw = modified_warp_example(b);
        EXPECT_TRUE(mw.certified);
        EXPECT_GT(mw.curvature_margin, 0.0);
        EXPECT_GT(mw.slope_margin, 0.0);
        EXPECT_NEAR(mw.model.w(0.5), std::exp(0.5), 1e-14);
    }
}

TEST(HalfSpace, LengthIsPi) {
    const LengthWitness lw = halfspace_length_witness();
    EXPECT_NEAR(lw.length, kPi, 1e-10);
    EXPECT_LT(lw.pregeodesic_residual, 1e-10);
}

TEST(Registry, KnownAndUnknownIds) {
    EXPECT_FALSE(list_models().empty());
    EXPECT_NO_THROW(resolve_model("table1/row5?K0=0.5&n=4"));
    EXPECT_EQ(std::get<WarpedModel>(resolve_model("table1/row5?K0=0.5&n=4")).dim(), 4);
    EXPECT_THROW(resolve_model("table1/row1?K0=2"), PreconditionError);
    EXPECT_THROW(resolve_model("nope"), PreconditionError);
    EXPECT_THROW(resolve_model("flat/2/3"), PreconditionError);
}
