#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "riccmp/error.hpp"
#include "riccmp/indefinite_linalg.hpp"

using namespace riccmp;

namespace {

InnerSpace lorentz2() { return InnerSpace::from_gram(Eigen::Vector2d(1.0, -1.0).asDiagonal()); }

Matrix m2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

Vector v2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

Vector unit_vector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = nd(rng);
    return v.normalized();
}

}  // namespace

TEST(InnerSpace, StandardPutsNegativeDirectionsFirst) {
    const InnerSpace s = InnerSpace::standard(3, 1);
    EXPECT_EQ(s.index(), 1);
    EXPECT_DOUBLE_EQ(s.gram()(0, 0), -1.0);
    EXPECT_DOUBLE_EQ(s.gram()(2, 2), 1.0);
}

TEST(InnerSpace, RejectsDegenerateGram) {
    EXPECT_THROW(InnerSpace::from_gram(m2(1, 0, 0, 0)), PreconditionError);
    EXPECT_THROW(InnerSpace::from_gram(m2(1, 1e-14, 1e-14, 1e-13)), PreconditionError);
    EXPECT_THROW(InnerSpace::from_gram(m2(1, 2, 0, 1)), PreconditionError);
}

TEST(InnerSpace, IndexFromGramEigenvalues) {
    EXPECT_EQ(lorentz2().index(), 1);
    EXPECT_EQ(InnerSpace::from_gram(m2(0, 1, 1, 0)).index(), 1);
    EXPECT_EQ(InnerSpace::from_gram(m2(2, 1, 1, 2)).index(), 0);
}

TEST(SelfAdjoint, Examples) {
    const InnerSpace g = lorentz2();
    // Complex eigenvalues +-i, still self-adjoint.
    EXPECT_TRUE(is_self_adjoint(Operator(g, m2(0, 1, -1, 0))));
    EXPECT_TRUE(is_self_adjoint(Operator::identity(g)));
    EXPECT_TRUE(is_self_adjoint(Operator::identity(InnerSpace::standard(4, 2))));
    EXPECT_FALSE(is_self_adjoint(Operator(g, m2(0, 1, 1, 0))));
}

TEST(SelfAdjoint, DimensionMismatchRejected) {
    EXPECT_THROW(Operator(lorentz2(), Matrix::Identity(3, 3)), DimensionError);
}

TEST(SelfAdjoint, AdjointFormula) {
    std::mt19937_64 rng(3);
    const InnerSpace s = InnerSpace::standard(3, 1);
    std::normal_distribution<double> nd;
    Matrix a(3, 3);
    for (int i = 0; i < 9; ++i) a(i / 3, i % 3) = nd(rng);
    const Operator op(s, a);
    const Vector x = unit_vector(3, rng), y = unit_vector(3, rng);
    EXPECT_NEAR(s.inner(op.apply(x), y), s.inner(x, op.adjoint().apply(y)), 1e-12);
    EXPECT_TRUE(is_self_adjoint(op.self_adjoint_part()));
}

TEST(Psd, Examples) {
    const InnerSpace g = lorentz2();
    EXPECT_FALSE(psd_check(Operator::identity(g)).psd);
    const PsdResult z = psd_check(Operator::zero(g));
    EXPECT_TRUE(z.psd);
    EXPECT_EQ(z.min_quadratic_eigenvalue, 0.0);
    // diag(1,-1) is positive definite here although it has a negative eigenvalue.
    const PsdResult d = psd_check(Operator(g, m2(1, 0, 0, -1)));
    EXPECT_TRUE(d.psd);
    EXPECT_NEAR(d.min_quadratic_eigenvalue, 1.0, 1e-15);
}

TEST(Psd, RejectsNonSelfAdjoint) {
    EXPECT_THROW(psd_check(Operator(lorentz2(), m2(0, 1, 1, 0))), PreconditionError);
}

TEST(Psd, ToleranceAbsorbsRoundoff) {
    const InnerSpace g = lorentz2();
    EXPECT_TRUE(psd_check(Operator(g, m2(-1e-10, 0, 0, 0))).psd);
    EXPECT_FALSE(psd_check(Operator(g, m2(-1e-8, 0, 0, 0))).psd);
}

TEST(Order, Examples) {
    const InnerSpace g = lorentz2();
    const Operator a = Operator(g, m2(0.3, 0.1, -0.1, 0.2));
    EXPECT_TRUE(order_leq(a, a));
    const Operator b = Operator::from_form(g, Matrix::Identity(2, 2));
    EXPECT_TRUE(order_leq(Operator::zero(g), b));
    EXPECT_TRUE(b.matrix().isApprox(g.gram_inverse()));
    EXPECT_FALSE(order_leq(Operator::zero(g), Operator::identity(g)));
    EXPECT_THROW(order_leq(Operator::zero(g), Operator::zero(InnerSpace::standard(2, 0))), DimensionError);
}

TEST(KernelLemma, Examples) {
    const Operator a(InnerSpace::standard(2, 0), m2(1, 0, 0, 0));
    EXPECT_LT(kernel_lemma_witness(a, v2(0, 1)).norm(), 1e-15);

    const InnerSpace g = lorentz2();
    const Operator b = Operator::from_form(g, m2(1, 1, 1, 1));
    EXPECT_NEAR(b.form(v2(1, -1), v2(1, -1)), 0.0, 1e-15);
    EXPECT_LT(kernel_lemma_witness(b, v2(1, -1)).norm(), 1e-15);

    EXPECT_LT(kernel_lemma_witness(Operator::zero(g), v2(3, 7)).norm(), 1e-15);
}

TEST(KernelLemma, Preconditions) {
    const InnerSpace g = lorentz2();
    EXPECT_THROW(kernel_lemma_witness(Operator::identity(g), v2(1, 1)), PreconditionError);
    EXPECT_THROW(kernel_lemma_witness(Operator::from_form(g, Matrix::Identity(2, 2)), v2(1, 0)), PreconditionError);
}

TEST(KernelLemma, RandomPsdOperators) {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 500; ++i) {
        const int n = 2 + i % 3;
        const InnerSpace s = InnerSpace::standard(n, (i / 3) % (n + 1));
        const int rank = 1 + i % (n - 1);
        const Matrix q = random_psd_form(n, rng, 1.0, std::min(rank, n - 1));
        const Operator a = Operator::from_form(s, q);
        // Null set of the form: project a random vector onto ker q.
        Eigen::SelfAdjointEigenSolver<Matrix> es(q);
        const Vector w = unit_vector(n, rng);
        Vector x0 = Vector::Zero(n);
        for (int k = 0; k < n; ++k) {
            if (es.eigenvalues()(k) < 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff()) {
                x0 += es.eigenvectors().col(k).dot(w) * es.eigenvectors().col(k);
            }
        }
        const Vector ax = kernel_lemma_witness(a, x0);
        EXPECT_LE(ax.norm(), 1e-8 * std::max(1.0, a.matrix().norm())) << "instance " << i;
    }
}

TEST(Psd, AgreesWithBruteForce) {
    std::mt19937_64 rng(202);
    for (int i = 0; i < 48; ++i) {
        const int n = 2 + i % 3;
        const InnerSpace s = InnerSpace::standard(n, (i / 3) % (n + 1));
        const bool make_psd = i % 2 == 0;
        const Operator a = make_psd ? Operator::from_form(s, random_psd_form(n, rng, 1.0, 1 + i % n))
                                    : random_self_adjoint(s, rng, 1.0);
        const PsdResult r = psd_check(a);
        double brute = INFINITY;
        for (int k = 0; k < 10000; ++k) {
            const Vector x = unit_vector(n, rng);
            brute = std::min(brute, a.form(x, x));
        }
        const double tol = 1e-9 * (1.0 + a.form_matrix().norm());
        if (r.psd) EXPECT_GE(brute, -tol) << "instance " << i;
        if (make_psd) EXPECT_TRUE(r.psd);
        // The least eigenvalue bounds the sampled minimum from below.
        EXPECT_GE(brute, r.min_quadratic_eigenvalue - 1e-12);
    }
}

TEST(Wedge, ValueExamples) {
    const InnerSpace g = lorentz2();
    EXPECT_DOUBLE_EQ(wedge_value(Operator::identity(g), v2(1, 0), v2(0, 1)), -1.0);
    EXPECT_DOUBLE_EQ(wedge_value(Operator::zero(g), v2(0.3, 2), v2(-1, 4)), 0.0);
    const Operator d(InnerSpace::standard(2, 0), m2(2, 0, 0, 3));
    EXPECT_DOUBLE_EQ(wedge_value(d, v2(1, 0), v2(0, 1)), 6.0);
}

TEST(Wedge, ShearInvarianceAndSymmetry) {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> lam(-3.0, 3.0);
    for (int i = 0; i < 300; ++i) {
        const int n = 2 + i % 3;
        const InnerSpace s = InnerSpace::standard(n, (i / 3) % (n + 1));
        const Operator a = random_self_adjoint(s, rng, 1.0);
        const Vector x = unit_vector(n, rng), y = unit_vector(n, rng);
        const double w = wedge_value(a, x, y);
        const double l = lam(rng);
        const double scale = 1.0 + std::abs(w) + a.form_matrix().squaredNorm() * (1 + l * l);
        EXPECT_NEAR(wedge_value(a, x + l * y, y), w, 1e-10 * scale);
        EXPECT_NEAR(wedge_value(a, y, x), w, 1e-12 * scale);
    }
}

TEST(Wedge, LeqExamples) {
    const InnerSpace e = InnerSpace::standard(2, 0);
    const Operator a(e, m2(0.5, 0.2, 0.2, -0.3));
    const WedgeResult same = wedge_leq(a, a);
    EXPECT_TRUE(same.holds());
    EXPECT_NEAR(same.worst_gap, 0.0, 1e-15);
    EXPECT_TRUE(wedge_leq(Operator(e, m2(1, 0, 0, 1)), Operator(e, m2(2, 0, 0, 2))).holds());

    const InnerSpace g = lorentz2();
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        const Operator b = Operator::from_form(g, random_psd_form(2, rng));
        EXPECT_TRUE(wedge_leq(Operator::zero(g), b).holds());
    }
}

TEST(Wedge, DetectsViolation) {
    const InnerSpace e = InnerSpace::standard(2, 0);
    const WedgeResult r = wedge_leq(Operator(e, m2(2, 0, 0, 2)), Operator(e, m2(1, 0, 0, 1)));
    EXPECT_EQ(r.verdict, Verdict::violated);
    EXPECT_NEAR(r.worst_gap, -3.0, 1e-6);
    EXPECT_NEAR(wedge_value(Operator(e, m2(1, 0, 0, 1)), r.worst_x, r.worst_y) -
                    wedge_value(Operator(e, m2(2, 0, 0, 2)), r.worst_x, r.worst_y),
                r.worst_gap, 1e-12);
}

TEST(Wedge, PositivityProperty) {
    std::mt19937_64 rng(404);
    WedgeSampler ws;
    ws.pairs = 400;
    for (int i = 0; i < 500; ++i) {
        const int n = 2 + i % 3;
        const InnerSpace s = InnerSpace::standard(n, (i / 3) % (n + 1));
        const double sign = i % 2 ? -1.0 : 1.0;
        const Operator a = Operator::from_form(s, sign * random_psd_form(n, rng));
        ws.seed = static_cast<std::uint64_t>(i);
        EXPECT_TRUE(wedge_leq(Operator::zero(s), a, ws).holds()) << "instance " << i;
    }
}

TEST(Wedge, MonotonicityProperty) {
    std::mt19937_64 rng(505);
    WedgeSampler ws;
    ws.pairs = 400;
    for (int i = 0; i < 500; ++i) {
        const int n = 2 + i % 3;
        const InnerSpace s = InnerSpace::standard(n, (i / 3) % (n + 1));
        const Operator a = Operator::from_form(s, random_psd_form(n, rng));
        const auto [lo, hi] = monotone_pair_with_increment(a, random_psd_form(n, rng));
        ws.seed = static_cast<std::uint64_t>(i);
        EXPECT_TRUE(wedge_leq(lo, hi, ws).holds()) << "instance " << i;
    }
}

TEST(RankOne, Examples) {
    const InnerSpace e = InnerSpace::standard(2, 0);
    const RankOneResult r1 = rank_one_decompose(Operator(e, m2(1, 0, 0, 0)));
    ASSERT_TRUE(r1.decomposition);
    EXPECT_EQ(r1.decomposition->sign, 1);
    EXPECT_NEAR(std::abs(r1.decomposition->e(0)), 1.0, 1e-12);
    EXPECT_NEAR(r1.decomposition->e(1), 0.0, 1e-12);

    const InnerSpace g = lorentz2();
    const Vector ev = v2(1, 2);
    const Matrix s = -ev * (g.gram() * ev).transpose();
    const RankOneResult r2 = rank_one_decompose(Operator(g, s));
    ASSERT_TRUE(r2.decomposition);
    EXPECT_EQ(r2.decomposition->sign, -1);
    const Vector& got = r2.decomposition->e;
    EXPECT_TRUE(got.isApprox(ev, 1e-10) || got.isApprox(-ev, 1e-10));
    const Matrix rebuilt = r2.decomposition->sign * got * (g.gram() * got).transpose();
    EXPECT_LE((rebuilt - s).norm(), 1e-10 * s.norm());

    const RankOneResult r3 = rank_one_decompose(Operator(e, m2(1, 0, 0, 1)));
    EXPECT_FALSE(r3.decomposition);
    EXPECT_EQ(r3.rank, 2);
}

TEST(MonotonePair, Examples) {
    const InnerSpace g = lorentz2();
    std::mt19937_64 rng(1);
    const Operator a = random_self_adjoint(g, rng);
    const auto [x, y] = monotone_pair_with_increment(a, Matrix::Zero(2, 2));
    EXPECT_EQ((x.matrix() - y.matrix()).norm(), 0.0);

    const auto [a1, b1] = random_monotone_pair(g, 1);
    EXPECT_TRUE(order_leq(a1, b1));
    EXPECT_TRUE(is_self_adjoint(a1) && is_self_adjoint(b1));
    const auto [a2, b2] = random_monotone_pair(InnerSpace::standard(3, 0), 2);
    EXPECT_TRUE(order_leq(a2, b2));
}

TEST(RandomOperators, SelfAdjointToTolerance) {
    std::mt19937_64 rng(606);
    for (int i = 0; i < 300; ++i) {
        const int n = 2 + i % 4;
        const InnerSpace s = InnerSpace::standard(n, i % (n + 1));
        const Operator a = random_self_adjoint(s, rng, 3.0);
        const Matrix ga = s.gram() * a.matrix();
        EXPECT_LE((ga - ga.transpose()).norm(), 1e-12 * std::max(1.0, ga.norm()));
    }
}
