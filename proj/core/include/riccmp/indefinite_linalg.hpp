#pragma once

// Linear algebra on a real vector space carrying a symmetric nondegenerate
// bilinear form of arbitrary index.
//
// An operator A is stored by its matrix in the standard basis. The form is
// <x, y> = x^T G y with G the Gram matrix, so A is self-adjoint iff G*A is
// symmetric, and A >= 0 iff G*A is positive semidefinite. Every quantity that
// involves the order is therefore computed on the symmetric "form matrix" G*A.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <utility>

#include <Eigen/Dense>

namespace riccmp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace tol {
/// Relative symmetry defect of G*A accepted as self-adjoint.
inline constexpr double kSelfAdjoint = 1e-12;
/// min eig(G*A) >= -kPsd * (1 + ||G*A||) counts as positive semidefinite.
inline constexpr double kPsd = 1e-9;
/// Gram matrices with |det| below this are rejected.
inline constexpr double kDegenerateGram = 1e-12;
/// Singular values below kRank * sigma_max are treated as zero.
inline constexpr double kRank = 1e-10;
}  // namespace tol

/// R^n with the form <x,y> = x^T G y. Cheap to copy (shared immutable data).
class InnerSpace {
public:
    /// diag(-1 (k times), +1 (n-k times)).
    static InnerSpace standard(int dim, int index);
    /// Validates symmetry and nondegeneracy; the index is read off the spectrum.
    static InnerSpace from_gram(const Matrix& gram);

    int dim() const { return static_cast<int>(data_->gram.rows()); }
    int index() const { return data_->index; }
    const Matrix& gram() const { return data_->gram; }
    const Matrix& gram_inverse() const { return data_->gram_inverse; }
    bool is_definite() const { return index() == 0 || index() == dim(); }

    double inner(const Vector& x, const Vector& y) const;

    bool operator==(const InnerSpace& other) const;
    bool operator!=(const InnerSpace& other) const { return !(*this == other); }

private:
    struct Data {
        Matrix gram;
        Matrix gram_inverse;
        int index = 0;
    };
    explicit InnerSpace(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

    std::shared_ptr<const Data> data_;
};

/// A linear map E -> E together with the space whose form it is measured in.
class Operator {
public:
    Operator(InnerSpace space, Matrix entries);

    static Operator zero(const InnerSpace& space);
    static Operator identity(const InnerSpace& space);
    /// The self-adjoint operator whose form matrix G*A equals `form`.
    static Operator from_form(const InnerSpace& space, const Matrix& form);

    const InnerSpace& space() const { return space_; }
    const Matrix& matrix() const { return entries_; }
    int dim() const { return space_.dim(); }

    /// G*A; symmetric exactly when A is self-adjoint.
    Matrix form_matrix() const;
    /// Adjoint with respect to the form: G^{-1} A^T G.
    Operator adjoint() const;
    /// (A + A*)/2.
    Operator self_adjoint_part() const;

    Vector apply(const Vector& x) const;
    /// <Ax, y>.
    double form(const Vector& x, const Vector& y) const;

    Operator operator+(const Operator& rhs) const;
    Operator operator-(const Operator& rhs) const;
    Operator operator*(const Operator& rhs) const;
    Operator operator*(double s) const;
    friend Operator operator*(double s, const Operator& op) { return op * s; }

private:
    void require_same_space(const Operator& rhs) const;

    InnerSpace space_;
    Matrix entries_;
};

bool is_self_adjoint(const Operator& a);

struct PsdResult {
    bool psd = false;
    /// Least eigenvalue of the symmetric matrix G*A.
    double min_quadratic_eigenvalue = 0.0;
};

/// Throws PreconditionError when `a` is not self-adjoint.
PsdResult psd_check(const Operator& a);

/// a <= b, i.e. b - a positive semidefinite. Both must be self-adjoint.
bool order_leq(const Operator& a, const Operator& b);

/// Returns A*x0 for A >= 0 with <A x0, x0> ~ 0; the result vanishes by the
/// kernel lemma. Throws PreconditionError if A is not PSD or x0 is not
/// quadratically null (|<A x0,x0>| >= tolerance).
Vector kernel_lemma_witness(const Operator& a, const Vector& x0, double tolerance = 1e-10);

/// <Ax,x><Ay,y> - <Ax,y>^2.
double wedge_value(const Operator& a, const Vector& x, const Vector& y);

enum class Verdict { holds, violated, inconclusive };

const char* to_string(Verdict v);

struct WedgeSampler {
    int pairs = 2000;
    std::uint64_t seed = 0;
    int refine_sweeps = 80;
    /// holds iff the worst gap is >= -tolerance (absolute, on Euclidean unit pairs).
    double tolerance = 1e-9;
};

struct WedgeResult {
    Verdict verdict = Verdict::inconclusive;
    double worst_gap = 0.0;
    Vector worst_x;
    Vector worst_y;
    int evaluated_pairs = 0;

    bool holds() const { return verdict == Verdict::holds; }
};

/// Tests Lambda^2(a) <= Lambda^2(b) on decomposable bivectors: quasi-random
/// unit pairs followed by coordinate descent from the worst pair.
WedgeResult wedge_leq(const Operator& a, const Operator& b, const WedgeSampler& sampler = {});

struct RankOneDecomposition {
    /// S x = sign * <x, e> e.
    int sign = 1;
    Vector e;
};

struct RankOneResult {
    int rank = 0;
    std::optional<RankOneDecomposition> decomposition;
};

/// Numerical rank by relative singular-value gap; when it is one, returns the
/// signed generator. Throws PreconditionError if `s` is not self-adjoint.
RankOneResult rank_one_decompose(const Operator& s);

/// Uniform draw of symmetric matrices with N(0, scale^2) entries.
Matrix random_symmetric(int n, std::mt19937_64& rng, double scale = 1.0);
/// Q = L L^T with L an n x rank Gaussian matrix.
Matrix random_psd_form(int n, std::mt19937_64& rng, double scale = 1.0, int rank = -1);
Operator random_self_adjoint(const InnerSpace& space, std::mt19937_64& rng, double scale = 1.0);

/// (A, B) with B = A + G^{-1} Q, Q symmetric PSD, so A <= B by construction.
std::pair<Operator, Operator> random_monotone_pair(const InnerSpace& space, std::uint64_t seed,
                                                   double scale = 1.0);
/// Same construction with an explicit increment form Q (must be symmetric PSD).
std::pair<Operator, Operator> monotone_pair_with_increment(const Operator& a, const Matrix& q);

}  // namespace riccmp
