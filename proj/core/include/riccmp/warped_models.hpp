#pragma once

// Warped products w(t)^2 g + eps dt^2 over a constant-curvature Riemannian
// fiber, the Table-1 model spaces, block products g1 - g2, and the curvature
// bound predicate R >= K0 / R <= K0.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "riccmp/indefinite_linalg.hpp"
#include "riccmp/profile.hpp"

namespace riccmp {

/// w together with its first two derivatives on (lo, hi).
struct WarpFunction {
    ScalarFunction w;
    ScalarFunction dw;
    ScalarFunction ddw;
    double lo = -INFINITY;
    double hi = INFINITY;
    std::string description;
};

/// Largest relative finite-difference mismatch of (dw, ddw) against w on
/// `samples` points of the interval (infinite ends are clipped to a window).
double warp_derivative_residual(const WarpFunction& warp, int samples = 64);

class WarpedModel {
public:
    /// Throws PreconditionError if eps is not +-1, fiber_dim < 1, or the
    /// supplied derivatives fail the finite-difference gate (residual >= 1e-6).
    WarpedModel(int fiber_dim, double fiber_curvature, WarpFunction warp, int eps);

    int fiber_dim() const { return fiber_dim_; }
    int dim() const { return fiber_dim_ + 1; }
    double fiber_curvature() const { return fiber_curvature_; }
    int eps() const { return eps_; }
    /// The fiber is Riemannian; eps = -1 adds one negative direction.
    int ambient_index() const { return eps_ < 0 ? 1 : 0; }
    const WarpFunction& warp() const { return warp_; }
    bool contains(double t) const;

    /// Known constant curvature of the total space (Table-1 rows and the
    /// named models); used as the independent term of the Gauss equation.
    const std::optional<double>& ambient_constant() const { return ambient_constant_; }
    void set_ambient_constant(double k) { ambient_constant_ = k; }

    /// (w, w', w''); throws PreconditionError outside the interval or where w <= 0.
    double w(double t) const;
    double dw(double t) const;
    double ddw(double t) const;

private:
    void require_inside(double t) const;

    int fiber_dim_;
    double fiber_curvature_;
    WarpFunction warp_;
    int eps_;
    std::optional<double> ambient_constant_;
};

struct Table1Row {
    int row = 0;
    double k0 = 0.0;
    /// Only meaningful for rows 3..6.
    double alpha = 0.0;
    int eps = 1;
    double ambient_curvature = 0.0;
    /// S_t = s(t) I and its derivative, from the closed forms in the table.
    ScalarFunction weingarten;
    ScalarFunction weingarten_derivative;
    /// Curvature of the slice M_t (last-but-one column).
    ScalarFunction slice_curvature;
};

/// Rows 1..6. `k0` must lie in the row's admissible range (rows 1 and 2
/// require a flat fiber, k0 = 0). Throws PreconditionError otherwise.
std::pair<WarpedModel, Table1Row> table1_model(int row, double k0, int dim = 3);
/// A representative admissible K0 for each row (0, 0, 1, -1, 1, -1).
double table1_default_k0(int row);

struct Table1Check {
    int row = 0;
    /// max |s' - s^2 - eps Kbar| over the sampled t.
    double riccati_residual = 0.0;
    /// max |S(t) - s(t) I| for integrate_riccati seeded with s(0) I.
    double integration_error = 0.0;
    /// max - min of ambient_sectional over the sampled t.
    double ambient_variation = 0.0;
    /// max gauss_equation_residual over random orthonormal slice pairs.
    double gauss_residual = 0.0;
    double t_end = 0.0;
    bool passed = false;
};

/// Closed-form and integrated checks of one Table-1 row. t samples cover the
/// warp interval (clipped to [-3, 3]); the Riccati integration runs on [0, t_end]
/// with t_end at 80% of the distance to the interval end (at most 2).
Table1Check table1_check(int row, double k0, int dim = 3, int samples = 100, std::uint64_t seed = 11);

/// -w'/w.
double slice_weingarten(const WarpedModel& m, double t);
/// -w''/w, the coefficient of R(X, d/dt) d/dt = -(w''/w) X.
double normal_curvature_operator(const WarpedModel& m, double t);
/// (K0 - eps w'^2) / w^2, sectional curvature of planes tangent to the slice.
double ambient_sectional(const WarpedModel& m, double t);
/// -eps w''/w, sectional curvature of planes containing d/dt.
double mixed_sectional(const WarpedModel& m, double t);
/// Ric(d/dt, d/dt) = -(n-1) w''/w.
double ricci_normal(const WarpedModel& m, double t);

/// |slice term - ambient term - eps (w'/w)^2 Q(X, Y)| for X, Y tangent to the
/// slice, given in a g-bar orthonormal frame of the slice. The ambient term
/// uses the known ambient constant when there is one.
double gauss_equation_residual(const WarpedModel& m, double t, const Vector& x, const Vector& y);

/// <R(X,Y)Y,X> for X = (V1, a), Y = (V2, b) in an orthonormal frame adapted
/// to fiber + normal (last coordinate is the d/dt component).
double warped_curvature_form(const WarpedModel& m, double t, const Vector& x, const Vector& y);
/// The metric at t in that frame: diag(1, ..., 1, eps).
InnerSpace warped_frame_space(const WarpedModel& m);

struct ProductBlock {
    int dim = 2;
    /// Constant sectional curvature of the Riemannian factor g_i.
    double curvature = 0.0;
    /// +1 for +g_i, -1 for -g_i.
    int sign = 1;
};

/// M_1 x ... x M_k with metric sum_i sign_i g_i.
struct ProductExample {
    std::vector<ProductBlock> blocks;

    int dim() const;
    int index() const;
    InnerSpace space() const;
    double curvature_form(const Vector& x, const Vector& y) const;
};

/// Throws PreconditionError for an empty block list or signs other than +-1.
void validate(const ProductExample& p);

enum class BoundDirection { geq, leq };

struct BoundSampler {
    int pairs = 10000;
    std::uint64_t seed = 7;
    /// t range for warped models; clipped to the warp interval.
    double t_lo = -1.0;
    double t_hi = 1.0;
    /// Accepted violation, relative to 1 + |<R(X,Y)Y,X>| + |K0 Q|.
    double tolerance = 1e-9;
};

struct BoundResult {
    Verdict verdict = Verdict::inconclusive;
    /// min (direction geq) or max (leq) of <R(X,Y)Y,X> - K0 Q(X,Y).
    double worst = 0.0;
    int evaluated = 0;
    /// Samples per causal stratum (spacelike/timelike combinations of X, Y).
    int strata_used = 0;

    bool holds() const { return verdict == Verdict::holds; }
};

using CurvatureExample = std::variant<WarpedModel, ProductExample>;

/// Definition 1.1 predicate by stratified sampling of pairs.
BoundResult curvature_bound_check(const CurvatureExample& example, double k0, BoundDirection direction,
                                  const BoundSampler& sampler = {});

enum class WarpBranch { sub, super };

struct ModifiedWarp {
    WarpedModel model;
    /// Certification grid [t_lo, t_hi] with step `step`.
    double t_lo = 1.25;
    double t_hi = 12.0;
    double step = 1e-3;
    /// Smallest signed margin of w''/w - 1 and w'/w - 1 (sub) or of the
    /// reversed differences (super) on the grid; certified iff both > 0.
    double curvature_margin = 0.0;
    double slope_margin = 0.0;
    bool certified = false;
};

/// w = exp(t + h(t)) (sub) or exp(t - h(t)) (super) with h(t) = exp(-1/(t-1))
/// for t > 1 and 0 otherwise, so w = e^t on t <= 1. Flat fiber, eps = +1.
ModifiedWarp modified_warp_example(WarpBranch branch, int dim = 3);

struct LengthWitness {
    /// Integral of the speed of c(t) = (sinh t, cosh t) in (dx^2 - dy^2)/y^2.
    double length = 0.0;
    double quadrature_error = 0.0;
    /// max over sampled t of |D_t c' x c'| / (|D_t c'| |c'| + tiny): zero for
    /// a reparametrized geodesic.
    double pregeodesic_residual = 0.0;
};

LengthWitness halfspace_length_witness();

struct ModelEntry {
    std::string id;
    std::string description;
};

/// Registry ids: "table1/rowN" with optional "?K0=value&n=dim",
/// "halfspace", "strip", "product/S2xH2-", "product/S2xS2", "flat/N/K"
/// (dimension N, index K). Throws PreconditionError for unknown ids.
CurvatureExample resolve_model(const std::string& id);
std::vector<ModelEntry> list_models();

}  // namespace riccmp
