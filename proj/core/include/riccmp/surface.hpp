#pragma once

// Two-dimensional metrics: Gaussian curvature, the frame-flux form of
// Gauss-Bonnet, oriented orthonormal frames in every signature, Calabi's ODE
// lemma and the Fermi-coordinate length identity.
//
// Curvature convention: gaussian_curvature returns the sectional quotient
// K = <R(X,Y)Y,X> / (<X,X><Y,Y> - <X,Y>^2). For an orthonormal pair this is
// eps1 eps2 <R(X,Y)Y,X>.

#include <array>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "riccmp/indefinite_linalg.hpp"
#include "riccmp/ode.hpp"
#include "riccmp/profile.hpp"

namespace riccmp {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

/// f, grad f, Hessian of f at a point.
struct ScalarJet {
    double value = 0.0;
    Vec2 grad = Vec2::Zero();
    Mat2 hess = Mat2::Zero();
};
using ScalarField2 = std::function<ScalarJet(double x, double y)>;

/// Metric components with first and second coordinate derivatives.
struct MetricJet {
    Mat2 g = Mat2::Identity();
    std::array<Mat2, 2> dg{Mat2::Zero(), Mat2::Zero()};
    std::array<std::array<Mat2, 2>, 2> ddg{{{Mat2::Zero(), Mat2::Zero()}, {Mat2::Zero(), Mat2::Zero()}}};
};

struct Box {
    double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
    bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
    Box enlarged(double m) const { return {x0 - m, x1 + m, y0 - m, y1 + m}; }
};

/// exp(1 - 1/(1 - r^2)) for r < 1 (peak 1), r^2 = ((x-cx)/rx)^2 + ((y-cy)/ry)^2.
ScalarField2 bump_field(double amplitude, double cx, double cy, double rx, double ry);

class SurfaceMetric {
public:
    enum class Form { conformal_flat, general, fermi, warped2d };

    /// e^{2 phi} (eps1 dx^2 + eps2 dy^2).
    static SurfaceMetric conformal_flat(ScalarField2 phi, int eps1, int eps2, std::optional<Box> support = {});
    /// e^{2 phi} (g0 + beta H) with H symmetric; the signature must survive
    /// the perturbation (checked on the support box).
    static SurfaceMetric general(ScalarField2 phi, ScalarField2 beta, const Mat2& h, int eps1, int eps2,
                                 std::optional<Box> support = {});
    /// E(s,t)^2 ds^2 + dt^2 in Fermi coordinates (x = s, y = t), s periodic with period L.
    /// Requires E(s,0) = 1 and E_t(s,0) = 0 (sampled).
    static SurfaceMetric fermi(ScalarField2 e, double period);
    /// eps1 w(y)^2 dx^2 + eps2 dy^2.
    static SurfaceMetric warped2d(ScalarFunction w, ScalarFunction dw, ScalarFunction ddw, int eps1, int eps2);
    /// eps1 dx^2 + eps2 dy^2.
    static SurfaceMetric flat(int eps1, int eps2);

    Form form() const { return form_; }
    int eps1() const { return eps1_; }
    int eps2() const { return eps2_; }
    /// Index of the metric (number of negative signs).
    int index() const { return (eps1_ < 0) + (eps2_ < 0); }
    const std::optional<Box>& support() const { return support_; }
    double period() const { return period_; }

    MetricJet jet(double x, double y) const { return jet_(x, y); }
    Mat2 g(double x, double y) const { return jet_(x, y).g; }
    /// Closed-form K for conformal, fermi and warped forms; nullopt for `general`.
    std::optional<double> closed_form_curvature(double x, double y) const;
    /// Only for fermi metrics.
    const ScalarField2& fermi_e() const;
    /// Only for warped2d metrics.
    double warp(double y) const;
    double warp_derivative(double y) const;

private:
    SurfaceMetric() = default;

    Form form_ = Form::conformal_flat;
    int eps1_ = 1;
    int eps2_ = 1;
    std::optional<Box> support_;
    double period_ = 0.0;
    std::function<MetricJet(double, double)> jet_;
    std::function<double(double, double)> closed_k_;
    ScalarField2 fermi_e_;
    ScalarFunction w_, dw_;
};

/// Christoffel symbols Gamma^k_ij from a metric jet, indexed [k](i, j).
std::array<Mat2, 2> christoffel(const MetricJet& j);
/// Sectional curvature from the jet via Christoffel symbols and their derivatives.
double curvature_from_jet(const MetricJet& j);

/// Closed form where available, otherwise curvature_from_jet. Throws
/// PreconditionError if the metric is degenerate at the point.
double gaussian_curvature(const SurfaceMetric& m, double x, double y);

/// Oriented orthonormal frame: columns e1, e2 with g(e1,e1) = eps1,
/// g(e2,e2) = eps2, g(e1,e2) = 0, det[e1 e2] > 0. Equal to the standard
/// frame (scaled by nothing) wherever g equals the standard metric.
struct Frame {
    Vec2 e1;
    Vec2 e2;
    /// Rapidity (index 1) or rotation angle (definite) of e1 relative to the
    /// g-normalized coordinate direction d/dx. Zero where the frame is standard.
    double boost_angle = 0.0;
};

/// Riemannian / negative definite: Gram-Schmidt on (d/dx, d/dy). Index 1:
/// e1 along the sum of the two null directions on the d/dx side, e2 along
/// their difference. Throws PreconditionError if d/dx is not of the type of
/// the first standard basis vector (polarization lost).
Frame frame_extension(const SurfaceMetric& m, double x, double y);

/// Max over an n x n grid of the box of |g(e1,e1) - eps1|, |g(e2,e2) - eps2|,
/// |g(e1,e2)|; +inf if some frame is not positively oriented.
double frame_orthonormality_defect(const SurfaceMetric& m, const Box& box, int n = 128);

/// Connection form omega^1_2(V) = eps1 <nabla_V e2, e1> for the extended frame.
double connection_form(const SurfaceMetric& m, double x, double y, const Vec2& v);

struct GaussBonnetOptions {
    std::vector<int> grids{128, 256, 512};
    /// Allow a domain whose boundary meets the non-standard region; the
    /// boundary term is then genuinely non-zero.
    bool allow_curved_boundary = false;
    /// Differences below this count as converged to rounding level.
    double roundoff_floor = 1e-13;
};

struct GaussBonnetLevel {
    int n = 0;
    double interior = 0.0;
    double boundary = 0.0;
    double defect = 0.0;
};

struct GaussBonnetResult {
    /// Values on the finest grid.
    double interior = 0.0;
    double boundary = 0.0;
    double defect = 0.0;
    std::vector<GaussBonnetLevel> levels;
    /// log2 of successive defect ratios on the finest pair above the floor;
    /// +inf when every level is already at rounding level.
    double observed_order = 0.0;
};

/// interior = midpoint quadrature of K dA on D, boundary = sign * eps1 * the
/// counter-clockwise midpoint line integral of omega^1_2, defect = interior - boundary.
/// Throws PreconditionError if the metric is not standard near the boundary
/// (unless allowed) or if the metric has no declared support.
GaussBonnetResult gauss_bonnet_defect(const SurfaceMetric& m, const Box& domain, const GaussBonnetOptions& opt = {});

/// Sign s in K_sec dA = s * eps1 * d omega^1_2 for the sectional convention:
/// eps1 * eps2 (the paper's K is <R(X,Y)Y,X> on an orthonormal pair).
inline int flux_sign(const SurfaceMetric& m) { return m.eps1() * m.eps2(); }

// Calabi ODE ---------------------------------------------------------------

/// k(t) on [0, inf) with 0 <= k <= 1, smooth between breakpoints.
struct CalabiProfile {
    ScalarFunction k;
    std::vector<double> breakpoints;
    std::string description;

    static CalabiProfile constant(double k);
    /// 0 on [0, t1), 1 afterwards.
    static CalabiProfile step(double t1);
    static CalabiProfile piecewise(std::vector<double> switches, std::vector<double> values);
};

struct CalabiSolution {
    CalabiProfile profile;
    /// First positive zero of y, or +inf if none before t_max.
    double beta = 0.0;
    double t_max = 0.0;
    double y_prime_at_beta = 0.0;
    std::shared_ptr<const ode::DenseSolution> dense;

    bool has_zero() const { return std::isfinite(beta); }
    double y(double t) const { return dense->value(t)(0); }
    double y_prime(double t) const { return dense->value(t)(1); }
    /// Accepted step times up to min(beta, t_max).
    std::vector<double> times() const;
};

/// y'' + k y = 0, y(0) = 1, y'(0) = 0. beta is bracketed to 1e-12.
/// Throws PreconditionError if k leaves [0, 1] on a sampling grid.
CalabiSolution calabi_ode(const CalabiProfile& profile, double t_max = 100.0, const ode::Controls& controls = {});

struct CalabiInvariants {
    double min_neg_yp = 0.0;
    double max_neg_yp = 0.0;
    double max_energy = 0.0;
    /// Largest increase of y^2 + y'^2 between consecutive samples.
    double max_energy_increase = 0.0;
    bool holds = false;
};

/// Samples [0, beta] (or [0, t_max]) on a uniform grid plus the native steps.
CalabiInvariants calabi_invariants(const CalabiSolution& s, int samples = 4000);

struct CalabiRigidity {
    double min_y_prime = 0.0;
    bool reaches_minus_one = false;
    /// beta - pi/2, the switch time of the rigid profile.
    double t1 = 0.0;
    double l1_distance_to_step = 0.0;
    bool matches_step = false;
    bool beta_at_least_half_pi = false;
    /// reaches_minus_one implies matches_step and beta >= pi/2.
    bool consistent = false;
};

CalabiRigidity calabi_rigidity_scan(const CalabiSolution& s);

// Fermi length identity ----------------------------------------------------

struct LengthBound {
    double length = 0.0;
    double total_curvature = 0.0;
    bool holds = false;
};

/// total = int_0^L -E_t(s, beta(s)) ds (adaptive Gauss-Kronrod). Requires a
/// fermi metric; checks 0 <= K <= 1 on {0 <= t <= beta(s)} by sampling.
LengthBound geodesic_length_bound(const SurfaceMetric& m, const ScalarFunction& beta);

// Flat outside a half-plane -------------------------------------------------

struct FlatOutsideResult {
    enum class Status { certified, unrealized_by_ansatz, zero_curvature };
    Status status = Status::unrealized_by_ansatz;
    std::optional<SurfaceMetric> metric;
    double k_min = 0.0;
    double k_max = 0.0;
    double w_min = 0.0;
    double dw_max = 0.0;
    std::string cause;
};

const char* to_string(FlatOutsideResult::Status s);

/// eps1 w(y)^2 dx^2 + eps2 dy^2 with w = 1 + a (y-1) exp(-1/(y-1)) for y > 1:
/// w = 1 on y <= 1, convex, w >= 1, 0 <= w' < a. K = -eps2 w''/w, so the
/// requested sign is realized iff sign_target == -eps2.
FlatOutsideResult construct_flat_outside_halfplane(int sign_target, int eps1, int eps2, double amplitude = 1.0);

// Grid fields ---------------------------------------------------------------

struct GridField {
    int nx = 0;
    int ny = 0;
    double x0 = 0.0, y0 = 0.0, dx = 1.0, dy = 1.0;
    /// Row-major: values[j * nx + i] at (x0 + i dx, y0 + j dy).
    std::vector<double> values;
};

/// Header line "nx,ny,x0,y0,dx,dy", one line with those values, then ny rows
/// of nx comma-separated values.
void write_grid_field(std::ostream& os, const GridField& f);
/// Throws PreconditionError on malformed input.
GridField read_grid_field(std::istream& is);

GridField curvature_grid(const SurfaceMetric& m, const Box& box, int nx, int ny);

}  // namespace riccmp
