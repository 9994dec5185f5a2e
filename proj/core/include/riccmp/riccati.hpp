#pragma once

// Matrix Riccati S' = S^2 + R(t) and Jacobi F'' + R(t) F = 0 systems along a
// parameter t, with finite-escape detection for the former and singular-time
// location for the latter.

#include <optional>
#include <vector>

#include "riccmp/indefinite_linalg.hpp"
#include "riccmp/ode.hpp"
#include "riccmp/profile.hpp"

namespace riccmp {

struct RiccatiControls {
    ode::Controls ode{};
    /// ||S||_F above this starts the blow-up protocol.
    double escape_threshold = 1e8;
    /// Required width of the final blow-up bracket.
    double bracket_width = 1e-6;
    /// Replace S by its self-adjoint part after every accepted step.
    bool symmetrize = true;
};

struct BlowUp {
    double t_star = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double bracket_width() const { return bracket_hi - bracket_lo; }
};

class RiccatiTrajectory {
public:
    RiccatiTrajectory(CurvatureProfile profile, Operator initial, double t_end_requested);

    const CurvatureProfile& profile() const { return profile_; }
    const Operator& initial() const { return initial_; }
    const InnerSpace& space() const { return initial_.space(); }
    double t_end_requested() const { return t_end_requested_; }
    /// Last time the solution is known (t_end, or the lower blow-up bracket).
    double t_reached() const { return t_reached_; }
    const std::optional<BlowUp>& blow_up() const { return blow_up_; }
    bool defined_on(double b) const { return t_reached_ >= b; }

    /// Accepted step endpoints (strictly increasing, starting at 0).
    const std::vector<double>& times() const { return times_; }
    const std::vector<Matrix>& samples() const { return samples_; }

    /// Dense-output value, symmetrised; t must lie in [0, t_reached].
    Operator at(double t) const;
    /// Derivative of the continuous extension at t.
    Operator derivative_at(double t) const;

private:
    friend RiccatiTrajectory integrate_riccati(const CurvatureProfile&, const Operator&, double,
                                               const RiccatiControls&);
    CurvatureProfile profile_;
    Operator initial_;
    double t_end_requested_;
    double t_reached_ = 0.0;
    std::optional<BlowUp> blow_up_;
    std::vector<double> times_;
    std::vector<Matrix> samples_;
    ode::DenseSolution dense_;
};

/// Integrates S' = S^2 + R(t), S(0) = s0 on [0, t_end] or until finite
/// escape. Throws IntegrationError on step underflow without escape.
RiccatiTrajectory integrate_riccati(const CurvatureProfile& profile, const Operator& s0, double t_end,
                                    const RiccatiControls& controls = {});

struct JacobiControls {
    ode::Controls ode{};
    /// Singular times are bisected to this width.
    double singular_tolerance = 1e-8;
    /// Samples per accepted step scanned for singularities.
    int scan_per_step = 4;
};

class JacobiTrajectory {
public:
    JacobiTrajectory(CurvatureProfile profile, Operator f0, Operator f0_prime, double t_end);

    const CurvatureProfile& profile() const { return profile_; }
    const InnerSpace& space() const { return f0_.space(); }
    const Operator& f0() const { return f0_; }
    const Operator& f0_prime() const { return f0_prime_; }
    double t_end() const { return t_end_; }
    /// Shape operators are only formed for t >= t_min_cutoff (non-zero for tubes).
    double t_min_cutoff() const { return t_min_cutoff_; }
    const std::vector<double>& singular_times() const { return singular_times_; }
    const std::vector<double>& times() const { return times_; }

    Operator f(double t) const;
    Operator f_prime(double t) const;
    /// F* F' - F'* F (adjoints with respect to the form).
    Matrix wronskian(double t) const;

private:
    friend JacobiTrajectory integrate_jacobi(const CurvatureProfile&, const Operator&, const Operator&, double,
                                             const JacobiControls&);
    friend JacobiTrajectory tube_jacobi(const Operator&, const Operator&, const Operator&,
                                        const CurvatureProfile&, double, const JacobiControls&);
    CurvatureProfile profile_;
    Operator f0_;
    Operator f0_prime_;
    double t_end_;
    double t_min_cutoff_ = 0.0;
    std::vector<double> singular_times_;
    std::vector<double> times_;
    ode::DenseSolution dense_;
};

JacobiTrajectory integrate_jacobi(const CurvatureProfile& profile, const Operator& f0, const Operator& f0_prime,
                                  double t_end, const JacobiControls& controls = {});

/// -F'(t) F(t)^{-1}. Throws PreconditionError within 1e-6 of a singular time
/// (the message names the nearest one) or below the tube cutoff.
Operator shape_from_jacobi(const JacobiTrajectory& j, double t);

/// ||G*S - (G*S)^T|| / max(1, ||G*S||).
double self_adjoint_defect(const Operator& s);

/// Start of the cutoff below which tube shape operators are not formed.
inline constexpr double kTubeCutoff = 1e-3;

/// Jacobi field of a tube: F(0) = P, F'(0) = -A P + P_perp. P and P_perp must
/// be complementary form-orthogonal projections; A self-adjoint on range(P).
JacobiTrajectory tube_jacobi(const Operator& p, const Operator& p_perp, const Operator& a_tangent,
                             const CurvatureProfile& profile, double t_end, const JacobiControls& controls = {});

}  // namespace riccmp
