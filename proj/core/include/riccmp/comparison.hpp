#pragma once

// Executable forms of the Riccati comparison and rigidity statements.

#include <string>
#include <utility>
#include <vector>

#include "riccmp/riccati.hpp"

namespace riccmp {

struct ComparisonOptions {
    int uniform_points = 512;
    /// holds iff min eig(G (S2 - S1)) >= -gap_tolerance at every resampled time.
    double gap_tolerance = 1e-7;
};

struct GapPoint {
    double t;
    double min_gap;
};

struct ComparisonResult {
    Verdict verdict = Verdict::inconclusive;
    double common_end = 0.0;
    double min_gap = 0.0;
    std::vector<GapPoint> min_gap_curve;

    bool holds() const { return verdict == Verdict::holds; }
};

/// Checks S1(t) <= S2(t) on the common domain of definition, resampled at
/// uniform points plus both trajectories' native steps.
ComparisonResult compare_trajectories(const RiccatiTrajectory& t1, const RiccatiTrajectory& t2,
                                      const ComparisonOptions& options = {});

struct RigidityReport {
    Verdict verdict = Verdict::inconclusive;
    /// min eig of G (S2(b) - S1(b)).
    double gap_min_eigenvalue = 0.0;
    double gap_norm = 0.0;
    bool equal_at_b = false;
    bool data_equal = false;
    /// Gap positive definite at b.
    bool strict_gap = false;
    std::string cause;
};

/// Ordered data (A1 <= A2, R1 <= R2) integrated to b. The verdict holds when
/// S1(b) <= S2(b) and S1(b) = S2(b) occurs exactly when the data coincide.
RigidityReport rigidity_probe(const CurvatureProfile& r1, const CurvatureProfile& r2, const Operator& a1,
                              const Operator& a2, double b, const RiccatiControls& controls = {});

struct BracketReport {
    bool outer_reach = false;
    bool middle_reaches = false;
    /// outer_reach implies middle_reaches.
    bool holds = true;
    double reach[3] = {0.0, 0.0, 0.0};
};

/// Two-sided domain check. Throws PreconditionError unless
/// R1 <= R2 <= R3 and S1(0) <= S2(0) <= S3(0).
BracketReport domain_bracket_check(const CurvatureProfile& r1, const CurvatureProfile& r2,
                                   const CurvatureProfile& r3, const Operator& s1, const Operator& s2,
                                   const Operator& s3, double b, const RiccatiControls& controls = {});

struct TracePoint {
    double t;
    /// |tr S' - tr S^2 - tr R| with S' from the continuous extension.
    double identity_residual;
    /// m tr(S^2) - (tr S)^2 >= 0, m = dim E.
    double cs_slack;
    bool cs_equality;
    /// H' - H^2 - tr(R)/m with H = tr(S)/m.
    double slack_normalized;
    /// H' - H^2/m - tr(R) with H = tr(S).
    double slack_unnormalized;
};

struct TraceChannel {
    std::vector<TracePoint> points;
    double max_identity_residual = 0.0;
    double min_cs_slack = 0.0;
    std::vector<double> cs_equality_times;
};

/// Trace identity and Cauchy-Schwarz channel. The form must be definite
/// (PreconditionError otherwise).
TraceChannel trace_channel(const RiccatiTrajectory& t, int uniform_points = 512);

struct TubeExpansion {
    double lhs = 0.0;
    double rhs_r2 = 0.0;
    double rhs_inv_r2 = 0.0;
    /// |d/dt <FX,FX> + 2 <S F X, F X>| at r, derivative by central differences.
    double derivative_residual = 0.0;
};

TubeExpansion tube_expansion_check(const JacobiTrajectory& j, double r, const Vector& x);

}  // namespace riccmp
