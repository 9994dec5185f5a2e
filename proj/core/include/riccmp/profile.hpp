#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "riccmp/indefinite_linalg.hpp"

namespace riccmp {

using ScalarFunction = std::function<double(double)>;
using MatrixFunction = std::function<Matrix(double)>;

/// A self-adjoint operator valued function of t, smooth between a finite
/// list of switch times. Right-continuous at the switches; integrators use
/// piece-wise evaluation so each piece is integrated with its own formula.
class CurvatureProfile {
public:
    enum class Kind { constant, step, piecewise_constant, diagonal_table, scalar_multiple, custom, sum };

    static CurvatureProfile constant(const Operator& value);
    static CurvatureProfile step(const Operator& before, const Operator& after, double t_switch);
    /// values.size() == switch_times.size() + 1; switch times strictly increasing.
    static CurvatureProfile piecewise_constant(std::vector<double> switch_times, std::vector<Operator> values);
    /// diag(f_1(t), ..., f_n(t)); the Gram matrix must be diagonal.
    static CurvatureProfile diagonal_table(const InnerSpace& space, std::vector<ScalarFunction> entries);
    /// r(t) * A. `switch_times` lists the discontinuities of r, if any.
    static CurvatureProfile scalar_multiple(ScalarFunction r, const Operator& a,
                                            std::vector<double> switch_times = {});
    /// Arbitrary matrix function, one formula per piece.
    static CurvatureProfile custom(const InnerSpace& space, std::vector<double> switch_times,
                                   std::vector<MatrixFunction> pieces);

    /// Pointwise sum; the switch times are merged.
    CurvatureProfile operator+(const CurvatureProfile& other) const;

    Kind kind() const { return kind_; }
    const InnerSpace& space() const { return space_; }
    const std::vector<double>& switch_times() const { return switches_; }
    std::size_t piece_count() const { return pieces_.size(); }

    /// Index of the piece containing t (right-continuous).
    std::size_t piece_index(double t) const;
    Matrix matrix_at(double t) const { return matrix_in_piece(t, piece_index(t)); }
    /// Evaluates piece `piece`'s formula at t, also at its closing switch time.
    Matrix matrix_in_piece(double t, std::size_t piece) const { return pieces_.at(piece)(t); }
    /// Checked evaluation; throws PreconditionError if the value is not self-adjoint.
    Operator at(double t) const;

private:
    CurvatureProfile(InnerSpace space, Kind kind, std::vector<double> switches, std::vector<MatrixFunction> pieces);

    InnerSpace space_;
    Kind kind_;
    std::vector<double> switches_;
    std::vector<MatrixFunction> pieces_;
};

/// Times on [0, t_end] at which the profile switches, bracketed by 0 and t_end.
std::vector<double> segment_bounds(const CurvatureProfile& profile, double t_end);

/// Checks r1 <= r2 at the midpoint of every piece and on a uniform grid.
bool profile_leq(const CurvatureProfile& r1, const CurvatureProfile& r2, double t_end, int grid = 64);

}  // namespace riccmp
