#include "riccmp/profile.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "riccmp/error.hpp"

namespace riccmp {

namespace {

void require_increasing(const std::vector<double>& times) {
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) throw PreconditionError("CurvatureProfile: switch times must increase");
    }
}

void require_self_adjoint_value(const Operator& op) {
    if (!is_self_adjoint(op)) throw PreconditionError("CurvatureProfile: value is not self-adjoint");
}

}  // namespace

CurvatureProfile::CurvatureProfile(InnerSpace space, Kind kind, std::vector<double> switches,
                                   std::vector<MatrixFunction> pieces)
    : space_(std::move(space)), kind_(kind), switches_(std::move(switches)), pieces_(std::move(pieces)) {
    require_increasing(switches_);
    if (pieces_.size() != switches_.size() + 1) {
        throw PreconditionError("CurvatureProfile: need exactly one piece more than switch times");
    }
}

CurvatureProfile CurvatureProfile::constant(const Operator& value) {
    require_self_adjoint_value(value);
    Matrix m = value.matrix();
    return CurvatureProfile(value.space(), Kind::constant, {}, {[m](double) { return m; }});
}

CurvatureProfile CurvatureProfile::step(const Operator& before, const Operator& after, double t_switch) {
    CurvatureProfile p = piecewise_constant({t_switch}, {before, after});
    p.kind_ = Kind::step;
    return p;
}

CurvatureProfile CurvatureProfile::piecewise_constant(std::vector<double> switch_times,
                                                      std::vector<Operator> values) {
    if (values.empty()) throw PreconditionError("CurvatureProfile: no values");
    std::vector<MatrixFunction> pieces;
    for (const auto& v : values) {
        if (v.space() != values.front().space()) throw DimensionError("CurvatureProfile: mixed spaces");
        require_self_adjoint_value(v);
        Matrix m = v.matrix();
        pieces.emplace_back([m](double) { return m; });
    }
    return CurvatureProfile(values.front().space(), Kind::piecewise_constant, std::move(switch_times),
                            std::move(pieces));
}

CurvatureProfile CurvatureProfile::diagonal_table(const InnerSpace& space, std::vector<ScalarFunction> entries) {
    if (static_cast<int>(entries.size()) != space.dim()) {
        throw DimensionError("CurvatureProfile::diagonal_table: one function per coordinate required");
    }
    const Matrix& g = space.gram();
    if ((g - Matrix(g.diagonal().asDiagonal())).cwiseAbs().maxCoeff() != 0.0) {
        throw PreconditionError("CurvatureProfile::diagonal_table: Gram matrix must be diagonal");
    }
    auto fn = [entries = std::move(entries)](double t) {
        const auto n = static_cast<Eigen::Index>(entries.size());
        Matrix m = Matrix::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) m(i, i) = entries[static_cast<std::size_t>(i)](t);
        return m;
    };
    return CurvatureProfile(space, Kind::diagonal_table, {}, {fn});
}

CurvatureProfile CurvatureProfile::scalar_multiple(ScalarFunction r, const Operator& a,
                                                   std::vector<double> switch_times) {
    require_self_adjoint_value(a);
    Matrix m = a.matrix();
    std::vector<MatrixFunction> pieces(switch_times.size() + 1);
    // A jump of r at a switch time is honoured by evaluating just inside each piece.
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        const double lo = k == 0 ? -INFINITY : switch_times[k - 1];
        const double hi = k == switch_times.size() ? INFINITY : switch_times[k];
        pieces[k] = [r, m, lo, hi](double t) {
            const double span = std::isfinite(hi - lo) ? hi - lo : 1.0;
            const double eps = 1e-12 * std::max(1.0, span);
            const double te = std::clamp(t, std::isfinite(lo) ? lo + eps : t, std::isfinite(hi) ? hi - eps : t);
            return Matrix(r(te) * m);
        };
    }
    return CurvatureProfile(a.space(), Kind::scalar_multiple, std::move(switch_times), std::move(pieces));
}

CurvatureProfile CurvatureProfile::custom(const InnerSpace& space, std::vector<double> switch_times,
                                          std::vector<MatrixFunction> pieces) {
    return CurvatureProfile(space, Kind::custom, std::move(switch_times), std::move(pieces));
}

CurvatureProfile CurvatureProfile::operator+(const CurvatureProfile& other) const {
    if (space_ != other.space_) throw DimensionError("CurvatureProfile: sum of profiles on different spaces");
    std::set<double> merged(switches_.begin(), switches_.end());
    merged.insert(other.switches_.begin(), other.switches_.end());
    std::vector<double> switches(merged.begin(), merged.end());

    auto lhs = std::make_shared<CurvatureProfile>(*this);
    auto rhs = std::make_shared<CurvatureProfile>(other);
    std::vector<MatrixFunction> pieces;
    for (std::size_t k = 0; k <= switches.size(); ++k) {
        // Representative point strictly inside merged piece k.
        double probe;
        if (switches.empty()) probe = 0.0;
        else if (k == 0) probe = switches.front() - 1.0;
        else if (k == switches.size()) probe = switches.back() + 1.0;
        else probe = 0.5 * (switches[k - 1] + switches[k]);
        const std::size_t ip = lhs->piece_index(probe);
        const std::size_t iq = rhs->piece_index(probe);
        pieces.emplace_back([lhs, rhs, ip, iq](double t) {
            return Matrix(lhs->matrix_in_piece(t, ip) + rhs->matrix_in_piece(t, iq));
        });
    }
    return CurvatureProfile(space_, Kind::sum, std::move(switches), std::move(pieces));
}

std::size_t CurvatureProfile::piece_index(double t) const {
    return static_cast<std::size_t>(std::upper_bound(switches_.begin(), switches_.end(), t) - switches_.begin());
}

Operator CurvatureProfile::at(double t) const {
    Operator op(space_, matrix_at(t));
    require_self_adjoint_value(op);
    return op;
}

std::vector<double> segment_bounds(const CurvatureProfile& profile, double t_end) {
    std::vector<double> bounds{0.0};
    for (double s : profile.switch_times()) {
        if (s > 0.0 && s < t_end) bounds.push_back(s);
    }
    bounds.push_back(t_end);
    return bounds;
}

bool profile_leq(const CurvatureProfile& r1, const CurvatureProfile& r2, double t_end, int grid) {
    std::vector<double> probes;
    for (int i = 0; i <= grid; ++i) probes.push_back(t_end * i / grid);
    std::set<double> switches(r1.switch_times().begin(), r1.switch_times().end());
    switches.insert(r2.switch_times().begin(), r2.switch_times().end());
    std::vector<double> s(switches.begin(), switches.end());
    s.insert(s.begin(), 0.0);
    s.push_back(t_end);
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] >= 0.0 && s[i + 1] <= t_end && s[i + 1] > s[i]) probes.push_back(0.5 * (s[i] + s[i + 1]));
    }
    for (double t : probes) {
        if (!order_leq(r1.at(t), r2.at(t))) return false;
    }
    return true;
}

}  // namespace riccmp
