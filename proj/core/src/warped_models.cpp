#include "riccmp/warped_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include <boost/math/quadrature/sinh_sinh.hpp>

#include "riccmp/error.hpp"
#include "riccmp/riccati.hpp"

namespace riccmp {

namespace {

constexpr double kFdStep = 1e-6;
constexpr double kFdGate = 1e-6;

double clip_lo(double lo) { return std::isfinite(lo) ? lo : -3.0; }
double clip_hi(double hi) { return std::isfinite(hi) ? hi : 3.0; }

double wedge_q(double xx, double yy, double xy) { return xx * yy - xy * xy; }

WarpFunction exp_warp(double rate) {
    WarpFunction f;
    f.w = [rate](double t) { return std::exp(rate * t); };
    f.dw = [rate](double t) { return rate * std::exp(rate * t); };
    f.ddw = [rate](double t) { return rate * rate * std::exp(rate * t); };
    std::ostringstream os;
    os << "exp(" << rate << " t)";
    f.description = os.str();
    return f;
}

WarpFunction cos_warp(double alpha) {
    const double c = std::cos(alpha);
    WarpFunction f;
    f.w = [alpha, c](double t) { return std::cos(t + alpha) / c; };
    f.dw = [alpha, c](double t) { return -std::sin(t + alpha) / c; };
    f.ddw = [alpha, c](double t) { return -std::cos(t + alpha) / c; };
    f.lo = -M_PI / 2 - alpha;
    f.hi = M_PI / 2 - alpha;
    f.description = "cos(t + alpha)/cos(alpha)";
    return f;
}

WarpFunction cosh_warp(double alpha) {
    const double c = std::cosh(alpha);
    WarpFunction f;
    f.w = [alpha, c](double t) { return std::cosh(t + alpha) / c; };
    f.dw = [alpha, c](double t) { return std::sinh(t + alpha) / c; };
    f.ddw = [alpha, c](double t) { return std::cosh(t + alpha) / c; };
    f.description = "cosh(t + alpha)/cosh(alpha)";
    return f;
}

double sec2(double x) {
    const double c = std::cos(x);
    return 1.0 / (c * c);
}

double sech2(double x) {
    const double c = std::cosh(x);
    return 1.0 / (c * c);
}

}  // namespace

double warp_derivative_residual(const WarpFunction& warp, int samples) {
    const double lo = clip_lo(warp.lo);
    const double hi = clip_hi(warp.hi);
    // Stay a little inside so the stencil never leaves the interval.
    const double margin = 1e-3 * (hi - lo);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = lo + margin + (hi - lo - 2 * margin) * (i + 0.5) / samples;
        const double fd1 = (warp.w(t + kFdStep) - warp.w(t - kFdStep)) / (2 * kFdStep);
        const double fd2 = (warp.dw(t + kFdStep) - warp.dw(t - kFdStep)) / (2 * kFdStep);
        const double scale = std::max(1.0, std::abs(warp.w(t)));
        worst = std::max(worst, std::abs(fd1 - warp.dw(t)) / scale);
        worst = std::max(worst, std::abs(fd2 - warp.ddw(t)) / std::max(scale, std::abs(warp.dw(t))));
    }
    return worst;
}

WarpedModel::WarpedModel(int fiber_dim, double fiber_curvature, WarpFunction warp, int eps)
    : fiber_dim_(fiber_dim), fiber_curvature_(fiber_curvature), warp_(std::move(warp)), eps_(eps) {
    if (eps != 1 && eps != -1) throw PreconditionError("WarpedModel: eps must be +1 or -1");
    if (fiber_dim < 1) throw PreconditionError("WarpedModel: fiber dimension must be positive");
    if (!warp_.w || !warp_.dw || !warp_.ddw) throw PreconditionError("WarpedModel: incomplete warp triple");
    const double r = warp_derivative_residual(warp_);
    if (!(r < kFdGate)) {
        std::ostringstream os;
        os << "WarpedModel: supplied derivatives of " << warp_.description
           << " disagree with finite differences (residual " << r << ")";
        throw PreconditionError(os.str());
    }
}

bool WarpedModel::contains(double t) const { return t > warp_.lo && t < warp_.hi && warp_.w(t) > 0.0; }

void WarpedModel::require_inside(double t) const {
    if (!contains(t)) {
        std::ostringstream os;
        os << "WarpedModel: t = " << t << " outside the warp interval";
        throw PreconditionError(os.str());
    }
}

double WarpedModel::w(double t) const {
    require_inside(t);
    return warp_.w(t);
}
double WarpedModel::dw(double t) const {
    require_inside(t);
    return warp_.dw(t);
}
double WarpedModel::ddw(double t) const {
    require_inside(t);
    return warp_.ddw(t);
}

double table1_default_k0(int row) {
    static const double k[] = {0.0, 0.0, 1.0, -1.0, 1.0, -1.0};
    if (row < 1 || row > 6) throw PreconditionError("table1: row must be 1..6");
    return k[row - 1];
}

std::pair<WarpedModel, Table1Row> table1_model(int row, double k0, int dim) {
    if (dim < 2) throw PreconditionError("table1: dimension must be at least 2");
    Table1Row r;
    r.row = row;
    r.k0 = k0;
    auto range_error = [&](const char* what) {
        std::ostringstream os;
        os << "table1 row " << row << ": K0 = " << k0 << " violates " << what;
        throw PreconditionError(os.str());
    };
    WarpFunction warp;
    switch (row) {
        case 1:
            if (k0 != 0.0) range_error("K0 = 0");
            warp = exp_warp(-1.0);
            r.eps = 1;
            r.ambient_curvature = -1.0;
            r.weingarten = [](double) { return 1.0; };
            r.weingarten_derivative = [](double) { return 0.0; };
            r.slice_curvature = [](double) { return 0.0; };
            break;
        case 2:
            if (k0 != 0.0) range_error("K0 = 0");
            warp = exp_warp(1.0);
            r.eps = -1;
            r.ambient_curvature = 1.0;
            r.weingarten = [](double) { return -1.0; };
            r.weingarten_derivative = [](double) { return 0.0; };
            r.slice_curvature = [](double) { return 0.0; };
            break;
        case 3:
        case 6: {
            if (row == 3 && !(k0 >= 1.0)) range_error("K0 >= 1");
            if (row == 6 && !(k0 <= -1.0)) range_error("K0 <= -1");
            const double a = std::acos(1.0 / std::sqrt(std::abs(k0)));
            r.alpha = a;
            warp = cos_warp(a);
            r.eps = row == 3 ? 1 : -1;
            r.ambient_curvature = row == 3 ? 1.0 : -1.0;
            r.weingarten = [a](double t) { return std::tan(t + a); };
            r.weingarten_derivative = [a](double t) { return sec2(t + a); };
            const double sgn = row == 3 ? 1.0 : -1.0;
            r.slice_curvature = [a, sgn](double t) { return sgn * sec2(t + a); };
            break;
        }
        case 4:
        case 5: {
            if (row == 4 && !(k0 >= -1.0 && k0 < 0.0)) range_error("-1 <= K0 < 0");
            if (row == 5 && !(k0 > 0.0 && k0 <= 1.0)) range_error("0 < K0 <= 1");
            const double a = std::acosh(1.0 / std::sqrt(std::abs(k0)));
            r.alpha = a;
            warp = cosh_warp(a);
            r.eps = row == 4 ? 1 : -1;
            r.ambient_curvature = row == 4 ? -1.0 : 1.0;
            r.weingarten = [a](double t) { return -std::tanh(t + a); };
            r.weingarten_derivative = [a](double t) { return -sech2(t + a); };
            const double sgn = row == 4 ? -1.0 : 1.0;
            r.slice_curvature = [a, sgn](double t) { return sgn * sech2(t + a); };
            break;
        }
        default:
            throw PreconditionError("table1: row must be 1..6");
    }
    WarpedModel m(dim - 1, k0, std::move(warp), r.eps);
    m.set_ambient_constant(r.ambient_curvature);
    return {std::move(m), std::move(r)};
}

Table1Check table1_check(int row, double k0, int dim, int samples, std::uint64_t seed) {
    auto [model, info] = table1_model(row, k0, dim);
    Table1Check out;
    out.row = row;
    const double lo = clip_lo(model.warp().lo);
    const double hi = clip_hi(model.warp().hi);
    const double margin = 0.05 * (hi - lo);
    double amb_min = std::numeric_limits<double>::infinity();
    double amb_max = -amb_min;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    const int fd = model.fiber_dim();
    for (int i = 0; i < samples; ++i) {
        const double t = lo + margin + (hi - lo - 2 * margin) * (i + 0.5) / samples;
        const double s = info.weingarten(t);
        out.riccati_residual = std::max(
            out.riccati_residual, std::abs(info.weingarten_derivative(t) - s * s - info.eps * info.ambient_curvature));
        const double a = ambient_sectional(model, t);
        amb_min = std::min(amb_min, a);
        amb_max = std::max(amb_max, a);
        if (fd >= 2) {
            Vector x(fd), y(fd);
            for (int k = 0; k < fd; ++k) x(k) = nd(rng);
            for (int k = 0; k < fd; ++k) y(k) = nd(rng);
            x.normalize();
            y -= y.dot(x) * x;
            y.normalize();
            out.gauss_residual = std::max(out.gauss_residual, gauss_equation_residual(model, t, x, y));
        }
    }
    out.ambient_variation = amb_max - amb_min;

    const InnerSpace slice = InnerSpace::standard(fd, 0);
    const Operator id = Operator::identity(slice);
    out.t_end = std::min(2.0, 0.8 * (hi - 0.0));
    const auto profile = CurvatureProfile::constant(id * (info.eps * info.ambient_curvature));
    const RiccatiTrajectory traj = integrate_riccati(profile, id * info.weingarten(0.0), out.t_end);
    for (int i = 0; i <= samples; ++i) {
        const double t = out.t_end * i / samples;
        const Matrix diff = traj.at(t).matrix() - info.weingarten(t) * Matrix::Identity(fd, fd);
        out.integration_error = std::max(out.integration_error, diff.cwiseAbs().maxCoeff());
    }
    if (!traj.defined_on(out.t_end)) out.integration_error = std::numeric_limits<double>::infinity();
    out.passed = out.riccati_residual < 1e-10 && out.integration_error < 1e-7 && out.ambient_variation < 1e-10 &&
                 out.gauss_residual < 1e-10;
    return out;
}

double slice_weingarten(const WarpedModel& m, double t) { return -m.dw(t) / m.w(t); }

double normal_curvature_operator(const WarpedModel& m, double t) { return -m.ddw(t) / m.w(t); }

double ambient_sectional(const WarpedModel& m, double t) {
    const double w = m.w(t);
    const double dw = m.dw(t);
    return (m.fiber_curvature() - m.eps() * dw * dw) / (w * w);
}

double mixed_sectional(const WarpedModel& m, double t) { return -m.eps() * m.ddw(t) / m.w(t); }

double ricci_normal(const WarpedModel& m, double t) { return -m.fiber_dim() * m.ddw(t) / m.w(t); }

double gauss_equation_residual(const WarpedModel& m, double t, const Vector& x, const Vector& y) {
    if (x.size() != m.fiber_dim() || y.size() != m.fiber_dim()) {
        throw DimensionError("gauss_equation_residual: vectors must be tangent to the slice");
    }
    const double q = wedge_q(x.dot(x), y.dot(y), x.dot(y));
    const double w = m.w(t);
    const double h = m.dw(t) / w;
    const double slice = m.fiber_curvature() / (w * w) * q;
    const double ambient = m.ambient_constant().value_or(ambient_sectional(m, t)) * q;
    return std::abs(slice - ambient - m.eps() * h * h * q);
}

InnerSpace warped_frame_space(const WarpedModel& m) {
    Matrix g = Matrix::Identity(m.dim(), m.dim());
    g(m.dim() - 1, m.dim() - 1) = m.eps();
    return InnerSpace::from_gram(g);
}

double warped_curvature_form(const WarpedModel& m, double t, const Vector& x, const Vector& y) {
    const int f = m.fiber_dim();
    if (x.size() != m.dim() || y.size() != m.dim()) throw DimensionError("warped_curvature_form: size mismatch");
    const Vector v1 = x.head(f);
    const Vector v2 = y.head(f);
    const double a = x(f);
    const double b = y(f);
    // X ^ Y = V1 ^ V2 + (b V1 - a V2) ^ d/dt and the curvature operator is
    // block diagonal on Lambda^2(V) + V ^ d/dt.
    const Vector u = b * v1 - a * v2;
    const double kv = ambient_sectional(m, t);
    const double km = mixed_sectional(m, t);
    return kv * wedge_q(v1.dot(v1), v2.dot(v2), v1.dot(v2)) + km * m.eps() * u.dot(u);
}

int ProductExample::dim() const {
    int n = 0;
    for (const auto& b : blocks) n += b.dim;
    return n;
}

int ProductExample::index() const {
    int k = 0;
    for (const auto& b : blocks) k += b.sign < 0 ? b.dim : 0;
    return k;
}

InnerSpace ProductExample::space() const {
    Matrix g = Matrix::Zero(dim(), dim());
    int off = 0;
    for (const auto& b : blocks) {
        for (int i = 0; i < b.dim; ++i) g(off + i, off + i) = b.sign;
        off += b.dim;
    }
    return InnerSpace::from_gram(g);
}

double ProductExample::curvature_form(const Vector& x, const Vector& y) const {
    if (x.size() != dim() || y.size() != dim()) throw DimensionError("ProductExample: size mismatch");
    double total = 0.0;
    int off = 0;
    for (const auto& b : blocks) {
        const Vector xi = x.segment(off, b.dim);
        const Vector yi = y.segment(off, b.dim);
        // Same Levi-Civita connection for -g_i, so the (0,4) tensor flips sign.
        total += b.sign * b.curvature * wedge_q(xi.dot(xi), yi.dot(yi), xi.dot(yi));
        off += b.dim;
    }
    return total;
}

void validate(const ProductExample& p) {
    if (p.blocks.empty()) throw PreconditionError("ProductExample: at least one block required");
    for (const auto& b : p.blocks) {
        if (b.sign != 1 && b.sign != -1) throw PreconditionError("ProductExample: block signs must be +-1");
        if (b.dim < 1) throw PreconditionError("ProductExample: block dimensions must be positive");
    }
}

namespace {

enum class Causal { space, time };

/// Random vector of the requested causal type with |<x,x>| = 1 in a diagonal
/// +-1 metric; the ratio r controls how close to the light cone it lands.
Vector sample_causal(const Vector& signs, Causal type, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 0.999);
    const auto n = signs.size();
    Vector pos = Vector::Zero(n);
    Vector neg = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) (signs(i) > 0 ? pos(i) : neg(i)) = normal(rng);
    Vector& major = type == Causal::space ? pos : neg;
    Vector& minor = type == Causal::space ? neg : pos;
    const double r = unit(rng);
    if (minor.norm() > 0.0) minor *= r * major.norm() / minor.norm();
    Vector x = pos + neg;
    double q = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) q += signs(i) * x(i) * x(i);
    return x / std::sqrt(std::abs(q));
}

}  // namespace

BoundResult curvature_bound_check(const CurvatureExample& example, double k0, BoundDirection direction,
                                  const BoundSampler& sampler) {
    Vector signs;
    double t_lo = 0.0;
    double t_hi = 0.0;
    if (const auto* m = std::get_if<WarpedModel>(&example)) {
        signs = Vector::Ones(m->dim());
        signs(m->dim() - 1) = m->eps();
        t_lo = std::max(sampler.t_lo, clip_lo(m->warp().lo) + 1e-3);
        t_hi = std::min(sampler.t_hi, clip_hi(m->warp().hi) - 1e-3);
        if (!(t_hi >= t_lo)) throw PreconditionError("curvature_bound_check: empty t range");
    } else {
        const auto& p = std::get<ProductExample>(example);
        validate(p);
        signs = p.space().gram().diagonal();
    }

    std::vector<Causal> types;
    if ((signs.array() > 0).any()) types.push_back(Causal::space);
    if ((signs.array() < 0).any()) types.push_back(Causal::time);
    std::vector<std::pair<Causal, Causal>> strata;
    for (Causal a : types) {
        for (Causal b : types) strata.emplace_back(a, b);
    }

    BoundResult out;
    out.strata_used = static_cast<int>(strata.size());
    const double sgn = direction == BoundDirection::geq ? 1.0 : -1.0;
    double worst_norm = std::numeric_limits<double>::infinity();
    double worst_raw = 0.0;
    std::mt19937_64 rng(sampler.seed);
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    for (int i = 0; i < sampler.pairs; ++i) {
        const auto& [tx, ty] = strata[static_cast<std::size_t>(i) % strata.size()];
        const Vector x = sample_causal(signs, tx, rng);
        const Vector y = sample_causal(signs, ty, rng);
        double xx = 0, yy = 0, xy = 0;
        for (Eigen::Index k = 0; k < signs.size(); ++k) {
            xx += signs(k) * x(k) * x(k);
            yy += signs(k) * y(k) * y(k);
            xy += signs(k) * x(k) * y(k);
        }
        double rxy;
        if (const auto* m = std::get_if<WarpedModel>(&example)) {
            const double t = t_lo + (t_hi - t_lo) * ut(rng);
            rxy = warped_curvature_form(*m, t, x, y);
        } else {
            rxy = std::get<ProductExample>(example).curvature_form(x, y);
        }
        const double bound = k0 * wedge_q(xx, yy, xy);
        if (!std::isfinite(rxy) || !std::isfinite(bound)) continue;
        const double f = sgn * (rxy - bound);
        const double scale = 1.0 + std::abs(rxy) + std::abs(bound);
        if (f / scale < worst_norm) {
            worst_norm = f / scale;
            worst_raw = rxy - bound;
        }
        ++out.evaluated;
    }
    if (out.evaluated == 0) return out;
    out.worst = worst_raw;
    out.verdict = worst_norm >= -sampler.tolerance ? Verdict::holds : Verdict::violated;
    return out;
}

ModifiedWarp modified_warp_example(WarpBranch branch, int dim) {
    const double s = branch == WarpBranch::sub ? 1.0 : -1.0;
    // h = exp(-1/(t-1)) for t > 1: C-infinity and flat to all orders at t = 1.
    auto h = [](double t) { return t > 1.0 ? std::exp(-1.0 / (t - 1.0)) : 0.0; };
    auto dh = [h](double t) {
        if (t <= 1.0) return 0.0;
        const double u = t - 1.0;
        return h(t) / (u * u);
    };
    auto ddh = [h](double t) {
        if (t <= 1.0) return 0.0;
        const double u = t - 1.0;
        return h(t) * (1.0 - 2.0 * u) / (u * u * u * u);
    };
    WarpFunction f;
    f.w = [s, h](double t) { return std::exp(t + s * h(t)); };
    f.dw = [s, h, dh](double t) { return (1.0 + s * dh(t)) * std::exp(t + s * h(t)); };
    f.ddw = [s, h, dh, ddh](double t) {
        const double p = 1.0 + s * dh(t);
        return (s * ddh(t) + p * p) * std::exp(t + s * h(t));
    };
    f.description = branch == WarpBranch::sub ? "exp(t + h(t))" : "exp(t - h(t))";

    ModifiedWarp out{WarpedModel(dim - 1, 0.0, f, 1)};
    out.curvature_margin = std::numeric_limits<double>::infinity();
    out.slope_margin = std::numeric_limits<double>::infinity();
    const long steps = std::lround((out.t_hi - out.t_lo) / out.step);
    for (long i = 0; i <= steps; ++i) {
        const double t = out.t_lo + out.step * static_cast<double>(i);
        const double w = f.w(t);
        const double c = f.ddw(t) / w - 1.0;
        const double d = f.dw(t) / w - 1.0;
        out.curvature_margin = std::min(out.curvature_margin, s * c);
        out.slope_margin = std::min(out.slope_margin, s * d);
    }
    out.certified = out.curvature_margin > 0.0 && out.slope_margin > 0.0;
    return out;
}

LengthWitness halfspace_length_witness() {
    LengthWitness out;
    // Speed of c(t) = (sinh t, cosh t) in (dx^2 - dy^2)/y^2.
    auto speed = [](double t) {
        // Beyond this cosh overflows; the integrand is below 1e-130 there.
        if (std::abs(t) > 300.0) return 0.0;
        // x' = cosh t, y' = sinh t; x'^2 - y'^2 factored as (x' - y')(x' + y')
        // = e^{-t} e^{t} to avoid cancellation.
        const double y = std::cosh(t);
        return std::sqrt(std::abs(std::exp(-t) * std::exp(t))) / y;
    };
    boost::math::quadrature::sinh_sinh<double> integrator;
    double l1 = 0.0;
    out.length = integrator.integrate(speed, 1e-14, &out.quadrature_error, &l1);

    // Conformal metric e^{2 phi} diag(1, -1), phi = -log y:
    // Gamma^k_ij = d^k_i phi_j + d^k_j phi_i - eta_ij eta^kl phi_l.
    const double eta[2] = {1.0, -1.0};
    for (int i = 0; i <= 200; ++i) {
        const double t = -5.0 + 10.0 * i / 200;
        const double v[2] = {std::cosh(t), std::sinh(t)};
        const double acc0[2] = {std::sinh(t), std::cosh(t)};
        const double y = std::cosh(t);
        const double dphi[2] = {0.0, -1.0 / y};
        double a[2];
        for (int k = 0; k < 2; ++k) {
            double gamma = 0.0;
            for (int p = 0; p < 2; ++p) {
                for (int q = 0; q < 2; ++q) {
                    const double g = (k == p ? dphi[q] : 0.0) + (k == q ? dphi[p] : 0.0) -
                                     (p == q ? eta[p] : 0.0) * eta[k] * dphi[k];
                    gamma += g * v[p] * v[q];
                }
            }
            a[k] = acc0[k] + gamma;
        }
        const double cross = a[0] * v[1] - a[1] * v[0];
        const double scale = std::hypot(a[0], a[1]) * std::hypot(v[0], v[1]) + 1e-300;
        out.pregeodesic_residual = std::max(out.pregeodesic_residual, std::abs(cross) / scale);
    }
    return out;
}

namespace {

/// "table1/row3?K0=2&n=4" -> row 3, K0 2, n 4.
CurvatureExample parse_table1(const std::string& id) {
    const std::string rest = id.substr(std::string("table1/row").size());
    std::size_t pos = 0;
    int row = 0;
    try {
        row = std::stoi(rest, &pos);
    } catch (const std::exception&) {
        throw PreconditionError("model id '" + id + "': missing row number");
    }
    double k0 = table1_default_k0(row);
    int n = 3;
    std::string query = rest.substr(pos);
    if (!query.empty()) {
        if (query[0] != '?') throw PreconditionError("model id '" + id + "': expected '?' before parameters");
        std::stringstream ss(query.substr(1));
        std::string kv;
        while (std::getline(ss, kv, '&')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw PreconditionError("model id '" + id + "': bad parameter '" + kv + "'");
            const std::string key = kv.substr(0, eq);
            const std::string val = kv.substr(eq + 1);
            try {
                if (key == "K0") k0 = std::stod(val);
                else if (key == "n") n = std::stoi(val);
                else throw PreconditionError("model id '" + id + "': unknown parameter '" + key + "'");
            } catch (const std::invalid_argument&) {
                throw PreconditionError("model id '" + id + "': bad value '" + val + "'");
            }
        }
    }
    return table1_model(row, k0, n).first;
}

}  // namespace

CurvatureExample resolve_model(const std::string& id) {
    if (id.rfind("table1/row", 0) == 0) return parse_table1(id);
    if (id == "halfspace") {
        WarpedModel m(2, 0.0, exp_warp(1.0), -1);
        m.set_ambient_constant(1.0);
        return m;
    }
    if (id == "strip") {
        WarpedModel m(2, -1.0, cos_warp(0.0), -1);
        m.set_ambient_constant(-1.0);
        return m;
    }
    if (id == "product/S2xH2-") return ProductExample{{{2, 1.0, 1}, {2, -1.0, -1}}};
    if (id == "product/S2xS2") return ProductExample{{{2, 1.0, 1}, {2, 1.0, 1}}};
    if (id == "desitter/cosh") {
        WarpedModel m(2, 1.0, cosh_warp(0.0), -1);
        m.set_ambient_constant(1.0);
        return m;
    }
    if (id.rfind("flat/", 0) == 0) {
        int n = 0, k = 0;
        char slash = 0;
        std::stringstream ss(id.substr(5));
        if (!(ss >> n >> slash >> k) || slash != '/' || n < 1 || k < 0 || k > n) {
            throw PreconditionError("model id '" + id + "': expected flat/N/K");
        }
        ProductExample p;
        if (n - k > 0) p.blocks.push_back({n - k, 0.0, 1});
        if (k > 0) p.blocks.push_back({k, 0.0, -1});
        return p;
    }
    throw PreconditionError("unknown model id '" + id + "'");
}

std::vector<ModelEntry> list_models() {
    return {
        {"table1/row1", "w = e^{-t}, eps = +1, flat fiber: hyperbolic space, S_t = I"},
        {"table1/row2", "w = e^{t}, eps = -1, flat fiber: part of de Sitter space, S_t = -I"},
        {"table1/row3", "w = cos(t+a)/cos a, eps = +1, K0 >= 1: sphere, S_t = tan(t+a) I"},
        {"table1/row4", "w = cosh(t+a)/cosh a, eps = +1, -1 <= K0 < 0: hyperbolic, S_t = -tanh(t+a) I"},
        {"table1/row5", "w = cosh(t+a)/cosh a, eps = -1, 0 < K0 <= 1: de Sitter, S_t = -tanh(t+a) I"},
        {"table1/row6", "w = cos(t+a)/cos a, eps = -1, K0 <= -1: part of anti-de Sitter, S_t = tan(t+a) I"},
        {"halfspace", "e^{2t} g0 - dt^2: half-space part of de Sitter space (incomplete)"},
        {"strip", "cos^2(t) g - dt^2 over hyperbolic space: strip in anti-de Sitter space"},
        {"desitter/cosh", "cosh^2(t) g1 - dt^2 over the unit sphere: R >= 1 with equality"},
        {"product/S2xH2-", "S^2(+1) x H^2(-1) with metric g1 - g2: R >= 0"},
        {"product/S2xS2", "S^2(+1) x S^2(+1), Riemannian product: R >= 0"},
        {"flat/N/K", "flat space of dimension N and index K"},
    };
}

}  // namespace riccmp
