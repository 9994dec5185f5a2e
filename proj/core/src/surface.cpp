#include "riccmp/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "riccmp/error.hpp"

namespace riccmp {

namespace {

Mat2 diag2(double a, double b) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

void require_sign(int e, const char* what) {
    if (e != 1 && e != -1) throw PreconditionError(std::string(what) + " must be +1 or -1");
}

ScalarJet zero_jet(double, double) { return {}; }

double frame_fd_step() { return 1e-5; }

}  // namespace

ScalarField2 bump_field(double amplitude, double cx, double cy, double rx, double ry) {
    return [=](double x, double y) {
        ScalarJet j;
        const double u = (x - cx) / rx;
        const double v = (y - cy) / ry;
        const double rho = u * u + v * v;
        if (rho >= 1.0) return j;
        const double q = 1.0 / (1.0 - rho);
        const double f = amplitude * std::exp(1.0 - q);
        const double f1 = -f * q * q;                           // df/drho
        const double f2 = f * (q * q * q * q - 2.0 * q * q * q);  // d2f/drho2
        const Vec2 drho(2.0 * u / rx, 2.0 * v / ry);
        j.value = f;
        j.grad = f1 * drho;
        j.hess = f2 * drho * drho.transpose();
        j.hess(0, 0) += f1 * 2.0 / (rx * rx);
        j.hess(1, 1) += f1 * 2.0 / (ry * ry);
        return j;
    };
}

SurfaceMetric SurfaceMetric::conformal_flat(ScalarField2 phi, int eps1, int eps2, std::optional<Box> support) {
    SurfaceMetric m = general(phi, zero_jet, Mat2::Zero(), eps1, eps2, support);
    m.form_ = Form::conformal_flat;
    m.closed_k_ = [phi, eps1, eps2](double x, double y) {
        const ScalarJet p = phi(x, y);
        return -std::exp(-2.0 * p.value) * (eps1 * p.hess(0, 0) + eps2 * p.hess(1, 1));
    };
    return m;
}

SurfaceMetric SurfaceMetric::general(ScalarField2 phi, ScalarField2 beta, const Mat2& h, int eps1, int eps2,
                                     std::optional<Box> support) {
    require_sign(eps1, "eps1");
    require_sign(eps2, "eps2");
    if ((h - h.transpose()).norm() > 0.0) throw PreconditionError("SurfaceMetric::general: H must be symmetric");
    SurfaceMetric m;
    m.form_ = Form::general;
    m.eps1_ = eps1;
    m.eps2_ = eps2;
    m.support_ = support;
    const Mat2 eta = diag2(eps1, eps2);
    m.jet_ = [phi, beta, h, eta](double x, double y) {
        const ScalarJet p = phi(x, y);
        const ScalarJet b = beta(x, y);
        const double e = std::exp(2.0 * p.value);
        const Mat2 base = eta + b.value * h;
        MetricJet j;
        j.g = e * base;
        for (int a = 0; a < 2; ++a) {
            j.dg[a] = e * (2.0 * p.grad(a) * base + b.grad(a) * h);
            for (int c = 0; c < 2; ++c) {
                j.ddg[a][c] = e * ((4.0 * p.grad(a) * p.grad(c) + 2.0 * p.hess(a, c)) * base +
                                   2.0 * (p.grad(a) * b.grad(c) + p.grad(c) * b.grad(a)) * h + b.hess(a, c) * h);
            }
        }
        return j;
    };
    if (support) {
        // Signature must not change inside the support.
        const int expected = (eps1 < 0) + (eps2 < 0);
        for (int i = 0; i <= 32; ++i) {
            for (int k = 0; k <= 32; ++k) {
                const double x = support->x0 + (support->x1 - support->x0) * i / 32;
                const double y = support->y0 + (support->y1 - support->y0) * k / 32;
                const Eigen::SelfAdjointEigenSolver<Mat2> es(m.jet_(x, y).g);
                const int neg = (es.eigenvalues().array() < 0).count();
                if (neg != expected || es.eigenvalues().cwiseAbs().minCoeff() < 1e-8) {
                    throw PreconditionError("SurfaceMetric::general: perturbation changes the signature");
                }
            }
        }
    }
    return m;
}

SurfaceMetric SurfaceMetric::fermi(ScalarField2 e, double period) {
    if (!(period > 0.0)) throw PreconditionError("SurfaceMetric::fermi: period must be positive");
    for (int i = 0; i < 64; ++i) {
        const double s = period * i / 64;
        const ScalarJet j = e(s, 0.0);
        if (std::abs(j.value - 1.0) > 1e-12 || std::abs(j.grad(1)) > 1e-12) {
            throw PreconditionError("SurfaceMetric::fermi: need E(s,0) = 1 and E_t(s,0) = 0 along the geodesic");
        }
    }
    SurfaceMetric m;
    m.form_ = Form::fermi;
    m.period_ = period;
    m.fermi_e_ = e;
    m.jet_ = [e](double s, double t) {
        const ScalarJet j = e(s, t);
        MetricJet out;
        out.g = diag2(j.value * j.value, 1.0);
        for (int a = 0; a < 2; ++a) {
            out.dg[a] = diag2(2.0 * j.value * j.grad(a), 0.0);
            for (int c = 0; c < 2; ++c) {
                out.ddg[a][c] = diag2(2.0 * (j.grad(a) * j.grad(c) + j.value * j.hess(a, c)), 0.0);
            }
        }
        return out;
    };
    m.closed_k_ = [e](double s, double t) {
        const ScalarJet j = e(s, t);
        return -j.hess(1, 1) / j.value;
    };
    return m;
}

SurfaceMetric SurfaceMetric::warped2d(ScalarFunction w, ScalarFunction dw, ScalarFunction ddw, int eps1, int eps2) {
    require_sign(eps1, "eps1");
    require_sign(eps2, "eps2");
    SurfaceMetric m;
    m.form_ = Form::warped2d;
    m.eps1_ = eps1;
    m.eps2_ = eps2;
    m.w_ = w;
    m.dw_ = dw;
    m.jet_ = [w, dw, ddw, eps1, eps2](double, double y) {
        const double a = w(y), b = dw(y), c = ddw(y);
        MetricJet j;
        j.g = diag2(eps1 * a * a, eps2);
        j.dg[1] = diag2(2.0 * eps1 * a * b, 0.0);
        j.ddg[1][1] = diag2(2.0 * eps1 * (b * b + a * c), 0.0);
        return j;
    };
    m.closed_k_ = [w, ddw, eps2](double, double y) { return -eps2 * ddw(y) / w(y); };
    return m;
}

SurfaceMetric SurfaceMetric::flat(int eps1, int eps2) {
    SurfaceMetric m = conformal_flat(zero_jet, eps1, eps2, Box{0.0, 0.0, 0.0, 0.0});
    return m;
}

std::optional<double> SurfaceMetric::closed_form_curvature(double x, double y) const {
    if (!closed_k_) return std::nullopt;
    return closed_k_(x, y);
}

const ScalarField2& SurfaceMetric::fermi_e() const {
    if (form_ != Form::fermi) throw PreconditionError("SurfaceMetric: not a Fermi metric");
    return fermi_e_;
}

double SurfaceMetric::warp(double y) const {
    if (form_ != Form::warped2d) throw PreconditionError("SurfaceMetric: not a warped metric");
    return w_(y);
}

double SurfaceMetric::warp_derivative(double y) const {
    if (form_ != Form::warped2d) throw PreconditionError("SurfaceMetric: not a warped metric");
    return dw_(y);
}

std::array<Mat2, 2> christoffel(const MetricJet& j) {
    const Mat2 gi = j.g.inverse();
    std::array<Mat2, 2> gam{Mat2::Zero(), Mat2::Zero()};
    for (int k = 0; k < 2; ++k) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                double s = 0.0;
                for (int l = 0; l < 2; ++l) s += gi(k, l) * (j.dg[a](l, b) + j.dg[b](l, a) - j.dg[l](a, b));
                gam[k](a, b) = 0.5 * s;
            }
        }
    }
    return gam;
}

double curvature_from_jet(const MetricJet& j) {
    const double det = j.g.determinant();
    if (std::abs(det) < 1e-14) throw PreconditionError("gaussian_curvature: degenerate metric");
    const Mat2 gi = j.g.inverse();
    const std::array<Mat2, 2> gam = christoffel(j);
    // dgam[p][k](a,b) = d_p Gamma^k_ab.
    std::array<std::array<Mat2, 2>, 2> dgam;
    for (int p = 0; p < 2; ++p) {
        const Mat2 dgi = -gi * j.dg[p] * gi;
        for (int k = 0; k < 2; ++k) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    double s = 0.0;
                    for (int l = 0; l < 2; ++l) {
                        const double first = j.dg[a](l, b) + j.dg[b](l, a) - j.dg[l](a, b);
                        const double second = j.ddg[p][a](l, b) + j.ddg[p][b](l, a) - j.ddg[p][l](a, b);
                        s += dgi(k, l) * first + gi(k, l) * second;
                    }
                    dgam[p][k](a, b) = 0.5 * s;
                }
            }
        }
    }
    // R(d_x, d_y) d_y, component m.
    Vec2 r;
    for (int m = 0; m < 2; ++m) {
        double s = dgam[0][m](1, 1) - dgam[1][m](0, 1);
        for (int l = 0; l < 2; ++l) s += gam[m](0, l) * gam[l](1, 1) - gam[m](1, l) * gam[l](0, 1);
        r(m) = s;
    }
    const double r1221 = j.g.row(0).dot(r);
    return r1221 / det;
}

double gaussian_curvature(const SurfaceMetric& m, double x, double y) {
    const Mat2 g = m.g(x, y);
    if (std::abs(g.determinant()) < 1e-14) throw PreconditionError("gaussian_curvature: degenerate metric");
    if (auto k = m.closed_form_curvature(x, y)) return *k;
    return curvature_from_jet(m.jet(x, y));
}

Frame frame_extension(const SurfaceMetric& m, double x, double y) {
    const Mat2 g = m.g(x, y);
    auto ip = [&g](const Vec2& a, const Vec2& b) { return a.dot(g * b); };
    Frame f;
    const Vec2 ex(1.0, 0.0);
    const Vec2 ey(0.0, 1.0);
    const double gxx = ip(ex, ex);
    if (gxx * m.eps1() <= 0.0) throw PreconditionError("frame_extension: d/dx changed causal type");
    const Vec2 u = ex / std::sqrt(std::abs(gxx));
    if (m.index() != 1) {
        f.e1 = u;
        Vec2 v = ey - ip(ey, u) / ip(u, u) * u;
        f.e2 = v / std::sqrt(std::abs(ip(v, v)));
        return f;
    }
    // Null directions (1, mu) solve g11 + 2 g12 mu + g22 mu^2 = 0.
    const double a = g(0, 0), b = g(0, 1), c = g(1, 1);
    const double disc = b * b - a * c;
    if (!(disc > 0.0) || c == 0.0) throw PreconditionError("frame_extension: metric is not Lorentzian here");
    const double sq = std::sqrt(disc);
    double mu_hi = (-b + sq) / c;
    double mu_lo = (-b - sq) / c;
    if (mu_hi < mu_lo) std::swap(mu_hi, mu_lo);
    const Vec2 np(1.0, mu_hi);
    const Vec2 nm(1.0, mu_lo);
    const Vec2 s = np + nm;
    const Vec2 d = np - nm;
    const double gs = ip(s, s);
    const double gd = ip(d, d);
    if (gs * m.eps1() <= 0.0 || gd * m.eps2() <= 0.0) throw PreconditionError("frame_extension: polarization lost");
    f.e1 = s / std::sqrt(std::abs(gs));
    f.e2 = d / std::sqrt(std::abs(gd));
    f.boost_angle = std::acosh(std::max(1.0, std::abs(ip(f.e1, u))));
    return f;
}

double frame_orthonormality_defect(const SurfaceMetric& m, const Box& box, int n) {
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double x = box.x0 + (box.x1 - box.x0) * (i + 0.5) / n;
            const double y = box.y0 + (box.y1 - box.y0) * (j + 0.5) / n;
            const Mat2 g = m.g(x, y);
            const Frame f = frame_extension(m, x, y);
            if (f.e1(0) * f.e2(1) - f.e1(1) * f.e2(0) <= 0.0) return std::numeric_limits<double>::infinity();
            worst = std::max({worst, std::abs(f.e1.dot(g * f.e1) - m.eps1()), std::abs(f.e2.dot(g * f.e2) - m.eps2()),
                              std::abs(f.e1.dot(g * f.e2))});
        }
    }
    return worst;
}

double connection_form(const SurfaceMetric& m, double x, double y, const Vec2& v) {
    const double h = frame_fd_step();
    const MetricJet j = m.jet(x, y);
    const Frame f = frame_extension(m, x, y);
    // Directional derivative of e2 along v by central differences.
    const Vec2 de2 = (frame_extension(m, x + h * v(0), y + h * v(1)).e2 -
                      frame_extension(m, x - h * v(0), y - h * v(1)).e2) /
                     (2.0 * h);
    const std::array<Mat2, 2> gam = christoffel(j);
    Vec2 nab = de2;
    for (int k = 0; k < 2; ++k) nab(k) += v.dot(gam[k] * f.e2);
    return m.eps1() * nab.dot(j.g * f.e1);
}

namespace {

GaussBonnetLevel gauss_bonnet_level(const SurfaceMetric& m, const Box& d, int n) {
    GaussBonnetLevel lv;
    lv.n = n;
    const double hx = (d.x1 - d.x0) / n;
    const double hy = (d.y1 - d.y0) / n;
    // Fixed summation order: row sums first, then rows in order.
    double interior = 0.0;
    for (int r = 0; r < n; ++r) {
        const double y = d.y0 + (r + 0.5) * hy;
        double row = 0.0;
        for (int c = 0; c < n; ++c) {
            const double x = d.x0 + (c + 0.5) * hx;
            const Mat2 g = m.g(x, y);
            row += gaussian_curvature(m, x, y) * std::sqrt(std::abs(g.determinant()));
        }
        interior += row;
    }
    lv.interior = interior * hx * hy;

    double loop = 0.0;
    for (int i = 0; i < n; ++i) {
        const double xm = d.x0 + (i + 0.5) * hx;
        const double ym = d.y0 + (i + 0.5) * hy;
        loop += connection_form(m, xm, d.y0, Vec2(1.0, 0.0)) * hx;
        loop += connection_form(m, d.x1, ym, Vec2(0.0, 1.0)) * hy;
        loop += connection_form(m, xm, d.y1, Vec2(-1.0, 0.0)) * hx;
        loop += connection_form(m, d.x0, ym, Vec2(0.0, -1.0)) * hy;
    }
    lv.boundary = flux_sign(m) * m.eps1() * loop;
    lv.defect = lv.interior - lv.boundary;
    return lv;
}

}  // namespace

GaussBonnetResult gauss_bonnet_defect(const SurfaceMetric& m, const Box& domain, const GaussBonnetOptions& opt) {
    if (opt.grids.empty()) throw PreconditionError("gauss_bonnet_defect: no grids");
    if (!opt.allow_curved_boundary) {
        if (!m.support()) throw PreconditionError("gauss_bonnet_defect: metric has no declared support");
        const Box& s = *m.support();
        if (!(s.x0 > domain.x0 && s.x1 < domain.x1 && s.y0 > domain.y0 && s.y1 < domain.y1)) {
            throw PreconditionError("gauss_bonnet_defect: metric is not standard near the boundary of D");
        }
    }
    GaussBonnetResult out;
    for (int n : opt.grids) out.levels.push_back(gauss_bonnet_level(m, domain, n));
    const GaussBonnetLevel& fine = out.levels.back();
    out.interior = fine.interior;
    out.boundary = fine.boundary;
    out.defect = fine.defect;

    out.observed_order = std::numeric_limits<double>::infinity();
    for (std::size_t i = out.levels.size() - 1; i > 0; --i) {
        const double f = std::abs(out.levels[i].defect);
        const double c = std::abs(out.levels[i - 1].defect);
        if (f <= opt.roundoff_floor && c <= opt.roundoff_floor) continue;
        if (f <= opt.roundoff_floor) break;  // converged to rounding between these levels
        const double ratio = static_cast<double>(out.levels[i].n) / out.levels[i - 1].n;
        out.observed_order = std::log(c / f) / std::log(ratio);
        break;
    }
    return out;
}

// Calabi ---------------------------------------------------------------------

CalabiProfile CalabiProfile::constant(double k) {
    CalabiProfile p;
    p.k = [k](double) { return k; };
    std::ostringstream os;
    os << "k = " << k;
    p.description = os.str();
    return p;
}

CalabiProfile CalabiProfile::step(double t1) {
    CalabiProfile p;
    p.k = [t1](double t) { return t < t1 ? 0.0 : 1.0; };
    if (t1 > 0.0) p.breakpoints = {t1};
    std::ostringstream os;
    os << "step at " << t1;
    p.description = os.str();
    return p;
}

CalabiProfile CalabiProfile::piecewise(std::vector<double> switches, std::vector<double> values) {
    if (values.size() != switches.size() + 1) throw PreconditionError("CalabiProfile: one value more than switches");
    for (std::size_t i = 1; i < switches.size(); ++i) {
        if (!(switches[i] > switches[i - 1])) throw PreconditionError("CalabiProfile: switches must increase");
    }
    CalabiProfile p;
    p.breakpoints = switches;
    p.k = [switches, values](double t) {
        const auto i = std::upper_bound(switches.begin(), switches.end(), t) - switches.begin();
        return values[static_cast<std::size_t>(i)];
    };
    p.description = "piecewise constant";
    return p;
}

std::vector<double> CalabiSolution::times() const {
    std::vector<double> out;
    const double end = has_zero() ? beta : t_max;
    for (const auto& s : dense->steps()) {
        if (s.t0 <= end) out.push_back(s.t0);
    }
    out.push_back(end);
    return out;
}

CalabiSolution calabi_ode(const CalabiProfile& profile, double t_max, const ode::Controls& controls) {
    if (!profile.k) throw PreconditionError("calabi_ode: empty profile");
    std::vector<double> bounds{0.0};
    for (double b : profile.breakpoints) {
        if (b > 0.0 && b < t_max) bounds.push_back(b);
    }
    bounds.push_back(t_max);
    // k is sampled inside every piece; piecewise-continuous profiles are the intended input.
    for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
        for (int i = 0; i <= 16; ++i) {
            const double t = bounds[p] + (bounds[p + 1] - bounds[p]) * (0.001 + 0.998 * i / 16);
            const double k = profile.k(t);
            if (!(k >= 0.0 && k <= 1.0)) {
                std::ostringstream os;
                os << "calabi_ode: k(" << t << ") = " << k << " outside [0, 1]";
                throw PreconditionError(os.str());
            }
        }
    }

    auto dense = std::make_shared<ode::DenseSolution>();
    CalabiSolution sol;
    sol.profile = profile;
    sol.t_max = t_max;
    sol.beta = std::numeric_limits<double>::infinity();

    ode::Vector y(2);
    y << 1.0, 0.0;
    bool hit = false;
    for (std::size_t p = 0; p + 1 < bounds.size() && !hit; ++p) {
        // Evaluate k inside the piece so a jump at the left end is honoured.
        const double lo = bounds[p], hi = bounds[p + 1];
        const ScalarFunction& k = profile.k;
        const ode::Rhs f = [&k, lo, hi](double t, const ode::Vector& v, ode::Vector& dv) {
            const double te = std::clamp(t, lo + 1e-12 * (hi - lo), hi - 1e-12 * (hi - lo));
            dv(0) = v(1);
            dv(1) = -k(te) * v(0);
        };
        ode::Hooks hooks;
        hooks.stop = [](double, const ode::Vector& v) { return v(0) <= 0.0; };
        const ode::Result r = ode::integrate(f, lo, y, hi, controls, *dense, hooks);
        if (r.reason == ode::StopReason::step_underflow || r.reason == ode::StopReason::step_limit) {
            throw IntegrationError("calabi_ode: stiff-failure, integrator could not progress");
        }
        y = r.y;
        hit = r.reason == ode::StopReason::escaped || y(0) <= 0.0;
    }
    if (hit) {
        const ode::DenseStep& last = dense->steps().back();
        double a = last.t0, b = last.t1();
        while (b - a > 1e-12) {
            const double mid = 0.5 * (a + b);
            (last.value(mid)(0) > 0.0 ? a : b) = mid;
        }
        sol.beta = 0.5 * (a + b);
        sol.y_prime_at_beta = last.value(sol.beta)(1);
    }
    sol.dense = dense;
    return sol;
}

CalabiInvariants calabi_invariants(const CalabiSolution& s, int samples) {
    CalabiInvariants out;
    const double end = s.has_zero() ? s.beta : s.t_max;
    std::vector<double> ts;
    for (int i = 0; i <= samples; ++i) ts.push_back(end * i / samples);
    for (double t : s.times()) ts.push_back(t);
    std::sort(ts.begin(), ts.end());
    out.min_neg_yp = std::numeric_limits<double>::infinity();
    out.max_neg_yp = -std::numeric_limits<double>::infinity();
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (double t : ts) {
        const ode::Vector v = s.dense->value(t);
        const double e = v(0) * v(0) + v(1) * v(1);
        out.min_neg_yp = std::min(out.min_neg_yp, -v(1));
        out.max_neg_yp = std::max(out.max_neg_yp, -v(1));
        out.max_energy = std::max(out.max_energy, e);
        if (std::isfinite(prev)) out.max_energy_increase = std::max(out.max_energy_increase, e - prev);
        prev = e;
    }
    out.holds = out.min_neg_yp >= -1e-12 && out.max_neg_yp <= 1.0 + 1e-9 && out.max_energy <= 1.0 + 1e-9 &&
                out.max_energy_increase <= 1e-9;
    return out;
}

CalabiRigidity calabi_rigidity_scan(const CalabiSolution& s) {
    if (!s.has_zero()) throw PreconditionError("calabi_rigidity_scan: y has no zero before t_max");
    CalabiRigidity out;
    out.min_y_prime = s.y_prime_at_beta;
    for (int i = 0; i <= 4000; ++i) out.min_y_prime = std::min(out.min_y_prime, s.y_prime(s.beta * i / 4000));
    out.reaches_minus_one = out.min_y_prime <= -1.0 + 1e-6;
    out.t1 = s.beta - M_PI / 2;
    out.beta_at_least_half_pi = s.beta >= M_PI / 2 - 1e-9;
    const int n = 200000;
    const double h = s.beta / n;
    double l1 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = (i + 0.5) * h;
        const double step = t < out.t1 ? 0.0 : 1.0;
        l1 += std::abs(s.profile.k(t) - step) * h;
    }
    out.l1_distance_to_step = l1;
    out.matches_step = l1 <= 1e-4;
    out.consistent = !out.reaches_minus_one || (out.matches_step && out.beta_at_least_half_pi);
    return out;
}

LengthBound geodesic_length_bound(const SurfaceMetric& m, const ScalarFunction& beta) {
    const ScalarField2& e = m.fermi_e();
    const double len = m.period();
    for (int i = 0; i <= 64; ++i) {
        const double s = len * i / 64;
        const double b = beta(s);
        for (int k = 0; k <= 64; ++k) {
            const double t = b * k / 64;
            const ScalarJet j = e(s, t);
            if (k < 64 && !(j.value > 0.0)) throw PreconditionError("geodesic_length_bound: E vanishes before beta(s)");
            if (!(j.value > 0.0)) continue;
            const double kk = -j.hess(1, 1) / j.value;
            if (kk < -1e-9 || kk > 1.0 + 1e-9) {
                std::ostringstream os;
                os << "geodesic_length_bound: K = " << kk << " outside [0, 1] at (" << s << ", " << t << ")";
                throw PreconditionError(os.str());
            }
        }
    }
    LengthBound out;
    out.length = len;
    auto flux = [&](double s) { return -e(s, beta(s)).grad(1); };
    out.total_curvature = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(flux, 0.0, len, 15, 1e-14);
    out.holds = out.total_curvature <= len + 1e-9;
    return out;
}

const char* to_string(FlatOutsideResult::Status s) {
    switch (s) {
        case FlatOutsideResult::Status::certified: return "certified";
        case FlatOutsideResult::Status::unrealized_by_ansatz: return "unrealized-by-ansatz";
        case FlatOutsideResult::Status::zero_curvature: return "zero-curvature";
    }
    return "?";
}

FlatOutsideResult construct_flat_outside_halfplane(int sign_target, int eps1, int eps2, double amplitude) {
    require_sign(sign_target, "sign_target");
    require_sign(eps1, "eps1");
    require_sign(eps2, "eps2");
    FlatOutsideResult out;
    if (amplitude == 0.0) {
        out.status = FlatOutsideResult::Status::zero_curvature;
        out.cause = "w = 1 gives K = 0 identically; a non-flat metric was requested";
        return out;
    }
    if (!(amplitude > 0.0)) throw PreconditionError("construct_flat_outside_halfplane: amplitude must be positive");
    if (sign_target != -eps2) {
        out.cause = "K = -eps2 w''/w; a warp bounded below with bounded slope is convex, so only sign -eps2 "
                    "is reachable by this ansatz";
        return out;
    }
    const double a = amplitude;
    auto w = [a](double y) {
        const double u = y - 1.0;
        return u > 0.0 ? 1.0 + a * u * std::exp(-1.0 / u) : 1.0;
    };
    auto dw = [a](double y) {
        const double u = y - 1.0;
        return u > 0.0 ? a * std::exp(-1.0 / u) * (1.0 + 1.0 / u) : 0.0;
    };
    auto ddw = [a](double y) {
        const double u = y - 1.0;
        return u > 0.0 ? a * std::exp(-1.0 / u) / (u * u * u) : 0.0;
    };
    SurfaceMetric m = SurfaceMetric::warped2d(w, dw, ddw, eps1, eps2);
    out.k_min = std::numeric_limits<double>::infinity();
    out.k_max = -std::numeric_limits<double>::infinity();
    out.w_min = std::numeric_limits<double>::infinity();
    out.dw_max = 0.0;
    bool standard_below = true;
    for (int i = 0; i <= 22000; ++i) {
        const double y = -2.0 + 1e-3 * i;
        const double k = gaussian_curvature(m, 0.0, y);
        out.k_min = std::min(out.k_min, k);
        out.k_max = std::max(out.k_max, k);
        out.w_min = std::min(out.w_min, w(y));
        out.dw_max = std::max(out.dw_max, std::abs(dw(y)));
        if (y <= 1.0) standard_below = standard_below && w(y) == 1.0 && dw(y) == 0.0;
    }
    const bool signed_ok = sign_target > 0 ? out.k_min >= 0.0 : out.k_max <= 0.0;
    const bool nonzero = std::max(std::abs(out.k_min), std::abs(out.k_max)) > 1e-12;
    // Sufficient completeness certificate: w >= c > 0 and |w'| <= a.
    const bool complete = out.w_min >= 1.0 && out.dw_max <= a;
    if (signed_ok && nonzero && complete && standard_below) {
        out.status = FlatOutsideResult::Status::certified;
        out.metric = m;
    } else {
        out.status = FlatOutsideResult::Status::unrealized_by_ansatz;
        out.cause = "grid certification failed";
    }
    return out;
}

void write_grid_field(std::ostream& os, const GridField& f) {
    char buf[64];
    os << "nx,ny,x0,y0,dx,dy\n";
    os << f.nx << ',' << f.ny;
    for (double v : {f.x0, f.y0, f.dx, f.dy}) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << ',' << buf;
    }
    os << '\n';
    for (int j = 0; j < f.ny; ++j) {
        for (int i = 0; i < f.nx; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", f.values[static_cast<std::size_t>(j) * f.nx + i]);
            os << (i ? "," : "") << buf;
        }
        os << '\n';
    }
}

GridField read_grid_field(std::istream& is) {
    auto fail = [](const std::string& why) { throw PreconditionError("read_grid_field: " + why); };
    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(tok);
        return out;
    };
    auto num = [&fail](const std::string& s) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            fail("bad number '" + s + "'");
        }
        if (pos != s.size()) fail("bad number '" + s + "'");
        return v;
    };
    std::string line;
    if (!std::getline(is, line) || line != "nx,ny,x0,y0,dx,dy") fail("missing header");
    if (!std::getline(is, line)) fail("missing dimensions");
    const auto head = split(line);
    if (head.size() != 6) fail("dimension line needs six fields");
    GridField f;
    f.nx = static_cast<int>(num(head[0]));
    f.ny = static_cast<int>(num(head[1]));
    f.x0 = num(head[2]);
    f.y0 = num(head[3]);
    f.dx = num(head[4]);
    f.dy = num(head[5]);
    if (f.nx < 0 || f.ny < 0) fail("negative size");
    for (int j = 0; j < f.ny; ++j) {
        if (!std::getline(is, line)) fail("missing row " + std::to_string(j));
        const auto row = split(line);
        if (static_cast<int>(row.size()) != f.nx) fail("row " + std::to_string(j) + " has the wrong length");
        for (const auto& tok : row) f.values.push_back(num(tok));
    }
    return f;
}

GridField curvature_grid(const SurfaceMetric& m, const Box& box, int nx, int ny) {
    if (nx < 2 || ny < 2) throw PreconditionError("curvature_grid: need at least 2 x 2 points");
    GridField f;
    f.nx = nx;
    f.ny = ny;
    f.x0 = box.x0;
    f.y0 = box.y0;
    f.dx = (box.x1 - box.x0) / (nx - 1);
    f.dy = (box.y1 - box.y0) / (ny - 1);
    f.values.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) f.values.push_back(gaussian_curvature(m, f.x0 + i * f.dx, f.y0 + j * f.dy));
    }
    return f;
}

}  // namespace riccmp
