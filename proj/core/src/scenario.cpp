#include "riccmp/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include "riccmp/comparison.hpp"
#include "riccmp/error.hpp"
#include "riccmp/riccati.hpp"
#include "riccmp/suites.hpp"
#include "riccmp/surface.hpp"
#include "riccmp/warped_models.hpp"

namespace riccmp {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Literal lexer -------------------------------------------------------------

struct Token {
    enum Type { number, ident, punct, end } type = end;
    double value = 0.0;
    std::string text;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }
    void expect(const std::string& p) {
        if (tok_.type != Token::punct || tok_.text != p) fail("expected '" + p + "'");
        advance();
    }
    double number() {
        if (tok_.type != Token::number) fail("expected a number");
        return take().value;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw PreconditionError(why + (tok_.type == Token::end ? " at end of value" : " near '" + tok_.text + "'"));
    }

private:
    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        tok_ = {};
        if (pos_ >= s_.size()) return;
        const char c = s_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t b = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            tok_.type = Token::ident;
            tok_.text = s_.substr(b, pos_ - b);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* endp = nullptr;
            const double v = std::strtod(begin, &endp);
            if (endp == begin || !std::isfinite(v)) {
                tok_.type = Token::punct;
                tok_.text = std::string(1, c);
                throw PreconditionError("bad number near '" + s_.substr(pos_, 8) + "'");
            }
            tok_.type = Token::number;
            tok_.value = v;
            tok_.text = std::string(begin, static_cast<std::size_t>(endp - begin));
            pos_ += static_cast<std::size_t>(endp - begin);
            return;
        }
        tok_.type = Token::punct;
        tok_.text = std::string(1, c);
        ++pos_;
    }

    std::string s_;
    std::size_t pos_ = 0;
    Token tok_;
};

std::vector<double> number_list(Lexer& lx, const std::string& close) {
    std::vector<double> out;
    out.push_back(lx.number());
    while (lx.peek().type == Token::punct && lx.peek().text == ",") {
        lx.take();
        out.push_back(lx.number());
    }
    lx.expect(close);
    return out;
}

MatrixExpr parse_matrix(Lexer& lx) {
    MatrixExpr m;
    const Token t = lx.peek();
    if (t.type == Token::ident) {
        lx.take();
        if (t.text == "zero") {
            m.form = MatrixExpr::Form::zero;
        } else if (t.text == "identity") {
            m.form = MatrixExpr::Form::identity;
        } else if (t.text == "diag") {
            m.form = MatrixExpr::Form::diag;
            lx.expect("(");
            m.diag = number_list(lx, ")");
        } else {
            throw PreconditionError("unknown matrix name '" + t.text + "'");
        }
        return m;
    }
    lx.expect("[");
    std::vector<std::vector<double>> rows;
    lx.expect("[");
    rows.push_back(number_list(lx, "]"));
    while (lx.peek().type == Token::punct && lx.peek().text == ",") {
        lx.take();
        lx.expect("[");
        rows.push_back(number_list(lx, "]"));
    }
    lx.expect("]");
    const std::size_t n = rows.size();
    for (const auto& r : rows) {
        if (r.size() != n) throw PreconditionError("matrix literal must be square");
    }
    m.form = MatrixExpr::Form::dense;
    m.dense.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m.dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return m;
}

void expect_end(Lexer& lx) {
    if (lx.peek().type != Token::end) lx.fail("unexpected trailing input");
}

MatrixExpr parse_matrix_value(const std::string& s) {
    Lexer lx(s);
    MatrixExpr m = parse_matrix(lx);
    expect_end(lx);
    return m;
}

ProfileExpr parse_profile_value(const std::string& s) {
    Lexer lx(s);
    ProfileExpr p;
    p.pieces.push_back(parse_matrix(lx));
    while (lx.peek().type == Token::ident && lx.peek().text == "until") {
        lx.take();
        p.switches.push_back(lx.number());
        if (lx.peek().type != Token::ident || lx.peek().text != "then") lx.fail("expected 'then'");
        lx.take();
        p.pieces.push_back(parse_matrix(lx));
    }
    expect_end(lx);
    for (std::size_t i = 0; i < p.switches.size(); ++i) {
        if (!(p.switches[i] > 0.0) || (i > 0 && !(p.switches[i] > p.switches[i - 1]))) {
            throw PreconditionError("switch times must be positive and increasing");
        }
    }
    return p;
}

std::string format_matrix(const MatrixExpr& m) {
    switch (m.form) {
        case MatrixExpr::Form::zero: return "zero";
        case MatrixExpr::Form::identity: return "identity";
        case MatrixExpr::Form::diag: {
            std::string s = "diag(";
            for (std::size_t i = 0; i < m.diag.size(); ++i) s += (i ? ", " : "") + fmt(m.diag[i]);
            return s + ")";
        }
        case MatrixExpr::Form::dense: {
            std::string s = "[";
            for (Eigen::Index i = 0; i < m.dense.rows(); ++i) {
                s += i ? ", [" : "[";
                for (Eigen::Index j = 0; j < m.dense.cols(); ++j) s += (j ? ", " : "") + fmt(m.dense(i, j));
                s += "]";
            }
            return s + "]";
        }
    }
    return {};
}

double parse_number(const std::string& s) {
    const char* b = s.c_str();
    char* e = nullptr;
    const double v = std::strtod(b, &e);
    if (e == b || *e != '\0' || !std::isfinite(v)) throw PreconditionError("expected a finite number, got '" + s + "'");
    return v;
}

long long parse_integer(const std::string& s) {
    const char* b = s.c_str();
    char* e = nullptr;
    const long long v = std::strtoll(b, &e, 10);
    if (e == b || *e != '\0') throw PreconditionError("expected an integer, got '" + s + "'");
    return v;
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(trim(tok));
    return out;
}

ConfigValue parse_value(ValueType type, const std::string& raw) {
    switch (type) {
        case ValueType::integer: return parse_integer(raw);
        case ValueType::number: return parse_number(raw);
        case ValueType::text:
            return raw;
        case ValueType::numbers: {
            NumberList out;
            for (const auto& t : split_commas(raw)) out.push_back(parse_number(t));
            return out;
        }
        case ValueType::names: {
            NameList out;
            for (const auto& t : split_commas(raw)) {
                if (t.empty() || t.find_first_of(" \t") != std::string::npos) {
                    throw PreconditionError("expected a comma separated list of names");
                }
                out.push_back(t);
            }
            return out;
        }
        case ValueType::matrix: return parse_matrix_value(raw);
        case ValueType::profile: return parse_profile_value(raw);
    }
    throw PreconditionError("unsupported value type");
}

// Key tables ------------------------------------------------------------------

using V = ValueType;

const std::vector<KeySpec>& common_keys() {
    static const std::vector<KeySpec> k{
        {"description", V::text, "free text"},
        {"plot", V::names, "CSV columns to export as two-column .dat series"},
        {"abs_tol", V::number, "integrator absolute tolerance"},
        {"rel_tol", V::number, "integrator relative tolerance"},
        {"max_step", V::number, "integrator maximum step"},
    };
    return k;
}

const std::vector<KeySpec>& space_keys() {
    static const std::vector<KeySpec> k{
        {"n", V::integer, "dimension"},
        {"index", V::integer, "number of negative directions (standard form puts them first)"},
        {"gram", V::matrix, "explicit Gram matrix; overrides index"},
    };
    return k;
}

std::vector<KeySpec> build_keys(ScenarioKind kind) {
    std::vector<KeySpec> k = common_keys();
    auto add = [&k](std::initializer_list<KeySpec> more) { k.insert(k.end(), more.begin(), more.end()); };
    auto add_space = [&]() { k.insert(k.end(), space_keys().begin(), space_keys().end()); };
    switch (kind) {
        case ScenarioKind::riccati:
            add_space();
            add({{"profile", V::profile, "curvature profile R(t)"},
                 {"s0", V::matrix, "initial shape operator (default zero)"},
                 {"t_end", V::number, "end of the integration interval"},
                 {"expect", V::text, "blowup | global"},
                 {"expect_t_star", V::number, "expected blow-up time"},
                 {"t_star_tol", V::number, "tolerance on the blow-up time (default 1e-6)"},
                 {"samples", V::integer, "rows in the trajectory CSV (default 201)"}});
            break;
        case ScenarioKind::jacobi:
            add_space();
            add({{"profile", V::profile, "curvature profile R(t)"},
                 {"f0", V::matrix, "F(0) (default identity)"},
                 {"f0_prime", V::matrix, "F'(0) (default zero)"},
                 {"t_end", V::number, "end of the integration interval"},
                 {"profile2", V::profile, "second profile for a determinant comparison"},
                 {"f0_2", V::matrix, "F(0) of the second field (default f0)"},
                 {"f0_prime_2", V::matrix, "F'(0) of the second field (default f0_prime)"},
                 {"expect_det_sign", V::integer, "+1 or -1: sign of det F1 - det F2 on [det_from, t_end]"},
                 {"det_from", V::number, "start of the determinant check (default 0.01)"},
                 {"samples", V::integer, "rows in the trajectory CSV (default 201)"}});
            break;
        case ScenarioKind::compare:
            add_space();
            add({{"suite", V::text, "randomized suite name"},
                 {"seed", V::integer, "suite seed (mandatory for suites)"},
                 {"instances", V::integer, "suite size"},
                 {"b", V::number, "suite interval end (default 1)"},
                 {"profile1", V::profile, "lower profile R1"},
                 {"profile2", V::profile, "upper profile R2"},
                 {"s1", V::matrix, "lower initial operator (default zero)"},
                 {"s2", V::matrix, "upper initial operator (default zero)"},
                 {"t_end", V::number, "end of the integration interval"},
                 {"samples", V::integer, "uniform comparison points (default 512)"}});
            break;
        case ScenarioKind::table1:
            add({{"row", V::integer, "row 1..6"},
                 {"k0", V::number, "fiber curvature (default: representative value of the row)"},
                 {"n", V::integer, "total dimension (default 3)"},
                 {"samples", V::integer, "sampled t values (default 100)"}});
            break;
        case ScenarioKind::calabi:
            add({{"calabi", V::text, "step | constant | piecewise | random"},
                 {"t1", V::number, "switch time of the step profile"},
                 {"k", V::number, "value of the constant profile"},
                 {"switches", V::numbers, "switch times of the piecewise profile"},
                 {"values", V::numbers, "values of the piecewise profile"},
                 {"seed", V::integer, "suite seed (random)"},
                 {"instances", V::integer, "suite size (random)"},
                 {"t_max", V::number, "integration cap (default 100)"},
                 {"expect_beta", V::number, "expected first zero"},
                 {"samples", V::integer, "rows in the CSV (default 401)"}});
            break;
        case ScenarioKind::gauss_bonnet:
            add({{"eps1", V::integer, "sign of dx^2"},
                 {"eps2", V::integer, "sign of dy^2"},
                 {"amplitude", V::number, "conformal bump amplitude (default 0.3)"},
                 {"center", V::numbers, "bump center (default 0, 0)"},
                 {"radius", V::numbers, "bump radii (default 1, 1)"},
                 {"perturbation", V::number, "off-diagonal bump amplitude, |p| <= 0.5 (default 0)"},
                 {"domain", V::numbers, "x0, x1, y0, y1 (default support enlarged by 0.5)"},
                 {"grids", V::numbers, "grid sizes (default 128, 256, 512)"},
                 {"allow_curved_boundary", V::integer, "1 to allow a domain cutting the bump"},
                 {"tolerance", V::number, "defect bound (default 1e-4)"},
                 {"min_order", V::number, "required observed order"},
                 {"seed", V::integer, "suite seed"},
                 {"instances", V::integer, "random bumps in this signature"}});
            break;
        case ScenarioKind::tube:
            add_space();
            add({{"p", V::matrix, "projection onto the tangent space of the submanifold"},
                 {"a", V::matrix, "shape operator on range(P) (default zero)"},
                 {"profile", V::profile, "curvature profile R(t)"},
                 {"t_end", V::number, "end of the integration interval"},
                 {"r", V::number, "radius at which the expansion is evaluated"},
                 {"x", V::numbers, "test vector"},
                 {"samples", V::integer, "rows in the CSV (default 201)"}});
            break;
        case ScenarioKind::curvature_bound:
            add({{"model", V::text, "model registry id"},
                 {"k0", V::number, "bound K0"},
                 {"direction", V::text, "geq | leq (default geq)"},
                 {"pairs", V::integer, "sampled pairs (default 10000)"},
                 {"seed", V::integer, "sampler seed (default 7)"},
                 {"t_lo", V::number, "lower t for warped models"},
                 {"t_hi", V::number, "upper t for warped models"},
                 {"expect", V::text, "holds | violated (default holds)"}});
            break;
    }
    return k;
}

const KeySpec* find_key(ScenarioKind kind, const std::string& key) {
    for (const auto& k : scenario_keys(kind)) {
        if (k.key == key) return &k;
    }
    return nullptr;
}

// Typed accessors ---------------------------------------------------------------

template <class T>
const T* get(const Scenario& s, const std::string& key) {
    auto it = s.values.find(key);
    if (it == s.values.end()) return nullptr;
    return std::get_if<T>(&it->second);
}

double num(const Scenario& s, const std::string& key, double fallback) {
    const double* v = get<double>(s, key);
    return v ? *v : fallback;
}

long long integer(const Scenario& s, const std::string& key, long long fallback) {
    const long long* v = get<long long>(s, key);
    return v ? *v : fallback;
}

std::string text(const Scenario& s, const std::string& key, const std::string& fallback = {}) {
    const std::string* v = get<std::string>(s, key);
    return v ? *v : fallback;
}

int natural_size(const Scenario& s) {
    int n = -1;
    for (const auto& [key, v] : s.values) {
        if (const auto* m = std::get_if<MatrixExpr>(&v)) n = std::max(n, m->size());
        if (const auto* p = std::get_if<ProfileExpr>(&v)) n = std::max(n, p->size());
    }
    return n;
}

InnerSpace scenario_space(const Scenario& s) {
    if (const MatrixExpr* g = get<MatrixExpr>(s, "gram")) {
        const int n = s.has("n") ? static_cast<int>(integer(s, "n", 0)) : g->size();
        if (n <= 0) throw PreconditionError("gram needs an explicit size (diag or dense) or n");
        if (s.has("index")) throw PreconditionError("give either gram or index, not both");
        return InnerSpace::from_gram(g->resolve(n));
    }
    int n = static_cast<int>(integer(s, "n", -1));
    if (n < 0) n = natural_size(s);
    if (n <= 0) throw PreconditionError("dimension unknown: set n, gram or a sized matrix");
    const int index = static_cast<int>(integer(s, "index", 0));
    if (index < 0 || index > n) throw PreconditionError("index must lie in [0, n]");
    return InnerSpace::standard(n, index);
}

Operator op(const Scenario& s, const std::string& key, const InnerSpace& space, MatrixExpr::Form fallback) {
    MatrixExpr def;
    def.form = fallback;
    const MatrixExpr* m = get<MatrixExpr>(s, key);
    return Operator(space, (m ? *m : def).resolve(space.dim()));
}

CurvatureProfile profile(const Scenario& s, const std::string& key, const InnerSpace& space) {
    const ProfileExpr* p = get<ProfileExpr>(s, key);
    if (!p) throw PreconditionError("missing profile '" + key + "'");
    return p->resolve(space);
}

ode::Controls ode_controls(const Scenario& s) {
    ode::Controls c;
    c.abs_tol = num(s, "abs_tol", c.abs_tol);
    c.rel_tol = num(s, "rel_tol", c.rel_tol);
    c.max_step = num(s, "max_step", c.max_step);
    return c;
}

// Validation ----------------------------------------------------------------------

const std::set<std::string>& suite_names() {
    static const std::set<std::string> s{"comparison",       "jacobi_consistency", "bracket", "wedge_positivity",
                                         "scalar_lower",     "scalar_upper",       "rank_one"};
    return s;
}

struct Validator {
    const Scenario& s;
    const std::map<std::string, int>& lines;
    int header_line;
    std::vector<Diagnostic>& diags;

    int line_of(const std::string& key) const {
        auto it = lines.find(key);
        return it == lines.end() ? header_line : it->second;
    }
    void error(const std::string& key, const std::string& msg) const {
        diags.push_back({line_of(key), "scenario '" + s.id + "': " + msg});
    }
    void require(const std::string& key) const {
        if (!s.has(key)) error(key, "missing required key '" + key + "'");
    }
    void positive(const std::string& key) const {
        if (const double* v = get<double>(s, key)) {
            if (!(*v > 0.0)) error(key, "'" + key + "' must be positive");
        }
        if (const long long* v = get<long long>(s, key)) {
            if (!(*v > 0)) error(key, "'" + key + "' must be positive");
        }
    }
    void one_of(const std::string& key, std::initializer_list<const char*> options) const {
        if (!s.has(key)) return;
        const std::string v = text(s, key);
        for (const char* o : options) {
            if (v == o) return;
        }
        std::string list;
        for (const char* o : options) list += (list.empty() ? "" : ", ") + std::string(o);
        error(key, "'" + key + "' must be one of: " + list);
    }
    void sign(const std::string& key) const {
        if (!s.has(key)) return;
        const long long v = integer(s, key, 0);
        if (v != 1 && v != -1) error(key, "'" + key + "' must be +1 or -1");
    }
    void list_size(const std::string& key, std::size_t n) const {
        if (const NumberList* l = get<NumberList>(s, key)) {
            if (l->size() != n) error(key, "'" + key + "' needs " + std::to_string(n) + " numbers");
        }
    }
    void space_and_operators() const {
        try {
            const InnerSpace space = scenario_space(s);
            for (const auto& [key, v] : s.values) {
                if (key == "gram") continue;
                try {
                    if (const auto* m = std::get_if<MatrixExpr>(&v)) (void)m->resolve(space.dim());
                    if (const auto* p = std::get_if<ProfileExpr>(&v)) (void)p->resolve(space);
                } catch (const Error& e) {
                    error(key, "'" + key + "': " + e.what());
                }
            }
        } catch (const Error& e) {
            error(s.has("gram") ? "gram" : "n", e.what());
        }
    }
};

void validate(const Scenario& s, const std::map<std::string, int>& lines, int header_line,
              std::vector<Diagnostic>& diags) {
    const Validator v{s, lines, header_line, diags};
    for (const char* k : {"abs_tol", "rel_tol", "max_step", "t_end", "t_star_tol", "tolerance", "samples", "t_max",
                          "instances", "b", "pairs", "r"}) {
        v.positive(k);
    }
    switch (s.kind) {
        case ScenarioKind::riccati:
            v.require("profile");
            v.require("t_end");
            v.one_of("expect", {"blowup", "global"});
            v.space_and_operators();
            break;
        case ScenarioKind::jacobi:
            v.require("profile");
            v.require("t_end");
            v.sign("expect_det_sign");
            if (s.has("expect_det_sign") && !s.has("profile2")) v.error("expect_det_sign", "needs profile2");
            v.space_and_operators();
            break;
        case ScenarioKind::compare:
            if (s.has("suite")) {
                if (!suite_names().count(text(s, "suite"))) v.error("suite", "unknown suite '" + text(s, "suite") + "'");
                v.require("seed");
                v.require("instances");
                for (const char* k : {"profile1", "profile2", "s1", "s2", "t_end", "n", "index", "gram"}) {
                    if (s.has(k)) v.error(k, std::string("'") + k + "' does not apply to suite scenarios");
                }
            } else {
                v.require("profile1");
                v.require("profile2");
                v.require("t_end");
                for (const char* k : {"seed", "instances", "b"}) {
                    if (s.has(k)) v.error(k, std::string("'") + k + "' only applies to suite scenarios");
                }
                v.space_and_operators();
            }
            break;
        case ScenarioKind::table1:
            v.require("row");
            if (s.has("row")) {
                const long long row = integer(s, "row", 0);
                if (row < 1 || row > 6) {
                    v.error("row", "'row' must be 1..6");
                } else {
                    try {
                        (void)table1_model(static_cast<int>(row),
                                           num(s, "k0", table1_default_k0(static_cast<int>(row))),
                                           static_cast<int>(integer(s, "n", 3)));
                    } catch (const Error& e) {
                        v.error(s.has("k0") ? "k0" : "row", e.what());
                    }
                }
            }
            break;
        case ScenarioKind::calabi: {
            v.require("calabi");
            v.one_of("calabi", {"step", "constant", "piecewise", "random"});
            const std::string c = text(s, "calabi");
            if (c == "step") v.require("t1");
            if (c == "constant") v.require("k");
            if (c == "piecewise") {
                v.require("switches");
                v.require("values");
            }
            if (c == "random") {
                v.require("seed");
                v.require("instances");
            }
            if (s.has("t1") && !(num(s, "t1", 0.0) >= 0.0)) v.error("t1", "'t1' must be non-negative");
            if (s.has("k") && !(num(s, "k", 0.0) >= 0.0 && num(s, "k", 0.0) <= 1.0)) v.error("k", "'k' must lie in [0, 1]");
            if (const NumberList* vals = get<NumberList>(s, "values")) {
                for (double x : *vals) {
                    if (!(x >= 0.0 && x <= 1.0)) v.error("values", "profile values must lie in [0, 1]");
                }
                const NumberList* sw = get<NumberList>(s, "switches");
                if (sw && sw->size() + 1 != vals->size()) v.error("values", "need one more value than switches");
            }
            break;
        }
        case ScenarioKind::gauss_bonnet:
            v.require("eps1");
            v.require("eps2");
            v.sign("eps1");
            v.sign("eps2");
            v.list_size("center", 2);
            v.list_size("radius", 2);
            v.list_size("domain", 4);
            if (s.has("instances")) v.require("seed");
            if (s.has("perturbation") && std::abs(num(s, "perturbation", 0.0)) > 0.5) {
                v.error("perturbation", "'perturbation' must satisfy |p| <= 0.5");
            }
            if (const NumberList* g = get<NumberList>(s, "grids")) {
                for (double x : *g) {
                    if (!(x >= 2 && x == std::floor(x))) v.error("grids", "grid sizes must be integers >= 2");
                }
            }
            if (const NumberList* r = get<NumberList>(s, "radius")) {
                for (double x : *r) {
                    if (!(x > 0.0)) v.error("radius", "radii must be positive");
                }
            }
            break;
        case ScenarioKind::tube:
            for (const char* k : {"p", "profile", "t_end", "r", "x"}) v.require(k);
            v.space_and_operators();
            if (s.has("r") && s.has("t_end") && num(s, "r", 0.0) >= num(s, "t_end", 0.0)) {
                v.error("r", "'r' must be below t_end");
            }
            break;
        case ScenarioKind::curvature_bound:
            v.require("model");
            v.require("k0");
            v.one_of("direction", {"geq", "leq"});
            v.one_of("expect", {"holds", "violated"});
            if (s.has("model")) {
                try {
                    (void)resolve_model(text(s, "model"));
                } catch (const Error& e) {
                    v.error("model", e.what());
                }
            }
            break;
    }
}

bool valid_id(const std::string& id) {
    if (id.empty()) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

// Output tables ---------------------------------------------------------------------

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::vector<std::string> operator_columns(const std::string& prefix, int n) {
    std::vector<std::string> c;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) c.push_back(prefix + "_" + std::to_string(i) + "_" + std::to_string(j));
    }
    return c;
}

void append_entries(std::vector<double>& row, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    }
}

class Emitter {
public:
    Emitter(const RunOptions& o, RunReport& r) : dir_(o.out_dir), report_(r) {}

    void csv(const std::string& suffix, const Table& t) {
        if (dir_.empty()) return;
        std::ostringstream os;
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
        os << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
            os << '\n';
        }
        write(report_.id + suffix + ".csv", os.str());
    }

    void plot(const Table& t, const NameList& names) {
        for (const auto& name : names) {
            const auto it = std::find(t.columns.begin(), t.columns.end(), name);
            if (it == t.columns.end() || it == t.columns.begin()) {
                throw PreconditionError("plot: no series '" + name + "' in the trajectory table");
            }
            const std::size_t col = static_cast<std::size_t>(it - t.columns.begin());
            if (dir_.empty()) continue;
            std::ostringstream os;
            os << "# " << t.columns[0] << ' ' << name << '\n';
            for (const auto& row : t.rows) os << fmt(row[0]) << ' ' << fmt(row[col]) << '\n';
            write(report_.id + "." + name + ".dat", os.str());
        }
    }

    void raw(const std::string& name, const std::string& content) {
        if (!dir_.empty()) write(name, content);
    }

private:
    void write(const std::string& name, const std::string& content) {
        const std::filesystem::path p = std::filesystem::path(dir_) / name;
        std::ofstream f(p, std::ios::binary);
        if (!f) throw std::runtime_error("I/O: cannot open " + p.string());
        f << content;
        f.close();
        if (!f) throw std::runtime_error("I/O: write failed for " + p.string());
        report_.artifacts.push_back(p.string());
    }

    std::string dir_;
    RunReport& report_;
};

void metric(RunReport& r, const std::string& name, double v) { r.metrics.emplace_back(name, v); }

void verdict(RunReport& r, bool ok, const std::string& cause) {
    r.status = ok ? RunStatus::pass : RunStatus::fail;
    if (!ok) r.cause = cause;
}

void plot_if_requested(const Scenario& s, Emitter& e, const Table& t) {
    if (const NameList* names = get<NameList>(s, "plot")) e.plot(t, *names);
}

// Runners -------------------------------------------------------------------------

void run_riccati(const Scenario& s, RunReport& r, Emitter& e) {
    const InnerSpace space = scenario_space(s);
    RiccatiControls ctl;
    ctl.ode = ode_controls(s);
    const double t_end = num(s, "t_end", 1.0);
    const RiccatiTrajectory tr =
        integrate_riccati(profile(s, "profile", space), op(s, "s0", space, MatrixExpr::Form::zero), t_end, ctl);
    metric(r, "t_reached", tr.t_reached());
    metric(r, "blow_up", tr.blow_up() ? 1.0 : 0.0);
    if (tr.blow_up()) {
        metric(r, "t_star", tr.blow_up()->t_star);
        metric(r, "bracket_width", tr.blow_up()->bracket_width());
    }
    double sa = 0.0;
    for (double t : tr.times()) sa = std::max(sa, self_adjoint_defect(tr.at(t)));
    metric(r, "max_self_adjoint_defect", sa);

    const int samples = static_cast<int>(integer(s, "samples", 201));
    Table tab;
    tab.columns = {"t"};
    const auto ops = operator_columns("s", space.dim());
    tab.columns.insert(tab.columns.end(), ops.begin(), ops.end());
    tab.columns.push_back("norm");
    const double end = tr.blow_up() ? tr.blow_up()->bracket_lo : tr.t_reached();
    for (int i = 0; i < samples; ++i) {
        const double t = samples == 1 ? 0.0 : end * i / (samples - 1);
        std::vector<double> row{t};
        const Matrix m = tr.at(t).matrix();
        append_entries(row, m);
        row.push_back(m.norm());
        tab.rows.push_back(std::move(row));
    }
    if (space.is_definite() && tr.times().size() > 1) {
        const TraceChannel tc = trace_channel(tr);
        metric(r, "trace_identity_residual", tc.max_identity_residual);
        metric(r, "min_cs_slack", tc.min_cs_slack);
        metric(r, "cs_equality_points", static_cast<double>(tc.cs_equality_times.size()));
    }
    e.csv("", tab);
    plot_if_requested(s, e, tab);

    std::string cause;
    bool ok = sa <= 1e-9;
    if (!ok) cause = "trajectory lost self-adjointness";
    const std::string expect = text(s, "expect");
    if (expect == "blowup") {
        if (!tr.blow_up()) {
            ok = false;
            cause = "expected blow-up, trajectory reached t_end";
        } else if (s.has("expect_t_star")) {
            const double want = num(s, "expect_t_star", 0.0);
            const double tol = num(s, "t_star_tol", 1e-6);
            metric(r, "t_star_error", std::abs(tr.blow_up()->t_star - want));
            if (std::abs(tr.blow_up()->t_star - want) > tol) {
                ok = false;
                cause = "blow-up at " + fmt(tr.blow_up()->t_star) + ", expected " + fmt(want);
            }
        }
    } else if (expect == "global" && !tr.defined_on(t_end)) {
        ok = false;
        cause = "expected a global solution, stopped at " + fmt(tr.t_reached());
    }
    verdict(r, ok, cause);
}

void run_jacobi(const Scenario& s, RunReport& r, Emitter& e) {
    const InnerSpace space = scenario_space(s);
    JacobiControls ctl;
    ctl.ode = ode_controls(s);
    const double t_end = num(s, "t_end", 1.0);
    const Operator f0 = op(s, "f0", space, MatrixExpr::Form::identity);
    const Operator f0p = op(s, "f0_prime", space, MatrixExpr::Form::zero);
    const JacobiTrajectory j1 = integrate_jacobi(profile(s, "profile", space), f0, f0p, t_end, ctl);
    metric(r, "singular_times", static_cast<double>(j1.singular_times().size()));
    if (!j1.singular_times().empty()) metric(r, "first_singular_time", j1.singular_times().front());
    double drift = 0.0;
    const Matrix w0 = j1.wronskian(0.0);
    for (double t : j1.times()) drift = std::max(drift, (j1.wronskian(t) - w0).norm() / std::max(1.0, w0.norm()));
    metric(r, "wronskian_drift", drift);

    std::optional<JacobiTrajectory> j2;
    if (s.has("profile2")) {
        const Operator g0 = s.has("f0_2") ? op(s, "f0_2", space, MatrixExpr::Form::identity) : f0;
        const Operator g0p = s.has("f0_prime_2") ? op(s, "f0_prime_2", space, MatrixExpr::Form::zero) : f0p;
        j2.emplace(integrate_jacobi(profile(s, "profile2", space), g0, g0p, t_end, ctl));
    }

    const int samples = static_cast<int>(integer(s, "samples", 201));
    Table tab;
    tab.columns = {"t"};
    const auto ops = operator_columns("f", space.dim());
    tab.columns.insert(tab.columns.end(), ops.begin(), ops.end());
    tab.columns.push_back("det_f");
    if (j2) {
        tab.columns.push_back("det_f2");
        tab.columns.push_back("det_diff");
    }
    const double from = num(s, "det_from", 0.01);
    double dmin = INFINITY, dmax = -INFINITY;
    for (int i = 0; i < samples; ++i) {
        const double t = samples == 1 ? 0.0 : t_end * i / (samples - 1);
        std::vector<double> row{t};
        const Matrix f = j1.f(t).matrix();
        append_entries(row, f);
        row.push_back(f.determinant());
        if (j2) {
            const double d2 = j2->f(t).matrix().determinant();
            row.push_back(d2);
            row.push_back(f.determinant() - d2);
            if (t >= from) {
                dmin = std::min(dmin, row.back());
                dmax = std::max(dmax, row.back());
            }
        }
        tab.rows.push_back(std::move(row));
    }
    e.csv("", tab);
    plot_if_requested(s, e, tab);

    bool ok = drift <= 1e-9;
    std::string cause = ok ? "" : "Wronskian not conserved";
    if (j2) {
        metric(r, "min_det_diff", dmin);
        metric(r, "max_det_diff", dmax);
        if (s.has("expect_det_sign")) {
            const long long sg = integer(s, "expect_det_sign", 1);
            const bool signed_ok = sg > 0 ? dmin > 0.0 : dmax < 0.0;
            if (!signed_ok) {
                ok = false;
                cause = "det F1 - det F2 does not have sign " + std::to_string(sg) + " on [" + fmt(from) + ", t_end]";
            }
        }
    }
    verdict(r, ok, cause);
}

SuiteReport dispatch_suite(const std::string& name, const SuiteOptions& o) {
    if (name == "comparison") return comparison_suite(o);
    if (name == "jacobi_consistency") return jacobi_riccati_consistency_suite(o);
    if (name == "bracket") return bracket_suite(o);
    if (name == "wedge_positivity") return wedge_positivity_suite(o);
    if (name == "scalar_lower") return scalar_wedge_suite(o, WedgeBranch::lower);
    if (name == "scalar_upper") return scalar_wedge_suite(o, WedgeBranch::upper);
    if (name == "rank_one") return rank_one_profile_suite(o);
    throw PreconditionError("unknown suite '" + name + "'");
}

void report_suite(const SuiteReport& rep, RunReport& r, Emitter& e) {
    metric(r, "instances", rep.instances);
    metric(r, "completed", rep.completed);
    metric(r, "resampled", rep.resampled);
    metric(r, "resample_rate", rep.resample_rate());
    metric(r, "violations", rep.violations);
    metric(r, "worst", rep.worst);
    for (const auto& [k, v] : rep.notes) metric(r, k, v);
    Table tab;
    tab.columns = {"instance", "instance_seed", "value"};
    std::ostringstream causes;
    causes << "instance,cause\n";
    for (const auto& f : rep.failures) {
        tab.rows.push_back({static_cast<double>(f.instance), static_cast<double>(f.instance_seed), f.value});
        causes << f.instance << ',' << f.cause << '\n';
    }
    e.csv(".failures", tab);
    if (!rep.failures.empty()) e.raw(r.id + ".causes.csv", causes.str());
    std::string cause;
    if (rep.completed < rep.instances) {
        cause = std::to_string(rep.instances - rep.completed) + " instances could not be placed";
    }
    if (rep.violations > 0) {
        cause = std::to_string(rep.violations) + " violations" +
                (rep.failures.empty() ? "" : "; first: " + rep.failures.front().cause);
    }
    verdict(r, rep.passed(), cause);
}

void run_compare(const Scenario& s, RunReport& r, Emitter& e) {
    RiccatiControls ctl;
    ctl.ode = ode_controls(s);
    if (s.has("suite")) {
        SuiteOptions o;
        o.seed = static_cast<std::uint64_t>(integer(s, "seed", 0));
        o.instances = static_cast<int>(integer(s, "instances", 0));
        o.b = num(s, "b", 1.0);
        o.controls = ctl;
        report_suite(dispatch_suite(text(s, "suite"), o), r, e);
        return;
    }
    const InnerSpace space = scenario_space(s);
    const double t_end = num(s, "t_end", 1.0);
    const CurvatureProfile r1 = profile(s, "profile1", space);
    const CurvatureProfile r2 = profile(s, "profile2", space);
    const Operator s1 = op(s, "s1", space, MatrixExpr::Form::zero);
    const Operator s2 = op(s, "s2", space, MatrixExpr::Form::zero);
    const bool hyp = profile_leq(r1, r2, t_end) && order_leq(s1, s2);
    const RiccatiTrajectory a = integrate_riccati(r1, s1, t_end, ctl);
    const RiccatiTrajectory b = integrate_riccati(r2, s2, t_end, ctl);
    ComparisonOptions co;
    co.uniform_points = static_cast<int>(integer(s, "samples", co.uniform_points));
    const ComparisonResult cr = compare_trajectories(a, b, co);
    metric(r, "hypotheses", hyp ? 1.0 : 0.0);
    metric(r, "common_end", cr.common_end);
    metric(r, "min_gap", cr.min_gap);
    metric(r, "t_reached_1", a.t_reached());
    metric(r, "t_reached_2", b.t_reached());

    for (int which = 0; which < 2; ++which) {
        const RiccatiTrajectory& tr = which == 0 ? a : b;
        Table tab;
        tab.columns = {"t"};
        const auto ops = operator_columns("s", space.dim());
        tab.columns.insert(tab.columns.end(), ops.begin(), ops.end());
        tab.columns.push_back("min_gap_eigenvalue");
        for (const GapPoint& g : cr.min_gap_curve) {
            std::vector<double> row{g.t};
            append_entries(row, tr.at(g.t).matrix());
            row.push_back(g.min_gap);
            tab.rows.push_back(std::move(row));
        }
        e.csv(which == 0 ? ".s1" : ".s2", tab);
        if (which == 0) plot_if_requested(s, e, tab);
    }
    if (!hyp) {
        r.status = RunStatus::inconclusive;
        r.cause = "ordering hypotheses R1 <= R2, S1(0) <= S2(0) do not hold";
        return;
    }
    verdict(r, cr.holds(), "min gap eigenvalue " + fmt(cr.min_gap) + " below -1e-7");
}

void run_table1(const Scenario& s, RunReport& r, Emitter& e) {
    const int row = static_cast<int>(integer(s, "row", 1));
    const double k0 = num(s, "k0", table1_default_k0(row));
    const int dim = static_cast<int>(integer(s, "n", 3));
    const int samples = static_cast<int>(integer(s, "samples", 100));
    const Table1Check c = table1_check(row, k0, dim, samples);
    metric(r, "row", row);
    metric(r, "k0", k0);
    metric(r, "riccati_residual", c.riccati_residual);
    metric(r, "integration_error", c.integration_error);
    metric(r, "ambient_variation", c.ambient_variation);
    metric(r, "gauss_residual", c.gauss_residual);

    auto [model, info] = table1_model(row, k0, dim);
    metric(r, "eps", info.eps);
    metric(r, "ambient_curvature", info.ambient_curvature);
    Table tab;
    tab.columns = {"t", "w", "weingarten", "weingarten_derivative", "riccati_residual", "ambient_sectional",
                   "slice_curvature"};
    const double lo = std::isfinite(model.warp().lo) ? model.warp().lo : -3.0;
    const double hi = std::isfinite(model.warp().hi) ? model.warp().hi : 3.0;
    const double margin = 0.05 * (hi - lo);
    for (int i = 0; i < samples; ++i) {
        const double t = lo + margin + (hi - lo - 2 * margin) * (i + 0.5) / samples;
        const double sv = info.weingarten(t);
        const double ds = info.weingarten_derivative(t);
        tab.rows.push_back({t, model.w(t), sv, ds, ds - sv * sv - info.eps * info.ambient_curvature,
                            ambient_sectional(model, t), info.slice_curvature(t)});
    }
    e.csv("", tab);
    plot_if_requested(s, e, tab);
    verdict(r, c.passed, "row " + std::to_string(row) + " exceeds a residual threshold");
}

CalabiProfile calabi_profile(const Scenario& s) {
    const std::string c = text(s, "calabi");
    if (c == "step") return CalabiProfile::step(num(s, "t1", 0.0));
    if (c == "constant") return CalabiProfile::constant(num(s, "k", 0.0));
    return CalabiProfile::piecewise(*get<NumberList>(s, "switches"), *get<NumberList>(s, "values"));
}

void run_calabi(const Scenario& s, RunReport& r, Emitter& e) {
    if (text(s, "calabi") == "random") {
        SuiteOptions o;
        o.seed = static_cast<std::uint64_t>(integer(s, "seed", 0));
        o.instances = static_cast<int>(integer(s, "instances", 0));
        o.controls.ode = ode_controls(s);
        report_suite(calabi_suite(o), r, e);
        return;
    }
    const CalabiSolution sol = calabi_ode(calabi_profile(s), num(s, "t_max", 100.0), ode_controls(s));
    const CalabiInvariants inv = calabi_invariants(sol);
    metric(r, "beta", sol.has_zero() ? sol.beta : INFINITY);
    metric(r, "y_prime_at_beta", sol.has_zero() ? sol.y_prime_at_beta : sol.y_prime(sol.t_max));
    metric(r, "min_neg_yp", inv.min_neg_yp);
    metric(r, "max_neg_yp", inv.max_neg_yp);
    metric(r, "max_energy", inv.max_energy);
    metric(r, "max_energy_increase", inv.max_energy_increase);
    bool ok = inv.holds;
    std::string cause = ok ? "" : "invariants violated";
    if (sol.has_zero()) {
        const CalabiRigidity rig = calabi_rigidity_scan(sol);
        metric(r, "min_y_prime", rig.min_y_prime);
        metric(r, "rigid", rig.reaches_minus_one ? 1.0 : 0.0);
        metric(r, "switch_time", rig.t1);
        metric(r, "l1_distance_to_step", rig.l1_distance_to_step);
        if (!rig.consistent) {
            ok = false;
            cause = "y' reaches -1 but the profile is not the step profile";
        }
    }
    if (s.has("expect_beta")) {
        const double want = num(s, "expect_beta", 0.0);
        if (!(std::abs(sol.beta - want) <= 1e-6)) {
            ok = false;
            cause = "beta = " + fmt(sol.beta) + ", expected " + fmt(want);
        }
    }
    const int samples = static_cast<int>(integer(s, "samples", 401));
    const double end = sol.has_zero() ? sol.beta : sol.t_max;
    Table tab;
    tab.columns = {"t", "k", "y", "y_prime", "energy"};
    for (int i = 0; i < samples; ++i) {
        const double t = samples == 1 ? 0.0 : end * i / (samples - 1);
        const double y = sol.y(t), yp = sol.y_prime(t);
        tab.rows.push_back({t, sol.profile.k(t), y, yp, y * y + yp * yp});
    }
    e.csv("", tab);
    plot_if_requested(s, e, tab);
    verdict(r, ok, cause);
}

void run_gauss_bonnet(const Scenario& s, RunReport& r, Emitter& e) {
    const int eps1 = static_cast<int>(integer(s, "eps1", 1));
    const int eps2 = static_cast<int>(integer(s, "eps2", 1));
    if (s.has("instances")) {
        SuiteOptions o;
        o.seed = static_cast<std::uint64_t>(integer(s, "seed", 0));
        o.instances = static_cast<int>(integer(s, "instances", 0));
        report_suite(gauss_bonnet_suite(o, eps1, eps2), r, e);
        return;
    }
    const NumberList center = s.has("center") ? *get<NumberList>(s, "center") : NumberList{0.0, 0.0};
    const NumberList radius = s.has("radius") ? *get<NumberList>(s, "radius") : NumberList{1.0, 1.0};
    const double amp = num(s, "amplitude", 0.3);
    const double pert = num(s, "perturbation", 0.0);
    const Box support{center[0] - radius[0], center[0] + radius[0], center[1] - radius[1], center[1] + radius[1]};
    Mat2 h;
    h << 0.0, 1.0, 1.0, 0.0;
    const SurfaceMetric m =
        SurfaceMetric::general(bump_field(amp, center[0], center[1], radius[0], radius[1]),
                               bump_field(pert, center[0], center[1], radius[0], radius[1]), h, eps1, eps2, support);
    Box domain = support.enlarged(0.5);
    if (const NumberList* d = get<NumberList>(s, "domain")) domain = Box{(*d)[0], (*d)[1], (*d)[2], (*d)[3]};
    GaussBonnetOptions opt;
    if (const NumberList* g = get<NumberList>(s, "grids")) {
        opt.grids.clear();
        for (double x : *g) opt.grids.push_back(static_cast<int>(x));
    }
    opt.allow_curved_boundary = integer(s, "allow_curved_boundary", 0) != 0;
    const GaussBonnetResult res = gauss_bonnet_defect(m, domain, opt);
    metric(r, "interior", res.interior);
    metric(r, "boundary", res.boundary);
    metric(r, "defect", res.defect);
    metric(r, "observed_order", res.observed_order);
    const double frame = frame_orthonormality_defect(m, support, 128);
    metric(r, "frame_defect", frame);
    Table tab;
    tab.columns = {"n", "interior", "boundary", "defect"};
    for (const auto& l : res.levels) tab.rows.push_back({static_cast<double>(l.n), l.interior, l.boundary, l.defect});
    e.csv(".levels", tab);
    plot_if_requested(s, e, tab);
    std::ostringstream grid;
    write_grid_field(grid, curvature_grid(m, domain, 65, 65));
    e.raw(r.id + ".curvature.grid", grid.str());

    const double tol = num(s, "tolerance", 1e-4);
    bool ok = std::abs(res.defect) < tol && frame <= 1e-10;
    std::string cause = "defect " + fmt(res.defect) + " or frame defect " + fmt(frame) + " too large";
    if (ok && s.has("min_order") && !(res.observed_order >= num(s, "min_order", 0.0))) {
        ok = false;
        cause = "observed order " + fmt(res.observed_order) + " below " + fmt(num(s, "min_order", 0.0));
    }
    verdict(r, ok, cause);
}

void run_tube(const Scenario& s, RunReport& r, Emitter& e) {
    const InnerSpace space = scenario_space(s);
    JacobiControls ctl;
    ctl.ode = ode_controls(s);
    const Operator p = op(s, "p", space, MatrixExpr::Form::zero);
    const Operator pp = Operator::identity(space) - p;
    const Operator a = op(s, "a", space, MatrixExpr::Form::zero);
    const double t_end = num(s, "t_end", 1.0);
    const JacobiTrajectory j = tube_jacobi(p, pp, a, profile(s, "profile", space), t_end, ctl);
    const NumberList& xl = *get<NumberList>(s, "x");
    if (static_cast<int>(xl.size()) != space.dim()) throw DimensionError("x has the wrong length");
    const Vector x = Eigen::Map<const Vector>(xl.data(), static_cast<Eigen::Index>(xl.size()));
    const TubeExpansion te = tube_expansion_check(j, num(s, "r", 1.0), x);
    metric(r, "lhs", te.lhs);
    metric(r, "bound_r2", te.rhs_r2);
    metric(r, "bound_inv_r2", te.rhs_inv_r2);
    metric(r, "lhs_minus_bound_r2", te.lhs - te.rhs_r2);
    metric(r, "lhs_minus_bound_inv_r2", te.lhs - te.rhs_inv_r2);
    metric(r, "derivative_residual", te.derivative_residual);

    const int samples = static_cast<int>(integer(s, "samples", 201));
    Table tab;
    tab.columns = {"t"};
    const auto ops = operator_columns("f", space.dim());
    tab.columns.insert(tab.columns.end(), ops.begin(), ops.end());
    tab.columns.push_back("fx_norm");
    for (int i = 0; i < samples; ++i) {
        const double t = samples == 1 ? 0.0 : t_end * i / (samples - 1);
        std::vector<double> row{t};
        const Operator f = j.f(t);
        append_entries(row, f.matrix());
        const Vector fx = f.apply(x);
        row.push_back(space.inner(fx, fx));
        tab.rows.push_back(std::move(row));
    }
    e.csv("", tab);
    plot_if_requested(s, e, tab);
    verdict(r, te.derivative_residual < 1e-7, "derivative identity residual " + fmt(te.derivative_residual));
}

void run_curvature_bound(const Scenario& s, RunReport& r, Emitter& e) {
    const CurvatureExample ex = resolve_model(text(s, "model"));
    BoundSampler bs;
    bs.pairs = static_cast<int>(integer(s, "pairs", bs.pairs));
    bs.seed = static_cast<std::uint64_t>(integer(s, "seed", static_cast<long long>(bs.seed)));
    bs.t_lo = num(s, "t_lo", bs.t_lo);
    bs.t_hi = num(s, "t_hi", bs.t_hi);
    const BoundDirection dir = text(s, "direction", "geq") == "leq" ? BoundDirection::leq : BoundDirection::geq;
    const BoundResult b = curvature_bound_check(ex, num(s, "k0", 0.0), dir, bs);
    metric(r, "worst", b.worst);
    metric(r, "evaluated", b.evaluated);
    metric(r, "strata_used", b.strata_used);
    metric(r, "holds", b.holds() ? 1.0 : 0.0);
    Table tab;
    tab.columns = {"k0", "worst", "evaluated"};
    tab.rows.push_back({num(s, "k0", 0.0), b.worst, static_cast<double>(b.evaluated)});
    e.csv("", tab);
    if (b.verdict == Verdict::inconclusive) {
        r.status = RunStatus::inconclusive;
        r.cause = "sampler could not decide the bound";
        return;
    }
    const bool want_holds = text(s, "expect", "holds") == "holds";
    verdict(r, b.holds() == want_holds,
            std::string("bound ") + (b.holds() ? "holds" : "is violated") + ", worst " + fmt(b.worst));
}

// Presets ---------------------------------------------------------------------------

struct Preset {
    const char* name;
    const char* provenance;
    const char* text;
};

const std::vector<Preset>& presets() {
    static const std::vector<Preset> p{
        {"paper_counterexample_1",
         "G = diag(1,-1), R2 = diag(1,0), S0 = 0: the upper solution blows up at pi/2 although R1 = 0 gives S1 = 0",
         R"([scenario paper_counterexample_1]
kind = riccati
description = upper solution S2 = diag(tan t, 0) blows up at pi/2
gram = diag(1, -1)
profile = diag(1, 0)
s0 = zero
t_end = 3
expect = blowup
expect_t_star = 1.5707963267948966
)"},
        {"paper_counterexample_mirror",
         "G = diag(1,-1), R1 = diag(0,1) <= R2 = 0: now the lower solution blows up at pi/2",
         R"([scenario paper_counterexample_lower]
kind = riccati
description = lower solution S1 = diag(0, tan t) blows up at pi/2
gram = diag(1, -1)
profile = diag(0, 1)
t_end = 3
expect = blowup
expect_t_star = 1.5707963267948966

[scenario paper_counterexample_upper_zero]
kind = riccati
description = R = 0, S0 = 0 stays zero
gram = diag(1, -1)
profile = zero
t_end = 10
expect = global
)"},
        {"paper_counterexample_det",
         "det F1 = 1 > cos t = det F2 for R1 = 0 <= R2 = diag(1,0); reversed for the mirrored pair",
         R"([scenario det_pair_1]
kind = jacobi
description = det F1 - det F2 = 1 - cos t > 0
gram = diag(1, -1)
profile = zero
profile2 = diag(1, 0)
t_end = 1.5707
expect_det_sign = 1
det_from = 0.01

[scenario det_pair_2]
kind = jacobi
description = det F1 - det F2 = cos t - 1 < 0
gram = diag(1, -1)
profile = diag(0, 1)
profile2 = zero
t_end = 1.5707
expect_det_sign = -1
det_from = 0.01
)"},
        {"table1_all", "all six warped model rows: Riccati residual, integration, ambient curvature, Gauss equation",
         R"([scenario table1_row1]
kind = table1
row = 1

[scenario table1_row2]
kind = table1
row = 2

[scenario table1_row3]
kind = table1
row = 3

[scenario table1_row4]
kind = table1
row = 4

[scenario table1_row5]
kind = table1
row = 5

[scenario table1_row6]
kind = table1
row = 6
)"},
        {"calabi_step", "k = 0 on [0, 0.8), 1 afterwards: beta = 0.8 + pi/2 and y'(beta) = -1",
         R"([scenario calabi_step]
kind = calabi
calabi = step
t1 = 0.8
expect_beta = 2.3707963267948966
)"},
        {"flaherty_check",
         "point tube in flat Lorentz space, F = t I: reports <FX,FX> against r^2 <X,X> and <X,X>/r^2",
         R"([scenario flaherty_check]
kind = tube
gram = diag(-1, 1, 1)
p = zero
profile = zero
t_end = 3
r = 2
x = 0.3, 1, 0.5
)"},
    };
    return p;
}

}  // namespace

// Public --------------------------------------------------------------------------

const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::riccati: return "riccati";
        case ScenarioKind::jacobi: return "jacobi";
        case ScenarioKind::compare: return "compare";
        case ScenarioKind::table1: return "table1";
        case ScenarioKind::calabi: return "calabi";
        case ScenarioKind::gauss_bonnet: return "gauss_bonnet";
        case ScenarioKind::tube: return "tube";
        case ScenarioKind::curvature_bound: return "curvature_bound";
    }
    return "?";
}

std::optional<ScenarioKind> parse_kind(const std::string& s) {
    for (ScenarioKind k : {ScenarioKind::riccati, ScenarioKind::jacobi, ScenarioKind::compare, ScenarioKind::table1,
                           ScenarioKind::calabi, ScenarioKind::gauss_bonnet, ScenarioKind::tube,
                           ScenarioKind::curvature_bound}) {
        if (s == to_string(k)) return k;
    }
    return std::nullopt;
}

const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::pass: return "pass";
        case RunStatus::fail: return "fail";
        case RunStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

int MatrixExpr::size() const {
    switch (form) {
        case Form::diag: return static_cast<int>(diag.size());
        case Form::dense: return static_cast<int>(dense.rows());
        default: return -1;
    }
}

Matrix MatrixExpr::resolve(int n) const {
    if (size() >= 0 && size() != n) {
        throw DimensionError("matrix has size " + std::to_string(size()) + ", expected " + std::to_string(n));
    }
    switch (form) {
        case Form::zero: return Matrix::Zero(n, n);
        case Form::identity: return Matrix::Identity(n, n);
        case Form::diag: return Eigen::Map<const Vector>(diag.data(), n).asDiagonal();
        case Form::dense: return dense;
    }
    return {};
}

bool MatrixExpr::operator==(const MatrixExpr& o) const {
    if (form != o.form || diag != o.diag) return false;
    if (form != Form::dense) return true;
    return dense.rows() == o.dense.rows() && dense.cols() == o.dense.cols() && dense == o.dense;
}

int ProfileExpr::size() const {
    int n = -1;
    for (const auto& p : pieces) n = std::max(n, p.size());
    return n;
}

CurvatureProfile ProfileExpr::resolve(const InnerSpace& space) const {
    std::vector<Operator> ops;
    for (const auto& p : pieces) {
        Operator o(space, p.resolve(space.dim()));
        if (!is_self_adjoint(o)) throw PreconditionError("profile piece is not self-adjoint for this Gram matrix");
        ops.push_back(std::move(o));
    }
    if (ops.size() == 1) return CurvatureProfile::constant(ops.front());
    return CurvatureProfile::piecewise_constant(switches, ops);
}

const std::vector<KeySpec>& scenario_keys(ScenarioKind k) {
    static const std::map<ScenarioKind, std::vector<KeySpec>> tables = [] {
        std::map<ScenarioKind, std::vector<KeySpec>> t;
        for (ScenarioKind kind : {ScenarioKind::riccati, ScenarioKind::jacobi, ScenarioKind::compare,
                                  ScenarioKind::table1, ScenarioKind::calabi, ScenarioKind::gauss_bonnet,
                                  ScenarioKind::tube, ScenarioKind::curvature_bound}) {
            t[kind] = build_keys(kind);
        }
        return t;
    }();
    return tables.at(k);
}

ParseResult parse_config(const std::string& text_in) {
    ParseResult out;
    struct Raw {
        std::string id;
        int line = 0;
        std::vector<std::tuple<std::string, std::string, int>> entries;
    };
    std::vector<Raw> sections;
    std::istringstream is(text_in);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                out.diagnostics.push_back({lineno, "unterminated section header"});
                continue;
            }
            const std::string inner = trim(line.substr(1, line.size() - 2));
            const std::string prefix = "scenario ";
            if (inner.rfind(prefix, 0) != 0) {
                out.diagnostics.push_back({lineno, "section header must read [scenario ID]"});
                continue;
            }
            const std::string id = trim(inner.substr(prefix.size()));
            if (!valid_id(id)) {
                out.diagnostics.push_back({lineno, "invalid scenario id '" + id + "' (letters, digits, _ - .)"});
                continue;
            }
            sections.push_back({id, lineno, {}});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            out.diagnostics.push_back({lineno, "expected 'key = value'"});
            continue;
        }
        if (sections.empty()) {
            out.diagnostics.push_back({lineno, "key outside of a [scenario ID] section"});
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) {
            out.diagnostics.push_back({lineno, "empty value for '" + key + "'"});
            continue;
        }
        sections.back().entries.emplace_back(key, value, lineno);
    }

    std::set<std::string> ids;
    for (const Raw& sec : sections) {
        if (!ids.insert(sec.id).second) {
            out.diagnostics.push_back({sec.line, "duplicate scenario id '" + sec.id + "'"});
            continue;
        }
        Scenario s;
        s.id = sec.id;
        std::optional<ScenarioKind> kind;
        int kind_count = 0;
        for (const auto& [key, value, ln] : sec.entries) {
            if (key != "kind") continue;
            ++kind_count;
            kind = parse_kind(value);
            if (!kind) out.diagnostics.push_back({ln, "unknown kind '" + value + "'"});
            if (kind_count > 1) out.diagnostics.push_back({ln, "duplicate key 'kind'"});
        }
        if (kind_count == 0) {
            out.diagnostics.push_back({sec.line, "scenario '" + sec.id + "' has no kind"});
            continue;
        }
        if (!kind) continue;
        s.kind = *kind;
        std::map<std::string, int> lines;
        bool bad = false;
        for (const auto& [key, value, ln] : sec.entries) {
            if (key == "kind") continue;
            const KeySpec* spec = find_key(s.kind, key);
            if (!spec) {
                out.diagnostics.push_back(
                    {ln, "unknown key '" + key + "' for kind " + to_string(s.kind) + " in scenario '" + s.id + "'"});
                bad = true;
                continue;
            }
            if (lines.count(key)) {
                out.diagnostics.push_back({ln, "duplicate key '" + key + "'"});
                bad = true;
                continue;
            }
            lines[key] = ln;
            try {
                s.values[key] = parse_value(spec->type, value);
            } catch (const Error& e) {
                out.diagnostics.push_back({ln, "bad value for '" + key + "': " + e.what()});
                bad = true;
            }
        }
        if (bad) continue;
        validate(s, lines, sec.line, out.diagnostics);
        out.scenarios.push_back(std::move(s));
    }
    std::stable_sort(out.diagnostics.begin(), out.diagnostics.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
    return out;
}

std::string format_value(const ConfigValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, long long>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, double>) {
                return fmt(x);
            } else if constexpr (std::is_same_v<T, std::string>) {
                return x;
            } else if constexpr (std::is_same_v<T, NumberList>) {
                std::string s;
                for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + fmt(x[i]);
                return s;
            } else if constexpr (std::is_same_v<T, NameList>) {
                std::string s;
                for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + x[i];
                return s;
            } else if constexpr (std::is_same_v<T, MatrixExpr>) {
                return format_matrix(x);
            } else {
                std::string s = format_matrix(x.pieces.at(0));
                for (std::size_t i = 0; i < x.switches.size(); ++i) {
                    s += " until " + fmt(x.switches[i]) + " then " + format_matrix(x.pieces.at(i + 1));
                }
                return s;
            }
        },
        v);
}

std::string print_config(const std::vector<Scenario>& scenarios) {
    std::ostringstream os;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const Scenario& s = scenarios[i];
        if (i) os << '\n';
        os << "[scenario " << s.id << "]\n";
        os << "kind = " << to_string(s.kind) << '\n';
        for (const auto& [key, v] : s.values) os << key << " = " << format_value(v) << '\n';
    }
    return os.str();
}

std::vector<CatalogEntry> list_presets() {
    std::vector<CatalogEntry> out;
    for (const auto& m : list_models()) out.push_back({m.id, "model", m.description});
    out.push_back({"zero", "profile", "R = 0"});
    out.push_back({"identity", "profile", "R = I"});
    out.push_back({"diag(...)", "profile", "constant diagonal matrix"});
    out.push_back({"M0 until t1 then M1", "profile", "piecewise constant profile"});
    const std::map<std::string, std::string> suites{
        {"comparison", "S1 <= S2 for ordered data, every signature"},
        {"jacobi_consistency", "-F'F^-1 against the Riccati solution"},
        {"bracket", "sandwiched triples: outer reach implies middle reach"},
        {"wedge_positivity", "R >= 0, S(0) = 0 gives Lambda^2(S) >= 0"},
        {"scalar_lower", "Lambda^2(S(b)) >= u(b)^2 Lambda^2(A)"},
        {"scalar_upper", "Lambda^2(S(b)) <= u(b)^2 Lambda^2(A)"},
        {"rank_one", "rank-one profiles keep S rank one"},
    };
    for (const auto& [k, v] : suites) out.push_back({k, "suite", v});
    out.push_back({"calabi = random", "suite", "random k in [0,1]: slope and energy invariants, rigidity"});
    out.push_back({"gauss_bonnet instances", "suite", "random compact bumps: flux identity and order"});
    for (const auto& p : presets()) out.push_back({p.name, "scenario", p.provenance});
    return out;
}

std::optional<std::string> preset_config(const std::string& name) {
    for (const auto& p : presets()) {
        if (name == p.name) return std::string(p.text);
    }
    return std::nullopt;
}

std::optional<double> RunReport::metric(const std::string& name) const {
    for (const auto& [k, v] : metrics) {
        if (k == name) return v;
    }
    return std::nullopt;
}

RunReport run_scenario(const Scenario& s, const RunOptions& options) {
    RunReport r;
    r.id = s.id;
    r.kind = s.kind;
    Emitter e(options, r);
    try {
        switch (s.kind) {
            case ScenarioKind::riccati: run_riccati(s, r, e); break;
            case ScenarioKind::jacobi: run_jacobi(s, r, e); break;
            case ScenarioKind::compare: run_compare(s, r, e); break;
            case ScenarioKind::table1: run_table1(s, r, e); break;
            case ScenarioKind::calabi: run_calabi(s, r, e); break;
            case ScenarioKind::gauss_bonnet: run_gauss_bonnet(s, r, e); break;
            case ScenarioKind::tube: run_tube(s, r, e); break;
            case ScenarioKind::curvature_bound: run_curvature_bound(s, r, e); break;
        }
    } catch (const std::exception& ex) {
        r.status = RunStatus::fail;
        r.cause = ex.what();
    }
    return r;
}

std::vector<RunReport> run_scenarios(const std::vector<Scenario>& scenarios, const RunOptions& options) {
    if (!options.out_dir.empty()) std::filesystem::create_directories(options.out_dir);
    std::vector<RunReport> reports(scenarios.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < scenarios.size(); i = next++) reports[i] = run_scenario(scenarios[i], options);
    };
    const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(scenarios.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::sort(reports.begin(), reports.end(), [](const RunReport& a, const RunReport& b) { return a.id < b.id; });
    if (!options.out_dir.empty()) {
        const auto path = std::filesystem::path(options.out_dir) / "summary.csv";
        std::ofstream f(path, std::ios::binary);
        f << summary_csv(reports);
        if (!f) throw std::runtime_error("I/O: cannot write " + path.string());
    }
    return reports;
}

std::string summary_csv(const std::vector<RunReport>& reports) {
    std::set<std::string> names;
    for (const auto& r : reports) {
        for (const auto& [k, v] : r.metrics) names.insert(k);
    }
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    std::ostringstream os;
    os << "id,kind,status,cause";
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    for (const auto& r : reports) {
        os << r.id << ',' << to_string(r.kind) << ',' << to_string(r.status) << ',' << quote(r.cause);
        for (const auto& n : names) {
            os << ',';
            if (auto v = r.metric(n)) os << fmt(*v);
        }
        os << '\n';
    }
    return os.str();
}

int exit_code(const std::vector<RunReport>& reports) {
    return std::any_of(reports.begin(), reports.end(), [](const RunReport& r) { return r.status == RunStatus::fail; })
               ? 1
               : 0;
}

}  // namespace riccmp
