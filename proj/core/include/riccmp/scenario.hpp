#pragma once

// Scenario files, named presets and the batch runner behind the riccmp tool.
//
// Grammar (line oriented, '#' starts a comment):
//
//   [scenario some_id]
//   kind = riccati
//   gram = diag(1, -1)
//   profile = diag(0, 0) until 1.5 then diag(1, 0)
//   t_end = 3
//
// Values are typed by key; see scenario_keys() for the table.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "riccmp/indefinite_linalg.hpp"
#include "riccmp/profile.hpp"

namespace riccmp {

enum class ScenarioKind { riccati, jacobi, compare, table1, calabi, gauss_bonnet, tube, curvature_bound };

const char* to_string(ScenarioKind k);
std::optional<ScenarioKind> parse_kind(const std::string& s);

/// zero | identity | diag(a, b, ...) | [[a, b], [c, d]]
struct MatrixExpr {
    enum class Form { zero, identity, diag, dense };
    Form form = Form::zero;
    std::vector<double> diag;
    Matrix dense;

    /// Natural size, or -1 for zero / identity.
    int size() const;
    /// Throws DimensionError if the expression has a different size.
    Matrix resolve(int n) const;
    bool operator==(const MatrixExpr& o) const;
};

/// M0 until t1 then M1 until t2 then M2 ...
struct ProfileExpr {
    std::vector<MatrixExpr> pieces;
    std::vector<double> switches;

    int size() const;
    CurvatureProfile resolve(const InnerSpace& space) const;
    bool operator==(const ProfileExpr& o) const = default;
};

using NameList = std::vector<std::string>;
using NumberList = std::vector<double>;
using ConfigValue = std::variant<long long, double, std::string, NumberList, NameList, MatrixExpr, ProfileExpr>;

enum class ValueType { integer, number, text, numbers, names, matrix, profile };

struct KeySpec {
    std::string key;
    ValueType type;
    std::string help;
};

/// Keys accepted by a kind (including the common ones).
const std::vector<KeySpec>& scenario_keys(ScenarioKind k);

struct Scenario {
    std::string id;
    ScenarioKind kind = ScenarioKind::riccati;
    /// Every key except `kind`.
    std::map<std::string, ConfigValue> values;

    bool has(const std::string& key) const { return values.count(key) != 0; }
    bool operator==(const Scenario& o) const { return id == o.id && kind == o.kind && values == o.values; }
};

struct Diagnostic {
    int line = 0;
    std::string message;
};

struct ParseResult {
    std::vector<Scenario> scenarios;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

/// Parses and validates. Diagnostics are line anchored; on any diagnostic the
/// scenario list should not be used.
ParseResult parse_config(const std::string& text);

/// Canonical text; parse_config(print_config(s)) reproduces s exactly.
std::string print_config(const std::vector<Scenario>& scenarios);
std::string format_value(const ConfigValue& v);

struct CatalogEntry {
    std::string id;
    std::string category;
    std::string provenance;
};

/// Model registry ids, profile presets, suite names and named scenarios.
std::vector<CatalogEntry> list_presets();
/// Config text of a named scenario preset; nullopt if unknown.
std::optional<std::string> preset_config(const std::string& name);

enum class RunStatus { pass, fail, inconclusive };
const char* to_string(RunStatus s);

struct RunReport {
    std::string id;
    ScenarioKind kind = ScenarioKind::riccati;
    RunStatus status = RunStatus::inconclusive;
    /// Set whenever status is not pass.
    std::string cause;
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::string> artifacts;

    std::optional<double> metric(const std::string& name) const;
};

struct RunOptions {
    /// Output directory; empty disables file output.
    std::string out_dir;
    int jobs = 1;
};

/// Runs one scenario; computation errors become a failed report.
RunReport run_scenario(const Scenario& s, const RunOptions& options = {});
/// Worker pool over scenarios; reports sorted by id. Writes summary.csv when
/// out_dir is set.
std::vector<RunReport> run_scenarios(const std::vector<Scenario>& scenarios, const RunOptions& options = {});

/// Wide CSV: id, kind, status, cause, then the union of metric names (sorted).
std::string summary_csv(const std::vector<RunReport>& reports);

/// 0 iff no report failed.
int exit_code(const std::vector<RunReport>& reports);

}  // namespace riccmp
