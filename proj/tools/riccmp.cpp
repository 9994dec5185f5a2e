// riccmp: run scenario files and named presets.
//
//   riccmp run <config|preset:NAME>... [--out DIR] [--jobs N]
//   riccmp check <config|preset:NAME>... [--print]
//   riccmp list
//
// Exit codes: 0 all pass, 1 some scenario failed, 2 configuration error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "riccmp/scenario.hpp"

namespace {

constexpr int kConfigError = 2;

struct Loaded {
    std::vector<riccmp::Scenario> scenarios;
    bool ok = true;
};

Loaded load(const std::vector<std::string>& sources) {
    Loaded out;
    for (const auto& src : sources) {
        std::string text;
        std::string label = src;
        if (src.rfind("preset:", 0) == 0) {
            auto p = riccmp::preset_config(src.substr(7));
            if (!p) {
                std::cerr << src << ": unknown preset (see `riccmp list`)\n";
                out.ok = false;
                continue;
            }
            text = *p;
        } else {
            std::ifstream f(src);
            if (!f) {
                std::cerr << src << ": cannot open\n";
                out.ok = false;
                continue;
            }
            std::stringstream ss;
            ss << f.rdbuf();
            text = ss.str();
        }
        const riccmp::ParseResult pr = riccmp::parse_config(text);
        for (const auto& d : pr.diagnostics) std::cerr << label << ":" << d.line << ": " << d.message << '\n';
        if (!pr.ok()) {
            out.ok = false;
            continue;
        }
        out.scenarios.insert(out.scenarios.end(), pr.scenarios.begin(), pr.scenarios.end());
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Riccati comparison and rigidity scenarios"};
    app.require_subcommand(1);

    std::vector<std::string> run_sources;
    std::string out_dir;
    int jobs = 1;
    auto* run = app.add_subcommand("run", "run scenarios and write CSV output");
    run->add_option("config", run_sources, "config file or preset:NAME")->required();
    run->add_option("--out", out_dir, "output directory (default $RICCMP_OUT, else no files)");
    run->add_option("--jobs,-j", jobs, "worker threads")->check(CLI::PositiveNumber);

    std::vector<std::string> check_sources;
    auto* check = app.add_subcommand("check", "parse and validate only");
    check->add_option("config", check_sources, "config file or preset:NAME")->required();
    bool print_canonical = false;
    check->add_flag("--print", print_canonical, "print the canonical form instead of a count");

    auto* list = app.add_subcommand("list", "list models, profiles, suites and named scenarios");
    bool print_keys = false;
    list->add_flag("--keys", print_keys, "also list the keys accepted by each kind");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    if (*list) {
        std::string last;
        for (const auto& c : riccmp::list_presets()) {
            if (c.category != last) {
                std::cout << (last.empty() ? "" : "\n") << c.category << ":\n";
                last = c.category;
            }
            std::cout << "  " << c.id << "  -  " << c.provenance << '\n';
        }
        if (print_keys) {
            for (auto k : {riccmp::ScenarioKind::riccati, riccmp::ScenarioKind::jacobi, riccmp::ScenarioKind::compare,
                           riccmp::ScenarioKind::table1, riccmp::ScenarioKind::calabi,
                           riccmp::ScenarioKind::gauss_bonnet, riccmp::ScenarioKind::tube,
                           riccmp::ScenarioKind::curvature_bound}) {
                std::cout << "\nkind " << riccmp::to_string(k) << ":\n";
                for (const auto& key : riccmp::scenario_keys(k)) std::cout << "  " << key.key << "  -  " << key.help << '\n';
            }
        }
        return 0;
    }

    if (*check) {
        const Loaded l = load(check_sources);
        if (!l.ok) return kConfigError;
        if (print_canonical) {
            std::cout << riccmp::print_config(l.scenarios);
            return 0;
        }
        std::cout << l.scenarios.size() << " scenario(s) ok\n";
        return 0;
    }

    const Loaded l = load(run_sources);
    if (!l.ok) return kConfigError;
    if (out_dir.empty()) {
        if (const char* env = std::getenv("RICCMP_OUT")) out_dir = env;
    }
    riccmp::RunOptions opt;
    opt.out_dir = out_dir;
    opt.jobs = jobs;
    std::vector<riccmp::RunReport> reports;
    try {
        reports = riccmp::run_scenarios(l.scenarios, opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    for (const auto& r : reports) {
        std::cout << riccmp::to_string(r.status) << "  " << r.id;
        if (!r.cause.empty()) std::cout << "  (" << r.cause << ")";
        std::cout << '\n';
    }
    return riccmp::exit_code(reports);
}
