// valleyqed: run figure scenarios, parameter sweeps and config validation.
//
//   valleyqed run --scenario chiral --phase pi/3
//   valleyqed run --config bulk.json --check
//   valleyqed sweep --scenario bulk --parameter phase --values 0,pi/6,pi/3,pi/2
//   valleyqed validate config.json
//   valleyqed list-scenarios
//
// Exit codes: 0 success, 1 config error, 2 numerical failure (including a
// failed consistency check), 3 acceptance-check failure under --check.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "valleyqed/errors.hpp"
#include "valleyqed/scenario.hpp"

namespace {

using nlohmann::json;

struct Overrides {
    std::string config_file;
    std::string scenario;
    std::optional<int> size, n1, ny;
    std::optional<double> delta, delta0, lambda, g, omega0, t_final, dt;
    std::optional<std::string> phase;
    std::optional<std::string> output;
    bool full_scale = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "JSON config file (flags override its values)");
        cmd->add_option("--scenario", scenario, "bands | bulk | ribbon | chiral | custom");
        cmd->add_option("--size", size, "lattice cells per side (sets n1 and ny)");
        cmd->add_option("--n1", n1, "cells along e1");
        cmd->add_option("--ny", ny, "cells along e2");
        cmd->add_option("--delta", delta, "uniform sublattice detuning / J");
        cmd->add_option("--delta0", delta0, "domain-wall detuning amplitude / J");
        cmd->add_option("--lambda", lambda, "domain-wall width / a");
        cmd->add_option("--g", g, "emitter coupling / J");
        cmd->add_option("--omega0", omega0, "emitter frequency / J");
        cmd->add_option("--phase", phase, "giant-atom relative phase (radians or e.g. pi/3, -pi/3)");
        cmd->add_option("--t-final", t_final, "maximum simulated time (1/J)");
        cmd->add_option("--dt", dt, "report interval (1/J)");
        cmd->add_option("--output", output, "output directory");
        cmd->add_flag("--full-scale", full_scale, "large lattices (331x331 bulk, 551x551 chiral)");
    }

    json build() const {
        json cfg = config_file.empty() ? json::object() : vq::load_config_file(config_file);
        if (cfg.contains("schema_version") && cfg.contains("config")) cfg = cfg.at("config");
        json patch = json::object();
        if (!scenario.empty()) patch["scenario"] = scenario;
        if (size) patch["lattice"]["size"] = *size;
        if (n1) patch["lattice"]["n1"] = *n1;
        if (ny) patch["lattice"]["ny"] = *ny;
        if (delta) patch["lattice"]["delta"] = *delta;
        if (delta0) patch["lattice"]["delta0"] = *delta0;
        if (lambda) patch["lattice"]["lambda"] = *lambda;
        if (g) patch["atom"]["g"] = *g;
        if (omega0) patch["atom"]["omega0"] = *omega0;
        if (phase) patch["atom"]["phase"] = *phase;
        if (t_final) patch["run"]["t_final"] = *t_final;
        if (dt) patch["run"]["dt_report"] = *dt;
        if (output) patch["run"]["output_dir"] = *output;
        if (full_scale) patch["run"]["full_scale"] = true;
        // A size flag replaces explicit n1/ny from the file.
        if (size && cfg.contains("lattice") && cfg["lattice"].is_object()) {
            cfg["lattice"].erase("n1");
            cfg["lattice"].erase("ny");
        }
        cfg.merge_patch(patch);
        return cfg;
    }
};

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        out.push_back(vq::parse_phase(std::string_view(item)));
    }
    return out;
}

void print_report(const vq::ScenarioReport& r) {
    std::cout << "scenario " << vq::scenario_name(r.config.kind) << " -> " << r.output_dir.string() << '\n';
    std::cout << r.metrics.dump(2) << '\n';
    for (const auto& w : r.warnings) std::cout << "warning: " << w << '\n';
    for (const auto& c : r.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << (c.acceptance ? "[acceptance] " : "[consistency] ") << c.name
                  << " (" << c.detail << ")\n";
    }
}

int run_cmd(const Overrides& o, bool check) {
    const auto cfg = vq::resolve_config(o.build());
    vq::RunOptions opts;
    opts.acceptance_checks = check;
    const auto report = vq::run_scenario(cfg, opts);
    print_report(report);
    if (!report.consistent()) return 2;
    if (check && !report.acceptance_passed()) return 3;
    return 0;
}

int sweep_cmd(const Overrides& o, const std::string& parameter, const std::string& values) {
    const auto cfg = vq::resolve_config(o.build());
    const auto table = vq::sweep(cfg, parameter, parse_values(values));
    const std::filesystem::path base =
        cfg.output_dir.empty() ? vq::default_output_dir(cfg.kind) : std::filesystem::path(cfg.output_dir);
    const auto path = base / ("sweep_" + parameter + ".csv");
    vq::write_sweep_csv(path, table);
    std::size_t failed = 0;
    for (const auto& r : table.rows) {
        std::cout << parameter << " = " << r.value << ": " << (r.ok ? "ok" : "failed");
        if (!r.error.empty()) std::cout << " (" << r.error << ")";
        std::cout << '\n';
        if (!r.ok) ++failed;
    }
    std::cout << table.rows.size() << " rows, " << failed << " failed -> " << path.string() << '\n';
    return 0;
}

int validate_cmd(const std::string& file) {
    const auto cfg = vq::resolve_config(vq::load_config_file(file));
    std::vector<vq::GiantAtomSpec> atoms;
    if (cfg.kind == vq::ScenarioKind::Custom) {
        atoms.push_back(cfg.custom_atom());
    } else if (cfg.kind == vq::ScenarioKind::BulkEmission || cfg.kind == vq::ScenarioKind::ChiralEmission) {
        atoms.push_back(cfg.normal_atom());
        atoms.push_back(cfg.giant_atom(cfg.phase));
    }
    const auto spec = cfg.lattice_spec();
    for (const auto& atom : atoms) {
        for (const auto& p : atom.points()) {
            if (!spec.contains_cell(p.n, p.m)) {
                throw vq::ConfigError("coupling point (" + std::to_string(p.n) + ", " + std::to_string(p.m) +
                                      ") lies outside the lattice");
            }
        }
    }
    bool warned = false;
    if (!atoms.empty()) {
        if (auto w = atoms.front().weak_coupling_warning(cfg.J)) {
            std::cout << "warning: " << *w << '\n';
            warned = true;
        }
    }
    std::cout << cfg.to_json().dump(2) << '\n';
    std::cout << (warned ? "config valid (with warnings)\n" : "config valid\n");
    return 0;
}

int list_cmd() {
    for (const auto& s : vq::scenario_catalogue()) {
        std::cout << vq::scenario_name(s.kind) << "\t" << s.description << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"valleyqed: giant-atom emission in a honeycomb photonic lattice"};
    app.require_subcommand(1);

    Overrides run_o, sweep_o;
    bool check = false;
    auto* run = app.add_subcommand("run", "run one scenario and write its artifacts");
    run_o.attach(run);
    run->add_flag("--check", check, "also evaluate the scenario's acceptance targets (exit 3 on failure)");

    std::string parameter, values;
    auto* sw = app.add_subcommand("sweep", "run a scenario over a list of parameter values");
    sweep_o.attach(sw);
    sw->add_option("--parameter", parameter, "Delta | Delta0 | lambda | g | omega0 | phase")->required();
    sw->add_option("--values", values, "comma-separated values (phase literals such as pi/3 accepted)");

    std::string validate_file;
    auto* val = app.add_subcommand("validate", "check a config file and print the resolved configuration");
    val->add_option("file", validate_file, "config file")->required();

    auto* list = app.add_subcommand("list-scenarios", "list the built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed()) return run_cmd(run_o, check);
        if (sw->parsed()) return sweep_cmd(sweep_o, parameter, values);
        if (val->parsed()) return validate_cmd(validate_file);
        if (list->parsed()) return list_cmd();
    } catch (const vq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
