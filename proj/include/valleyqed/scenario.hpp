#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "valleyqed/emitter.hpp"
#include "valleyqed/lattice.hpp"

namespace vq {

inline constexpr int manifest_schema_version = 1;

enum class ScenarioKind { Bands, BulkEmission, Ribbon, ChiralEmission, Custom };

std::string_view scenario_name(ScenarioKind kind);
// Accepts the canonical names (bands, bulk, ribbon, chiral, custom) and the
// long forms (bulk_emission, chiral_emission). ConfigError otherwise.
ScenarioKind parse_scenario_kind(std::string_view name);

struct ScenarioInfo {
    ScenarioKind kind;
    std::string description;
};
std::vector<ScenarioInfo> scenario_catalogue();

// Radians from a number or a literal such as "pi/3", "-pi/3", "2pi/3", "0.25".
double parse_phase(const nlohmann::json& value);
double parse_phase(std::string_view text);

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::Custom;

    // lattice
    int n1 = 51;
    int ny = 51;
    double a = 1.0;
    double J = 1.0;
    bool domain_wall = false;
    double delta = 0.5;   // uniform profile
    double delta0 = 0.5;  // domain wall
    double lambda = 2.0;  // domain wall
    Boundary boundary_e1 = Boundary::Open;
    Boundary boundary_e2 = Boundary::Open;

    // atom: the giant atom of the emission scenarios couples at (0, 0) with
    // phase 0 and at `separation` with `phase`; Custom uses `points`.
    double omega0 = 0.7;
    double g = 0.18;
    double phase = 0.0;
    int separation_n = 0;
    int separation_m = 1;
    std::vector<CouplingPoint> points{{0, 0, 0.0}};

    // run
    double t_final = 600.0;
    double dt_report = 2.0;
    double snapshot_threshold = 0.01;
    std::string output_dir;
    bool full_scale = false;
    int grid = 96;             // Bands: k grid per reciprocal direction
    int n_ky = 0;              // Ribbon: transverse momenta (0 selects ny)
    double q_cut = -1.0;       // valley disk radius, < 0 selects 0.25 |K|
    double y_exclusion = 5.0;  // chirality near-field cut, units of a
    double fit_upper = 0.9;
    double fit_lower = 0.1;
    double tolerance = 1e-10;  // propagator truncation

    HoneycombSpec lattice_spec() const;
    GiantAtomSpec normal_atom() const;
    // Two-point atom with relative phase `relative_phase`.
    GiantAtomSpec giant_atom(double relative_phase) const;
    // Custom scenario atom.
    GiantAtomSpec custom_atom() const;

    // Complete resolved configuration, accepted back by resolve_config.
    nlohmann::json to_json() const;
};

// Per-scenario defaults (desk scale unless full_scale).
ScenarioConfig default_config(ScenarioKind kind, bool full_scale = false);

// Parses a config file; syntax errors report line and column.
nlohmann::json load_config_file(const std::filesystem::path& path);
nlohmann::json parse_config_text(const std::string& text, const std::string& origin = "<config>");

// Defaults for the named scenario, overridden by every field present in
// `input`. A run manifest is accepted in place of a config. Unknown or
// ill-typed fields raise ConfigError naming the field.
ScenarioConfig resolve_config(const nlohmann::json& input);

// Output directory used when the config leaves it empty:
// $VALLEYQED_OUTPUT_ROOT (or ./valleyqed_out) / <scenario name>.
std::filesystem::path default_output_dir(ScenarioKind kind);

struct CheckResult {
    std::string name;
    bool acceptance = false;  // false: internal consistency check
    bool passed = false;
    std::string detail;
};

struct ScenarioReport {
    ScenarioConfig config;
    std::filesystem::path output_dir;
    nlohmann::json metrics = nlohmann::json::object();
    std::vector<CheckResult> checks;
    std::vector<std::string> warnings;
    std::vector<std::string> files;

    bool consistent() const;
    bool acceptance_passed() const;
    nlohmann::json manifest() const;
};

enum class AtomSelection { All, Normal, Giant };

struct RunOptions {
    bool acceptance_checks = false;
    // Emission scenarios run the normal atom and the giant atom at +phase and
    // -phase; a narrower selection runs just that atom (configured phase).
    AtomSelection atoms = AtomSelection::All;
};

// Runs a scenario, writes its artifacts and manifest.json into the output
// directory and returns the collected metrics and checks.
ScenarioReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

struct SweepRow {
    double value = 0.0;
    bool ok = false;
    std::map<std::string, double> metrics;
    std::string error;
};

struct SweepTable {
    std::string parameter;
    std::vector<SweepRow> rows;
    std::vector<std::string> columns() const;  // union of metric names, sorted
};

// parameter in {Delta, Delta0, lambda, g, omega0, phase}. Emission scenarios
// run one atom per value: the giant atom for phase sweeps, the normal atom
// otherwise. Each row owns output_dir/sweep_<parameter>/<index>. Failures are
// recorded per row and the sweep continues.
SweepTable sweep(const ScenarioConfig& config, const std::string& parameter, const std::vector<double>& values);
void write_sweep_csv(const std::filesystem::path& path, const SweepTable& table);

}  // namespace vq
