#include "valleyqed/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "valleyqed/bloch.hpp"
#include "valleyqed/csv.hpp"
#include "valleyqed/dynamics.hpp"
#include "valleyqed/edgemodes.hpp"
#include "valleyqed/errors.hpp"
#include "valleyqed/observables.hpp"

namespace vq {

using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;

double parse_real(const std::string& text, std::string_view whole) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v)) {
        throw ConfigError("cannot parse phase '" + std::string(whole) + "'");
    }
    return v;
}

// Reads the fields of one config table, remembering which keys were used.
class TableReader {
public:
    TableReader(const json& table, std::string prefix) : table_(table), prefix_(std::move(prefix)) {
        if (!table_.is_object()) throw ConfigError(prefix_ + ": expected a table");
    }

    bool has(const char* key) const { return table_.contains(key); }

    void number(const char* key, double& out) {
        if (const json* v = take(key)) {
            if (!v->is_number()) fail(key, "expected a number");
            out = v->get<double>();
            if (!std::isfinite(out)) fail(key, "must be finite");
        }
    }
    void integer(const char* key, int& out) {
        if (const json* v = take(key)) {
            if (!v->is_number_integer()) fail(key, "expected an integer");
            out = v->get<int>();
        }
    }
    void boolean(const char* key, bool& out) {
        if (const json* v = take(key)) {
            if (!v->is_boolean()) fail(key, "expected true or false");
            out = v->get<bool>();
        }
    }
    void string(const char* key, std::string& out) {
        if (const json* v = take(key)) {
            if (!v->is_string()) fail(key, "expected a string");
            out = v->get<std::string>();
        }
    }
    void phase(const char* key, double& out) {
        if (const json* v = take(key)) {
            try {
                out = parse_phase(*v);
            } catch (const ConfigError& e) {
                fail(key, e.what());
            }
        }
    }
    const json* raw(const char* key) { return take(key); }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ConfigError("config field " + prefix_ + "." + key + ": " + what);
    }

    void reject_unknown() const {
        for (const auto& [key, value] : table_.items()) {
            if (!used_.count(key)) throw ConfigError("unknown config field " + prefix_ + "." + key);
        }
    }

private:
    const json* take(const char* key) {
        used_.insert(key);
        auto it = table_.find(key);
        return it == table_.end() ? nullptr : &*it;
    }

    const json& table_;
    std::string prefix_;
    std::set<std::string> used_;
};

Boundary parse_boundary(const std::string& s, const std::string& field) {
    if (s == "open") return Boundary::Open;
    if (s == "periodic") return Boundary::Periodic;
    throw ConfigError("config field " + field + ": expected 'open' or 'periodic', got '" + s + "'");
}

std::string boundary_name(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

std::string describe(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

void flatten_numbers(const json& node, const std::string& prefix, std::map<std::string, double>& out) {
    if (node.is_number()) {
        out[prefix] = node.get<double>();
    } else if (node.is_boolean()) {
        out[prefix] = node.get<bool>() ? 1.0 : 0.0;
    } else if (node.is_object()) {
        for (const auto& [k, v] : node.items()) flatten_numbers(v, prefix.empty() ? k : prefix + "." + k, out);
    }
}

// ---------------------------------------------------------------------------
// Scenario bodies
// ---------------------------------------------------------------------------

class Runner {
public:
    Runner(const ScenarioConfig& cfg, const RunOptions& opts) : cfg_(cfg), opts_(opts) {
        report_.config = cfg;
        report_.output_dir =
            cfg.output_dir.empty() ? default_output_dir(cfg.kind) : std::filesystem::path(cfg.output_dir);
    }

    ScenarioReport run() {
        switch (cfg_.kind) {
            case ScenarioKind::Bands: bands(); break;
            case ScenarioKind::BulkEmission:
            case ScenarioKind::ChiralEmission:
            case ScenarioKind::Custom: emission(); break;
            case ScenarioKind::Ribbon: ribbon(); break;
        }
        write_json(report_.output_dir / "manifest.json", report_.manifest());
        return std::move(report_);
    }

private:
    std::filesystem::path file(const std::string& name) {
        report_.files.push_back(name);
        return report_.output_dir / name;
    }

    void check(std::string name, bool acceptance, bool passed, std::string detail) {
        if (acceptance && !opts_.acceptance_checks) return;
        report_.checks.push_back({std::move(name), acceptance, passed, std::move(detail)});
    }

    void bands() {
        const double delta = cfg_.delta;
        const int G = cfg_.grid;
        if (G < 3) throw ConfigError("config field run.grid: must be >= 3");
        const auto flux = lower_band_berry_flux(delta, cfg_.J, cfg_.a, G);
        const Vec2 b1 = reciprocal_b1(cfg_.a);
        const Vec2 b2 = reciprocal_b2(cfg_.a);
        std::vector<BandSample> samples;
        samples.reserve(static_cast<std::size_t>(G) * G);
        double min_gap = std::numeric_limits<double>::infinity();
        for (int i = 0; i < G; ++i) {
            for (int j = 0; j < G; ++j) {
                const Vec2 k = (static_cast<double>(i) / G) * b1 + (static_cast<double>(j) / G) * b2;
                const double w = band_energy(k, delta, cfg_.J, cfg_.a);
                samples.push_back({k, w, -w, flux.at(i, j) / flux.plaquette_area});
                min_gap = std::min(min_gap, 2.0 * w);
            }
        }
        write_bands_csv(file("bands.csv"), samples);
        auto& m = report_.metrics;
        m["min_gap"] = min_gap;
        m["expected_gap"] = 2.0 * std::abs(delta);
        double full = 0.0;
        for (double f : flux.flux) full += f / (2.0 * pi);
        m["chern_full_zone"] = full;
        if (delta != 0.0 && G >= 48) {
            const auto c = valley_chern_numeric(delta, cfg_.J, cfg_.a, G);
            m["chern_K"] = c.c_plus;
            m["chern_Kp"] = c.c_minus;
            const double half = delta > 0.0 ? 0.5 : -0.5;
            check("valley Chern numbers equal tau sgn(Delta) / 2 within 0.02", true,
                  std::abs(c.c_plus - half) <= 0.02 && std::abs(c.c_minus + half) <= 0.02,
                  "C_K " + describe(c.c_plus) + ", C_K' " + describe(c.c_minus));
            check("full-zone Chern number vanishes within 0.04", true, std::abs(c.total) <= 0.04,
                  "total " + describe(c.total));
        } else {
            report_.warnings.push_back(delta == 0.0 ? "valley Chern numbers undefined for Delta = 0 (gapless)"
                                                    : "valley Chern numbers need run.grid >= 48");
        }
        const double h = b1.norm() / G;
        const double resolution = 2.0 * std::hypot(delta, dirac_speed(cfg_.a, cfg_.J) * h) - 2.0 * std::abs(delta);
        check("minimum gap equals 2|Delta| within grid resolution", true,
              min_gap >= 2.0 * std::abs(delta) - 1e-12 && min_gap - 2.0 * std::abs(delta) <= resolution + 1e-12,
              "min gap " + describe(min_gap) + " vs " + describe(2.0 * std::abs(delta)));
    }

    json emission_run(const HoneycombSpec& spec, const SparseHermitian& lattice_h, const GiantAtomSpec& atom,
                      const std::string& label) {
        const auto h = assemble_total_hamiltonian(lattice_h, spec, atom);
        EvolveOptions eo;
        eo.t_final = cfg_.t_final;
        eo.dt_report = cfg_.dt_report;
        eo.population_triggers = {cfg_.snapshot_threshold};
        eo.stop_after_triggers = true;
        eo.track_energy = true;
        eo.propagator.tolerance = cfg_.tolerance;
        const auto traj = evolve(h, excited_emitter_state(spec), eo);
        write_trajectory_csv(file("trajectory_" + label + ".csv"), traj);

        json m;
        m["phases"] = json::array();
        for (const auto& p : atom.points()) m["phases"].push_back(p.phase);
        m["norm_drift"] = traj.max_norm_drift();
        m["energy_drift"] = traj.max_energy_drift();
        m["matvecs"] = traj.matvecs;
        check(label + ": norm drift < 1e-8", false, traj.max_norm_drift() < 1e-8,
              "max |norm - 1| = " + describe(traj.max_norm_drift()));
        check(label + ": energy drift < 1e-8", false, traj.max_energy_drift() < 1e-8,
              "max energy drift = " + describe(traj.max_energy_drift()));

        const auto fit = fit_decay_rate(traj, cfg_.fit_upper, cfg_.fit_lower);
        m["gamma"] = fit.gamma;
        m["r_squared"] = fit.r_squared;
        m["fit_points"] = fit.points;
        check(label + ": decay fit R^2 > 0.99", false, fit.r_squared > 0.99, "R^2 = " + describe(fit.r_squared));

        const auto snap = snapshot_at_population(traj, cfg_.snapshot_threshold);
        m["snapshot_time"] = snap.time;
        m["snapshot_population"] = snap.emitter_population();
        write_real_space_csv(file("realspace_" + label + ".csv"), real_space_density(snap, spec));

        if (spec.detuning.is_uniform()) {
            const auto density = momentum_density(snap, spec);
            write_momentum_csv(file("momentum_" + label + ".csv"), density);
            const auto vi = valley_intensities(density, cfg_.q_cut);
            m["I_K"] = vi.I_K;
            m["I_Kp"] = vi.I_Kp;
            m["polarization"] = vi.polarization();
            m["selectivity"] = vi.selectivity();
            m["suppression_ratio"] = vi.suppression_ratio();
        } else {
            m["chirality_down"] = chirality(snap, spec, cfg_.y_exclusion * cfg_.a);
        }
        return m;
    }

    void emission() {
        const auto spec = cfg_.lattice_spec();
        const auto lattice_h = build_lattice_hamiltonian(spec);
        std::vector<std::pair<std::string, GiantAtomSpec>> atoms;
        if (cfg_.kind == ScenarioKind::Custom) {
            atoms.emplace_back("custom", cfg_.custom_atom());
        } else {
            if (opts_.atoms != AtomSelection::Giant) atoms.emplace_back("normal", cfg_.normal_atom());
            if (opts_.atoms != AtomSelection::Normal) atoms.emplace_back("giant", cfg_.giant_atom(cfg_.phase));
            if (opts_.atoms == AtomSelection::All) atoms.emplace_back("giant_reversed", cfg_.giant_atom(-cfg_.phase));
        }
        for (const auto& [label, atom] : atoms) {
            if (auto w = atom.weak_coupling_warning(cfg_.J)) report_.warnings.push_back(*w);
            report_.metrics[label] = emission_run(spec, lattice_h, atom, label);
        }
        if (spec.detuning.domain_wall()) edge_predictions(spec, atoms);
        if (cfg_.kind == ScenarioKind::BulkEmission && opts_.atoms == AtomSelection::All) bulk_acceptance();
        if (cfg_.kind == ScenarioKind::ChiralEmission && opts_.atoms == AtomSelection::All) chiral_acceptance();
    }

    void edge_predictions(const HoneycombSpec& spec, const std::vector<std::pair<std::string, GiantAtomSpec>>& atoms) {
        const auto p = envelope_params(spec);
        json rates{{"beta", p.beta_profile}, {"xi", p.xi}, {"A", p.A}};
        json fitted = json::object(), predicted = json::object();
        for (const auto& [label, atom] : atoms) {
            auto& m = report_.metrics[label];
            fitted[label] = m["gamma"];
            try {
                double total = 0.0;
                if (atom.size() == 1) {
                    const auto x = cell_vector(atom.points()[0].n, atom.points()[0].m, spec.a).x();
                    const auto r = decay_rate_normal(x, atom.g(), p, atom.omega0());
                    total = r.total;
                    if (label == "normal") {
                        rates["Gamma_normal_per_valley"] = r.per_valley;
                        rates["Gamma_total"] = r.total;
                    }
                } else {
                    const auto r = decay_rate_giant(atom, p);
                    if (r.footprint_warning) report_.warnings.push_back(*r.footprint_warning);
                    total = r.plus + r.minus;
                    m["predicted_gamma_K"] = r.plus;
                    m["predicted_gamma_Kp"] = r.minus;
                    if (label == "giant") {
                        rates["Gamma_giant_plus"] = r.plus;
                        rates["Gamma_giant_minus"] = r.minus;
                    }
                }
                m["predicted_gamma"] = total;
                predicted[label] = total;
            } catch (const DomainError& e) {
                report_.warnings.push_back(label + ": no analytic rate (" + e.what() + ")");
            }
        }
        rates["fitted"] = fitted;
        rates["predicted"] = predicted;
        write_json(file("rates.json"), rates);
    }

    double metric(const std::string& label, const char* key) const {
        return report_.metrics.at(label).at(key).get<double>();
    }

    void bulk_acceptance() {
        const double ratio = metric("normal", "suppression_ratio");
        check("normal atom: valley intensities equal within 5%", true, ratio >= 0.95,
              "I_min/I_max = " + describe(ratio));
        for (const char* label : {"giant", "giant_reversed"}) {
            const double r = metric(label, "suppression_ratio");
            check(std::string(label) + ": suppressed valley < 2% of selected", true, r < 0.02,
                  "I_min/I_max = " + describe(r));
        }
        const double pa = metric("giant", "polarization");
        const double pb = metric("giant_reversed", "polarization");
        check("opposite phases select opposite valleys", true, pa * pb < 0.0,
              "polarizations " + describe(pa) + ", " + describe(pb));
    }

    void chiral_acceptance() {
        const double cn = metric("normal", "chirality_down");
        check("normal atom: chirality 0.5 +- 0.05", true, std::abs(cn - 0.5) <= 0.05, "down fraction " + describe(cn));
        const double ca = metric("giant", "chirality_down");
        const double cb = metric("giant_reversed", "chirality_down");
        const bool one_way = (ca >= 0.95 && cb <= 0.05) || (ca <= 0.05 && cb >= 0.95);
        check("giant atom: opposite phases emit >= 95% in opposite directions", true, one_way,
              "down fractions " + describe(ca) + ", " + describe(cb));
        const double gn = metric("normal", "gamma");
        check("normal atom: fitted rate 0.03J within 10%", true, std::abs(gn - 0.03) <= 0.1 * 0.03,
              "Gamma = " + describe(gn));
        const double gg = metric("giant", "gamma");
        check("giant atom: fitted rate 0.021J within 15%", true, std::abs(gg - 0.021) <= 0.15 * 0.021,
              "Gamma = " + describe(gg));
        for (const auto& [label, tol] : {std::pair{"normal", 0.05}, std::pair{"giant", 0.10}}) {
            const auto& m = report_.metrics.at(label);
            if (!m.contains("predicted_gamma")) continue;
            const double fit = m.at("gamma").get<double>();
            const double pred = m.at("predicted_gamma").get<double>();
            const double rel = std::abs(pred - fit) / fit;
            check(std::string(label) + ": analytic rate within " + describe(100 * tol) + "% of fit", true, rel <= tol,
                  "predicted " + describe(pred) + ", fitted " + describe(fit) + " (" + describe(100 * rel) + "%)");
        }
    }

    void ribbon() {
        const auto spec = cfg_.lattice_spec();
        const auto spectrum = compute_ribbon_spectrum(spec, cfg_.n_ky);
        write_ribbon_csv(file("ribbon.csv"), spectrum);
        auto& m = report_.metrics;
        const auto crossings = zero_crossings(spectrum);
        m["zero_crossings"] = crossings.size();
        m["in_gap_states"] = spectrum.in_gap_modes.size();
        const double v = dirac_speed(cfg_.a, cfg_.J);
        m["dirac_speed"] = v;
        bool slopes_ok = true;
        std::map<int, double> slope;
        for (int tau : {1, -1}) {
            try {
                slope[tau] = edge_dispersion_fit(spectrum, tau);
                m[tau == 1 ? "slope_K" : "slope_Kp"] = slope[tau];
            } catch (const DomainError& e) {
                slopes_ok = false;
                report_.warnings.push_back(e.what());
            }
        }
        check("exactly two in-gap branches cross zero", true, crossings.size() == 2,
              describe(static_cast<double>(crossings.size())) + " crossings");
        if (slopes_ok) {
            const bool ok = std::abs(std::abs(slope[1]) - v) <= 0.05 * v && std::abs(std::abs(slope[-1]) - v) <= 0.05 * v &&
                            slope[1] * slope[-1] < 0.0;
            check("edge slopes are +-v within 5%", true, ok,
                  "slopes " + describe(slope[1]) + ", " + describe(slope[-1]) + " vs v = " + describe(v));
        } else {
            check("edge slopes are +-v within 5%", true, false, "an edge branch is missing");
        }

        if (spectrum.in_gap_modes.empty()) {
            throw DomainError("ribbon has no in-gap states (gapless or topologically trivial)");
        }
        const auto best = std::min_element(spectrum.in_gap_modes.begin(), spectrum.in_gap_modes.end(),
                                           [](const InGapMode& x, const InGapMode& y) {
                                               return std::abs(x.omega) < std::abs(y.omega);
                                           });
        m["mode_ky"] = spectrum.ky[best->ky_index];
        m["mode_omega"] = best->omega;
        if (const auto* w = spec.detuning.domain_wall(); w && w->delta0 != 0.0) {
            const auto p = envelope_params(spec);
            const double overlap = envelope_overlap(best->vector, p);
            m["profile_overlap"] = overlap;
            m["xi"] = p.xi;
            m["beta"] = p.beta_profile;
            const auto numeric = ribbon_column_profile(best->vector);
            const auto analytic = envelope_discrete_columns(p);
            std::vector<ProfileRow> rows;
            for (std::size_t i = 0; i < numeric.size(); ++i) {
                rows.push_back({1.5 * (spec.n_min() + static_cast<int>(i)) * spec.a, numeric[i], analytic[i]});
            }
            write_profile_csv(file("profile.csv"), rows);
            check("near-zero mode overlaps the analytic envelope > 0.99", true, overlap > 0.99,
                  "overlap " + describe(overlap));
        }
    }

    const ScenarioConfig& cfg_;
    const RunOptions& opts_;
    ScenarioReport report_;
};

}  // namespace

// ---------------------------------------------------------------------------

std::string_view scenario_name(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Bands: return "bands";
        case ScenarioKind::BulkEmission: return "bulk";
        case ScenarioKind::Ribbon: return "ribbon";
        case ScenarioKind::ChiralEmission: return "chiral";
        case ScenarioKind::Custom: return "custom";
    }
    return "custom";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "bands") return ScenarioKind::Bands;
    if (s == "bulk" || s == "bulk_emission" || s == "bulkemission") return ScenarioKind::BulkEmission;
    if (s == "ribbon") return ScenarioKind::Ribbon;
    if (s == "chiral" || s == "chiral_emission" || s == "chiralemission") return ScenarioKind::ChiralEmission;
    if (s == "custom") return ScenarioKind::Custom;
    throw ConfigError("unknown scenario '" + std::string(name) + "' (expected bands, bulk, ribbon, chiral or custom)");
}

std::vector<ScenarioInfo> scenario_catalogue() {
    return {
        {ScenarioKind::Bands, "bare-lattice bands and lower-band Berry curvature on the rhombic zone, valley Chern numbers"},
        {ScenarioKind::BulkEmission,
         "emission into the uniform gapped lattice: normal atom and two-point giant atom at +phase and -phase; "
         "decay fits, momentum densities at the snapshot, valley intensities"},
        {ScenarioKind::Ribbon, "domain-wall ribbon spectrum versus ky, edge-branch slopes, zero-mode profile"},
        {ScenarioKind::ChiralEmission,
         "emission at a domain wall: decay fits, real-space snapshots, chirality, edge-mode rate predictions"},
        {ScenarioKind::Custom, "any lattice plus an explicit list of coupling points"},
    };
}

double parse_phase(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.empty()) throw ConfigError("empty phase literal");
    const auto p = s.find("pi");
    if (p == std::string::npos) return parse_real(s, text);

    double sign = 1.0;
    std::string coef = s.substr(0, p);
    if (!coef.empty() && (coef.front() == '-' || coef.front() == '+')) {
        if (coef.front() == '-') sign = -1.0;
        coef.erase(coef.begin());
    }
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    double value = sign * (coef.empty() ? 1.0 : parse_real(coef, text)) * pi;
    std::string rest = s.substr(p + 2);
    if (!rest.empty()) {
        if (rest.front() != '/') throw ConfigError("cannot parse phase '" + std::string(text) + "'");
        const double d = parse_real(rest.substr(1), text);
        if (d == 0.0) throw ConfigError("phase literal divides by zero: '" + std::string(text) + "'");
        value /= d;
    }
    return value;
}

double parse_phase(const json& value) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) return parse_phase(std::string_view(value.get_ref<const std::string&>()));
    throw ConfigError("phase must be a number (radians) or a literal such as \"pi/3\"");
}

HoneycombSpec ScenarioConfig::lattice_spec() const {
    HoneycombSpec s;
    s.n1 = n1;
    s.ny = ny;
    s.a = a;
    s.J = J;
    if (domain_wall) {
        s.detuning = DomainWallDetuning{delta0, lambda, Vec2(1.0, 0.0)};
    } else {
        s.detuning = UniformDetuning{delta};
    }
    s.boundary_e1 = boundary_e1;
    s.boundary_e2 = boundary_e2;
    s.validate();
    return s;
}

GiantAtomSpec ScenarioConfig::normal_atom() const { return GiantAtomSpec(omega0, g, {{0, 0, 0.0}}); }

GiantAtomSpec ScenarioConfig::giant_atom(double relative_phase) const {
    if (separation_n == 0 && separation_m == 0) throw ConfigError("config field atom.separation: must be nonzero");
    return GiantAtomSpec(omega0, g, {{0, 0, 0.0}, {separation_n, separation_m, relative_phase}});
}

GiantAtomSpec ScenarioConfig::custom_atom() const { return GiantAtomSpec(omega0, g, points); }

json ScenarioConfig::to_json() const {
    json pts = json::array();
    for (const auto& p : points) pts.push_back({{"n", p.n}, {"m", p.m}, {"phase", p.phase}});
    return {
        {"scenario", std::string(scenario_name(kind))},
        {"lattice",
         {{"n1", n1},
          {"ny", ny},
          {"a", a},
          {"J", J},
          {"profile", domain_wall ? "domain_wall" : "uniform"},
          {"delta", delta},
          {"delta0", delta0},
          {"lambda", lambda},
          {"boundary_e1", boundary_name(boundary_e1)},
          {"boundary_e2", boundary_name(boundary_e2)}}},
        {"atom",
         {{"omega0", omega0},
          {"g", g},
          {"phase", phase},
          {"separation", {separation_n, separation_m}},
          {"points", pts}}},
        {"run",
         {{"t_final", t_final},
          {"dt_report", dt_report},
          {"snapshot_threshold", snapshot_threshold},
          {"output_dir", output_dir},
          {"full_scale", full_scale},
          {"grid", grid},
          {"n_ky", n_ky},
          {"q_cut", q_cut},
          {"y_exclusion", y_exclusion},
          {"fit_upper", fit_upper},
          {"fit_lower", fit_lower},
          {"tolerance", tolerance}}},
    };
}

ScenarioConfig default_config(ScenarioKind kind, bool full_scale) {
    ScenarioConfig c;
    c.kind = kind;
    c.full_scale = full_scale;
    switch (kind) {
        case ScenarioKind::Bands:
            c.n1 = c.ny = 24;
            c.delta = 0.3;
            c.boundary_e1 = c.boundary_e2 = Boundary::Periodic;
            c.grid = 96;
            break;
        case ScenarioKind::BulkEmission:
            c.n1 = c.ny = full_scale ? 331 : 151;
            c.delta = 0.5;
            c.omega0 = 0.7;
            c.g = 0.18;
            c.phase = -pi / 3.0;
            c.t_final = 600.0;
            c.dt_report = 2.0;
            break;
        case ScenarioKind::Ribbon:
            c.n1 = 100;
            c.ny = 100;
            c.domain_wall = true;
            c.delta0 = 0.2;
            c.lambda = 4.0;
            c.boundary_e1 = Boundary::Open;
            c.boundary_e2 = Boundary::Periodic;
            break;
        case ScenarioKind::ChiralEmission:
            c.n1 = c.ny = full_scale ? 551 : 301;
            c.domain_wall = true;
            c.delta0 = 0.5;
            c.lambda = 2.0;
            c.omega0 = 0.0;
            c.g = 0.3;
            c.phase = -pi / 3.0;
            c.t_final = 800.0;
            c.dt_report = 2.0;
            break;
        case ScenarioKind::Custom:
            break;
    }
    return c;
}

json parse_config_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream msg;
        msg << origin << ":" << line << ":" << col << ": config syntax error: " << e.what();
        throw ConfigError(msg.str());
    }
}

json load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

ScenarioConfig resolve_config(const json& input_raw) {
    if (!input_raw.is_object()) throw ConfigError("config: top level must be a table");
    const json& input = (input_raw.contains("schema_version") && input_raw.contains("config")) ? input_raw.at("config")
                                                                                                : input_raw;
    if (!input.is_object()) throw ConfigError("config: top level must be a table");
    TableReader top(input, "config");
    std::string name;
    top.string("scenario", name);
    if (name.empty()) throw ConfigError("config field config.scenario: required");
    const auto kind = parse_scenario_kind(name);

    bool full_scale = false;
    if (input.contains("run")) {
        TableReader run(input.at("run"), "run");
        run.boolean("full_scale", full_scale);
    }
    ScenarioConfig c = default_config(kind, full_scale);

    if (const json* lat = top.raw("lattice")) {
        TableReader r(*lat, "lattice");
        if (r.has("size")) {
            int size = 0;
            r.integer("size", size);
            c.n1 = c.ny = size;
        }
        r.integer("n1", c.n1);
        r.integer("ny", c.ny);
        r.number("a", c.a);
        r.number("J", c.J);
        std::string profile = c.domain_wall ? "domain_wall" : "uniform";
        r.string("profile", profile);
        if (profile == "uniform") {
            c.domain_wall = false;
        } else if (profile == "domain_wall") {
            c.domain_wall = true;
        } else {
            r.fail("profile", "expected 'uniform' or 'domain_wall'");
        }
        r.number("delta", c.delta);
        r.number("delta0", c.delta0);
        r.number("lambda", c.lambda);
        std::string b1 = boundary_name(c.boundary_e1), b2 = boundary_name(c.boundary_e2);
        r.string("boundary_e1", b1);
        r.string("boundary_e2", b2);
        c.boundary_e1 = parse_boundary(b1, "lattice.boundary_e1");
        c.boundary_e2 = parse_boundary(b2, "lattice.boundary_e2");
        r.reject_unknown();
    }
    if (const json* atom = top.raw("atom")) {
        TableReader r(*atom, "atom");
        r.number("omega0", c.omega0);
        r.number("g", c.g);
        r.phase("phase", c.phase);
        if (const json* sep = r.raw("separation")) {
            if (!sep->is_array() || sep->size() != 2 || !(*sep)[0].is_number_integer() ||
                !(*sep)[1].is_number_integer()) {
                r.fail("separation", "expected [dn, dm] integers");
            }
            c.separation_n = (*sep)[0].get<int>();
            c.separation_m = (*sep)[1].get<int>();
        }
        if (const json* pts = r.raw("points")) {
            if (!pts->is_array()) r.fail("points", "expected a list of {n, m, phase} tables");
            c.points.clear();
            for (std::size_t i = 0; i < pts->size(); ++i) {
                TableReader p((*pts)[i], "atom.points[" + std::to_string(i) + "]");
                CouplingPoint cp;
                if (!p.has("n") || !p.has("m")) p.fail("n", "each point needs integer n and m");
                p.integer("n", cp.n);
                p.integer("m", cp.m);
                p.phase("phase", cp.phase);
                p.reject_unknown();
                c.points.push_back(cp);
            }
            if (c.points.empty()) r.fail("points", "at least one coupling point is required");
        }
        r.reject_unknown();
    }
    if (const json* run = top.raw("run")) {
        TableReader r(*run, "run");
        r.number("t_final", c.t_final);
        r.number("dt_report", c.dt_report);
        r.number("snapshot_threshold", c.snapshot_threshold);
        r.string("output_dir", c.output_dir);
        r.boolean("full_scale", c.full_scale);
        r.integer("grid", c.grid);
        r.integer("n_ky", c.n_ky);
        r.number("q_cut", c.q_cut);
        r.number("y_exclusion", c.y_exclusion);
        r.number("fit_upper", c.fit_upper);
        r.number("fit_lower", c.fit_lower);
        r.number("tolerance", c.tolerance);
        r.reject_unknown();
    }
    top.reject_unknown();

    if (!(c.t_final >= 0.0)) throw ConfigError("config field run.t_final: must be >= 0");
    if (!(c.dt_report > 0.0)) throw ConfigError("config field run.dt_report: must be positive");
    if (!(c.snapshot_threshold > 0.0 && c.snapshot_threshold <= 1.0)) {
        throw ConfigError("config field run.snapshot_threshold: must lie in (0, 1]");
    }
    if (!(c.fit_lower > 0.0 && c.fit_lower < c.fit_upper && c.fit_upper <= 1.0)) {
        throw ConfigError("config fields run.fit_lower/fit_upper: need 0 < lower < upper <= 1");
    }
    if (!(c.tolerance > 0.0)) throw ConfigError("config field run.tolerance: must be positive");
    if (!(c.g >= 0.0)) throw ConfigError("config field atom.g: must be >= 0");
    c.lattice_spec();  // validates the lattice block
    return c;
}

std::filesystem::path default_output_dir(ScenarioKind kind) {
    const char* root = std::getenv("VALLEYQED_OUTPUT_ROOT");
    const std::filesystem::path base = (root && *root) ? root : "valleyqed_out";
    return base / std::string(scenario_name(kind));
}

bool ScenarioReport::consistent() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.acceptance || c.passed; });
}

bool ScenarioReport::acceptance_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.acceptance || c.passed; });
}

json ScenarioReport::manifest() const {
    json checks_json = json::array();
    for (const auto& c : checks) {
        checks_json.push_back(
            {{"name", c.name}, {"kind", c.acceptance ? "acceptance" : "consistency"}, {"passed", c.passed}, {"detail", c.detail}});
    }
    json cfg = config.to_json();
    cfg["run"]["output_dir"] = output_dir.string();
    return {{"schema_version", manifest_schema_version},
            {"tool", "valleyqed"},
            {"scenario", std::string(scenario_name(config.kind))},
            {"config", cfg},
            {"metrics", metrics},
            {"checks", checks_json},
            {"warnings", warnings},
            {"files", files}};
}

ScenarioReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
    return Runner(config, options).run();
}

std::vector<std::string> SweepTable::columns() const {
    std::set<std::string> keys;
    for (const auto& r : rows) {
        for (const auto& [k, v] : r.metrics) keys.insert(k);
    }
    return {keys.begin(), keys.end()};
}

SweepTable sweep(const ScenarioConfig& config, const std::string& parameter, const std::vector<double>& values) {
    static const std::set<std::string> allowed{"Delta", "Delta0", "lambda", "g", "omega0", "phase"};
    if (!allowed.count(parameter)) {
        throw ConfigError("sweep parameter '" + parameter + "' not one of Delta, Delta0, lambda, g, omega0, phase");
    }
    const bool emission = config.kind == ScenarioKind::BulkEmission || config.kind == ScenarioKind::ChiralEmission;
    if (parameter == "phase" && !emission) {
        throw ConfigError("phase sweeps need the bulk or chiral scenario");
    }
    const std::filesystem::path base =
        (config.output_dir.empty() ? default_output_dir(config.kind) : std::filesystem::path(config.output_dir)) /
        ("sweep_" + parameter);

    SweepTable table;
    table.parameter = parameter;
    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepRow row;
        row.value = values[i];
        ScenarioConfig c = config;
        const double x = values[i];
        if (parameter == "Delta") c.delta = x;
        if (parameter == "Delta0") c.delta0 = x;
        if (parameter == "lambda") c.lambda = x;
        if (parameter == "g") c.g = x;
        if (parameter == "omega0") c.omega0 = x;
        if (parameter == "phase") c.phase = x;
        c.output_dir = (base / std::to_string(i)).string();
        RunOptions opts;
        if (emission) opts.atoms = parameter == "phase" ? AtomSelection::Giant : AtomSelection::Normal;
        try {
            const auto report = run_scenario(c, opts);
            flatten_numbers(report.metrics, "", row.metrics);
            row.ok = report.consistent();
            if (!row.ok) row.error = "consistency check failed";
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepTable& table) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file " + path.string());
    out.precision(17);
    const auto cols = table.columns();
    out << table.parameter << ",status";
    for (const auto& c : cols) out << ',' << c;
    out << ",error\n";
    for (const auto& r : table.rows) {
        out << r.value << ',' << (r.ok ? "ok" : "failed");
        for (const auto& c : cols) {
            out << ',';
            if (auto it = r.metrics.find(c); it != r.metrics.end()) out << it->second;
        }
        std::string err = r.error;
        std::replace(err.begin(), err.end(), '"', '\'');
        out << ",\"" << err << "\"\n";
    }
    if (!out) throw ConfigError("failed while writing " + path.string());
}

}  // namespace vq
