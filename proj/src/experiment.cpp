#include "kolmo/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "kolmo/checkpoint.hpp"
#include "kolmo/diagnostics.hpp"
#include "kolmo/solver.hpp"
#include "kolmo/spectral_ops.hpp"

namespace kolmo {

namespace {

constexpr const char* kVersion = "1.0.0";

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// --- config text format ----------------------------------------------------

struct RawLine {
    int number;
    std::string section;
    std::string key;
    std::string value;
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<RawLine> tokenize_config(const std::string& text) {
    std::vector<RawLine> lines;
    std::istringstream in(text);
    std::string line, section;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(number) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(number) + ": expected key = value");
        if (section.empty())
            throw ConfigError("line " + std::to_string(number) + ": key outside any [section]");
        lines.push_back({number, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
    }
    return lines;
}

double parse_double(const RawLine& l) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(l.value, &pos);
        if (pos != l.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(l.number) + ": [" + l.section + "] " + l.key +
                          " expects a number, got '" + l.value + "'");
    }
}

long long parse_int(const RawLine& l) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(l.value, &pos);
        if (pos != l.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(l.number) + ": [" + l.section + "] " + l.key +
                          " expects an integer, got '" + l.value + "'");
    }
}

bool parse_bool(const RawLine& l) {
    if (l.value == "true" || l.value == "1") return true;
    if (l.value == "false" || l.value == "0") return false;
    throw ConfigError("line " + std::to_string(l.number) + ": [" + l.section + "] " + l.key +
                      " expects true/false");
}

std::vector<std::string> parse_list(const std::string& value) {
    std::vector<std::string> out;
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

CustomRadial load_profile_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("force.profile_file: cannot open '" + path + "'");
    CustomRadial custom;
    double s, g;
    while (in >> s >> g) custom.table.emplace_back(s, g);
    if (custom.table.size() < 2)
        throw ConfigError("force.profile_file: '" + path + "' needs at least two rows");
    return custom;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::string force_shape = "ball";
    double amplitude = 1.0, r1 = 0.0, r2 = 0.0;
    std::string profile_file;

    for (const RawLine& l : tokenize_config(text)) {
        auto unknown = [&]() -> ConfigError {
            return ConfigError("line " + std::to_string(l.number) + ": unknown key '" + l.key +
                               "' in [" + l.section + "]");
        };
        if (l.section == "model") {
            if (l.key == "kind") {
                if (l.value == "nse") cfg.model = ModelKind::nse;
                else if (l.value == "fractional") cfg.model = ModelKind::fractional_nse;
                else if (l.value == "stokes") cfg.model = ModelKind::stokes;
                else
                    throw ConfigError("line " + std::to_string(l.number) +
                                      ": model.kind must be nse|fractional|stokes");
            } else if (l.key == "alpha") cfg.alpha = parse_double(l);
            else if (l.key == "nu") cfg.nu = parse_double(l);
            else if (l.key == "delta") cfg.delta = parse_double(l);
            else if (l.key == "epsilon") cfg.epsilon = parse_double(l);
            else throw unknown();
        } else if (l.section == "force") {
            if (l.key == "shape") force_shape = l.value;
            else if (l.key == "amplitude") amplitude = parse_double(l);
            else if (l.key == "ell0") cfg.force.ell0 = parse_double(l);
            else if (l.key == "c") cfg.force.c = parse_double(l);
            else if (l.key == "r1") r1 = parse_double(l);
            else if (l.key == "r2") r2 = parse_double(l);
            else if (l.key == "profile_file") profile_file = l.value;
            else throw unknown();
        } else if (l.section == "damping") {
            if (l.key == "rule") {
                if (l.value == "from_force") cfg.damping = DampingRule::from_force();
                else if (l.value == "from_viscosity") cfg.damping = DampingRule::from_viscosity();
                else if (l.value == "explicit") cfg.damping.kind = DampingRule::Kind::explicit_value;
                else
                    throw ConfigError("line " + std::to_string(l.number) +
                                      ": damping.rule must be from_force|from_viscosity|explicit");
            } else if (l.key == "beta") cfg.damping.value = parse_double(l);
            else throw unknown();
        } else if (l.section == "grid") {
            if (l.key == "L") cfg.L = parse_double(l);
            else if (l.key == "n") cfg.n = static_cast<int>(parse_int(l));
            else throw unknown();
        } else if (l.section == "time") {
            if (l.key == "dt") cfg.dt = parse_double(l);
            else if (l.key == "t_end") cfg.t_end = parse_double(l);
            else if (l.key == "burn_in") cfg.burn_in = parse_double(l);
            else if (l.key == "cfl") cfg.cfl_number = parse_double(l);
            else throw unknown();
        } else if (l.section == "initial") {
            if (l.key == "kind") cfg.initial_kind = l.value;
            else if (l.key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(l));
            else if (l.key == "energy") cfg.ic_energy = parse_double(l);
            else if (l.key == "cutoff") cfg.ic_cutoff = parse_double(l);
            else throw unknown();
        } else if (l.section == "output") {
            if (l.key == "directory") cfg.output_directory = l.value;
            else if (l.key == "regimes") cfg.report_regimes = parse_list(l.value);
            else if (l.key == "checkpoint") cfg.write_checkpoint = parse_bool(l);
            else if (l.key == "record_every") cfg.record_every = static_cast<int>(parse_int(l));
            else if (l.key == "condition_K") cfg.condition_margin_K = parse_double(l);
            else if (l.key == "appendix_c_constant") cfg.appendix_c_constant = parse_double(l);
            else throw unknown();
        } else {
            throw ConfigError("line " + std::to_string(l.number) + ": unknown section [" +
                              l.section + "]");
        }
    }

    cfg.force.alpha = cfg.alpha;
    if (force_shape == "ball") {
        cfg.force.shape = BallIndicator{amplitude};
    } else if (force_shape == "shell") {
        cfg.force.shape = Shell{amplitude, r1, r2};
    } else if (force_shape == "custom") {
        CustomRadial custom = load_profile_table(profile_file);
        custom.amplitude = amplitude;
        cfg.force.shape = std::move(custom);
    } else {
        throw ConfigError("force.shape must be ball|shell|custom, got '" + force_shape + "'");
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

std::string emit_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "[model]\n";
    out << "kind = "
        << (c.model == ModelKind::nse ? "nse"
                                      : (c.model == ModelKind::fractional_nse ? "fractional"
                                                                              : "stokes"))
        << "\n";
    out << "alpha = " << fmt17(c.alpha) << "\n";
    out << "nu = " << fmt17(c.nu) << "\n";
    out << "delta = " << fmt17(c.delta) << "\n";
    out << "epsilon = " << fmt17(c.epsilon) << "\n\n";

    out << "[force]\n";
    if (const auto* ball = std::get_if<BallIndicator>(&c.force.shape)) {
        out << "shape = ball\n";
        out << "amplitude = " << fmt17(ball->amplitude) << "\n";
    } else if (const auto* shell = std::get_if<Shell>(&c.force.shape)) {
        out << "shape = shell\n";
        out << "amplitude = " << fmt17(shell->amplitude) << "\n";
        out << "r1 = " << fmt17(shell->r1) << "\n";
        out << "r2 = " << fmt17(shell->r2) << "\n";
    } else {
        out << "shape = custom\n";
        out << "profile_file = <table not serializable inline>\n";
    }
    out << "ell0 = " << fmt17(c.force.ell0) << "\n";
    out << "c = " << fmt17(c.force.c) << "\n\n";

    out << "[damping]\n";
    switch (c.damping.kind) {
        case DampingRule::Kind::beta_from_force: out << "rule = from_force\n"; break;
        case DampingRule::Kind::beta_from_viscosity: out << "rule = from_viscosity\n"; break;
        case DampingRule::Kind::explicit_value:
            out << "rule = explicit\nbeta = " << fmt17(c.damping.value) << "\n";
            break;
    }
    out << "\n[grid]\n";
    out << "L = " << fmt17(c.L) << "\n";
    out << "n = " << c.n << "\n\n";

    out << "[time]\n";
    out << "dt = " << fmt17(c.dt) << "\n";
    out << "t_end = " << fmt17(c.t_end) << "\n";
    out << "burn_in = " << fmt17(c.burn_in) << "\n";
    out << "cfl = " << fmt17(c.cfl_number) << "\n\n";

    out << "[initial]\n";
    out << "kind = " << c.initial_kind << "\n";
    out << "seed = " << c.seed << "\n";
    out << "energy = " << fmt17(c.ic_energy) << "\n";
    out << "cutoff = " << fmt17(c.ic_cutoff) << "\n\n";

    out << "[output]\n";
    out << "directory = " << c.output_directory << "\n";
    out << "regimes = ";
    for (std::size_t i = 0; i < c.report_regimes.size(); ++i)
        out << (i ? ", " : "") << c.report_regimes[i];
    out << "\n";
    out << "checkpoint = " << (c.write_checkpoint ? "true" : "false") << "\n";
    out << "record_every = " << c.record_every << "\n";
    out << "condition_K = " << fmt17(c.condition_margin_K) << "\n";
    out << "appendix_c_constant = " << fmt17(c.appendix_c_constant) << "\n";
    return out.str();
}

std::vector<std::string> preset_names() {
    return {"section5", "theorem31_demo", "fractional_demo", "stokes_demo", "appendixC_demo"};
}

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig c;
    auto horizon_from_beta = [&](ExperimentConfig& cfg) {
        const double beta = damping_beta(cfg.damping, continuum_norms(cfg.force), cfg.nu,
                                         cfg.force.ell0);
        cfg.t_end = 20.0 / beta;
        cfg.burn_in = 5.0 / beta;
    };

    if (name == "section5") {
        c.model = ModelKind::nse;
        c.nu = std::sqrt(2.0);
        c.force = ForceProfile{BallIndicator{std::pow(2.0, 2.5)}, 1.0, 0.5, 2.0};
        c.damping = DampingRule::from_force();
        // The support ball |xi| < 1/2 needs lattice spacing well below 1/2;
        // L = 8*ell0 would leave it empty, so this preset uses L = 32*ell0.
        c.L = 32.0;
        c.n = 48;
        c.dt = 2.5e-3;
        horizon_from_beta(c);
        c.report_regimes = {"classical", "small_grashof"};
        c.output_directory = "out/section5";
    } else if (name == "theorem31_demo") {
        c.model = ModelKind::nse;
        c.nu = 1.0;
        c.force = ForceProfile{BallIndicator{1.8}, 2.0, kPi, 2.0};
        c.damping = DampingRule::from_force();
        c.L = 16.0;
        c.n = 48;
        c.dt = 5e-3;
        horizon_from_beta(c);
        c.initial_kind = "random_lowpass";
        c.seed = 2024;
        c.ic_energy = 1.0;
        c.ic_cutoff = 1.5;
        c.report_regimes = {"classical"};
        c.output_directory = "out/theorem31_demo";
    } else if (name == "fractional_demo") {
        c = preset("theorem31_demo");
        c.model = ModelKind::fractional_nse;
        c.alpha = 1.5;
        c.force.alpha = 1.5;
        // amplitude raised so ell0^{alpha+2}/(nu^2 Gr) <= 1/2 holds at alpha = 1.5
        std::get<BallIndicator>(c.force.shape).amplitude = 2.1;
        horizon_from_beta(c);
        c.report_regimes = {"fractional"};
        c.output_directory = "out/fractional_demo";
    } else if (name == "stokes_demo") {
        c.model = ModelKind::stokes;
        c.nu = 1.0;
        c.force = ForceProfile{BallIndicator{0.5}, 1.0, 2.5, 2.0};
        c.damping = DampingRule::from_force();
        c.L = 8.0;
        c.n = 32;
        c.dt = 1e-3;
        c.t_end = 2.0;
        c.burn_in = 0.6;
        c.report_regimes = {"stokes"};
        c.output_directory = "out/stokes_demo";
    } else if (name == "appendixC_demo") {
        c.model = ModelKind::nse;
        c.nu = 0.2;
        c.force = ForceProfile{BallIndicator{4.0}, 2.0, 0.5, 2.0};
        c.damping = DampingRule::from_viscosity();
        c.L = 100.0;
        c.n = 48;
        c.dt = 0.5;
        horizon_from_beta(c);
        c.initial_kind = "random_lowpass";
        c.seed = 7;
        c.ic_energy = 1.0;
        c.ic_cutoff = 0.5;
        c.report_regimes = {"appendix_c", "classical"};
        c.output_directory = "out/appendixC_demo";
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return c;
}

void validate_config(const ExperimentConfig& c) {
    if (!(c.nu > 0.0)) throw ConfigError("model.nu: must be positive");
    if (!(c.alpha > 0.0 && c.alpha < 4.0)) throw ConfigError("model.alpha: must lie in (0, 4)");
    if (c.model != ModelKind::fractional_nse && c.alpha != 2.0)
        throw ConfigError("model.alpha: must be 2 unless model.kind = fractional");
    if (c.delta < 0.0) throw ConfigError("model.delta: must be non-negative");
    if (c.epsilon < 0.0) throw ConfigError("model.epsilon: must be non-negative");
    if (!(c.force.ell0 > 0.0)) throw ConfigError("force.ell0: must be positive");
    if (!(c.force.c > 0.0)) throw ConfigError("force.c: must be positive");
    if (!(c.dt > 0.0)) throw ConfigError("time.dt: must be positive");
    if (!(c.burn_in >= 0.0)) throw ConfigError("time.burn_in: must be non-negative");
    if (!(c.burn_in < c.t_end)) throw ConfigError("time.burn_in: must be smaller than time.t_end");
    if (c.record_every < 1) throw ConfigError("output.record_every: must be >= 1");
    if (c.n < 8 || c.n % 2 != 0) throw ConfigError("grid.n: must be even and >= 8");
    if (!(c.L > 0.0)) throw ConfigError("grid.L: must be positive");

    const GridSpec grid(c.L, c.n);
    if (!(c.force.support_radius() < grid.dealias_cutoff()))
        throw ConfigError("force.c: support radius " + fmt17(c.force.support_radius()) +
                          " must stay below the grid dealias cutoff " +
                          fmt17(grid.dealias_cutoff()) + " (raise grid.n or grid.L)");
    if (c.initial_kind != "zero" && c.initial_kind != "random_lowpass")
        throw ConfigError("initial.kind: must be zero|random_lowpass");
    if (c.initial_kind == "random_lowpass" && !(c.ic_cutoff <= grid.dealias_cutoff()))
        throw ConfigError("initial.cutoff: exceeds the grid dealias cutoff");

    for (const auto& r : c.report_regimes) {
        if (r != "classical" && r != "fractional" && r != "stokes" && r != "appendix_c" &&
            r != "small_grashof")
            throw ConfigError("output.regimes: unknown regime '" + r + "'");
        if (r == "appendix_c" && c.damping.kind != DampingRule::Kind::beta_from_viscosity)
            throw ConfigError("output.regimes: appendix_c requires damping.rule = from_viscosity");
        if (r == "fractional" && !(c.alpha > 3.0 / 7.0 && c.alpha < 3.0))
            throw ConfigError("output.regimes: fractional audit certified only for 3/7 < alpha < 3");
    }
    if (c.model == ModelKind::stokes && c.alpha != 2.0)
        throw ConfigError("model.kind: stokes runs use alpha = 2");
}

namespace {

nlohmann::ordered_json norms_json(double l2, double hneg1, double hnegah, double lap,
                                  double grad, double F) {
    nlohmann::ordered_json j;
    j["l2"] = l2;
    j["h_neg1"] = hneg1;
    j["h_neg_alpha_half"] = hnegah;
    j["laplacian_l2"] = lap;
    j["grad_linf_bound"] = grad;
    j["F"] = F;
    j["units"] = {{"l2", std::string(ForceNorms::unit("l2"))},
                  {"h_neg1", std::string(ForceNorms::unit("h_neg1"))},
                  {"h_neg_alpha_half", std::string(ForceNorms::unit("h_neg_alpha_half"))},
                  {"laplacian_l2", std::string(ForceNorms::unit("laplacian_l2"))},
                  {"grad_linf_bound", std::string(ForceNorms::unit("grad_linf"))},
                  {"F", std::string(ForceNorms::unit("F"))}};
    return j;
}

std::filesystem::path resolve_output_dir(const std::string& directory) {
    std::filesystem::path dir(directory);
    if (const char* root = std::getenv("KOLMO_OUTPUT_ROOT"); root && dir.is_relative())
        dir = std::filesystem::path(root) / dir;
    return dir;
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& cfg) {
    const auto wall_start = std::chrono::steady_clock::now();
    validate_config(cfg);

    const GridSpec grid(cfg.L, cfg.n);
    const SpectralVectorField force = build_force(cfg.force, grid);
    const ForceNorms cont = continuum_norms(cfg.force);
    const double ell0 = cfg.force.ell0;
    const double beta = damping_beta(cfg.damping, cont, cfg.nu, ell0);
    const double Gr = grashof(cont, ell0, cfg.nu);

    const double l2_disc = sobolev_norm(force, 0.0);
    const double hneg1_disc = sobolev_norm(force, -1.0);
    const double hnegah_disc = sobolev_norm(force, -cfg.alpha / 2.0);

    if (!(cfg.t_end - cfg.burn_in >= 10.0 / beta))
        throw ConfigError("time.t_end: averaging window t_end - burn_in = " +
                          fmt17(cfg.t_end - cfg.burn_in) + " must cover 10/beta = " +
                          fmt17(10.0 / beta));

    SimConfig sim{grid,   cfg.nu,    cfg.alpha, cfg.damping, beta,
                  cfg.delta, cfg.epsilon, cfg.dt,    cfg.t_end,  cfg.burn_in};
    sim.transport_enabled = cfg.model != ModelKind::stokes;
    sim.cfl_number = cfg.cfl_number;
    InitialCondition ic = ZeroInitial{};
    if (cfg.initial_kind == "random_lowpass")
        ic = RandomLowpass{cfg.seed, cfg.ic_energy, cfg.ic_cutoff};
    sim.initial = ic;

    SolverState state{0.0, make_initial_condition(ic, grid), 0};
    const SpectralVectorField u0 = state.u;
    const double u0_l2 = sobolev_norm(u0, 0.0);
    Stepper stepper(sim, force);
    EnergyRecorder recorder(grid, force, cfg.alpha, beta, cfg.epsilon > 0.0);
    DiagnosticsLedger ledger(u0_l2 * u0_l2, cfg.nu, beta, cfg.epsilon);
    ledger.append(recorder.make(state));

    const double h = cfg.L / cfg.n;
    const long estimated_steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt));
    const long propagator_stride =
        cfg.model == ModelKind::stokes ? std::max(1L, estimated_steps / 50) : 0;

    double gronwall_worst = 0.0;  // max of measured kinetic minus ceiling
    double propagator_worst = 0.0;
    double dt_target = cfg.dt;

    while (state.t < cfg.t_end * (1.0 - 1e-12)) {
        if (sim.transport_enabled && state.step_index % sim.cfl_check_every == 0) {
            const double speed = max_pointwise_speed(state.u);
            const double cap = speed > 0.0 ? cfg.cfl_number * h / speed : cfg.dt;
            dt_target = std::min(cfg.dt, cap);
        }
        stepper.set_dt(std::min(dt_target, cfg.t_end - state.t));
        state = stepper.step(state);
        const EnergyRecord rec = recorder.make(state);
        ledger.append(rec);

        const double ceiling = gronwall_ceiling(u0_l2, hnegah_disc, cfg.nu, beta, state.t);
        gronwall_worst = std::max(gronwall_worst, rec.kinetic - ceiling);

        if (propagator_stride > 0 && state.step_index % propagator_stride == 0) {
            SpectralVectorField exact = stokes_exact(u0, force, cfg.nu, beta, state.t);
            exact -= state.u;
            const double err = sobolev_norm(exact, 0.0);
            propagator_worst = std::max(propagator_worst, err);
        }
    }

    const RunningAverages avg =
        finalize_averages(ledger.records(), ell0, cfg.nu, cfg.alpha, beta, cfg.burn_in);
    const double Re = avg.Re;

    double min_residual = 0.0;
    for (double r : ledger.residuals()) min_residual = std::min(min_residual, r);

    // --- assemble report ----------------------------------------------------
    nlohmann::ordered_json report;
    report["schema"] = "kolmo-report/1";
    report["approximation"] =
        "whole-space dynamics approximated on a periodic box; box_length = " + fmt17(cfg.L) +
        ", modes_per_axis = " + std::to_string(cfg.n) +
        "; long-time limits replaced by finite-horizon averages with burn-in";
    report["grid"] = {{"L", cfg.L}, {"n", cfg.n}, {"convention", std::string(GridSpec::convention)}};
    report["model"] = {{"kind", cfg.model == ModelKind::nse
                                    ? "nse"
                                    : (cfg.model == ModelKind::fractional_nse ? "fractional"
                                                                              : "stokes")},
                       {"alpha", cfg.alpha},
                       {"nu", cfg.nu},
                       {"beta", beta},
                       {"delta", cfg.delta},
                       {"epsilon", cfg.epsilon},
                       {"damping_rule",
                        cfg.damping.kind == DampingRule::Kind::beta_from_force
                            ? "from_force"
                            : (cfg.damping.kind == DampingRule::Kind::beta_from_viscosity
                                   ? "from_viscosity"
                                   : "explicit")}};
    report["force"] = {{"ell0", ell0},
                       {"c", cfg.force.c},
                       {"support_radius", cfg.force.support_radius()},
                       {"continuum_norms",
                        norms_json(cont.l2, cont.h_neg1, cont.h_neg_alpha_half, cont.laplacian_l2,
                                   cont.grad_linf, cont.F)},
                       {"discrete_norms", {{"l2", l2_disc},
                                           {"h_neg1", hneg1_disc},
                                           {"h_neg_alpha_half", hnegah_disc},
                                           {"note", "post-projection lattice quadrature"}}}};
    report["quantities"] = {{"F", cont.F},
                            {"Gr", Gr},
                            {"Re", Re},
                            {"U", avg.U},
                            {"E_alpha", avg.E_alpha},
                            {"mean_kinetic", avg.mean_kinetic},
                            {"mean_dissipation", avg.mean_dissipation},
                            {"horizon", avg.horizon},
                            {"burn_in", avg.burn_in},
                            {"converged", avg.converged},
                            {"half_split_gap", avg.half_split_gap},
                            {"standing_assumption_U_gt_1", avg.U > 1.0}};
    nlohmann::ordered_json monitors;
    monitors["gronwall_max_violation"] = gronwall_worst;
    monitors["velocity_sq_ceiling_discrete"] =
        velocity_squared_ceiling(hnegah_disc, cfg.nu, beta, ell0);
    monitors["velocity_sq_measured"] = avg.U * avg.U;
    monitors["appendix_a_ceiling_discrete"] = appendix_a_ceiling(hnegah_disc, cfg.nu, ell0);
    monitors["appendix_a_ceiling_continuum"] = appendix_a_ceiling(cont.h_neg_alpha_half, cfg.nu, ell0);
    monitors["dissipation_measured"] = avg.E_alpha;
    monitors["min_energy_residual"] = min_residual;
    if (cfg.model == ModelKind::stokes) monitors["max_propagator_error"] = propagator_worst;
    report["monitors"] = monitors;

    // Force conditions need 0 < nu < 2 (the theorems' viscosity window).
    try {
        const ConditionReport cond =
            validate_conditions(cfg.force, cont, cfg.nu, cfg.alpha, cfg.condition_margin_K);
        nlohmann::ordered_json jc;
        jc["K"] = cond.K;
        jc["linfty_window"] = cond.linfty_window;
        jc["entries"] = nlohmann::ordered_json::array();
        for (const auto& e : cond.entries)
            jc["entries"].push_back({{"name", e.name},
                                     {"ratio", e.ratio},
                                     {"much_greater", e.much_greater},
                                     {"approx_one", e.approx_one}});
        report["conditions"] = jc;
    } catch (const std::invalid_argument& e) {
        report["conditions"] = {{"skipped", e.what()}};
    }

    report["reports"] = nlohmann::ordered_json::array();
    for (const std::string& regime : cfg.report_regimes) {
        BoundReport br;
        br.regime = regime;
        br.inputs = {{"U", avg.U},  {"E", avg.E_alpha}, {"F", cont.F}, {"ell0", ell0},
                     {"nu", cfg.nu}, {"Gr", Gr},         {"Re", Re},   {"alpha", cfg.alpha}};
        if (regime == "classical" || regime == "stokes" || regime == "small_grashof") {
            br.entries = check_main_law(avg.U, avg.E_alpha, ell0, cfg.nu, Gr);
            auto chain = check_lemma_chain(cont.F, avg.U, ell0, cfg.alpha);
            br.entries.insert(br.entries.end(), chain.begin(), chain.end());
            if (regime == "small_grashof") {
                const double u3l = avg.U * avg.U * avg.U / ell0;
                BoundEntry low;
                low.name = "lower_paper_rounded_3_4";
                low.lhs = 0.75 * u3l;
                low.rhs = avg.E_alpha;
                low.satisfied = low.lhs <= low.rhs;
                low.margin = low.rhs - low.lhs;
                low.note = "rounded form of the lower Grashof coefficient";
                br.entries.push_back(low);
                BoundEntry up;
                up.name = "upper_paper_rounded_1601_160";
                up.lhs = avg.E_alpha;
                up.rhs = 1601.0 / 160.0 * u3l;
                up.satisfied = up.lhs <= up.rhs;
                up.margin = up.rhs - up.lhs;
                up.note = "rounded form of the upper Grashof coefficient";
                br.entries.push_back(up);
            }
        } else if (regime == "fractional") {
            br.entries = check_fractional_law(avg.U, avg.E_alpha, ell0, cfg.nu, Gr, cfg.alpha);
            auto chain = check_lemma_chain(cont.F, avg.U, ell0, cfg.alpha);
            br.entries.insert(br.entries.end(), chain.begin(), chain.end());
        } else if (regime == "appendix_c") {
            br.inputs["c_const"] = cfg.appendix_c_constant;
            br.entries = check_appendix_c(avg.U, avg.E_alpha, cont.F, ell0, cfg.nu, Gr, Re,
                                          cfg.appendix_c_constant);
        }
        report["reports"].push_back(to_json(br));
    }

    // --- write artifacts ----------------------------------------------------
    RunArtifacts artifacts;
    const std::filesystem::path dir = resolve_output_dir(cfg.output_directory);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    artifacts.output_directory = dir.string();

    auto write_text = [&](const std::filesystem::path& p, const std::string& text) {
        std::ofstream out(p, std::ios::trunc);
        if (!out) throw IoError("cannot open '" + p.string() + "' for writing");
        out << text;
        out.flush();
        if (!out) throw IoError("write failed for '" + p.string() + "'");
    };

    {
        std::ostringstream csv;
        // Every step is recorded in the ledger; record_every thins rows here.
        if (cfg.record_every == 1) {
            ledger.write_csv(csv);
        } else {
            csv << "t,kinetic,dissipation,hyper_dissipation,injection,damping_drain,residual\n";
            const auto& recs = ledger.records();
            const auto& res = ledger.residuals();
            char buf[256];
            for (std::size_t i = 0; i < recs.size(); i += cfg.record_every) {
                const auto& r = recs[i];
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t,
                              r.kinetic, r.dissipation, r.hyper_dissipation, r.injection,
                              r.damping_drain, res[i]);
                csv << buf;
            }
        }
        artifacts.timeseries_path = (dir / "timeseries.csv").string();
        write_text(dir / "timeseries.csv", csv.str());
    }

    artifacts.report_path = (dir / "report.json").string();
    write_text(dir / "report.json", report.dump(2) + "\n");
    artifacts.report = std::move(report);

    {
        nlohmann::ordered_json meta;
        meta["version"] = kVersion;
        meta["resolved_config"] = emit_config(cfg);
        meta["beta"] = beta;
        meta["steps"] = static_cast<long long>(ledger.records().size() - 1);
        const auto wall_end = std::chrono::steady_clock::now();
        meta["wall_time_seconds"] =
            std::chrono::duration<double>(wall_end - wall_start).count();
        artifacts.meta_path = (dir / "run_meta.json").string();
        write_text(dir / "run_meta.json", meta.dump(2) + "\n");
    }

    if (cfg.write_checkpoint) {
        artifacts.checkpoint_path = (dir / "final.ckpt").string();
        write_checkpoint(artifacts.checkpoint_path, state.u, state.t);
    }
    return artifacts;
}

bool audit_report_file(const std::string& path, std::string* message) {
    std::ifstream in(path);
    if (!in) throw IoError("audit: cannot open '" + path + "'");
    nlohmann::ordered_json j;
    in >> j;
    if (!j.contains("reports")) {
        if (message) *message = "no 'reports' array present";
        return false;
    }
    for (const auto& jr : j["reports"]) {
        const BoundReport br = report_from_json(jr);
        if (!reverify(br)) {
            if (message) *message = "regime '" + br.regime + "' does not reproduce from its inputs";
            return false;
        }
    }
    if (message) *message = "all regimes reproduce from recorded inputs";
    return true;
}

int exit_code_for_exception(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const BlowupError*>(&e)) return 3;
    if (dynamic_cast<const NonFiniteError*>(&e)) return 4;
    if (dynamic_cast<const IoError*>(&e)) return 5;
    if (dynamic_cast<const std::invalid_argument*>(&e)) return 2;
    if (dynamic_cast<const std::ios_base::failure*>(&e)) return 5;
    return 1;
}

}  // namespace kolmo
