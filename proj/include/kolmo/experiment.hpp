#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kolmo/bounds.hpp"
#include "kolmo/forcing.hpp"

namespace kolmo {

enum class ModelKind { nse, fractional_nse, stokes };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat experiment description; one-to-one with the key=value config format
/// (see emit_config / parse_config_text and the README grammar).
struct ExperimentConfig {
    ModelKind model = ModelKind::nse;
    double alpha = 2.0;
    double nu = 1.0;
    double delta = 0.0;
    double epsilon = 0.0;

    ForceProfile force{BallIndicator{1.0}, 1.0, 1.0, 2.0};
    DampingRule damping = DampingRule::from_force();

    double L = 8.0;
    int n = 32;

    double dt = 1e-3;
    double t_end = 1.0;
    double burn_in = 0.0;
    double cfl_number = 0.25;

    std::string initial_kind = "zero";  // zero | random_lowpass
    std::uint64_t seed = 1;
    double ic_energy = 0.0;
    double ic_cutoff = 1.0;

    std::string output_directory = "out";
    std::vector<std::string> report_regimes;  // classical|fractional|stokes|appendix_c|small_grashof
    bool write_checkpoint = false;
    int record_every = 1;

    double condition_margin_K = 10.0;
    // Asserted value of the existential constant in F <= c (1/Gr + 1) U^2/ell0.
    // max(c^2, bernstein, 1) = 1 for the shipped presets; the implied empirical
    // constant is reported in the entry note either way.
    double appendix_c_constant = 1.0;
};

/// Paper-pinned parameter sets with desk-scale grids.
/// Names: section5, theorem31_demo, fractional_demo, stokes_demo, appendixC_demo.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
std::string emit_config(const ExperimentConfig& config);

/// Cross-field validation with field-precise messages (throws ConfigError).
void validate_config(const ExperimentConfig& config);

struct RunArtifacts {
    std::string output_directory;
    std::string report_path;
    std::string timeseries_path;
    std::string meta_path;
    std::string checkpoint_path;  // empty unless requested
    nlohmann::ordered_json report;
};

/// Run the experiment end to end: build force and grid, integrate, finalize
/// diagnostics, audit the requested regimes, and write
/// timeseries.csv / report.json / run_meta.json (+ optional checkpoint).
/// Deterministic: identical config + seed reproduce report.json bit for bit.
RunArtifacts run_experiment(const ExperimentConfig& config);

/// Re-verify a written report.json (the `audit` subcommand): every regime
/// entry must recompute identically from its recorded inputs.
bool audit_report_file(const std::string& path, std::string* message = nullptr);

/// Exit-code contract shared by the CLI: 2 config, 3 blow-up, 4 non-finite,
/// 5 disk.
int exit_code_for_exception(const std::exception& e);

}  // namespace kolmo
