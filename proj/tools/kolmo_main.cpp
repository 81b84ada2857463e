#include <CLI11.hpp>

#include <filesystem>
#include <future>
#include <iostream>
#include <thread>
#include <vector>

#include "kolmo/experiment.hpp"

namespace {

int run_one(const std::string& config_path) {
    try {
        const kolmo::ExperimentConfig cfg = kolmo::parse_config_file(config_path);
        const kolmo::RunArtifacts artifacts = kolmo::run_experiment(cfg);
        std::cout << "wrote " << artifacts.report_path << "\n"
                  << "wrote " << artifacts.timeseries_path << "\n"
                  << "wrote " << artifacts.meta_path << "\n";
        if (!artifacts.checkpoint_path.empty())
            std::cout << "wrote " << artifacts.checkpoint_path << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kolmo::exit_code_for_exception(e);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kolmo - pseudo-spectral damped Navier-Stokes simulator and "
                 "dissipation-law bound auditor"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "kolmo 1.0.0");

    std::string config_path;
    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("config", config_path, "experiment config file")->required();

    std::string preset_name;
    bool emit = false;
    auto* preset_cmd = app.add_subcommand("preset", "show or emit a named preset");
    preset_cmd->add_option("name", preset_name, "preset name")->required();
    preset_cmd->add_flag("--emit-config", emit, "print the full config text to stdout");

    std::string report_path;
    auto* audit = app.add_subcommand("audit", "re-verify a written report.json");
    audit->add_option("report", report_path, "path to report.json")->required();

    std::string sweep_dir;
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "run every *.cfg in a directory in parallel");
    sweep->add_option("dir", sweep_dir, "directory holding config files")->required();
    sweep->add_option("--workers", workers, "parallel worker count");

    CLI11_PARSE(app, argc, argv);

    if (*run) return run_one(config_path);

    if (*preset_cmd) {
        try {
            const kolmo::ExperimentConfig cfg = kolmo::preset(preset_name);
            if (emit) {
                std::cout << kolmo::emit_config(cfg);
            } else {
                std::cout << "preset '" << preset_name << "':\n" << kolmo::emit_config(cfg);
            }
            return 0;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kolmo::exit_code_for_exception(e);
        }
    }

    if (*audit) {
        try {
            std::string message;
            const bool ok = kolmo::audit_report_file(report_path, &message);
            std::cout << (ok ? "audit OK: " : "audit FAILED: ") << message << "\n";
            return ok ? 0 : 1;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kolmo::exit_code_for_exception(e);
        }
    }

    if (*sweep) {
        std::vector<std::string> configs;
        try {
            for (const auto& entry : std::filesystem::directory_iterator(sweep_dir)) {
                if (entry.path().extension() == ".cfg") configs.push_back(entry.path().string());
            }
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 5;
        }
        std::sort(configs.begin(), configs.end());
        if (configs.empty()) {
            std::cerr << "error: no .cfg files in '" << sweep_dir << "'\n";
            return 2;
        }
        workers = std::max(1, workers);
        int worst = 0;
        for (std::size_t base = 0; base < configs.size();
             base += static_cast<std::size_t>(workers)) {
            std::vector<std::future<int>> batch;
            for (std::size_t i = base;
                 i < std::min(configs.size(), base + static_cast<std::size_t>(workers)); ++i) {
                batch.push_back(
                    std::async(std::launch::async, [&, i]() { return run_one(configs[i]); }));
            }
            for (auto& f : batch) worst = std::max(worst, f.get());
        }
        return worst;
    }
    return 1;
}
