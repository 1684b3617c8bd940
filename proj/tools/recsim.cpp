// Command-line front end: run sweeps, validate configs, render figures.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "recsim/config.hpp"
#include "recsim/figures.hpp"
#include "recsim/io.hpp"
#include "recsim/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Recommendation feedback-loop simulator"};
    app.set_version_flag("--version", recsim::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::size_t workers = 0;
    bool dump_teacher = false, dump_student = false, both_correlations = false;

    auto* simulate = app.add_subcommand("simulate", "Run a sweep described by a JSON config");
    simulate->add_option("--config", config_path, "Path to JSON config")->required();
    simulate->add_option("--out", out_dir, "Output directory (overrides config)");
    simulate->add_option("--workers", workers, "Worker threads for realizations");
    simulate->add_flag("--dump-teacher", dump_teacher, "Write teacher probability CSVs");
    simulate->add_flag("--dump-student", dump_student, "Write student factor CSVs per timestep");
    simulate->add_flag("--both-correlations", both_correlations,
                       "Also emit Spearman correlations");

    std::string manifest_path;
    auto* figures = app.add_subcommand("figures", "Render SVG figures from a run manifest");
    figures->add_option("--manifest", manifest_path, "Path to manifest.json")->required();

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a config file and print the sweep");
    validate->add_option("--config", validate_path, "Path to JSON config")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            recsim::SweepSpec spec = recsim::load_config(config_path);
            recsim::SweepOptions opts;
            opts.dump_teacher = dump_teacher;
            opts.dump_student = dump_student;
            opts.both_correlations = both_correlations;
            if (!out_dir.empty()) opts.out_dir = out_dir;
            if (const char* env = std::getenv("RECSIM_WORKERS")) {
                opts.workers = static_cast<std::size_t>(std::stoull(env));
            } else if (workers > 0) {
                opts.workers = workers;
            }
            recsim::RunManifest manifest = recsim::run_sweep(spec, opts);
            std::cout << "wrote " << manifest.path.string() << "\n";
        } else if (*figures) {
            recsim::RunManifest manifest = recsim::RunManifest::load(manifest_path);
            auto files = recsim::emit_figures(manifest);
            for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
            for (const auto& w : manifest.doc["warnings"])
                std::cerr << "warning: " << w.get<std::string>() << "\n";
        } else if (*validate) {
            recsim::SweepSpec spec = recsim::load_config(validate_path);
            auto cells = recsim::expand_cells(spec);
            std::cout << "config OK: " << cells.size() << " cells\n";
            for (const auto& c : cells)
                std::cout << "  " << c.id << " (" << c.config.realizations
                          << " realizations)\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
