#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "recsim/config.hpp"
#include "recsim/figures.hpp"
#include "recsim/io.hpp"

using namespace recsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SweepSpec tiny_spec(const std::string& out_dir) {
    SweepSpec spec = parse_config(nlohmann::json{
        {"master_seed", 77},
        {"n", 40},
        {"m", 10},
        {"k", 2},
        {"k_prime", 2},
        {"seed_fraction", 0.01},
        {"realizations", 2},
        {"beta", {0.0, "random"}},
        {"strategies", {"greedy", "epsilon_greedy"}},
        {"epsilon", {0.1}},
        {"hyperparams", {{"max_epochs", 10}}},
    });
    spec.out_dir = out_dir;
    return spec;
}

fs::path temp_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("recsim_test_" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST_CASE("minimal config gets full defaults") {
    auto spec = parse_config(nlohmann::json{{"master_seed", 1}});
    CHECK(spec.n == 4000);
    CHECK(spec.m == 200);
    CHECK(spec.k == 4);
    CHECK(spec.k_prime == 5);
    CHECK(spec.seed_fraction == 0.001);
    CHECK(spec.realizations == 10);
    CHECK(spec.epsilons == std::vector<double>{0.1});
    CHECK(spec.master_seed == 1);
}

TEST_CASE("axes expand to the cross product") {
    auto spec = parse_config(nlohmann::json{{"master_seed", 1},
                                            {"beta", {0.0, 0.4}},
                                            {"strategies", {"greedy", "epsilon_greedy"}}});
    auto cells = expand_cells(spec);
    REQUIRE(cells.size() == 4);
    CHECK(cells[0].id == "greedy_beta0");
    CHECK(cells[1].id == "epsilon_greedy_eps0.1_beta0");
    CHECK(cells[2].id == "greedy_beta0.4");
    CHECK(cells[3].id == "epsilon_greedy_eps0.1_beta0.4");
}

TEST_CASE("validation errors name the field") {
    CHECK_THROWS_WITH(parse_config(nlohmann::json{{"master_seed", 1}, {"seed_fraction", 1.5}}),
                      Catch::Matchers::ContainsSubstring("seed_fraction"));
    CHECK_THROWS_AS(parse_config(nlohmann::json{{"seed_fraction", 0.1}}), config_error);
    CHECK_THROWS_AS(parse_config(nlohmann::json{{"master_seed", 1}, {"beta", {2.0}}}),
                    config_error);
    CHECK_THROWS_AS(
        parse_config(nlohmann::json{{"master_seed", 1}, {"strategies", {"bandit"}}}),
        config_error);
}

TEST_CASE("config round-trips through JSON") {
    auto spec = tiny_spec("whatever");
    auto again = parse_config(write_config(spec));
    again.out_dir = spec.out_dir;
    CHECK(spec == again);
}

TEST_CASE("load_config parse failures carry position info") {
    auto dir = temp_dir("badcfg");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.json") << "{ not json";
    CHECK_THROWS_AS(load_config(dir / "bad.json"), config_error);
    CHECK_THROWS_AS(load_config(dir / "missing.json"), config_error);
}

TEST_CASE("run_sweep writes the pinned CSV schemas") {
    auto dir = temp_dir("sweep");
    auto spec = tiny_spec(dir.string());
    auto manifest = run_sweep(spec);

    std::string ts = slurp(dir / "timeseries.csv");
    CHECK(ts.rfind("cell_id,realization,timestep,brier,gini,mean_popularity\n", 0) == 0);
    // m rows per realization per cell: 4 cells x 2 realizations x 10 timesteps.
    CHECK(std::count(ts.begin(), ts.end(), '\n') == 1 + 4 * 2 * 10);

    CHECK(slurp(dir / "popularity.csv")
              .rfind("cell_id,realization,timestep,item,popularity\n", 0) == 0);
    CHECK(slurp(dir / "correlations.csv")
              .rfind("cell_id,t_snapshot,ground_truth_corr_mean,ground_truth_corr_sd,"
                     "inter_realization_corr_mean,inter_realization_corr_sd\n",
                     0) == 0);
    CHECK(slurp(dir / "zscores.csv").rfind("cell_a,cell_b,zscore\n", 0) == 0);

    // Random-beta cells are flagged in the manifest.
    bool saw_random = false;
    for (const auto& c : manifest.doc["cells"])
        if (c["beta_cond"] == "uniform_random") saw_random = true;
    CHECK(saw_random);
    CHECK(manifest.doc["master_seed"] == 77);
}

TEST_CASE("rerun with the same seed is byte-identical") {
    auto dir_a = temp_dir("rerun_a");
    auto dir_b = temp_dir("rerun_b");
    auto manifest_a = run_sweep(tiny_spec(dir_a.string()));
    auto manifest_b = run_sweep(tiny_spec(dir_b.string()));
    for (const char* name : {"timeseries.csv", "popularity.csv", "correlations.csv",
                             "zscores.csv"})
        CHECK(slurp(dir_a / name) == slurp(dir_b / name));
}

TEST_CASE("figures are emitted with the naming contract") {
    auto dir = temp_dir("figs");
    auto spec = tiny_spec(dir.string());
    auto manifest = run_sweep(spec);
    auto files = emit_figures(manifest);
    for (const char* name : {"fig2a.svg", "fig2b.svg", "fig3.svg", "fig4a.svg", "fig4b.svg",
                             "fig5.svg"})
        CHECK(fs::exists(dir / name));
    CHECK(files.size() == 6);
    std::string svg = slurp(dir / "fig3.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
}

TEST_CASE("figures skip missing series with a manifest warning") {
    // Sweep with only a random-beta cell: fig2a/2b/3/4a/4b have nothing to plot.
    auto dir = temp_dir("figs_warn");
    SweepSpec spec = parse_config(nlohmann::json{{"master_seed", 5},
                                                 {"n", 20},
                                                 {"m", 6},
                                                 {"k", 2},
                                                 {"k_prime", 2},
                                                 {"seed_fraction", 0.0},
                                                 {"realizations", 2},
                                                 {"beta", {"random"}},
                                                 {"strategies", {"greedy"}},
                                                 {"hyperparams", {{"max_epochs", 5}}}});
    spec.out_dir = dir.string();
    auto manifest = run_sweep(spec);
    emit_figures(manifest);
    CHECK_FALSE(fs::exists(dir / "fig2a.svg"));
    CHECK(fs::exists(dir / "fig5.svg"));
    CHECK(manifest.doc["warnings"].size() >= 5);

    // Warnings persisted to disk.
    auto reloaded = RunManifest::load(dir / "manifest.json");
    CHECK(reloaded.doc["warnings"].size() >= 5);
}

TEST_CASE("dump-teacher emits the documented header") {
    auto dir = temp_dir("dump");
    SweepSpec spec = parse_config(nlohmann::json{{"master_seed", 6},
                                                 {"n", 5},
                                                 {"m", 4},
                                                 {"k", 2},
                                                 {"k_prime", 2},
                                                 {"seed_fraction", 0.0},
                                                 {"realizations", 1},
                                                 {"beta", {0.2}},
                                                 {"strategies", {"random"}},
                                                 {"hyperparams", {{"max_epochs", 3}}}});
    spec.out_dir = dir.string();
    SweepOptions opts;
    opts.dump_teacher = true;
    run_sweep(spec, opts);
    std::string csv = slurp(dir / "teacher_random_beta0.2_r0.csv");
    CHECK(csv.rfind("agent,item,prob\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 5 * 4);
}
