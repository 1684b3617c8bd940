#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "recsim/config.hpp"
#include "recsim/format.hpp"
#include "recsim/metrics.hpp"
#include "recsim/sim.hpp"
#include "recsim/version.hpp"

namespace recsim {

struct SweepOptions {
    bool dump_teacher = false;
    bool dump_student = false;
    bool both_correlations = false;
    std::optional<std::size_t> workers;   // overrides spec.parallelism
    std::optional<std::string> out_dir;   // overrides spec.out_dir
};

struct RunManifest {
    nlohmann::json doc;
    std::filesystem::path path;

    static RunManifest load(const std::filesystem::path& manifest_path) {
        std::ifstream in(manifest_path);
        if (!in) throw config_error("cannot open manifest: " + manifest_path.string());
        RunManifest m;
        m.path = manifest_path;
        in >> m.doc;
        return m;
    }

    void save() const {
        std::ofstream out(path);
        out << doc.dump(2) << "\n";
    }

    std::filesystem::path dir() const { return path.parent_path(); }
};

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& contents) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw config_error("cannot write output file: " + p.string());
    out << contents;
}

struct CorrelationStats {
    std::string mean; // empty when undefined
    std::string sd;
};

inline CorrelationStats summarize(const std::vector<double>& values) {
    CorrelationStats s;
    if (values.empty()) return s;
    s.mean = format_number(mean(values));
    if (values.size() >= 2) s.sd = format_number(std::sqrt(sample_variance(values)));
    return s;
}

} // namespace detail

/// Executes every cell of the sweep and writes timeseries.csv,
/// popularity.csv, correlations.csv, zscores.csv and manifest.json into the
/// output directory. All aggregation happens in memory; files are written
/// once at the end so reruns with the same seed are byte-identical.
inline RunManifest run_sweep(const SweepSpec& spec, const SweepOptions& opts = {}) {
    std::vector<SweepCell> cells = expand_cells(spec);
    std::filesystem::path out_dir = opts.out_dir.value_or(spec.out_dir);
    std::filesystem::create_directories(out_dir);

    std::string timeseries = "cell_id,realization,timestep,brier,gini,mean_popularity\n";
    std::string popularity = "cell_id,realization,timestep,item,popularity\n";
    std::string correlations =
        "cell_id,t_snapshot,ground_truth_corr_mean,ground_truth_corr_sd,"
        "inter_realization_corr_mean,inter_realization_corr_sd\n";
    std::string correlations_sp;
    if (opts.both_correlations) correlations_sp = correlations;
    std::string zscores = "cell_a,cell_b,zscore\n";

    nlohmann::json manifest_cells = nlohmann::json::array();
    std::vector<std::string> outputs = {"timeseries.csv", "popularity.csv", "correlations.csv",
                                        "zscores.csv"};

    // Per-cell mean-popularity series kept for the z-score pairing pass.
    std::map<std::string, std::vector<std::vector<double>>> pop_series_by_cell;
    std::map<std::string, std::string> beta_by_cell;

    const std::size_t m = spec.m;
    std::vector<std::size_t> snapshots;
    if (m >= 2) snapshots.push_back(m / 2);
    snapshots.push_back(m);

    for (auto& cell : cells) {
        ExperimentConfig cfg = cell.config;
        if (opts.workers) cfg.parallelism = *opts.workers;

        StudentObserver observer;
        if (opts.dump_student) {
            observer = [&, cell_id = cell.id](std::size_t r, std::size_t t,
                                              const StudentModel& s) {
                auto dump = [&](const Matrix& mat, const std::string& tag) {
                    std::string csv = "row,col,value\n";
                    for (std::size_t i = 0; i < mat.rows(); ++i)
                        for (std::size_t j = 0; j < mat.cols(); ++j)
                            csv += std::to_string(i) + "," + std::to_string(j) + "," +
                                   format_number(mat(i, j)) + "\n";
                    detail::write_file(out_dir / ("student_" + tag + "_" + cell_id + "_r" +
                                                  std::to_string(r) + "_t" + std::to_string(t) +
                                                  ".csv"),
                                       csv);
                };
                dump(s.p_hat, "p");
                dump(s.q_hat, "q");
            };
        }

        auto start = std::chrono::steady_clock::now();
        std::vector<RealizationResult> results = run_experiment(cfg, observer);
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();

        if (opts.dump_teacher) {
            for (std::size_t r = 0; r < results.size(); ++r) {
                TeacherModel teacher = teacher_for_realization(cfg, r);
                std::string csv = "agent,item,prob\n";
                for (std::size_t i = 0; i < teacher.n; ++i)
                    for (std::size_t j = 0; j < teacher.m; ++j)
                        csv += std::to_string(i) + "," + std::to_string(j) + "," +
                               format_number(teacher.probs(i, j)) + "\n";
                std::string name = "teacher_" + cell.id + "_r" + std::to_string(r) + ".csv";
                detail::write_file(out_dir / name, csv);
                outputs.push_back(name);
            }
        }

        nlohmann::json cell_entry;
        cell_entry["id"] = cell.id;
        cell_entry["strategy"] = strategy_name(cfg.strategy.strategy);
        if (cfg.strategy.strategy == Strategy::EpsilonGreedy)
            cell_entry["epsilon"] = cfg.strategy.epsilon;
        cell_entry["beta_cond"] =
            cfg.beta_cond.is_random() ? "uniform_random" : "constant";
        cell_entry["beta"] = beta_token(cfg.beta_cond);
        cell_entry["realizations"] = cfg.realizations;
        cell_entry["wall_clock_seconds"] = wall;
        nlohmann::json seed_list = nlohmann::json::array();
        for (const auto& res : results) seed_list.push_back(res.realization_seed);
        cell_entry["realization_seeds"] = seed_list;
        manifest_cells.push_back(cell_entry);

        std::vector<std::vector<double>> cell_pop_series;
        for (const auto& res : results) {
            for (std::size_t t = 1; t <= m; ++t) {
                timeseries += cell.id + "," + std::to_string(res.realization_index) + "," +
                              std::to_string(t) + "," + format_number(res.brier_series[t - 1]) +
                              "," + format_number(res.gini_series[t - 1]) + "," +
                              format_number(res.mean_popularity_series[t - 1]) + "\n";
                if (t % spec.snapshot_stride == 0 || t == m) {
                    const auto& snap = res.popularity_snapshots[t - 1];
                    for (std::size_t j = 0; j < snap.size(); ++j)
                        popularity += cell.id + "," + std::to_string(res.realization_index) +
                                      "," + std::to_string(t) + "," + std::to_string(j) + "," +
                                      std::to_string(snap[j]) + "\n";
                }
            }
            cell_pop_series.push_back(res.mean_popularity_series);
        }

        for (std::size_t t : snapshots) {
            std::vector<double> gt_corrs, gt_spearman;
            std::vector<std::vector<double>> pop_vectors;
            for (const auto& res : results) {
                const auto& snap = res.popularity_snapshots[t - 1];
                std::vector<double> pop(snap.begin(), snap.end());
                try {
                    gt_corrs.push_back(pearson(pop, res.expected_popularity));
                } catch (const undefined_correlation&) {
                }
                if (opts.both_correlations) {
                    try {
                        gt_spearman.push_back(spearman(pop, res.expected_popularity));
                    } catch (const undefined_correlation&) {
                    }
                }
                pop_vectors.push_back(std::move(pop));
            }

            std::vector<double> pairwise, pairwise_sp;
            for (std::size_t a = 0; a < pop_vectors.size(); ++a)
                for (std::size_t b = a + 1; b < pop_vectors.size(); ++b) {
                    try {
                        pairwise.push_back(pearson(pop_vectors[a], pop_vectors[b]));
                    } catch (const undefined_correlation&) {
                    }
                    if (opts.both_correlations) {
                        try {
                            pairwise_sp.push_back(spearman(pop_vectors[a], pop_vectors[b]));
                        } catch (const undefined_correlation&) {
                        }
                    }
                }

            auto gt = detail::summarize(gt_corrs);
            auto ir = detail::summarize(pairwise);
            correlations += cell.id + "," + std::to_string(t) + "," + gt.mean + "," + gt.sd +
                            "," + ir.mean + "," + ir.sd + "\n";
            if (opts.both_correlations) {
                auto gts = detail::summarize(gt_spearman);
                auto irs = detail::summarize(pairwise_sp);
                correlations_sp += cell.id + "," + std::to_string(t) + "," + gts.mean + "," +
                                   gts.sd + "," + irs.mean + "," + irs.sd + "\n";
            }
        }

        beta_by_cell[cell.id] = beta_token(cfg.beta_cond);
        pop_series_by_cell[cell.id] = std::move(cell_pop_series);
    }

    // Popularity-difference z-scores between cells that differ only in
    // strategy (same beta condition).
    for (const auto& cell_a : cells) {
        for (const auto& cell_b : cells) {
            if (cell_a.id >= cell_b.id) continue;
            if (beta_by_cell[cell_a.id] != beta_by_cell[cell_b.id]) continue;
            const auto& sa = pop_series_by_cell[cell_a.id];
            const auto& sb = pop_series_by_cell[cell_b.id];
            if (sa.size() < 2 || sb.size() < 2) continue;
            zscores += cell_a.id + "," + cell_b.id + "," +
                       format_number(popularity_difference_zscore(sa, sb)) + "\n";
        }
    }

    detail::write_file(out_dir / "timeseries.csv", timeseries);
    detail::write_file(out_dir / "popularity.csv", popularity);
    detail::write_file(out_dir / "correlations.csv", correlations);
    detail::write_file(out_dir / "zscores.csv", zscores);
    if (opts.both_correlations) {
        detail::write_file(out_dir / "correlations_spearman.csv", correlations_sp);
        outputs.push_back("correlations_spearman.csv");
    }

    RunManifest manifest;
    manifest.path = out_dir / "manifest.json";
    manifest.doc["tool_version"] = kVersion;
    manifest.doc["master_seed"] = spec.master_seed;
    manifest.doc["config"] = write_config(spec);
    manifest.doc["cells"] = manifest_cells;
    manifest.doc["outputs"] = outputs;
    manifest.doc["warnings"] = nlohmann::json::array();
    manifest.save();
    return manifest;
}

} // namespace recsim
