#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "recsim/format.hpp"
#include "recsim/io.hpp"

namespace recsim {

namespace svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool markers = false;
};

inline const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                   "#17becf", "#bcbd22"};
    return colors[i % 10];
}

/// Minimal line chart. No external plotting dependency: the output is a
/// plain SVG with a frame, min/max tick labels, polylines and a legend.
inline std::string line_chart(const std::string& title, const std::string& xlabel,
                              const std::string& ylabel, const std::vector<Series>& series,
                              int width = 560, int height = 400) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmin > xmax) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
    if (xmax == xmin) { xmax = xmin + 1; }
    if (ymax == ymin) { ymax = ymin + 1; }

    const double left = 70, right = 20, top = 36, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << title << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\""
        << ph << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    out << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << top + ph / 2 << ")\">" << ylabel << "</text>\n";
    // min/max tick labels
    out << "<text x=\"" << left << "\" y=\"" << height - 32 << "\" text-anchor=\"middle\">"
        << format_number(xmin) << "</text>\n";
    out << "<text x=\"" << left + pw << "\" y=\"" << height - 32 << "\" text-anchor=\"middle\">"
        << format_number(xmax) << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << top + ph + 4 << "\" text-anchor=\"end\">"
        << format_number(ymin) << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">"
        << format_number(ymax) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        if (s.x.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << palette(si) << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << sx(s.x[i]) << "," << sy(s.y[i]) << " ";
        out << "\"/>\n";
        if (s.markers)
            for (std::size_t i = 0; i < s.x.size(); ++i)
                out << "<circle cx=\"" << sx(s.x[i]) << "\" cy=\"" << sy(s.y[i])
                    << "\" r=\"3\" fill=\"" << palette(si) << "\"/>\n";
        out << "<text x=\"" << left + 8 << "\" y=\"" << top + 16 + 16 * double(si)
            << "\" fill=\"" << palette(si) << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace svg

namespace detail {

struct TimeseriesRow {
    std::string cell_id;
    std::size_t realization;
    std::size_t timestep;
    double brier;
    double gini;
    double mean_popularity;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

inline std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw config_error("cannot open CSV: " + p.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line))
        if (!line.empty()) rows.push_back(split_csv_line(line));
    return rows;
}

struct CellMeta {
    std::string id;
    std::string strategy;
    std::string beta; // numeric token or "random"
    bool random_beta;
    double epsilon;
    std::string label;
};

inline std::vector<CellMeta> cell_meta(const RunManifest& manifest) {
    std::vector<CellMeta> metas;
    for (const auto& c : manifest.doc.at("cells")) {
        CellMeta meta;
        meta.id = c.at("id").get<std::string>();
        meta.strategy = c.at("strategy").get<std::string>();
        meta.beta = c.at("beta").get<std::string>();
        meta.random_beta = c.at("beta_cond").get<std::string>() == "uniform_random";
        meta.epsilon = c.contains("epsilon") ? c.at("epsilon").get<double>() : 0.0;
        meta.label = meta.strategy;
        if (meta.strategy == "epsilon_greedy")
            meta.label += " (eps=" + format_number(meta.epsilon) + ")";
        metas.push_back(meta);
    }
    return metas;
}

// Mean of column `col` across realizations, per timestep, for one cell.
inline svg::Series mean_series(const std::vector<TimeseriesRow>& rows, const CellMeta& meta,
                               double TimeseriesRow::*col) {
    std::map<std::size_t, std::pair<double, std::size_t>> acc;
    for (const auto& r : rows) {
        if (r.cell_id != meta.id) continue;
        auto& slot = acc[r.timestep];
        slot.first += r.*col;
        slot.second += 1;
    }
    svg::Series s;
    s.label = meta.label + " beta=" + meta.beta;
    for (const auto& [t, sum_count] : acc) {
        s.x.push_back(static_cast<double>(t));
        s.y.push_back(sum_count.first / static_cast<double>(sum_count.second));
    }
    return s;
}

} // namespace detail

/// Renders fig2a/fig2b (correlations vs beta), fig3 (Brier vs time),
/// fig4a/fig4b (Gini and mean popularity vs time) and fig5 (random-beta
/// robustness panels) from the CSVs a sweep produced. Figures whose series
/// are missing are skipped and a warning is appended to the manifest.
inline std::vector<std::filesystem::path> emit_figures(RunManifest& manifest) {
    const auto dir = manifest.dir();
    std::vector<std::filesystem::path> written;
    auto warn = [&](const std::string& msg) { manifest.doc["warnings"].push_back(msg); };

    std::vector<detail::CellMeta> metas = detail::cell_meta(manifest);

    std::vector<detail::TimeseriesRow> ts;
    for (const auto& row : detail::read_csv(dir / "timeseries.csv")) {
        ts.push_back({row[0], std::stoul(row[1]), std::stoul(row[2]), std::stod(row[3]),
                      std::stod(row[4]), std::stod(row[5])});
    }

    // correlations.csv: keep the first (mid-run) snapshot per cell.
    std::map<std::string, std::pair<std::string, std::string>> corr_at_mid; // cell -> (gt, ir)
    for (const auto& row : detail::read_csv(dir / "correlations.csv")) {
        if (!corr_at_mid.count(row[0])) corr_at_mid[row[0]] = {row[2], row[4]};
    }

    auto emit = [&](const std::string& name, const std::string& contents) {
        auto p = dir / name;
        std::ofstream out(p, std::ios::binary);
        out << contents;
        written.push_back(p);
        for (auto& o : manifest.doc["outputs"])
            if (o == name) return;
        manifest.doc["outputs"].push_back(name);
    };

    // fig2a / fig2b: correlation vs beta per strategy (constant-beta cells).
    for (auto [name, col, title] :
         {std::tuple{std::string("fig2a.svg"), 0,
                     std::string("Ground-truth popularity correlation at mid-run")},
          std::tuple{std::string("fig2b.svg"), 1,
                     std::string("Inter-realization popularity correlation at mid-run")}}) {
        std::map<std::string, svg::Series> by_strategy;
        for (const auto& meta : metas) {
            if (meta.random_beta) continue;
            auto it = corr_at_mid.find(meta.id);
            if (it == corr_at_mid.end()) continue;
            const std::string& val = col == 0 ? it->second.first : it->second.second;
            if (val.empty()) continue;
            auto& s = by_strategy[meta.label];
            s.label = meta.label;
            s.markers = true;
            s.x.push_back(std::stod(meta.beta));
            s.y.push_back(std::stod(val));
        }
        std::vector<svg::Series> series;
        for (auto& [label, s] : by_strategy) {
            std::vector<std::size_t> order(s.x.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) { return s.x[a] < s.x[b]; });
            svg::Series sorted{s.label, {}, {}, true};
            for (std::size_t i : order) {
                sorted.x.push_back(s.x[i]);
                sorted.y.push_back(s.y[i]);
            }
            series.push_back(std::move(sorted));
        }
        if (series.empty()) {
            warn(name + " skipped: no constant-beta correlation series available");
        } else {
            emit(name, svg::line_chart(title, "beta", "correlation", series));
        }
    }

    // fig3 / fig4a / fig4b: per-timestep means for constant-beta cells.
    for (auto [name, col, title, ylabel] :
         {std::tuple{std::string("fig3.svg"), &detail::TimeseriesRow::brier,
                     std::string("Student model error over time"), std::string("Brier score")},
          std::tuple{std::string("fig4a.svg"), &detail::TimeseriesRow::gini,
                     std::string("Item popularity inequality over time"),
                     std::string("Gini coefficient")},
          std::tuple{std::string("fig4b.svg"), &detail::TimeseriesRow::mean_popularity,
                     std::string("Mean item popularity over time"),
                     std::string("mean popularity")}}) {
        std::vector<svg::Series> series;
        for (const auto& meta : metas) {
            if (meta.random_beta) continue;
            auto s = detail::mean_series(ts, meta, col);
            if (!s.x.empty()) series.push_back(std::move(s));
        }
        if (series.empty()) {
            warn(name + " skipped: no constant-beta timeseries available");
        } else {
            emit(name, svg::line_chart(title, "timestep", ylabel, series));
        }
    }

    // fig5: random-beta robustness panels, stacked into one SVG, plus the
    // greedy-vs-epsilon-greedy popularity-difference inset.
    {
        std::vector<detail::CellMeta> random_cells;
        for (const auto& meta : metas)
            if (meta.random_beta) random_cells.push_back(meta);
        if (random_cells.empty()) {
            warn("fig5.svg skipped: no random-beta cells in this sweep");
        } else {
            std::ostringstream out;
            out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1700\" height=\"420\">\n";
            int x = 0;
            for (auto [col, title, ylabel] :
                 {std::tuple{&detail::TimeseriesRow::brier, std::string("Brier (random beta)"),
                             std::string("Brier score")},
                  std::tuple{&detail::TimeseriesRow::gini, std::string("Gini (random beta)"),
                             std::string("Gini coefficient")},
                  std::tuple{&detail::TimeseriesRow::mean_popularity,
                             std::string("Mean popularity (random beta)"),
                             std::string("mean popularity")}}) {
                std::vector<svg::Series> series;
                for (const auto& meta : random_cells) {
                    auto s = detail::mean_series(ts, meta, col);
                    if (!s.x.empty()) series.push_back(std::move(s));
                }
                out << "<g transform=\"translate(" << x << ",0)\">"
                    << svg::line_chart(title, "timestep", ylabel, series, 540, 400) << "</g>\n";
                x += 550;
            }
            // Inset: epsilon_greedy minus greedy mean popularity over time.
            svg::Series eps_s, greedy_s;
            for (const auto& meta : random_cells) {
                if (meta.strategy == "epsilon_greedy")
                    eps_s = detail::mean_series(ts, meta, &detail::TimeseriesRow::mean_popularity);
                if (meta.strategy == "greedy")
                    greedy_s =
                        detail::mean_series(ts, meta, &detail::TimeseriesRow::mean_popularity);
            }
            if (!eps_s.x.empty() && eps_s.x.size() == greedy_s.x.size()) {
                svg::Series diff{"eps_greedy - greedy", eps_s.x, {}, false};
                for (std::size_t i = 0; i < eps_s.y.size(); ++i)
                    diff.y.push_back(eps_s.y[i] - greedy_s.y[i]);
                out << "<g transform=\"translate(1320,120) scale(0.6)\">"
                    << svg::line_chart("popularity difference", "timestep", "diff", {diff}, 540,
                                       400)
                    << "</g>\n";
            }
            out << "</svg>\n";
            emit("fig5.svg", out.str());
        }
    }

    manifest.save();
    return written;
}

} // namespace recsim
