#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "recsim/errors.hpp"

namespace recsim {

/// Gini coefficient via the sorted O(m log m) form,
///   G = sum_i sum_j |x_i - x_j| / (2 m^2 mean(x)).
/// All-zero input is the degenerate equality case and returns 0.
inline double gini(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("gini of empty vector");
    const std::size_t m = values.size();
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    if (total == 0.0) return 0.0;
    double weighted = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        weighted += (2.0 * static_cast<double>(i + 1) - static_cast<double>(m) - 1.0) * sorted[i];
    return weighted / (static_cast<double>(m) * total);
}

inline double gini(const std::vector<long long>& values) {
    std::vector<double> v(values.begin(), values.end());
    return gini(v);
}

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean of empty vector");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double mean_popularity(const std::vector<long long>& popularity) {
    if (popularity.empty()) throw std::invalid_argument("mean of empty vector");
    double s = 0.0;
    for (long long x : popularity) s += static_cast<double>(x);
    return s / static_cast<double>(popularity.size());
}

/// Product-moment correlation. Throws undefined_correlation when either
/// input has zero variance.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("pearson requires equal lengths >= 2");
    const double n = static_cast<double>(x.size());
    double mx = mean(x), my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    (void)n;
    if (sxx == 0.0 || syy == 0.0)
        throw undefined_correlation("pearson undefined for zero-variance input");
    return sxy / std::sqrt(sxx * syy);
}

namespace detail {

// Fractional ranks (ties get the average rank).
inline std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) r[order[t]] = avg;
        i = j + 1;
    }
    return r;
}

} // namespace detail

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(detail::ranks(x), detail::ranks(y));
}

/// Mean pairwise correlation of the per-realization popularity vectors.
/// Pairs with undefined correlation are excluded; throws if every pair is
/// undefined.
inline double mean_pairwise_pearson(const std::vector<std::vector<double>>& vectors) {
    if (vectors.size() < 2)
        throw std::invalid_argument("need at least two vectors for pairwise correlation");
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t a = 0; a < vectors.size(); ++a)
        for (std::size_t b = a + 1; b < vectors.size(); ++b) {
            try {
                sum += pearson(vectors[a], vectors[b]);
                ++count;
            } catch (const undefined_correlation&) {
            }
        }
    if (count == 0) throw undefined_correlation("all realization pairs undefined");
    return sum / static_cast<double>(count);
}

inline double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("variance needs >= 2 samples");
    double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

/// Z-score of the mean difference between two sets of per-realization time
/// series: each realization is reduced to its mean over timesteps, and the
/// difference of group means is divided by its standard error across
/// realizations. Positive means a > b.
inline double popularity_difference_zscore(const std::vector<std::vector<double>>& series_a,
                                           const std::vector<std::vector<double>>& series_b) {
    if (series_a.size() < 2 || series_b.size() < 2)
        throw std::invalid_argument("zscore needs >= 2 realizations per side");
    auto reduce = [](const std::vector<std::vector<double>>& s) {
        std::vector<double> per_realization;
        per_realization.reserve(s.size());
        for (const auto& series : s) per_realization.push_back(mean(series));
        return per_realization;
    };
    std::vector<double> a = reduce(series_a);
    std::vector<double> b = reduce(series_b);
    double diff = mean(a) - mean(b);
    double se = std::sqrt(sample_variance(a) / static_cast<double>(a.size()) +
                          sample_variance(b) / static_cast<double>(b.size()));
    if (se == 0.0) return 0.0;
    return diff / se;
}

} // namespace recsim
