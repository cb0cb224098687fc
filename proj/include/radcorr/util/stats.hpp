#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "radcorr/util/rng.hpp"

namespace radcorr::util {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("mean_se: empty sample");
    double m = 0.0;
    for (double v : x) m += v;
    m /= static_cast<double>(n);
    if (n == 1) return {m, 0.0};
    double s2 = 0.0;
    for (double v : x) s2 += (v - m) * (v - m);
    s2 /= static_cast<double>(n - 1);
    return {m, std::sqrt(s2 / static_cast<double>(n))};
}

/// Delete-one jackknife for a statistic of per-sample vectors.
///
/// `stat` maps the k column sums (with one sample removed, already divided
/// by n-1) to the derived quantity; handles nonlinear statistics such as
/// variances without the naive small-sample bias in the error bar.
inline MeanSe jackknife(const std::vector<std::vector<double>>& columns,
                        const std::function<double(std::span<const double>)>& stat) {
    if (columns.empty() || columns.front().empty())
        throw std::invalid_argument("jackknife: empty sample");
    const std::size_t n = columns.front().size();
    const std::size_t k = columns.size();
    for (const auto& c : columns)
        if (c.size() != n) throw std::invalid_argument("jackknife: ragged columns");
    std::vector<double> sums(k, 0.0);
    for (std::size_t j = 0; j < k; ++j)
        for (double v : columns[j]) sums[j] += v;

    std::vector<double> full_means(k);
    for (std::size_t j = 0; j < k; ++j) full_means[j] = sums[j] / static_cast<double>(n);
    const double theta_full = stat(full_means);
    if (n == 1) return {theta_full, 0.0};

    std::vector<double> loo(k);
    std::vector<double> theta(n);
    double theta_bar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            loo[j] = (sums[j] - columns[j][i]) / static_cast<double>(n - 1);
        theta[i] = stat(loo);
        theta_bar += theta[i];
    }
    theta_bar /= static_cast<double>(n);
    double s2 = 0.0;
    for (double t : theta) s2 += (t - theta_bar) * (t - theta_bar);
    s2 *= static_cast<double>(n - 1) / static_cast<double>(n);
    return {theta_full, std::sqrt(s2)};
}

/// Bootstrap standard error of `stat` over resampled rows. Deterministic for
/// a fixed seed; resamples indices, so per-row storage is never copied.
inline double bootstrap_se(std::size_t n_rows,
                           const std::function<double(std::span<const std::size_t>)>& stat,
                           std::size_t n_boot, std::uint64_t seed) {
    if (n_rows == 0) throw std::invalid_argument("bootstrap_se: empty sample");
    std::vector<std::size_t> idx(n_rows);
    std::vector<double> vals(n_boot);
    for (std::size_t b = 0; b < n_boot; ++b) {
        auto eng = make_engine(derive_seed(seed, b));
        std::uniform_int_distribution<std::size_t> pick(0, n_rows - 1);
        for (auto& i : idx) i = pick(eng);
        vals[b] = stat(idx);
    }
    auto ms = mean_se(vals);
    double s2 = 0.0;
    for (double v : vals) s2 += (v - ms.mean) * (v - ms.mean);
    return std::sqrt(s2 / static_cast<double>(n_boot > 1 ? n_boot - 1 : 1));
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double slope_se = 0.0;
};

inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("fit_line: need >= 2 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= n; my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
    }
    f.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    if (n > 2) f.slope_se = std::sqrt(ss_res / ((n - 2) * sxx));
    return f;
}

/// One-sample Kolmogorov-Smirnov statistic against a cdf.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

} // namespace radcorr::util
