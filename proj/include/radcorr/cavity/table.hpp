#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "radcorr/cavity/moments.hpp"
#include "radcorr/util/csv.hpp"

namespace radcorr::cavity {

/// One tabulated absorption rate. samples == 0 marks a strong-absorption
/// continuation row (sigma ~ 1/gamma, variance ~ 1/gamma^2 anchored at the
/// last Monte Carlo row); n_modes == 0 marks a 1/N extrapolation.
struct MomentTableRow {
    double gamma = 0.0;
    double mean_sigma = 1.0;
    double mean_sigma_sq = 1.0;
    double se_mean = 0.0;
    double se_sq = 0.0;
    int n_modes = 0;
    std::uint64_t samples = 0;
    double variance = 0.0;
    double se_variance = 0.0;
    int m_res = 0;
};

struct TableDiagnostics {
    bool mean_monotone = true;      ///< <sigma> strictly decreasing along the grid
    double first_violation_gamma = 0.0;
    double variance_at_ends[2] = {0.0, 0.0}; ///< recorded: variance -> 0 at both ends
};

enum class TableExtrapolation {
    None,           ///< single run per point
    OneOverN,       ///< Richardson from (N, 2N) at fixed resonance factor
    ResonanceSpace, ///< Richardson from (M, 2M) at fixed N
};

/// Sampling schedule for one table build. Two finite-size systematics are
/// managed here. First, the N coupled channels deplete the usable level
/// space, biasing moments by O(N/M_res) at any N; the default
/// resonance-space Richardson removes it (a 1/N extrapolation at fixed
/// M/N cannot). Second, the absorption width must stay inside the
/// semicircle: the band-penetration parameter gamma N/(8 M) is held at or
/// below ~0.125 by scaling M with gamma, beyond which the sampled cavity
/// starts reflecting off the band edge instead of absorbing. Above
/// mc_gamma_max the moments follow the anchored strong-absorption tail
/// (sigma ~ 1/gamma) instead of infeasibly large matrices.
struct TableOptions {
    int n_modes = 30;
    TableExtrapolation extrapolation = TableExtrapolation::ResonanceSpace;
    std::uint64_t samples = 2000;       ///< per run in the weak region
    std::uint64_t mid_samples = 600;    ///< gamma in (weak_gamma_max, extrapolation_gamma_max]
    std::uint64_t tail_samples = 500;   ///< gamma in (extrapolation_gamma_max, mc_gamma_max]
    double weak_gamma_max = 0.01;       ///< full-sample region boundary
    double extrapolation_gamma_max = 10.0; ///< single bumped-M run above this
    double mc_gamma_max = 30.0;         ///< analytic continuation above this
    int resonance_factor = 10;
    Ensemble ensemble = Ensemble::GOE;
    unsigned threads = 0;
};

struct MomentTable {
    std::vector<MomentTableRow> rows; ///< ascending gamma
    TableDiagnostics diagnostics;
    int n_modes = 0;
    std::uint64_t seed = 0;

    double gamma_min_mc() const {
        for (const auto& r : rows)
            if (r.gamma > 0.0) return r.gamma;
        throw std::runtime_error("MomentTable: no positive-gamma rows");
    }
    double gamma_max_mc() const {
        double g = 0.0;
        for (const auto& r : rows)
            if (r.samples > 0 && r.gamma > g) g = r.gamma;
        return g;
    }

    void write_csv(const std::string& path, const std::string& config_json) const {
        util::CsvWriter w(path, config_json, seed);
        w.comment("momtable v1");
        w.comment("N=0: extrapolated in 1/N; samples=0: strong-absorption continuation");
        w.header({"gamma", "mean_sigma", "mean_sigma_sq", "se_mean", "se_sq", "N", "samples"});
        for (const auto& r : rows)
            w.raw_row({util::format_sig(r.gamma), util::format_sig(r.mean_sigma),
                       util::format_sig(r.mean_sigma_sq), util::format_sig(r.se_mean),
                       util::format_sig(r.se_sq), std::to_string(r.n_modes),
                       std::to_string(r.samples)});
    }

    static MomentTable read_csv(const std::string& path) {
        const auto t = util::read_csv_file(path);
        MomentTable out;
        const auto ig = t.column_index("gamma");
        const auto im = t.column_index("mean_sigma");
        const auto iq = t.column_index("mean_sigma_sq");
        const auto ism = t.column_index("se_mean");
        const auto isq = t.column_index("se_sq");
        const auto in = t.column_index("N");
        const auto is = t.column_index("samples");
        for (const auto& row : t.rows) {
            MomentTableRow r;
            r.gamma = row[ig];
            r.mean_sigma = row[im];
            r.mean_sigma_sq = row[iq];
            r.se_mean = row[ism];
            r.se_sq = row[isq];
            r.n_modes = static_cast<int>(row[in]);
            r.samples = static_cast<std::uint64_t>(row[is]);
            // variance by subtraction: fine to ~1e-12 absolute at 12 digits
            r.variance = r.mean_sigma_sq - r.mean_sigma * r.mean_sigma;
            r.se_variance = std::sqrt(r.se_sq * r.se_sq +
                                      4.0 * r.mean_sigma * r.mean_sigma * r.se_mean * r.se_mean);
            out.rows.push_back(r);
        }
        if (out.rows.empty()) throw std::runtime_error("MomentTable: empty csv");
        out.refresh_diagnostics();
        return out;
    }

    void refresh_diagnostics() {
        diagnostics = {};
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (!(rows[i].mean_sigma < rows[i - 1].mean_sigma)) {
                diagnostics.mean_monotone = false;
                diagnostics.first_violation_gamma = rows[i].gamma;
                break;
            }
        }
        if (!rows.empty()) {
            diagnostics.variance_at_ends[0] = rows.front().variance;
            diagnostics.variance_at_ends[1] = rows.back().variance;
        }
    }
};

inline std::vector<double> log_spaced_grid(double lo, double hi, int points_per_decade) {
    if (!(lo > 0.0) || !(hi > lo) || points_per_decade < 1)
        throw std::invalid_argument("log_spaced_grid: bad range");
    std::vector<double> g;
    const double step = 1.0 / points_per_decade;
    const double e_lo = std::log10(lo), e_hi = std::log10(hi);
    for (double e = e_lo; e < e_hi + 0.5 * step; e += step)
        g.push_back(std::pow(10.0, std::min(e, e_hi)));
    g.back() = hi;
    return g;
}

/// Monte Carlo moment table over an ascending absorption-rate grid.
/// gamma == 0 entries are exact; grid points above mc_gamma_max become
/// anchored continuation rows (samples == 0).
inline MomentTable build_moment_table(const std::vector<double>& gamma_grid,
                                      std::uint64_t seed, const TableOptions& opt = {}) {
    if (gamma_grid.empty())
        throw std::invalid_argument("build_moment_table: empty grid");
    for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
        if (!(gamma_grid[i] >= 0.0))
            throw std::invalid_argument("build_moment_table: gamma >= 0");
        if (i > 0 && !(gamma_grid[i] > gamma_grid[i - 1]))
            throw std::invalid_argument("build_moment_table: grid must ascend");
    }
    if (opt.n_modes < 1)
        throw std::invalid_argument("build_moment_table: N >= 1");

    MomentTable table;
    table.n_modes = opt.n_modes;
    table.seed = seed;

    MomentTableRow last_mc; // anchor for the continuation tail
    bool have_anchor = false;

    for (double gamma : gamma_grid) {
        MomentTableRow row;
        row.gamma = gamma;
        if (gamma == 0.0) {
            row.n_modes = opt.n_modes;
            table.rows.push_back(row);
            continue;
        }
        if (gamma > opt.mc_gamma_max) {
            if (!have_anchor)
                throw std::invalid_argument(
                    "build_moment_table: grid starts beyond mc_gamma_max");
            const double scale = last_mc.gamma / gamma;
            row.mean_sigma = last_mc.mean_sigma * scale; // <sigma> ~ 1/gamma
            row.variance = last_mc.variance * scale * scale;          // var ~ 1/gamma^2
            row.mean_sigma_sq = row.variance + row.mean_sigma * row.mean_sigma;
            row.se_mean = last_mc.se_mean * scale;
            row.se_variance = last_mc.se_variance * scale * scale;
            row.se_sq = row.se_variance;
            row.n_modes = last_mc.n_modes;
            row.samples = 0;
            table.rows.push_back(row);
            continue;
        }

        // sampling schedule for this point
        const bool extrapolate = opt.extrapolation != TableExtrapolation::None &&
                                 gamma <= opt.extrapolation_gamma_max;
        const std::uint64_t n_samples = gamma <= opt.weak_gamma_max ? opt.samples
                                        : extrapolate ? opt.mid_samples
                                                      : opt.tail_samples;
        // keep gamma N/(8M) <= 0.125: scale the resonance space with gamma
        const int bump = std::max(1, static_cast<int>(std::ceil(gamma / 10.0)));

        MomentOptions mopt;
        mopt.ensemble = opt.ensemble;
        mopt.threads = opt.threads;
        mopt.resonance_factor = opt.resonance_factor * bump;

        MomentEstimate est;
        if (!extrapolate) {
            est = estimate_moments(opt.n_modes, gamma, n_samples, seed, mopt);
        } else if (opt.extrapolation == TableExtrapolation::OneOverN) {
            const auto a = estimate_moments(opt.n_modes, gamma, n_samples, seed, mopt);
            const auto b = estimate_moments(2 * opt.n_modes, gamma, n_samples, seed + 1, mopt);
            est = extrapolate_in_n(a, b);
        } else {
            const auto a = estimate_moments(opt.n_modes, gamma, n_samples, seed, mopt);
            MomentOptions mopt2 = mopt;
            mopt2.resonance_factor = 2 * mopt.resonance_factor;
            const auto b = estimate_moments(opt.n_modes, gamma, n_samples, seed + 1, mopt2);
            est = extrapolate_in_m(a, b);
        }
        row.mean_sigma = est.moments.mean_sigma;
        row.mean_sigma_sq = est.moments.mean_sigma_sq;
        row.se_mean = est.moments.se_mean;
        row.se_sq = est.moments.se_sq;
        row.variance = est.variance;
        row.se_variance = est.se_variance;
        row.n_modes = est.n_modes;
        row.samples = est.samples;
        row.m_res = est.m_res;
        table.rows.push_back(row);
        last_mc = row;
        have_anchor = true;
    }
    table.refresh_diagnostics();
    return table;
}

} // namespace radcorr::cavity
