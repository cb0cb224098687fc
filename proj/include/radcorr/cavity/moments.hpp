#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "radcorr/cavity/heidelberg.hpp"
#include "radcorr/core/spectral_moments.hpp"
#include "radcorr/util/parallel.hpp"
#include "radcorr/util/rng.hpp"
#include "radcorr/util/stats.hpp"

namespace radcorr::cavity {

struct MomentOptions {
    int resonance_factor = 10;  ///< M_res = resonance_factor * N (>= 5)
    Ensemble ensemble = Ensemble::GOE;
    double se_tolerance = std::numeric_limits<double>::infinity();
    unsigned threads = 0;       ///< 0 = hardware concurrency
};

/// Monte Carlo spectral moments at one absorption rate. The variance and
/// its error come from a delete-one jackknife over samples (the variance is
/// a nonlinear statistic of the two column means).
struct MomentEstimate {
    core::SpectralMoments moments;
    double variance = 0.0;
    double se_variance = 0.0;
    double gamma = 0.0;
    int n_modes = 0;   ///< 0 once extrapolated in 1/N
    int m_res = 0;
    std::uint64_t samples = 0;
    bool insufficient = false; ///< standard error above the requested tolerance
};

inline MomentEstimate estimate_moments(int n_modes, double gamma, std::uint64_t samples,
                                       std::uint64_t seed, const MomentOptions& opt = {}) {
    if (n_modes < 1) throw std::invalid_argument("estimate_moments: N >= 1");
    if (opt.resonance_factor < 5)
        throw std::invalid_argument("estimate_moments: resonance_factor >= 5");
    MomentEstimate est;
    est.gamma = gamma;
    est.n_modes = n_modes;
    est.m_res = opt.resonance_factor * n_modes;
    est.samples = samples;
    if (gamma == 0.0) {
        // unitary reflection: every sigma_n is exactly 1
        est.moments = core::SpectralMoments{1.0, 1.0, 0.0, 0.0};
        return est;
    }
    if (samples < 100) throw std::invalid_argument("estimate_moments: samples >= 100");

    std::vector<double> m1(samples), m2(samples);
    util::parallel_for(
        samples,
        [&](std::size_t i) {
            auto engine = util::make_engine(util::derive_seed(seed, i, n_modes,
                                                              static_cast<std::uint64_t>(gamma * 1e9)));
            const Eigen::MatrixXcd r =
                sample_cavity_reflection(n_modes, gamma, est.m_res, engine, opt.ensemble);
            const Eigen::MatrixXcd p = r * r.adjoint();
            m1[i] = p.real().trace() / n_modes;
            m2[i] = p.squaredNorm() / n_modes;
        },
        opt.threads);

    const auto jk_mean = util::mean_se(m1);
    const auto jk_sq = util::mean_se(m2);
    const auto jk_var = util::jackknife(
        {m1, m2}, [](std::span<const double> c) { return c[1] - c[0] * c[0]; });
    est.moments.mean_sigma = jk_mean.mean;
    est.moments.mean_sigma_sq = jk_sq.mean;
    est.moments.se_mean = jk_mean.se;
    est.moments.se_sq = jk_sq.se;
    est.moments.variance_exact = jk_var.mean;
    est.variance = jk_var.mean;
    est.se_variance = jk_var.se;
    est.insufficient = jk_mean.se > opt.se_tolerance || jk_sq.se > opt.se_tolerance;
    return est;
}

namespace detail {
/// Two-point Richardson step for estimates at inverse sizes 1/s and
/// 1/(ratio*s): value = (ratio*large - small)/(ratio - 1); errors combine
/// in quadrature with the extrapolation weights.
inline MomentEstimate richardson_pair(const MomentEstimate& small_sz,
                                      const MomentEstimate& large_sz, double ratio) {
    const double wl = ratio / (ratio - 1.0), ws = 1.0 / (ratio - 1.0);
    MomentEstimate e;
    e.gamma = small_sz.gamma;
    e.samples = small_sz.samples + large_sz.samples;
    e.insufficient = small_sz.insufficient || large_sz.insufficient;
    auto combine = [&](double a, double b) { return wl * b - ws * a; };
    auto combine_se = [&](double a, double b) {
        return std::sqrt(wl * wl * b * b + ws * ws * a * a);
    };
    e.moments.mean_sigma =
        combine(small_sz.moments.mean_sigma, large_sz.moments.mean_sigma);
    e.moments.mean_sigma_sq =
        combine(small_sz.moments.mean_sigma_sq, large_sz.moments.mean_sigma_sq);
    e.moments.se_mean = combine_se(small_sz.moments.se_mean, large_sz.moments.se_mean);
    e.moments.se_sq = combine_se(small_sz.moments.se_sq, large_sz.moments.se_sq);
    e.variance = combine(small_sz.variance, large_sz.variance);
    e.se_variance = combine_se(small_sz.se_variance, large_sz.se_variance);
    e.moments.variance_exact = e.variance;
    return e;
}
} // namespace detail

/// Richardson extrapolation in 1/N from two mode counts at a fixed
/// resonance factor: removes the leading finite-N bias.
inline MomentEstimate extrapolate_in_n(const MomentEstimate& small_n,
                                       const MomentEstimate& large_n) {
    if (small_n.n_modes >= large_n.n_modes || small_n.n_modes == 0)
        throw std::invalid_argument("extrapolate_in_n: need n_small < n_large");
    if (small_n.gamma != large_n.gamma)
        throw std::invalid_argument("extrapolate_in_n: mismatched gamma");
    auto e = detail::richardson_pair(small_n, large_n,
                                     static_cast<double>(large_n.n_modes) / small_n.n_modes);
    e.n_modes = 0; // marks the 1/N limit
    e.m_res = large_n.m_res;
    return e;
}

/// Richardson extrapolation in N/M_res from two resonance-space sizes at a
/// fixed mode count: removes the leading resonance-trapping bias (the level
/// spacing the N coupled channels effectively remove from the band), which
/// a 1/N extrapolation at fixed M/N cannot touch.
inline MomentEstimate extrapolate_in_m(const MomentEstimate& small_m,
                                       const MomentEstimate& large_m) {
    if (small_m.m_res >= large_m.m_res)
        throw std::invalid_argument("extrapolate_in_m: need m_small < m_large");
    if (small_m.n_modes != large_m.n_modes || small_m.gamma != large_m.gamma)
        throw std::invalid_argument("extrapolate_in_m: mismatched N or gamma");
    auto e = detail::richardson_pair(small_m, large_m,
                                     static_cast<double>(large_m.m_res) / small_m.m_res);
    e.n_modes = small_m.n_modes;
    e.m_res = 0; // marks the resonance-space limit
    return e;
}

} // namespace radcorr::cavity
