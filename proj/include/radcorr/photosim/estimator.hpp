#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "radcorr/core/correlators.hpp"
#include "radcorr/photosim/detection.hpp"
#include "radcorr/util/parallel.hpp"
#include "radcorr/util/stats.hpp"

namespace radcorr::photosim {

/// Empirical correlators with bootstrap errors. Estimates
///   C_kl = cov(n_k, n_l)/t,  C_kk = var(n_k)/t,  I_k = mean(n_k)/t
/// over windows; they converge to the spectral prediction as the window
/// count and length grow.
struct EmpiricalCorrelators {
    core::CorrelatorResult values;
    double se_cross = 0.0;
    double se_auto = 0.0;
    double se_mean = 0.0;
    bool few_windows = false; ///< below 1e3 windows: error bars are wide
};

inline EmpiricalCorrelators estimate_correlators(const PhotocountRecord& rec,
                                                 std::size_t n_boot = 400,
                                                 std::uint64_t seed = 1) {
    const std::size_t n = rec.windows();
    if (n < 2) throw std::invalid_argument("estimate_correlators: need >= 2 windows");
    if (!(rec.window_duration > 0.0))
        throw std::invalid_argument("estimate_correlators: bad window duration");
    const double t = rec.window_duration;

    auto stat = [&](auto&& pick, double& cross, double& auto_c, double& mean_c) {
        double mk = 0.0, ml = 0.0;
        const std::size_t m = n;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& c = pick(i);
            mk += c[0];
            ml += c[1];
        }
        mk /= m;
        ml /= m;
        double ckl = 0.0, ckk = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& c = pick(i);
            ckl += (c[0] - mk) * (c[1] - ml);
            ckk += (c[0] - mk) * (c[0] - mk);
        }
        ckl /= (m - 1);
        ckk /= (m - 1);
        cross = ckl / t;
        auto_c = ckk / t;
        mean_c = mk / t;
    };

    EmpiricalCorrelators out;
    out.values.units = core::UnitsTag::AbsoluteRadPerSec;
    stat([&](std::size_t i) -> const std::array<long, 2>& { return rec.counts[i]; },
         out.values.cross_correlation, out.values.auto_correlation,
         out.values.mean_current);
    out.few_windows = n < 1000;

    // bootstrap over windows
    std::vector<double> bc(n_boot), ba(n_boot), bm(n_boot);
    std::vector<std::size_t> idx(n);
    for (std::size_t b = 0; b < n_boot; ++b) {
        auto engine = util::make_engine(util::derive_seed(seed, b));
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (auto& i : idx) i = pick(engine);
        stat([&](std::size_t i) -> const std::array<long, 2>& { return rec.counts[idx[i]]; },
             bc[b], ba[b], bm[b]);
    }
    auto sd = [](std::span<const double> v) {
        const auto ms = util::mean_se(v);
        return ms.se * std::sqrt(static_cast<double>(v.size()));
    };
    out.se_cross = sd(bc);
    out.se_auto = sd(ba);
    out.se_mean = sd(bm);
    return out;
}

struct PhotosimRunOptions {
    std::size_t n_windows = 10000;
    bool frozen_fields = false; ///< reuse one field realization (shot-noise isolation)
    unsigned threads = 0;
};

/// Full pipeline: synthesize independent windows (or one frozen one),
/// detect, and collect the photocount record.
inline PhotocountRecord run_photosim(const ThermalFieldSimulator& sim,
                                     const core::DetectorPair& det, std::uint64_t seed,
                                     const PhotosimRunOptions& opt = {}) {
    PhotocountRecord rec;
    rec.counts.resize(opt.n_windows);
    rec.window_duration = sim.count_duration();
    FieldRecord frozen;
    if (opt.frozen_fields) frozen = sim.synthesize(util::derive_seed(seed, 0, 7));
    util::parallel_for(
        opt.n_windows,
        [&](std::size_t w) {
            if (opt.frozen_fields) {
                rec.counts[w] = detect(frozen, det, util::derive_seed(seed, w, 1));
            } else {
                const auto fields = sim.synthesize(util::derive_seed(seed, w, 0));
                rec.counts[w] = detect(fields, det, util::derive_seed(seed, w, 1));
            }
        },
        opt.threads);
    return rec;
}

} // namespace radcorr::photosim
