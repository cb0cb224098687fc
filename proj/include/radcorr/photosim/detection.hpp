#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "radcorr/core/detectors.hpp"
#include "radcorr/photosim/synthesis.hpp"
#include "radcorr/util/rng.hpp"

namespace radcorr::photosim {

/// Photocounts per window for the two detectors.
struct PhotocountRecord {
    std::vector<std::array<long, 2>> counts;
    double window_duration = 0.0;
    std::size_t windows() const { return counts.size(); }
};

/// Photon counts for one window: inhomogeneous Poisson process with rate
/// alpha_k |a_k(t)|^2, realized by thinning against the window's peak rate.
/// The sampled intensity is treated as piecewise constant over dt.
inline std::array<long, 2> detect(const FieldRecord& fields, const core::DetectorPair& det,
                                  std::uint64_t seed) {
    if (fields.a.rows() < 1) throw std::invalid_argument("detect: no field modes");
    auto engine = util::make_engine(seed);
    const int j0 = fields.count_begin(), j1 = fields.count_end();
    if (j1 <= j0) throw std::invalid_argument("detect: empty counting span");
    const double span = (j1 - j0) * fields.dt;
    const double alpha[2] = {det.alpha_k, det.alpha_l};

    std::array<long, 2> n{0, 0};
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (int d = 0; d < 2 && d < fields.a.rows(); ++d) {
        if (alpha[d] == 0.0) continue;
        double peak = 0.0;
        for (int j = j0; j < j1; ++j)
            peak = std::max(peak, std::norm(fields.a(d, j)));
        peak *= alpha[d];
        if (peak == 0.0) continue;
        std::poisson_distribution<long> candidates(peak * span);
        const long m = candidates(engine);
        long kept = 0;
        for (long c = 0; c < m; ++c) {
            const double u = uniform(engine) * span;
            const int j = j0 + std::min(j1 - j0 - 1, static_cast<int>(u / fields.dt));
            const double rate = alpha[d] * std::norm(fields.a(d, j));
            if (uniform(engine) * peak <= rate) ++kept;
        }
        n[d] = kept;
    }
    return n;
}

} // namespace radcorr::photosim
