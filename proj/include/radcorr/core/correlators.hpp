#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "radcorr/core/detectors.hpp"
#include "radcorr/core/line_integral.hpp"
#include "radcorr/core/lorentzian.hpp"
#include "radcorr/core/spectral_moments.hpp"

namespace radcorr::core {

/// Unit system a CorrelatorResult is expressed in.
///
/// LineUnits / AbsoluteRadPerSec are coherent (all three fields share a
/// unit): auto_correlation holds the full C_kk including the shot term.
/// In the figure-reduced tags each field carries its own caption unit and
/// auto_correlation holds the excess C_kk - I_k.
enum class UnitsTag { LineUnits, AbsoluteRadPerSec, WaveguideFig2, CavityFig3 };

struct CorrelatorResult {
    double cross_correlation = 0.0; ///< C_kl, k != l
    double auto_correlation = 0.0;  ///< C_kk (coherent tags) or C_kk - I_k (figure tags)
    double mean_current = 0.0;      ///< I_k
    UnitsTag units = UnitsTag::LineUnits;
    bool variance_clipped = false;  ///< MC noise pushed variance below zero somewhere

    double wave_excess() const {
        return units == UnitsTag::LineUnits || units == UnitsTag::AbsoluteRadPerSec
                   ? auto_correlation - mean_current
                   : auto_correlation;
    }

    void validate() const {
        if (!(cross_correlation >= 0.0))
            throw std::domain_error("CorrelatorResult: C_kl < 0");
        if (!(mean_current >= 0.0))
            throw std::domain_error("CorrelatorResult: mean current < 0");
        if (!(wave_excess() >= 0.0))
            throw std::domain_error("CorrelatorResult: wave noise < 0");
    }
};

struct CorrelatorOptions {
    double rel_tol = 1e-8;      ///< quadrature relative tolerance
    double mc_tolerance = 0.0;  ///< slack for MC-estimated moment profiles
};

/// Ensemble-averaged photocurrent correlators from a spectral-moment
/// profile. The profile maps the scaled detuning x to the moments at that
/// frequency; the three line integrals give
///
///   C_kl = (a_k a_l f^2 / N) * L[ var(x) ]
///   I_k  =  a_k f           * L[ 1 - <sigma>(x) ]
///   C_kk =  a_k^2 f^2       * L[ (1 - <sigma>(x))^2 ] + I_k
///
/// with L[g] = (Omega_c/2pi) Int g dx. Negative profile variances within
/// mc_tolerance are clipped to zero and flagged; beyond it they throw.
template <class Profile>
CorrelatorResult correlators_from_moments(Profile&& profile, const LorentzianLine& line,
                                          const DetectorPair& detectors, int n_modes,
                                          const CorrelatorOptions& opt = {}) {
    if (n_modes < 1) throw std::invalid_argument("correlators_from_moments: N >= 1");

    bool clipped = false;
    auto variance_at = [&](double x) {
        const SpectralMoments m = profile(x);
        double v = m.variance();
        if (v < 0.0) {
            // allow rounding-level cancellation noise on top of the MC slack
            const double slack = opt.mc_tolerance +
                16.0 * std::numeric_limits<double>::epsilon() *
                    (std::abs(m.mean_sigma_sq) + m.mean_sigma * m.mean_sigma);
            if (v < -slack)
                throw std::domain_error(
                    "correlators_from_moments: variance below -tolerance at x=" +
                    std::to_string(x));
            clipped = true;
            v = 0.0;
        }
        return v;
    };
    auto absorptance_at = [&](double x) { return profile(x).absorptance(); };

    const double f = detectors.occupation;
    const double ak = detectors.alpha_k, al = detectors.alpha_l;

    CorrelatorResult r;
    r.units = UnitsTag::LineUnits;
    r.mean_current = ak * f * line_integral(absorptance_at, line, opt.rel_tol);
    r.cross_correlation = ak * al * f * f / n_modes *
                          line_integral(variance_at, line, opt.rel_tol);
    const double wave = ak * ak * f * f *
                        line_integral([&](double x) {
                            const double a = absorptance_at(x);
                            return a * a;
                        }, line, opt.rel_tol);
    r.auto_correlation = wave + r.mean_current;
    r.variance_clipped = clipped;
    return r;
}

/// Pure rescale from line units (half_width == 1) to absolute rad/s.
inline CorrelatorResult scale_to_absolute(CorrelatorResult r, double omega_c) {
    if (r.units != UnitsTag::LineUnits)
        throw std::invalid_argument("scale_to_absolute: expected line units");
    r.cross_correlation *= omega_c;
    r.auto_correlation *= omega_c;
    r.mean_current *= omega_c;
    r.units = UnitsTag::AbsoluteRadPerSec;
    return r;
}

} // namespace radcorr::core
