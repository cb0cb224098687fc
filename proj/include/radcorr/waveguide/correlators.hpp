#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "radcorr/core/correlators.hpp"
#include "radcorr/core/detectors.hpp"
#include "radcorr/core/lorentzian.hpp"
#include "radcorr/core/spectral_moments.hpp"
#include "radcorr/waveguide/brouwer.hpp"

namespace radcorr::waveguide {

/// Disordered waveguide in the diffusive, weakly absorbing regime.
/// Validity (1/N << l/xi << 1) is flagged, not enforced: sweeps may cross
/// the regime boundary and keep provenance.
struct WaveguideParams {
    int n_modes;               ///< N >= 1
    double length_ratio;       ///< s0 = L/xi0 at line center, >= 0
    double mean_free_path_ratio; ///< lr = l/xi0, > 0

    WaveguideParams(int n, double s0, double lr)
        : n_modes(n), length_ratio(s0), mean_free_path_ratio(lr) {
        if (n < 1) throw std::invalid_argument("WaveguideParams: N >= 1");
        if (!(s0 >= 0.0)) throw std::invalid_argument("WaveguideParams: s0 >= 0");
        if (!(lr > 0.0)) throw std::invalid_argument("WaveguideParams: l/xi0 > 0");
        // absorptance (4/3) lr tanh <= 1, else the moment formulas leave [0,1]
        if (lr * std::tanh(0.5 * s0) >= 0.75)
            throw std::domain_error("WaveguideParams: l/xi0 too large, absorptance > 1");
    }

    bool regime_valid() const {
        return n_modes * mean_free_path_ratio > 10.0 && mean_free_path_ratio < 0.1;
    }
};

/// Moments at scaled detuning x: the Lorentzian dielectric profile maps to
/// xi/xi0 = s0/s = sqrt(1+x^2), so both s and l/xi shrink off line center.
inline core::SpectralMoments moments_at(const WaveguideParams& p, double x) {
    const double scale = 1.0 / std::sqrt(1.0 + x * x);
    const double s = p.length_ratio * scale;
    const double lr = p.mean_free_path_ratio * scale;
    return core::SpectralMoments::from_absorptance_variance(
        mean_absorptance(s, lr), 2.0 / 3.0 * lr * variance_bracket(s));
}

struct WaveguideCorrelators {
    core::CorrelatorResult line_units; ///< full prefactors, one implied factor Omega_c
    core::CorrelatorResult fig2;       ///< cross in Wc l f^2 akal/(N xi0); excess in Wc (l f ak/xi0)^2; mean in Wc l f ak/xi0
    double cross_ratio = 0.0;          ///< C_kl / sqrt(I_k I_l)
    bool regime_valid = true;
};

namespace detail {
inline double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }
}

/// Full frequency-integrated correlators; s0 = 0 returns all zeros (the
/// continuous limit, convenient for sweeps).
inline WaveguideCorrelators waveguide_correlators(const WaveguideParams& p,
                                                  const core::DetectorPair& det,
                                                  double rel_tol = 1e-8) {
    WaveguideCorrelators out;
    out.regime_valid = p.regime_valid();
    out.fig2.units = core::UnitsTag::WaveguideFig2;
    if (p.length_ratio == 0.0) return out;

    const auto line = core::LorentzianLine::reduced(p.length_ratio);
    out.line_units = core::correlators_from_moments(
        [&p](double x) { return moments_at(p, x); }, line, det, p.n_modes,
        {rel_tol, 0.0});

    const double lr = p.mean_free_path_ratio;
    const double f = det.occupation, ak = det.alpha_k, al = det.alpha_l;
    out.fig2.cross_correlation =
        detail::safe_div(out.line_units.cross_correlation, lr * f * f * ak * al / p.n_modes);
    out.fig2.auto_correlation =
        detail::safe_div(out.line_units.auto_correlation - out.line_units.mean_current,
                         lr * lr * f * f * ak * ak);
    out.fig2.mean_current = detail::safe_div(out.line_units.mean_current, lr * f * ak);

    const double mean_l = detail::safe_div(out.line_units.mean_current * al, ak);
    out.cross_ratio = detail::safe_div(out.line_units.cross_correlation,
                                       std::sqrt(out.line_units.mean_current * mean_l));
    return out;
}

/// Closed-form thin-sample limits (L/xi0 -> 0) in the Fig.-2 reduced units.
inline core::CorrelatorResult thin_sample_asymptotics(const WaveguideParams& p) {
    const double s0 = p.length_ratio;
    core::CorrelatorResult r;
    r.units = core::UnitsTag::WaveguideFig2;
    r.cross_correlation = s0 * s0 * s0 / 45.0;
    r.auto_correlation = 4.0 / (9.0 * std::numbers::pi) * s0 * s0; // excess C_kk - I_k
    r.mean_current = s0 / 3.0;
    return r;
}

struct ThickSampleLimits {
    double cross_ratio_limit;  ///< C_kl/sqrt(I_k I_l) -> f sqrt(ak al)/(2N)
    double short_range_limit;  ///< reduced C_kk - I_k -> 8/9
};

/// Large-L saturation values; C_kl and I_k themselves keep growing ~ ln s0.
inline ThickSampleLimits thick_sample_limits(const core::DetectorPair& det, int n_modes) {
    if (n_modes < 1) throw std::invalid_argument("thick_sample_limits: N >= 1");
    ThickSampleLimits lim;
    lim.cross_ratio_limit =
        det.occupation * std::sqrt(det.alpha_k * det.alpha_l) / (2.0 * n_modes);
    lim.short_range_limit = det.alpha_k == 0.0 ? 0.0 : 8.0 / 9.0;
    return lim;
}

} // namespace radcorr::waveguide
