#pragma once

#include <cmath>
#include <stdexcept>

#include "radcorr/cavity/interpolate.hpp"
#include "radcorr/core/correlators.hpp"
#include "radcorr/core/detectors.hpp"
#include "radcorr/core/lorentzian.hpp"

namespace radcorr::cavity {

struct CavityParams {
    int n_modes;          ///< open channels N >= 1
    double gamma0;        ///< absorption rate at line center, >= 0
    int resonance_factor; ///< M_res = resonance_factor * N, >= 5

    CavityParams(int n, double g0, int rf = 10)
        : n_modes(n), gamma0(g0), resonance_factor(rf) {
        if (n < 1) throw std::invalid_argument("CavityParams: N >= 1");
        if (!(g0 >= 0.0)) throw std::invalid_argument("CavityParams: gamma0 >= 0");
        if (rf < 5) throw std::invalid_argument("CavityParams: resonance_factor >= 5");
    }
};

/// Constant in the strong-absorption limit of C_kl/sqrt(I_k I_l); known to
/// two digits only.
inline constexpr double kStrongCrossRatio = 0.062;

struct CavityStrongLimits {
    double cross_ratio_limit;  ///< 0.062 f sqrt(ak al) / N
    double short_ratio_limit;  ///< (C_kk - I_k)/I_k -> f ak / 2
};

inline CavityStrongLimits cavity_strong_limits(const core::DetectorPair& det, int n_modes) {
    if (n_modes < 1) throw std::invalid_argument("cavity_strong_limits: N >= 1");
    return {kStrongCrossRatio * det.occupation * std::sqrt(det.alpha_k * det.alpha_l) / n_modes,
            0.5 * det.occupation * det.alpha_k};
}

struct CavityCorrelators {
    core::CorrelatorResult line_units; ///< full prefactors, one implied factor Omega_c
    core::CorrelatorResult fig3;       ///< cross in Wc f^2 ak al/N; excess in Wc f^2 ak^2; mean in Wc f ak
    double cross_ratio = 0.0;            ///< C_kl / sqrt(I_k I_l)
    double cross_ratio_normalized = 0.0; ///< in units f sqrt(ak al)/N, -> 0.062
    double short_ratio = 0.0;            ///< (C_kk - I_k)/I_k
    double short_ratio_normalized = 0.0; ///< in units f ak, -> 1/2
    bool tail_dominated = false; ///< line center sits beyond the MC-backed range
};

namespace detail {
inline double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }
}

/// Frequency-integrated cavity correlators: the line maps the detuning to
/// gamma(x) = gamma0/(1+x^2) and the moment table supplies the spectral
/// moments at every probed absorption rate. gamma0 = 0 returns zeros.
inline CavityCorrelators cavity_correlators(const CavityParams& p,
                                            const core::DetectorPair& det,
                                            const MomentInterpolator& table,
                                            double rel_tol = 1e-8) {
    CavityCorrelators out;
    out.fig3.units = core::UnitsTag::CavityFig3;
    if (p.gamma0 == 0.0) return out;
    if (p.gamma0 > table.gamma_hi() * 1e4)
        throw std::out_of_range("cavity_correlators: gamma0 too far beyond the table");
    out.tail_dominated = p.gamma0 > table.gamma_hi();

    const auto line = core::LorentzianLine::reduced(p.gamma0);
    core::CorrelatorOptions opt;
    opt.rel_tol = rel_tol;
    opt.mc_tolerance = 0.0; // interpolated moments are positive by construction
    out.line_units = core::correlators_from_moments(
        [&](double x) { return table.moments(line.strength_lorentzian(x)); }, line, det,
        p.n_modes, opt);

    const double f = det.occupation, ak = det.alpha_k, al = det.alpha_l;
    out.fig3.cross_correlation =
        detail::safe_div(out.line_units.cross_correlation, f * f * ak * al / p.n_modes);
    out.fig3.auto_correlation = detail::safe_div(
        out.line_units.auto_correlation - out.line_units.mean_current, f * f * ak * ak);
    out.fig3.mean_current = detail::safe_div(out.line_units.mean_current, f * ak);

    const double mean_l = detail::safe_div(out.line_units.mean_current * al, ak);
    out.cross_ratio = detail::safe_div(out.line_units.cross_correlation,
                                       std::sqrt(out.line_units.mean_current * mean_l));
    out.cross_ratio_normalized =
        detail::safe_div(out.fig3.cross_correlation, out.fig3.mean_current);
    out.short_ratio =
        detail::safe_div(out.line_units.auto_correlation - out.line_units.mean_current,
                         out.line_units.mean_current);
    out.short_ratio_normalized =
        detail::safe_div(out.fig3.auto_correlation, out.fig3.mean_current);
    return out;
}

} // namespace radcorr::cavity
