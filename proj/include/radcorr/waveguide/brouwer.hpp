#pragma once

#include <cmath>
#include <stdexcept>

namespace radcorr::waveguide {

/// Bracketed factor B(s) of the strength-distribution variance for a weakly
/// absorbing disordered waveguide of scaled length s = L/xi:
///
///   variance = (2/3) (l/xi) B(s),
///   B(s) = coth^3 s - 3/sinh s + s/sinh^2 s + (s coth s - 1)/sinh^3 s - s/sinh^4 s.
///
/// The five terms are each O(1/s^3) for small s while B itself is O(s^3),
/// so the direct form loses ~15 s^-6 digits of cancellation; below s = 0.25
/// the Taylor series through s^11 is used instead. Both branches are then
/// accurate to ~2e-10 or better at the switch, smooth enough for 1e-8
/// adaptive quadrature over profiles that sweep s through zero.
inline double variance_bracket(double s) {
    if (!(s >= 0.0)) throw std::domain_error("variance_bracket: s must be >= 0");
    if (s < 0.25) {
        const double s2 = s * s;
        // B = (2/15) s^3 - (1/28) s^5 + (179/25200) s^7 - (491/399168) s^9
        //     + (8227/42042000) s^11 + O(s^13)
        return s * s2 *
               (2.0 / 15.0 +
                s2 * (-1.0 / 28.0 +
                      s2 * (179.0 / 25200.0 +
                            s2 * (-491.0 / 399168.0 + s2 * (8227.0 / 42042000.0)))));
    }
    if (s > 700.0) return 1.0; // 1 - B ~ 6 e^{-s}, below double precision
    const double sh = std::sinh(s);
    const double cth = std::cosh(s) / sh;
    return cth * cth * cth - 3.0 / sh + s / (sh * sh) + (s * cth - 1.0) / (sh * sh * sh)
         - s / (sh * sh * sh * sh);
}

/// Mean absorptance <1 - sigma> = (4 lr / 3) tanh(s/2), with lr = l/xi at
/// the evaluation frequency.
inline double mean_absorptance(double s, double lr) {
    if (!(s >= 0.0)) throw std::domain_error("mean_absorptance: s must be >= 0");
    if (!(lr > 0.0)) throw std::domain_error("mean_absorptance: l/xi must be > 0");
    return 4.0 * lr / 3.0 * std::tanh(0.5 * s);
}

} // namespace radcorr::waveguide
