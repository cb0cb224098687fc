#pragma once

#include <cmath>
#include <stdexcept>

namespace radcorr::core {

/// Absorption line with Lorentzian frequency profile of the imaginary part
/// of the dielectric function. peak_strength is the dimensionless strength
/// at line center: L/xi0 for the waveguide, gamma0 for the cavity.
///
/// x denotes the scaled detuning (omega - center) / half_width throughout.
struct LorentzianLine {
    double center_frequency; ///< omega0 [rad/s]
    double half_width;       ///< Omega_c [rad/s]
    double peak_strength;    ///< s0 or gamma0, dimensionless

    LorentzianLine(double center, double width, double strength)
        : center_frequency(center), half_width(width), peak_strength(strength) {
        if (!(width > 0.0))
            throw std::invalid_argument("LorentzianLine: half_width must be > 0");
        if (!(strength >= 0.0))
            throw std::invalid_argument("LorentzianLine: peak_strength must be >= 0");
    }

    /// Line much narrower than its center frequency; the narrow-line
    /// approximation is assumed, this is advisory only.
    bool narrow() const { return half_width < 0.1 * center_frequency; }

    double x_of(double omega) const { return (omega - center_frequency) / half_width; }
    double omega_of(double x) const { return center_frequency + x * half_width; }

    /// s(x) = s0 / sqrt(1 + x^2): strength scaling with xi ~ 1/sqrt(eps'').
    double strength_sqrt(double x) const { return peak_strength / std::sqrt(1.0 + x * x); }

    /// gamma(x) = gamma0 / (1 + x^2): strength scaling directly with eps''.
    double strength_lorentzian(double x) const { return peak_strength / (1.0 + x * x); }

    /// Line in reduced units (half_width == 1); results then carry one
    /// factor of the physical Omega_c that is applied at output.
    static LorentzianLine reduced(double strength) { return {0.0, 1.0, strength}; }
};

} // namespace radcorr::core
