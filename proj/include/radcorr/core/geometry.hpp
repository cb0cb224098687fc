#pragma once

#include <cmath>
#include <stdexcept>

namespace radcorr::core {

struct CoherenceGeometry {
    double coherence_length;  ///< d_c = lambda r / a [m]
    long mode_count;          ///< N = round(2 pi A / lambda^2)
    double crossover_distance; ///< r (lambda/a)^{1/3} [m], where the long-range part dominates
};

/// Far-field geometry of a thermal source of diameter a observed at
/// distance r: transverse coherence length, waveguide mode count for
/// cross-section A (both polarizations), and the detector separation beyond
/// which the long-range correlation dominates.
inline CoherenceGeometry coherence_geometry(double wavelength, double source_diameter,
                                            double distance, double area) {
    if (!(wavelength > 0) || !(source_diameter > 0) || !(distance > 0) || !(area > 0))
        throw std::invalid_argument("coherence_geometry: all inputs must be > 0");
    constexpr double kTwoPi = 6.283185307179586;
    CoherenceGeometry g;
    g.coherence_length = wavelength * distance / source_diameter;
    g.mode_count = std::lround(kTwoPi * area / (wavelength * wavelength));
    g.crossover_distance = distance * std::cbrt(wavelength / source_diameter);
    return g;
}

} // namespace radcorr::core
