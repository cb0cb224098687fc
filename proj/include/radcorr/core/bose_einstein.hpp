#pragma once

#include <cmath>
#include <stdexcept>

namespace radcorr::core {

/// Photon energy over thermal energy, the single ratio the occupation
/// depends on. Must be strictly positive (occupation diverges at zero).
struct BoseEinsteinInput {
    double photon_energy_over_thermal;

    explicit BoseEinsteinInput(double ratio) : photon_energy_over_thermal(ratio) {
        if (!(ratio > 0.0))
            throw std::domain_error("BoseEinsteinInput: ratio must be > 0");
    }
};

/// f = 1/(exp(ratio) - 1); strictly positive, strictly decreasing.
inline double bose_einstein(double ratio) {
    if (!(ratio > 0.0))
        throw std::domain_error("bose_einstein: ratio must be > 0");
    return 1.0 / std::expm1(ratio);
}

inline double bose_einstein(const BoseEinsteinInput& in) {
    return bose_einstein(in.photon_energy_over_thermal);
}

} // namespace radcorr::core
