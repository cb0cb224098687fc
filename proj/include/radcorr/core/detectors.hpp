#pragma once

#include <stdexcept>

namespace radcorr::core {

/// Two single-mode photodetectors and the Bose-Einstein occupation at line
/// center (treated as frequency-independent across the line).
struct DetectorPair {
    double alpha_k; ///< efficiency of detector k, in [0,1]
    double alpha_l; ///< efficiency of detector l, in [0,1]
    double occupation; ///< f at line center, >= 0

    DetectorPair(double ak, double al, double f)
        : alpha_k(ak), alpha_l(al), occupation(f) {
        if (!(ak >= 0.0 && ak <= 1.0) || !(al >= 0.0 && al <= 1.0))
            throw std::invalid_argument("DetectorPair: efficiencies must lie in [0,1]");
        if (!(f >= 0.0))
            throw std::invalid_argument("DetectorPair: occupation must be >= 0");
    }
};

} // namespace radcorr::core
