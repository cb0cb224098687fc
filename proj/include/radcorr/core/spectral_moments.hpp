#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace radcorr::core {

/// First and second spectral moments of the scattering strengths at one
/// frequency: mean_sigma = <N^-1 sum sigma_n>, mean_sigma_sq =
/// <N^-1 sum sigma_n^2>. Standard errors are zero on analytic paths.
///
/// Analytic profiles with sigma near 1 should construct through
/// from_absorptance_variance: the derived quantities 1 - <sigma> and
/// <sigma^2> - <sigma>^2 are then carried exactly instead of being
/// recovered by subtraction, which loses up to ~7 digits in the
/// weak-absorption regime and is too noisy for tight quadrature.
struct SpectralMoments {
    double mean_sigma = 1.0;
    double mean_sigma_sq = 1.0;
    double se_mean = 0.0;
    double se_sq = 0.0;
    double absorptance_exact = std::numeric_limits<double>::quiet_NaN();
    double variance_exact = std::numeric_limits<double>::quiet_NaN();

    static SpectralMoments from_absorptance_variance(double absorptance, double variance,
                                                     double se_mean = 0.0, double se_sq = 0.0) {
        SpectralMoments m;
        m.mean_sigma = 1.0 - absorptance;
        m.mean_sigma_sq = variance + m.mean_sigma * m.mean_sigma;
        m.se_mean = se_mean;
        m.se_sq = se_sq;
        m.absorptance_exact = absorptance;
        m.variance_exact = variance;
        return m;
    }

    /// 1 - <sigma>, exact when constructed from it.
    double absorptance() const {
        return std::isnan(absorptance_exact) ? 1.0 - mean_sigma : absorptance_exact;
    }

    /// Ensemble variance of the strength distribution, the quantity driving
    /// the long-range correlation; exact when constructed from it.
    double variance() const {
        return std::isnan(variance_exact) ? mean_sigma_sq - mean_sigma * mean_sigma
                                          : variance_exact;
    }

    /// Bounds: 0 <= <sigma^2> <= <sigma> <= 1 and variance >= 0, all within
    /// `tol` (statistical slack for Monte Carlo estimates; pass 0 for
    /// analytic paths).
    void validate(double tol = 0.0) const {
        if (!(mean_sigma >= -tol) || !(mean_sigma <= 1.0 + tol))
            throw std::domain_error("SpectralMoments: mean_sigma outside [0,1]: " +
                                    std::to_string(mean_sigma));
        if (!(mean_sigma_sq >= -tol) || !(mean_sigma_sq <= mean_sigma + tol))
            throw std::domain_error("SpectralMoments: moment ordering violated");
        if (!(variance() >= -tol))
            throw std::domain_error("SpectralMoments: negative variance beyond tolerance");
    }
};

} // namespace radcorr::core
