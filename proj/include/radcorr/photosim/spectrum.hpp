#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "radcorr/core/correlators.hpp"
#include "radcorr/core/detectors.hpp"

namespace radcorr::photosim {

/// Discretized emission spectrum: uniform frequency bins carrying the
/// Hermitian emission matrix QQ^+(omega_b) (spectrum in [0,1]) and one
/// Bose-Einstein occupation for the whole band. The bin width must be small
/// enough that QQ^+ varies slowly across a bin; that is the caller's call.
struct EmissionSpectrum {
    std::vector<double> omega;        ///< ascending bin centers [rad/s]
    double delta_omega = 0.0;         ///< bin width [rad/s]
    std::vector<Eigen::MatrixXcd> qq; ///< QQ^+ per bin
    double occupation = 0.0;          ///< f, frequency-independent over the band

    int bins() const { return static_cast<int>(omega.size()); }
    int modes() const { return qq.empty() ? 0 : static_cast<int>(qq.front().rows()); }
    double bandwidth() const { return delta_omega * bins(); }
    double coherence_time() const { return 2.0 * std::numbers::pi / bandwidth(); }

    /// One QQ^+ across `n_bins` bins centered on omega0 spanning `width`.
    static EmissionSpectrum flat_band(Eigen::MatrixXcd qq_matrix, double f, double omega0,
                                      double width, int n_bins) {
        if (n_bins < 1) throw std::invalid_argument("flat_band: bins >= 1");
        if (!(width > 0.0)) throw std::invalid_argument("flat_band: width > 0");
        EmissionSpectrum s;
        s.delta_omega = width / n_bins;
        s.occupation = f;
        for (int b = 0; b < n_bins; ++b)
            s.omega.push_back(omega0 - width / 2 + (b + 0.5) * s.delta_omega);
        s.qq.assign(n_bins, std::move(qq_matrix));
        s.validate();
        return s;
    }

    void validate() const {
        if (omega.empty() || qq.size() != omega.size())
            throw std::invalid_argument("EmissionSpectrum: bins/matrices mismatch");
        if (!(delta_omega > 0.0) || !(occupation >= 0.0))
            throw std::invalid_argument("EmissionSpectrum: bad bin width or occupation");
        const int n = modes();
        for (const auto& q : qq) {
            if (q.rows() != n || q.cols() != n)
                throw std::invalid_argument("EmissionSpectrum: ragged matrices");
            if ((q - q.adjoint()).norm() > 1e-10 * std::max(1.0, q.norm()))
                throw std::invalid_argument("EmissionSpectrum: QQ^+ not Hermitian");
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q);
            if (es.eigenvalues().minCoeff() < -1e-10 ||
                es.eigenvalues().maxCoeff() > 1.0 + 1e-10)
                throw std::invalid_argument("EmissionSpectrum: QQ^+ spectrum outside [0,1]");
        }
    }
};

/// Direct evaluation of the correlators for a discretized spectrum: the
/// prediction the photodetection estimates converge to.
inline core::CorrelatorResult analytic_correlators(const EmissionSpectrum& s,
                                                   const core::DetectorPair& det) {
    const double f = s.occupation;
    const double w = s.delta_omega / (2.0 * std::numbers::pi);
    double cross = 0.0, wave = 0.0, mean = 0.0;
    for (const auto& q : s.qq) {
        cross += std::norm(q(0, s.modes() > 1 ? 1 : 0));
        wave += std::norm(q(0, 0));
        mean += q(0, 0).real();
    }
    core::CorrelatorResult r;
    r.units = core::UnitsTag::AbsoluteRadPerSec;
    r.mean_current = det.alpha_k * f * mean * w;
    r.cross_correlation =
        s.modes() > 1 ? det.alpha_k * det.alpha_l * f * f * cross * w : 0.0;
    r.auto_correlation = det.alpha_k * det.alpha_k * f * f * wave * w + r.mean_current;
    return r;
}

} // namespace radcorr::photosim
