#pragma once

#include <cmath>
#include <numbers>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "radcorr/photosim/spectrum.hpp"
#include "radcorr/util/rng.hpp"

namespace radcorr::photosim {

/// Sampled thermal field time series for one window; a(k, j) is mode k at
/// time j*dt. Counting skips `edge_discard` samples at both ends (one
/// coherence time against synthesis edge effects).
struct FieldRecord {
    Eigen::MatrixXcd a;
    double dt = 0.0;
    int edge_discard = 0;

    int count_begin() const { return edge_discard; }
    int count_end() const { return static_cast<int>(a.cols()) - edge_discard; }
    double count_duration() const { return (count_end() - count_begin()) * dt; }
};

/// Gaussian thermal field synthesis: independent circular complex Gaussian
/// bin amplitudes z_b with covariance f QQ^+(omega_b), superposed as
///   a_k(t) = sum_b sqrt(delta_omega/2pi) z_{k,b} exp(-i omega_b t).
///
/// Every window draws fresh amplitudes, which makes windows strictly
/// independent and the process ensemble-stationary. The field is sampled at
/// 8 points per shortest beat period 2pi/bandwidth.
class ThermalFieldSimulator {
public:
    ThermalFieldSimulator(EmissionSpectrum spectrum, double count_duration,
                          bool discard_edges = true)
        : spectrum_(std::move(spectrum)) {
        spectrum_.validate();
        if (!(count_duration > 0.0))
            throw std::invalid_argument("ThermalFieldSimulator: duration > 0");
        const double tau_c = spectrum_.coherence_time();
        if (count_duration < 2.0 * tau_c)
            throw std::invalid_argument(
                "ThermalFieldSimulator: window must span multiple coherence times");
        dt_ = 2.0 * std::numbers::pi / (8.0 * spectrum_.bandwidth());
        edge_ = discard_edges ? static_cast<int>(std::ceil(tau_c / dt_)) : 0;
        n_samples_ = static_cast<int>(std::ceil(count_duration / dt_)) + 2 * edge_;

        // amplitude factors L_b with L L^+ = f QQ^+ (eigen route: robust to
        // semidefinite matrices where Cholesky fails)
        const int m = spectrum_.modes();
        factors_.reserve(spectrum_.bins());
        for (const auto& q : spectrum_.qq) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q * spectrum_.occupation);
            Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
            factors_.push_back(es.eigenvectors() * ev.cwiseSqrt().asDiagonal());
        }

        // phase table P(b, j) = exp(-i omega_b t_j), shared by all windows
        phases_.resize(spectrum_.bins(), n_samples_);
        for (int b = 0; b < spectrum_.bins(); ++b) {
            const std::complex<double> step =
                std::exp(std::complex<double>(0.0, -spectrum_.omega[b] * dt_));
            std::complex<double> p(1.0, 0.0);
            for (int j = 0; j < n_samples_; ++j) {
                phases_(b, j) = p;
                p *= step;
            }
        }
        (void)m;
    }

    const EmissionSpectrum& spectrum() const { return spectrum_; }
    double dt() const { return dt_; }
    int samples_per_window() const { return n_samples_; }
    double count_duration() const { return (n_samples_ - 2 * edge_) * dt_; }

    FieldRecord synthesize(std::uint64_t seed) const {
        auto engine = util::make_engine(seed);
        std::normal_distribution<double> normal;
        const int m = spectrum_.modes();
        const int nb = spectrum_.bins();
        const double amp = std::sqrt(spectrum_.delta_omega / (2.0 * std::numbers::pi));

        Eigen::MatrixXcd z(m, nb); // correlated bin amplitudes
        Eigen::VectorXcd xi(m);
        const double inv_sqrt2 = 0.7071067811865476;
        for (int b = 0; b < nb; ++b) {
            for (int k = 0; k < m; ++k)
                xi(k) = std::complex<double>(normal(engine) * inv_sqrt2,
                                             normal(engine) * inv_sqrt2);
            z.col(b) = factors_[b] * xi;
        }
        FieldRecord rec;
        rec.dt = dt_;
        rec.edge_discard = edge_;
        rec.a.noalias() = amp * (z * phases_);
        return rec;
    }

private:
    EmissionSpectrum spectrum_;
    double dt_ = 0.0;
    int edge_ = 0;
    int n_samples_ = 0;
    std::vector<Eigen::MatrixXcd> factors_;
    Eigen::MatrixXcd phases_;
};

/// One-shot synthesis covering `duration`; no edge discard.
inline FieldRecord synthesize_fields(const EmissionSpectrum& spectrum, double duration,
                                     std::uint64_t seed) {
    return ThermalFieldSimulator(spectrum, duration, false).synthesize(seed);
}

} // namespace radcorr::photosim
