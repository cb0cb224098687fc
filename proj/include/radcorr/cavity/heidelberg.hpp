#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "radcorr/rmt/scattering.hpp"
#include "radcorr/util/lapack.hpp"

namespace radcorr::cavity {

enum class Ensemble { GOE, GUE };

/// M x M Gaussian random Hamiltonian with off-diagonal variance 1 (GOE
/// diagonal variance 2), semicircle radius 2 sqrt(M), mid-band level
/// spacing Delta = pi/sqrt(M).
inline Eigen::MatrixXcd gaussian_hamiltonian(int m, Ensemble ensemble,
                                             std::mt19937_64& engine) {
    if (m < 1) throw std::invalid_argument("gaussian_hamiltonian: m >= 1");
    std::normal_distribution<double> normal;
    Eigen::MatrixXcd h(m, m);
    const double inv_sqrt2 = 0.7071067811865476;
    if (ensemble == Ensemble::GOE) {
        for (int j = 0; j < m; ++j) {
            h(j, j) = normal(engine) * std::sqrt(2.0);
            for (int i = 0; i < j; ++i) {
                const double v = normal(engine);
                h(i, j) = v;
                h(j, i) = v;
            }
        }
    } else {
        for (int j = 0; j < m; ++j) {
            h(j, j) = normal(engine);
            for (int i = 0; i < j; ++i) {
                const std::complex<double> v(normal(engine) * inv_sqrt2,
                                             normal(engine) * inv_sqrt2);
                h(i, j) = v;
                h(j, i) = std::conj(v);
            }
        }
    }
    return h;
}

/// One sampled N x N reflection matrix of a chaotic cavity with ideal
/// coupling and uniform absorption:
///
///   r = 1 - 2 i sqrt(M) [ (-H + i sqrt(M) P_N + i eta)^{-1} ]_{N-block},
///   eta = gamma N Delta / (4 pi) = gamma N / (4 sqrt(M)).
///
/// This is the resolvent construction with W_mn = delta_mn sqrt(M Delta)/pi
/// (ideal coupling, mean S = 0 at band center) and an absorption width
/// Gamma_a = gamma N Delta / (2 pi) acting uniformly on all levels.
///
/// The imaginary offset eta must stay well inside the semicircle for the
/// statistics to be those of a uniformly absorbing cavity; keep the band
/// penetration gamma N / (8 M) below ~0.01 for sub-percent moments (the
/// error reaches ~10% of the absorbed flux by gamma N / (8 M) ~ 0.1).
inline Eigen::MatrixXcd sample_cavity_reflection(int n_modes, double gamma, int m_res,
                                                 std::mt19937_64& engine,
                                                 Ensemble ensemble = Ensemble::GOE) {
    if (n_modes < 1) throw std::invalid_argument("sample_cavity_reflection: N >= 1");
    if (!(gamma >= 0.0)) throw std::invalid_argument("sample_cavity_reflection: gamma >= 0");
    if (m_res < 5 * n_modes)
        throw std::invalid_argument("sample_cavity_reflection: M_res >= 5N required");

    const double sqrt_m = std::sqrt(static_cast<double>(m_res));
    const double eta = gamma * n_modes / (4.0 * sqrt_m);
    const std::complex<double> i_unit(0.0, 1.0);

    Eigen::MatrixXcd a = -gaussian_hamiltonian(m_res, ensemble, engine);
    for (int k = 0; k < n_modes; ++k) a(k, k) += i_unit * sqrt_m;
    for (int k = 0; k < m_res; ++k) a(k, k) += i_unit * eta;

    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(m_res, n_modes);
    for (int k = 0; k < n_modes; ++k) rhs(k, k) = 1.0;

    util::lapack_solve_in_place(a, rhs);
    const Eigen::MatrixXcd g = rhs.topRows(n_modes);
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Identity(n_modes, n_modes) - 2.0 * i_unit * sqrt_m * g;

    // passivity: no singular value may exceed 1 beyond numerical noise
    const double smax = r.jacobiSvd().singularValues()(0);
    if (smax > 1.0 + 1e-10)
        throw std::runtime_error("sample_cavity_reflection: singular value " +
                                 std::to_string(smax) + " > 1");
    return r;
}

inline rmt::ScatteringSystem sample_cavity_system(int n_modes, double gamma, int m_res,
                                                  std::mt19937_64& engine,
                                                  Ensemble ensemble = Ensemble::GOE) {
    return rmt::ScatteringSystem::reflection_only(
        sample_cavity_reflection(n_modes, gamma, m_res, engine, ensemble),
        ensemble == Ensemble::GOE);
}

} // namespace radcorr::cavity
