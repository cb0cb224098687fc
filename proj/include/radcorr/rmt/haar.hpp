#pragma once

#include <complex>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace radcorr::rmt {

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// R-diagonal phases absorbed into Q (plain QR alone is not Haar).
inline Eigen::MatrixXcd haar_unitary(int n, std::mt19937_64& engine) {
    if (n < 1) throw std::invalid_argument("haar_unitary: n >= 1");
    std::normal_distribution<double> normal;
    Eigen::MatrixXcd z(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            z(i, j) = std::complex<double>(normal(engine), normal(engine));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const std::complex<double> d = r(j, j);
        q.col(j) *= d / std::abs(d);
    }
    return q;
}

} // namespace radcorr::rmt
