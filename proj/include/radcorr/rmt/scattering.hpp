#pragma once

#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace radcorr::rmt {

enum class SystemKind { TwoSided, ReflectionOnly };

/// A sampled scattering system: the full two-sided matrix has blocks
///   S = [ r  t ; t' r' ]
/// of dimension N x N; the reflection-only variant (cavity) has just r.
/// QQ^+ = 1 - r r^+ - t t^+ (or 1 - r r^+) encodes what the medium absorbs
/// and therefore what it thermally emits.
struct ScatteringSystem {
    Eigen::MatrixXcd r, t, t_prime, r_prime;
    SystemKind kind = SystemKind::ReflectionOnly;
    bool reciprocal = false; ///< declared time-reversal symmetry: r = r^T, t = t'^T

    int modes() const { return static_cast<int>(r.rows()); }

    static ScatteringSystem reflection_only(Eigen::MatrixXcd refl, bool reciprocal_flag) {
        ScatteringSystem s;
        s.r = std::move(refl);
        s.kind = SystemKind::ReflectionOnly;
        s.reciprocal = reciprocal_flag;
        return s;
    }
};

struct QqOptions {
    double hard_tol = 1e-8; ///< beyond [-hard_tol, 1 + hard_tol] is a construction bug
};

/// Hermitian emission matrix QQ^+ with spectrum validated to lie in [0,1].
/// Small negative eigenvalues (numerical noise) are clamped to zero;
/// violations beyond hard_tol throw.
inline Eigen::MatrixXcd qq_dagger(const ScatteringSystem& sys, const QqOptions& opt = {}) {
    const int n = sys.modes();
    if (n < 1) throw std::invalid_argument("qq_dagger: empty system");
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(n, n) - sys.r * sys.r.adjoint();
    if (sys.kind == SystemKind::TwoSided) {
        if (sys.t.rows() != n || sys.t.cols() != n)
            throw std::invalid_argument("qq_dagger: missing transmission block");
        q -= sys.t * sys.t.adjoint();
    }
    q = 0.5 * (q + q.adjoint().eval()); // enforce hermiticity against rounding

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("qq_dagger: eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues();
    bool clamp = false;
    for (int i = 0; i < n; ++i) {
        if (ev[i] < -opt.hard_tol || ev[i] > 1.0 + opt.hard_tol)
            throw std::domain_error("qq_dagger: sub-unitarity violated, eigenvalue " +
                                    std::to_string(ev[i]));
        if (ev[i] < 0.0) {
            ev[i] = 0.0;
            clamp = true;
        }
    }
    if (!clamp) return q;
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace radcorr::rmt
