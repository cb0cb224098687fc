#pragma once

#include <complex>
#include <cstdlib>
#include <unistd.h>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace radcorr::util {

/// Distribution OpenBLAS builds can miss newer cores in their dynamic
/// dispatch and fall back to a ~4x slower generic kernel. The dispatch is
/// fixed in the library's load-time constructor, so an in-process setenv
/// comes too late; restart the process once with the core type hinted.
/// Call first thing in main. An explicit environment setting always wins.
inline void ensure_blas_core_hint(char** argv) {
#if defined(__GNUC__) && defined(__x86_64__) && defined(__linux__)
    if (std::getenv("OPENBLAS_CORETYPE") != nullptr) return;
    const char* core = __builtin_cpu_supports("avx512f")  ? "SKYLAKEX"
                       : __builtin_cpu_supports("avx2") ? "HASWELL"
                                                        : nullptr;
    if (core == nullptr) return;
    ::setenv("OPENBLAS_CORETYPE", core, 1);
    ::execv("/proc/self/exe", argv); // no return on success
#else
    (void)argv;
#endif
}

/// Solves A X = B in place (A is factored, B becomes X) with the LAPACK
/// partial-pivot LU. The optimized BLAS backend is several times faster
/// than the header-only path for the resonance-space sizes used here;
/// results agree to solver roundoff.
inline void lapack_solve_in_place(Eigen::MatrixXcd& a, Eigen::MatrixXcd& b) {
    const lapack_int n = static_cast<lapack_int>(a.rows());
    const lapack_int nrhs = static_cast<lapack_int>(b.cols());
    if (a.cols() != n || b.rows() != n)
        throw std::invalid_argument("lapack_solve_in_place: shape mismatch");
    std::vector<lapack_int> ipiv(n);
    const lapack_int info = LAPACKE_zgesv(
        LAPACK_COL_MAJOR, n, nrhs,
        reinterpret_cast<lapack_complex_double*>(a.data()), n, ipiv.data(),
        reinterpret_cast<lapack_complex_double*>(b.data()), n);
    if (info != 0)
        throw std::runtime_error("lapack_solve_in_place: zgesv info=" + std::to_string(info));
}

} // namespace radcorr::util
