#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "radcorr/core/lorentzian.hpp"

namespace radcorr::core {

struct IntegrationResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t panels = 0;
};

/// Thrown when the adaptive scheme cannot reach the requested tolerance;
/// carries the best estimate so the caller can inspect the tail.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double value, double error)
        : std::runtime_error(what + " (value=" + std::to_string(value) +
                             ", error estimate=" + std::to_string(error) + ")"),
          value_(value), error_(error) {}
    double value() const { return value_; }
    double error_estimate() const { return error_; }

private:
    double value_, error_;
};

namespace detail {

// Gauss-Kronrod 7-15 pair (QUADPACK dqk15 abscissae/weights).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kG7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double value;
    double error;
};

/// G7/K15 on [a,b] for the already-transformed integrand.
template <class F>
Panel gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = h * kGk15Nodes[i];
        const double v = (i == 7) ? f(c) : f(c - dx) + f(c + dx);
        resk += kGk15Weights[i] * v;
        if (i % 2 == 1) resg += kG7Weights[i / 2] * v;
        else if (i == 7) resg += kG7Weights[3] * v;
    }
    return {resk * h, std::abs(resk - resg) * h};
}

} // namespace detail

/// Adaptive integral of g over the whole real line via x = tan(theta),
/// theta in (-pi/2, pi/2). The transform handles slowly decaying tails
/// uniformly; g must decay faster than 1/|x| for convergence, callers cut
/// log-divergent tails through their parametrization.
template <class F>
IntegrationResult integrate_real_line(F&& g, double rel_tol = 1e-8, double abs_tol = 0.0) {
    if (!(rel_tol > 0.0) && !(abs_tol > 0.0))
        throw std::invalid_argument("integrate_real_line: need a positive tolerance");

    auto integrand = [&g](double theta) {
        const double x = std::tan(theta);
        return g(x) * (1.0 + x * x); // d x / d theta = sec^2 = 1 + x^2
    };

    constexpr double kHalfPi = 1.5707963267948966;
    constexpr int kInitial = 8;
    constexpr int kMaxDepth = 48;
    constexpr std::size_t kMaxPanels = 200000;

    // first pass for the magnitude scale
    double rough = 0.0;
    for (int i = 0; i < kInitial; ++i) {
        const double a = -kHalfPi + 2.0 * kHalfPi * i / kInitial;
        const double b = -kHalfPi + 2.0 * kHalfPi * (i + 1) / kInitial;
        rough += detail::gk15(integrand, a, b).value;
    }
    const double target = std::max(abs_tol, rel_tol * std::abs(rough));

    double total = 0.0, err_total = 0.0;
    std::size_t panels = 0;
    bool depth_exhausted = false;

    // depth-first, left to right: summation order is deterministic
    struct Seg { double a, b; int depth; };
    std::vector<Seg> stack;
    for (int i = kInitial; i-- > 0;) {
        stack.push_back({-kHalfPi + 2.0 * kHalfPi * i / kInitial,
                         -kHalfPi + 2.0 * kHalfPi * (i + 1) / kInitial, 0});
    }
    while (!stack.empty()) {
        Seg seg = stack.back();
        stack.pop_back();
        auto p = detail::gk15(integrand, seg.a, seg.b);
        ++panels;
        if (panels > kMaxPanels)
            throw IntegrationError("integrate_real_line: panel budget exhausted",
                                   total + p.value, err_total + p.error);
        const double budget = target * (seg.b - seg.a) / (2.0 * kHalfPi);
        if (p.error <= budget || seg.depth >= kMaxDepth) {
            if (seg.depth >= kMaxDepth && p.error > budget) depth_exhausted = true;
            total += p.value;
            err_total += p.error;
            continue;
        }
        const double mid = 0.5 * (seg.a + seg.b);
        stack.push_back({mid, seg.b, seg.depth + 1});
        stack.push_back({seg.a, mid, seg.depth + 1});
    }

    const double accept = std::max(abs_tol, rel_tol * std::abs(total));
    if (depth_exhausted && err_total > std::max(accept, 1e-300))
        throw IntegrationError("integrate_real_line: non-convergent tail", total, err_total);
    return {total, err_total, panels};
}

/// (Omega_c / 2 pi) * integral of g(x) dx over the real line; the returned
/// value carries one factor of the line width, everything else is
/// dimensionless. The lower frequency limit is extended to -infinity, valid
/// for narrow lines (Omega_c << omega0).
template <class F>
double line_integral(F&& g, const LorentzianLine& line, double rel_tol = 1e-8) {
    constexpr double kTwoPi = 6.283185307179586;
    auto res = integrate_real_line(g, rel_tol);
    return line.half_width / kTwoPi * res.value;
}

} // namespace radcorr::core
