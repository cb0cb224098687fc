#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace radcorr::util {

/// Shape-preserving piecewise cubic interpolant (Fritsch-Carlson slopes).
/// Monotone data yields a monotone interpolant; evaluation outside the knot
/// range is a hard error, callers handle extrapolation themselves.
class Pchip {
public:
    Pchip() = default;

    Pchip(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw std::invalid_argument("Pchip: need >= 2 matching knots");
        for (std::size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw std::invalid_argument("Pchip: abscissa not strictly increasing");
        m_.resize(n);
        std::vector<double> d(n - 1), h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            d[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        if (n == 2) {
            m_[0] = m_[1] = d[0];
            return;
        }
        m_[0] = edge_slope(h[0], h[1], d[0], d[1]);
        m_[n - 1] = edge_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] == 0.0 || d[i] == 0.0 || (d[i - 1] > 0) != (d[i] > 0)) {
                m_[i] = 0.0;
            } else {
                double w1 = 2 * h[i] + h[i - 1];
                double w2 = h[i] + 2 * h[i - 1];
                m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
    }

    double operator()(double x) const {
        if (x < x_.front() || x > x_.back())
            throw std::out_of_range("Pchip: evaluation outside knot range");
        std::size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            std::size_t mid = (lo + hi) / 2;
            (x_[mid] <= x ? lo : hi) = mid;
        }
        const double h = x_[lo + 1] - x_[lo];
        const double t = (x - x_[lo]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return y_[lo] * (2 * t3 - 3 * t2 + 1) + h * m_[lo] * (t3 - 2 * t2 + t)
             + y_[lo + 1] * (-2 * t3 + 3 * t2) + h * m_[lo + 1] * (t3 - t2);
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

private:
    static double edge_slope(double h0, double h1, double d0, double d1) {
        // one-sided three-point estimate, clipped to preserve shape
        double m = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0) return 0.0;
        if (d0 * d1 < 0.0 && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return m;
    }

    std::vector<double> x_, y_, m_;
};

} // namespace radcorr::util
