#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "radcorr/cavity/table.hpp"
#include "radcorr/core/spectral_moments.hpp"
#include "radcorr/util/pchip.hpp"

namespace radcorr::cavity {

/// Moments as a smooth function of the absorption rate, built from a table:
/// monotone cubics of ln(1-<sigma>) and ln(variance) against ln(gamma)
/// inside the knots (positive by construction, near-linear at both ends in
/// these coordinates), anchored power laws outside:
///   below:  1-<sigma> ~ gamma,   variance ~ gamma^2   (weak absorption)
///   above:  <sigma>  ~ 1/gamma,  variance ~ 1/gamma^2 (strong absorption)
class MomentInterpolator {
public:
    explicit MomentInterpolator(const MomentTable& table) {
        std::vector<double> lg, la, lv;
        for (const auto& r : table.rows) {
            if (r.gamma <= 0.0) continue; // the exact unitary point is the weak limit
            const double a = 1.0 - r.mean_sigma;
            const double v = r.variance;
            if (!(a > 0.0) || !(v > 0.0))
                throw std::domain_error(
                    "MomentInterpolator: nonpositive absorptance or variance at gamma=" +
                    std::to_string(r.gamma));
            lg.push_back(std::log(r.gamma));
            la.push_back(std::log(a));
            lv.push_back(std::log(v));
            se_rel_ = std::max({se_rel_, r.se_mean / a, r.se_variance / v});
        }
        if (lg.size() < 2)
            throw std::invalid_argument("MomentInterpolator: need >= 2 positive-gamma rows");
        gamma_lo_ = std::exp(lg.front());
        gamma_hi_ = std::exp(lg.back());
        a_lo_ = std::exp(la.front());
        a_hi_ = std::exp(la.back());
        v_lo_ = std::exp(lv.front());
        v_hi_ = std::exp(lv.back());
        abs_ = util::Pchip(lg, la);
        var_ = util::Pchip(std::move(lg), std::move(lv));
    }

    double absorptance(double gamma) const {
        if (!(gamma >= 0.0)) throw std::domain_error("absorptance: gamma >= 0");
        if (gamma == 0.0) return 0.0;
        if (gamma < gamma_lo_) return a_lo_ * (gamma / gamma_lo_);
        if (gamma > gamma_hi_) return 1.0 - (1.0 - a_hi_) * (gamma_hi_ / gamma);
        return std::exp(abs_(std::log(gamma)));
    }

    double variance(double gamma) const {
        if (!(gamma >= 0.0)) throw std::domain_error("variance: gamma >= 0");
        if (gamma == 0.0) return 0.0;
        if (gamma < gamma_lo_) {
            const double s = gamma / gamma_lo_;
            return v_lo_ * s * s;
        }
        if (gamma > gamma_hi_) {
            const double s = gamma_hi_ / gamma;
            return v_hi_ * s * s;
        }
        return std::exp(var_(std::log(gamma)));
    }

    core::SpectralMoments moments(double gamma) const {
        return core::SpectralMoments::from_absorptance_variance(absorptance(gamma),
                                                                variance(gamma));
    }

    double gamma_lo() const { return gamma_lo_; }
    double gamma_hi() const { return gamma_hi_; }
    /// worst relative statistical error among the knots, for MC slack
    double se_rel() const { return se_rel_; }

private:
    util::Pchip abs_, var_;
    double gamma_lo_ = 0, gamma_hi_ = 0;
    double a_lo_ = 0, a_hi_ = 0, v_lo_ = 0, v_hi_ = 0;
    double se_rel_ = 0.0;
};

} // namespace radcorr::cavity
