// Acceptance suite: runs every published-limit criterion at its stated
// tolerance and prints one pass/fail line per criterion (sub-checks
// indented). Exits nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "radcorr/cavity/correlators.hpp"
#include "radcorr/cavity/table.hpp"
#include "radcorr/photosim/estimator.hpp"
#include "radcorr/rmt/checks.hpp"
#include "radcorr/util/stats.hpp"
#include "radcorr/waveguide/correlators.hpp"

using namespace radcorr;

namespace {

constexpr std::uint64_t kSeed = 20260810;

struct Criterion {
    int index;
    std::string title;
    bool pass = true;
    std::vector<std::string> notes;

    void sub(bool ok, const std::string& label, double measured, double target,
             const std::string& tol_text) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "  %-4s %s: measured %.6g, target %.6g (%s)",
                      ok ? "ok" : "FAIL", label.c_str(), measured, target, tol_text.c_str());
        notes.push_back(buf);
        pass = pass && ok;
    }
    void sub_flag(bool ok, const std::string& text) {
        notes.push_back(std::string("  ") + (ok ? "ok   " : "FAIL ") + text);
        pass = pass && ok;
    }
    void note(const std::string& text) { notes.push_back("       " + text); }
};

std::vector<Criterion> g_criteria;

Criterion& criterion(int idx, const std::string& title) {
    g_criteria.push_back({idx, title});
    return g_criteria.back();
}

bool within(double measured, double target, double rel_tol) {
    return std::abs(measured - target) <= rel_tol * std::abs(target);
}

void status(const std::string& text) {
    std::fprintf(stderr, "... %s\n", text.c_str());
    std::fflush(stderr);
}

// ---------------------------------------------------------------------
// waveguide criteria

void run_waveguide_criteria() {
    const core::DetectorPair det(1.0, 1.0, 1.0);
    const double lr = 0.01;
    const int n_modes = 50;

    {
        auto& c = criterion(1, "thin-sample waveguide coefficients at s0 = 1e-2");
        const double s0 = 1e-2;
        const auto r = waveguide::waveguide_correlators({n_modes, s0, lr}, det);
        const auto thin = waveguide::thin_sample_asymptotics({n_modes, s0, lr});
        c.sub(within(r.fig2.cross_correlation, thin.cross_correlation, 0.01),
              "C_kl vs s0^3/45", r.fig2.cross_correlation, thin.cross_correlation, "1%");
        const bool excess_ok =
            within(r.fig2.auto_correlation, thin.auto_correlation, 0.01);
        c.sub(excess_ok, "C_kk - I_k vs (4/(9 pi)) s0^2", r.fig2.auto_correlation,
              thin.auto_correlation, "1%");
        if (!excess_ok) {
            c.note("the closed-form excess coefficient 4/(9 pi) = 0.14147 is not");
            c.note("consistent with the defining moment integrals, which give 1/9 =");
            c.note("0.11111 in the thin limit (the same integrals reproduce 1/45, 1/3");
            c.note("and the thick-sample saturation 8/9); measured/(s0^2/9) = " +
                   std::to_string(r.fig2.auto_correlation / (s0 * s0 / 9.0)));
        }
        c.sub(within(r.fig2.mean_current, thin.mean_current, 0.005), "I_k vs s0/3",
              r.fig2.mean_current, thin.mean_current, "0.5%");
    }
    {
        auto& c = criterion(2, "short-range saturation at s0 = 1e3");
        const auto r = waveguide::waveguide_correlators({n_modes, 1e3, lr}, det);
        c.sub(within(r.fig2.auto_correlation, 8.0 / 9.0, 0.01), "C_kk - I_k vs 8/9",
              r.fig2.auto_correlation, 8.0 / 9.0, "1%");
    }
    {
        auto& c = criterion(3, "thick-sample cross ratio -> f sqrt(ak al)/(2N)");
        const double limit = waveguide::thick_sample_limits(det, n_modes).cross_ratio_limit;
        std::vector<double> ratios;
        for (double s0 : {1e2, 1e3, 1e4})
            ratios.push_back(
                waveguide::waveguide_correlators({n_modes, s0, lr}, det).cross_ratio);
        c.sub(within(ratios[2], limit, 0.10), "ratio at s0 = 1e4", ratios[2], limit, "10%");
        const bool monotone = ratios[0] < ratios[1] && ratios[1] < ratios[2] &&
                              ratios[2] < limit;
        c.sub_flag(monotone, "monotone approach from below over s0 = {1e2, 1e3, 1e4}: " +
                                 std::to_string(ratios[0]) + " < " + std::to_string(ratios[1]) +
                                 " < " + std::to_string(ratios[2]) + " < limit");
    }
    {
        auto& c = criterion(4, "logarithmic divergence of C_kl and I_k");
        std::vector<double> lns, cross, mean;
        for (int i = 0; i < 9; ++i) {
            const double s0 = std::pow(10.0, 2.0 + 0.25 * i);
            const auto r = waveguide::waveguide_correlators({n_modes, s0, lr}, det);
            lns.push_back(std::log(s0));
            cross.push_back(r.fig2.cross_correlation);
            mean.push_back(r.fig2.mean_current);
        }
        const auto fc = util::fit_line(lns, cross);
        const auto fm = util::fit_line(lns, mean);
        c.sub(fc.r_squared > 0.999, "C_kl linear in ln s0, R^2", fc.r_squared, 1.0,
              "> 0.999");
        c.sub(fm.r_squared > 0.999, "I_k linear in ln s0, R^2", fm.r_squared, 1.0,
              "> 0.999");
    }
}

// ---------------------------------------------------------------------
// cavity criteria (5-7) share one default moment table

void run_cavity_criteria() {
    status("building the cavity moment table (dominates the runtime)");
    const auto grid = cavity::log_spaced_grid(1e-3, 1e4, 4);
    cavity::TableOptions topt; // production defaults
    const auto table = cavity::build_moment_table(grid, kSeed, topt);
    const cavity::MomentInterpolator interp(table);
    const core::DetectorPair det(1.0, 1.0, 1.0);
    const int n_modes = 30;

    std::filesystem::create_directories("acceptance_out");
    table.write_csv("acceptance_out/moment_table.csv", "{\"source\":\"acceptance\"}");

    {
        auto& c = criterion(5, "cavity weak-absorption coefficients at gamma0 = 1e-2");
        const auto r = cavity::cavity_correlators({n_modes, 1e-2}, det, interp);
        const double g0 = 1e-2;
        c.sub(within(r.fig3.cross_correlation, g0 * g0 / 4.0, 0.10), "C_kl vs gamma0^2/4",
              r.fig3.cross_correlation, g0 * g0 / 4.0, "10%");
        c.sub(within(r.fig3.auto_correlation, g0 * g0 / 4.0, 0.10),
              "C_kk - I_k vs gamma0^2/4", r.fig3.auto_correlation, g0 * g0 / 4.0, "10%");
        c.sub(within(r.fig3.mean_current, g0 / 2.0, 0.05), "I_k vs gamma0/2",
              r.fig3.mean_current, g0 / 2.0, "5%");
    }
    {
        auto& c = criterion(6, "cavity strong-absorption ratios at gamma0 = 1e3");
        const auto r = cavity::cavity_correlators({n_modes, 1e3}, det, interp);
        c.sub(within(r.cross_ratio_normalized, cavity::kStrongCrossRatio, 0.15),
              "C_kl/sqrt(I_k I_l) x N/f", r.cross_ratio_normalized,
              cavity::kStrongCrossRatio, "15%");
        c.sub(within(r.short_ratio_normalized, 0.5, 0.10), "(C_kk - I_k)/I_k / f",
              r.short_ratio_normalized, 0.5, "10%");
        if (!c.pass)
            c.note("converged value outside the band: reporting the measured ratio, "
                   "no retuning");
    }
    {
        auto& c = criterion(7, "sqrt(gamma0) divergence over gamma0 in [1e2, 1e4]");
        std::vector<double> lng, lc, le, lm;
        for (int i = 0; i < 7; ++i) {
            const double g0 = std::pow(10.0, 2.0 + i / 3.0);
            const auto r = cavity::cavity_correlators({n_modes, g0}, det, interp);
            lng.push_back(std::log(g0));
            lc.push_back(std::log(r.fig3.cross_correlation));
            le.push_back(std::log(r.fig3.auto_correlation));
            lm.push_back(std::log(r.fig3.mean_current));
        }
        const double sc = util::fit_line(lng, lc).slope;
        const double se = util::fit_line(lng, le).slope;
        const double sm = util::fit_line(lng, lm).slope;
        c.sub(std::abs(sc - 0.5) <= 0.05, "C_kl log-log slope", sc, 0.5, "+-0.05");
        c.sub(std::abs(se - 0.5) <= 0.05, "C_kk - I_k log-log slope", se, 0.5, "+-0.05");
        c.sub(std::abs(sm - 0.5) <= 0.05, "I_k log-log slope", sm, 0.5, "+-0.05");
    }

    // figure data as reproducible artifacts validated by criteria 5-7
    status("writing figure data to acceptance_out/");
    {
        util::CsvWriter csv("acceptance_out/fig3.csv", "{\"source\":\"acceptance\"}", kSeed);
        csv.header({"gamma0", "C_kl_reduced", "C_kk_minus_I_reduced", "I_k_reduced",
                    "cross_ratio", "short_ratio"});
        for (double g0 : cavity::log_spaced_grid(1e-2, 1e4, 8)) {
            const auto r = cavity::cavity_correlators({n_modes, g0}, det, interp);
            csv.row({g0, r.fig3.cross_correlation, r.fig3.auto_correlation,
                     r.fig3.mean_current, r.cross_ratio_normalized,
                     r.short_ratio_normalized});
        }
    }
    {
        util::CsvWriter csv("acceptance_out/fig2.csv", "{\"source\":\"acceptance\"}", kSeed);
        csv.header({"s0", "C_kl_reduced", "C_kk_minus_I_reduced", "I_k_reduced"});
        for (double s0 : cavity::log_spaced_grid(1e-2, 1e3, 8)) {
            const auto r = waveguide::waveguide_correlators({50, s0, 0.01},
                                                            core::DetectorPair(1, 1, 1));
            csv.row({s0, r.fig2.cross_correlation, r.fig2.auto_correlation,
                     r.fig2.mean_current});
        }
    }
}

// ---------------------------------------------------------------------
// criterion 8: statistical approximations

rmt::QqSampler cavity_sampler(int n, double gamma, std::uint64_t salt) {
    return [n, gamma, salt](std::uint64_t i) {
        auto eng = util::make_engine(util::derive_seed(kSeed + salt, i, n));
        const auto r = cavity::sample_cavity_reflection(n, gamma, 10 * n, eng);
        return (Eigen::MatrixXcd::Identity(n, n) - r * r.adjoint()).eval();
    };
}

void run_rmt_criterion() {
    status("sampling statistical-approximation checks");
    auto& c = criterion(8, "statistical approximations of the mode averages");
    const std::uint64_t samples = 10000;

    const auto eq = rmt::equivalent_channel_check(cavity_sampler(8, 1.0, 1), 8, samples);
    c.sub(eq.verdict == "pass", "trace identity residual (sigmas, N=8)",
          eq.details.at("residual_sigmas"), 0.0, "<= 3 sigma");
    c.sub_flag(eq.details.at("worst_pair_z") <= 5.0,
               "off-diagonal moments channel-independent, worst pair z = " +
                   std::to_string(eq.details.at("worst_pair_z")));

    const auto fac = rmt::factorization_check(
        [](int n) { return cavity_sampler(n, 1.0, 2); }, {8, 16, 32}, samples);
    c.sub(fac.verdict == "pass", "factorization deficit exponent p", fac.estimate, 1.0,
          "+-0.3");

    for (int n : {8, 16, 32}) {
        const auto cov = rmt::covariance_identity_check(cavity_sampler(n, 1.0, 3), n, samples);
        c.sub(cov.verdict == "pass",
              "covariance identity deviation (N=" + std::to_string(n) + ")", cov.estimate,
              0.0, "3 sigma + 0.5/N^2");
    }
}

// ---------------------------------------------------------------------
// criterion 9: photodetection vs the spectral formula

void run_photosim_criterion() {
    status("running the photodetection simulation (1e4 windows)");
    auto& c = criterion(9, "photodetection estimates match the spectral formula");
    Eigen::MatrixXcd qq(2, 2);
    qq << 0.52, 0.45, 0.45, 0.52;
    const auto spec = photosim::EmissionSpectrum::flat_band(qq, 1.0, 1000.0, 64.0, 2048);
    const core::DetectorPair det(0.9, 0.7, 1.0);
    const photosim::ThermalFieldSimulator sim(spec, 32.0 * spec.coherence_time());
    photosim::PhotosimRunOptions opt;
    opt.n_windows = 10000;

    const auto rec = photosim::run_photosim(sim, det, kSeed + 9, opt);
    const auto est = photosim::estimate_correlators(rec, 400, kSeed + 10);
    const auto ref = photosim::analytic_correlators(spec, det);
    c.sub(within(est.values.cross_correlation, ref.cross_correlation, 0.05),
          "C_kl empirical vs analytic", est.values.cross_correlation,
          ref.cross_correlation, "5%");
    c.sub(within(est.values.auto_correlation, ref.auto_correlation, 0.05),
          "C_kk empirical vs analytic", est.values.auto_correlation, ref.auto_correlation,
          "5%");
    c.sub(within(est.values.mean_current, ref.mean_current, 0.05),
          "I_k empirical vs analytic", est.values.mean_current, ref.mean_current, "5%");

    opt.frozen_fields = true;
    const auto frozen = photosim::run_photosim(sim, det, kSeed + 11, opt);
    const auto fest = photosim::estimate_correlators(frozen, 400, kSeed + 12);
    c.sub_flag(std::abs(fest.values.cross_correlation) <= 3.0 * fest.se_cross,
               "frozen fields: C_kl consistent with zero (" +
                   std::to_string(fest.values.cross_correlation) + " +- " +
                   std::to_string(fest.se_cross) + ")");
    const double gap = fest.values.auto_correlation - fest.values.mean_current;
    c.sub_flag(std::abs(gap) <= 3.0 * std::hypot(fest.se_auto, fest.se_mean),
               "frozen fields: C_kk consistent with I_k (gap " + std::to_string(gap) + ")");
}

// ---------------------------------------------------------------------
// criterion 10: construction invariants

void run_invariant_criterion() {
    status("sampling 1e3 systems for the invariant sweep");
    auto& c = criterion(10, "sampled-system invariants (1e3 systems)");
    int unitarity_viol = 0, reciprocity_viol = 0, subunit_viol = 0, psd_viol = 0,
        order_viol = 0;
    const double gammas[4] = {0.0, 0.1, 1.0, 10.0};
    for (int i = 0; i < 1000; ++i) {
        const int n = 4 + 4 * (i % 4);
        const double gamma = gammas[(i / 4) % 4];
        auto eng = util::make_engine(util::derive_seed(kSeed + 13, i));
        const auto r = cavity::sample_cavity_reflection(n, gamma, 10 * n, eng);
        if (r.jacobiSvd().singularValues()(0) > 1.0 + 1e-10) ++subunit_viol;
        if ((r - r.transpose()).cwiseAbs().maxCoeff() > 1e-10) ++reciprocity_viol;
        if (gamma == 0.0 &&
            (r * r.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() >
                1e-10)
            ++unitarity_viol;
        const auto sys = rmt::ScatteringSystem::reflection_only(r, true);
        const Eigen::MatrixXcd q = rmt::qq_dagger(sys);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q);
        if (es.eigenvalues().minCoeff() < -1e-10 ||
            es.eigenvalues().maxCoeff() > 1.0 + 1e-10)
            ++psd_viol;
        const Eigen::MatrixXcd p = r * r.adjoint();
        const double m1 = p.real().trace() / n;
        const double m2 = p.squaredNorm() / n;
        if (m2 > m1 + 1e-12) ++order_viol;
    }
    c.sub_flag(subunit_viol == 0, "sub-unitarity violations: " + std::to_string(subunit_viol));
    c.sub_flag(reciprocity_viol == 0,
               "reciprocity violations: " + std::to_string(reciprocity_viol));
    c.sub_flag(unitarity_viol == 0,
               "gamma=0 unitarity violations: " + std::to_string(unitarity_viol));
    c.sub_flag(psd_viol == 0, "QQ^+ spectrum violations: " + std::to_string(psd_viol));
    c.sub_flag(order_viol == 0,
               "moment ordering violations: " + std::to_string(order_viol));
}

} // namespace

int main(int, char** argv) {
    util::ensure_blas_core_hint(argv);
    run_waveguide_criteria();
    run_cavity_criteria();
    run_rmt_criterion();
    run_photosim_criterion();
    run_invariant_criterion();

    int failed = 0;
    for (const auto& c : g_criteria) {
        std::printf("[%s] criterion %d: %s\n", c.pass ? "PASS" : "FAIL", c.index,
                    c.title.c_str());
        for (const auto& n : c.notes) std::printf("%s\n", n.c_str());
        if (!c.pass) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(g_criteria.size()) - failed,
                g_criteria.size());
    return failed == 0 ? 0 : 1;
}
