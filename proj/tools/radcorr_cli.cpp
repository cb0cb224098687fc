// radcorr command-line tool: sweeps, figure data, validation reports.
//
// Exit codes: 0 success, 2 validation-check failure, 3 input error,
// 4 numerical error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "radcorr/cavity/correlators.hpp"
#include "radcorr/cavity/table.hpp"
#include "radcorr/core/geometry.hpp"
#include "radcorr/core/line_integral.hpp"
#include "radcorr/photosim/estimator.hpp"
#include "radcorr/rmt/checks.hpp"
#include "radcorr/util/csv.hpp"
#include "radcorr/util/lapack.hpp"
#include "radcorr/util/ranges.hpp"
#include "radcorr/waveguide/correlators.hpp"

using nlohmann::json;
using namespace radcorr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInput = 3;
constexpr int kExitNumerical = 4;

/// Values resolved from an optional JSON config file, overridden by flags.
json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    json j;
    in >> j;
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    return j;
}

template <typename T>
void apply_config(const json& cfg, const std::string& key, T& value) {
    if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

void write_or_print(const std::string& out, const json& j) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out);
        if (!f) throw std::invalid_argument("cannot open for write: " + out);
        f << j.dump(2) << "\n";
    }
}

struct DetectorFlags {
    double alpha_k = 1.0, alpha_l = 1.0, occupation = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--alpha-k", alpha_k, "detector k efficiency [0,1]");
        cmd->add_option("--alpha-l", alpha_l, "detector l efficiency [0,1]");
        cmd->add_option("--occupation", occupation, "Bose-Einstein occupation f at line center");
    }
    void from_config(const json& cfg) {
        apply_config(cfg, "alpha_k", alpha_k);
        apply_config(cfg, "alpha_l", alpha_l);
        apply_config(cfg, "occupation", occupation);
    }
    core::DetectorPair detectors() const { return {alpha_k, alpha_l, occupation}; }
    void record(json& j) const {
        j["alpha_k"] = alpha_k;
        j["alpha_l"] = alpha_l;
        j["occupation"] = occupation;
    }
};

int run_geometry(const json& cfg, double wavelength, double source_diameter,
                 double distance, double area, const std::string& out) {
    auto w = wavelength, a = source_diameter, r = distance, ar = area;
    apply_config(cfg, "wavelength", w);
    apply_config(cfg, "source_diameter", a);
    apply_config(cfg, "distance", r);
    apply_config(cfg, "area", ar);
    const auto g = core::coherence_geometry(w, a, r, ar);
    json j;
    j["config"] = {{"wavelength", w}, {"source_diameter", a}, {"distance", r}, {"area", ar}};
    j["coherence_length"] = g.coherence_length;
    j["mode_count"] = g.mode_count;
    j["crossover_distance"] = g.crossover_distance;
    write_or_print(out, j);
    return kExitOk;
}

int run_waveguide_sweep(const json& resolved, const std::vector<double>& grid,
                        double lr, int n_modes, const DetectorFlags& det, double tol,
                        std::uint64_t seed, const std::string& out, bool figure_columns) {
    util::CsvWriter csv(out, resolved.dump(), seed);
    if (figure_columns)
        csv.header({"s0", "C_kl_reduced", "C_kk_minus_I_reduced", "I_k_reduced"});
    else
        csv.header({"s0", "C_kl_reduced", "C_kk_minus_I_reduced", "I_k_reduced",
                    "cross_ratio", "regime_valid"});
    for (double s0 : grid) {
        const waveguide::WaveguideParams p(n_modes, s0, lr);
        const auto r = waveguide::waveguide_correlators(p, det.detectors(), tol);
        if (figure_columns)
            csv.row({s0, r.fig2.cross_correlation, r.fig2.auto_correlation,
                     r.fig2.mean_current});
        else
            csv.row({s0, r.fig2.cross_correlation, r.fig2.auto_correlation,
                     r.fig2.mean_current, r.cross_ratio, r.regime_valid ? 1.0 : 0.0});
    }
    return kExitOk;
}

int run_cavity_table(const json& resolved, const std::vector<double>& grid,
                     std::uint64_t seed, const cavity::TableOptions& topt,
                     const std::string& out) {
    auto table = cavity::build_moment_table(grid, seed, topt);
    table.write_csv(out, resolved.dump());
    if (!table.diagnostics.mean_monotone)
        std::cerr << "warning: <sigma> not monotone at gamma = "
                  << table.diagnostics.first_violation_gamma << "\n";
    return kExitOk;
}

int run_cavity_sweep(const json& resolved, const std::string& table_path,
                     const std::vector<double>& grid, int n_modes, const DetectorFlags& det,
                     double tol, std::uint64_t seed, const std::string& out,
                     bool figure_columns) {
    const auto table = cavity::MomentTable::read_csv(table_path);
    const cavity::MomentInterpolator interp(table);
    util::CsvWriter csv(out, resolved.dump(), seed);
    if (figure_columns)
        csv.header({"gamma0", "C_kl_reduced", "C_kk_minus_I_reduced", "I_k_reduced",
                    "cross_ratio", "short_ratio"});
    else
        csv.header({"gamma0", "C_kl_reduced", "C_kk_minus_I_reduced", "I_k_reduced",
                    "cross_ratio", "short_ratio", "tail_dominated"});
    for (double g0 : grid) {
        const cavity::CavityParams p(n_modes, g0);
        const auto r = cavity::cavity_correlators(p, det.detectors(), interp, tol);
        std::vector<double> row{g0, r.fig3.cross_correlation, r.fig3.auto_correlation,
                                r.fig3.mean_current, r.cross_ratio_normalized,
                                r.short_ratio_normalized};
        if (!figure_columns) row.push_back(r.tail_dominated ? 1.0 : 0.0);
        csv.row(row);
    }
    return kExitOk;
}

int run_rmt_validate(const json& resolved, const std::vector<double>& n_list_d,
                     double gamma, std::uint64_t samples, std::uint64_t seed,
                     int resonance_factor, const std::string& out) {
    std::vector<int> n_list(n_list_d.begin(), n_list_d.end());
    if (n_list.empty()) throw std::invalid_argument("rmt-validate: empty N list");

    auto sampler_for = [&](int n) -> rmt::QqSampler {
        return [n, gamma, resonance_factor, seed](std::uint64_t i) {
            auto eng = util::make_engine(util::derive_seed(seed, i, n));
            const auto r =
                cavity::sample_cavity_reflection(n, gamma, resonance_factor * n, eng);
            return (Eigen::MatrixXcd::Identity(n, n) - r * r.adjoint()).eval();
        };
    };

    const int n_head = n_list.front();
    std::vector<rmt::CheckReport> reports;
    reports.push_back(rmt::equivalent_channel_check(sampler_for(n_head), n_head, samples));
    if (n_list.size() >= 2)
        reports.push_back(rmt::factorization_check(sampler_for, n_list, samples));
    reports.push_back(rmt::covariance_identity_check(sampler_for(n_list.back()),
                                                     n_list.back(), samples));

    json j;
    j["config"] = resolved;
    j["seed"] = seed;
    j["checks"] = json::array();
    bool ok = true;
    for (const auto& r : reports) {
        j["checks"].push_back(r.to_json());
        ok = ok && r.verdict != "fail";
    }
    j["verdict"] = ok ? "pass" : "fail";
    write_or_print(out, j);
    return ok ? kExitOk : kExitValidation;
}

int run_photosim(const json& resolved, int bins, double window_coherences,
                 std::uint64_t windows, double qq11, double qq22, double qq12,
                 const DetectorFlags& det, std::uint64_t seed, const std::string& out) {
    Eigen::MatrixXcd qq(2, 2);
    qq << qq11, qq12, qq12, qq22;
    const auto spectrum = photosim::EmissionSpectrum::flat_band(
        qq, det.occupation, /*omega0=*/1000.0, /*width=*/64.0, bins);
    const photosim::ThermalFieldSimulator sim(
        spectrum, window_coherences * spectrum.coherence_time());
    photosim::PhotosimRunOptions ropt;
    ropt.n_windows = windows;
    const auto rec = photosim::run_photosim(sim, det.detectors(), seed, ropt);
    const auto est = photosim::estimate_correlators(rec, 400, seed ^ 0xb00f);
    const auto analytic = photosim::analytic_correlators(spectrum, det.detectors());

    util::CsvWriter csv(out + ".counts.csv", resolved.dump(), seed);
    csv.header({"window_index", "n_k", "n_l"});
    for (std::size_t w = 0; w < rec.windows(); ++w)
        csv.raw_row({std::to_string(w), std::to_string(rec.counts[w][0]),
                     std::to_string(rec.counts[w][1])});

    json j;
    j["config"] = resolved;
    j["seed"] = seed;
    j["window_duration"] = rec.window_duration;
    j["empirical"] = {{"C_kl", est.values.cross_correlation},
                      {"C_kk", est.values.auto_correlation},
                      {"I_k", est.values.mean_current},
                      {"se_C_kl", est.se_cross},
                      {"se_C_kk", est.se_auto},
                      {"se_I_k", est.se_mean},
                      {"few_windows", est.few_windows}};
    j["analytic"] = {{"C_kl", analytic.cross_correlation},
                     {"C_kk", analytic.auto_correlation},
                     {"I_k", analytic.mean_current}};
    write_or_print(out + ".summary.json", j);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    util::ensure_blas_core_hint(argv);
    CLI::App app{"thermal-radiation intensity correlations of absorbing random media"};
    app.require_subcommand(1);

    std::string config_path, out;
    std::uint64_t seed = 12345;
    double tolerance = 1e-8;
    app.add_option("--config", config_path, "JSON config file (flags override)");
    app.add_option("--seed", seed, "master RNG seed");
    app.add_option("--tolerance", tolerance, "quadrature relative tolerance");

    // geometry
    auto* geom = app.add_subcommand("geometry", "coherence geometry of a thermal source");
    double wavelength = 500e-9, source_diameter = 1e-3, distance = 1.0, area = 1e-6;
    geom->add_option("--wavelength", wavelength, "vacuum wavelength [m]");
    geom->add_option("--source-diameter", source_diameter, "source diameter [m]");
    geom->add_option("--distance", distance, "detector distance [m]");
    geom->add_option("--area", area, "waveguide cross-section [m^2]");
    geom->add_option("--out", out, "output path (default stdout)");

    // waveguide-sweep / fig2
    std::string s0_spec = "0.01:1000:61:log";
    double lr = 0.01;
    int wg_modes = 50;
    DetectorFlags wg_det;
    auto add_wg = [&](CLI::App* cmd) {
        cmd->add_option("--s0", s0_spec, "L/xi0 grid, list or start:stop:points[:log]");
        cmd->add_option("--lr", lr, "l/xi0 mean free path ratio");
        cmd->add_option("--modes", wg_modes, "mode count N");
        wg_det.attach(cmd);
        cmd->add_option("--out", out, "output CSV path")->required();
    };
    auto* wg_sweep = app.add_subcommand("waveguide-sweep", "disordered-waveguide correlator sweep");
    add_wg(wg_sweep);
    auto* fig2 = app.add_subcommand("fig2", "waveguide figure data (reduced units)");
    add_wg(fig2);

    // cavity-table
    auto* ctab = app.add_subcommand("cavity-table", "Monte Carlo moment table for the absorbing cavity");
    std::string gamma_spec = "1e-3:1e4:29:log";
    std::uint64_t samples = 2000;
    cavity::TableOptions topt;
    ctab->add_option("--grid", gamma_spec, "gamma grid, list or start:stop:points[:log]");
    ctab->add_option("--samples", samples, "samples per run in the weak region");
    ctab->add_option("--mid-samples", topt.mid_samples, "samples per run above the weak region");
    ctab->add_option("--modes", topt.n_modes, "open channel count N");
    ctab->add_option("--resonance-factor", topt.resonance_factor, "M_res / N (>= 5)");
    std::string extrap = "m";
    ctab->add_option("--extrapolation", extrap, "finite-size extrapolation: m, n, or none");
    ctab->add_option("--out", out, "output CSV path")->required();

    // cavity-sweep / fig3
    std::string table_path, gamma0_spec = "0.01:1e4:61:log";
    int cav_modes = 30;
    DetectorFlags cav_det;
    auto add_cav = [&](CLI::App* cmd) {
        cmd->add_option("--table", table_path, "moment table CSV from cavity-table")->required();
        cmd->add_option("--gamma0", gamma0_spec, "line-center absorption rate grid");
        cmd->add_option("--modes", cav_modes, "open channel count N");
        cav_det.attach(cmd);
        cmd->add_option("--out", out, "output CSV path")->required();
    };
    auto* csweep = app.add_subcommand("cavity-sweep", "absorbing-cavity correlator sweep");
    add_cav(csweep);
    auto* fig3 = app.add_subcommand("fig3", "cavity figure data (reduced units and ratios)");
    add_cav(fig3);

    // rmt-validate
    auto* rmtv = app.add_subcommand("rmt-validate", "statistical-approximation checks");
    std::string n_list_spec = "8,16,32";
    double rmt_gamma = 1.0;
    std::uint64_t rmt_samples = 10000;
    int rmt_rf = 10;
    rmtv->add_option("--n-list", n_list_spec, "mode counts, comma separated");
    rmtv->add_option("--gamma", rmt_gamma, "absorption rate");
    rmtv->add_option("--samples", rmt_samples, "samples per mode count");
    rmtv->add_option("--resonance-factor", rmt_rf, "M_res / N");
    rmtv->add_option("--out", out, "output JSON path (default stdout)");

    // photosim
    auto* psim = app.add_subcommand("photosim", "direct photodetection simulation (two modes, flat band)");
    int ps_bins = 64;
    double ps_window = 16.0;
    std::uint64_t ps_windows = 10000;
    double qq11 = 0.6, qq22 = 0.6, qq12 = 0.35;
    DetectorFlags ps_det;
    psim->add_option("--bins", ps_bins, "frequency bins across the band");
    psim->add_option("--window-coherences", ps_window, "window length in coherence times");
    psim->add_option("--windows", ps_windows, "number of counting windows");
    psim->add_option("--qq11", qq11, "emission matrix (1,1)");
    psim->add_option("--qq22", qq22, "emission matrix (2,2)");
    psim->add_option("--qq12", qq12, "emission matrix (1,2), real");
    ps_det.attach(psim);
    psim->add_option("--out", out, "output path prefix")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInput;
    }

    try {
        const json cfg = load_config(config_path);
        apply_config(cfg, "seed", seed);
        apply_config(cfg, "tolerance", tolerance);

        if (geom->parsed())
            return run_geometry(cfg, wavelength, source_diameter, distance, area, out);

        if (wg_sweep->parsed() || fig2->parsed()) {
            apply_config(cfg, "s0", s0_spec);
            apply_config(cfg, "lr", lr);
            apply_config(cfg, "modes", wg_modes);
            wg_det.from_config(cfg);
            json resolved{{"command", fig2->parsed() ? "fig2" : "waveguide-sweep"},
                          {"s0", s0_spec},
                          {"lr", lr},
                          {"modes", wg_modes},
                          {"tolerance", tolerance}};
            wg_det.record(resolved);
            return run_waveguide_sweep(resolved, util::parse_range(s0_spec), lr, wg_modes,
                                       wg_det, tolerance, seed, out, fig2->parsed());
        }

        if (ctab->parsed()) {
            apply_config(cfg, "grid", gamma_spec);
            apply_config(cfg, "samples", samples);
            apply_config(cfg, "modes", topt.n_modes);
            apply_config(cfg, "resonance_factor", topt.resonance_factor);
            apply_config(cfg, "extrapolation", extrap);
            topt.samples = samples;
            if (extrap == "none") topt.extrapolation = cavity::TableExtrapolation::None;
            else if (extrap == "n") topt.extrapolation = cavity::TableExtrapolation::OneOverN;
            else if (extrap == "m") topt.extrapolation = cavity::TableExtrapolation::ResonanceSpace;
            else throw std::invalid_argument("--extrapolation: m, n, or none");
            json resolved{{"command", "cavity-table"}, {"grid", gamma_spec},
                          {"samples", samples}, {"mid_samples", topt.mid_samples},
                          {"modes", topt.n_modes}, {"resonance_factor", topt.resonance_factor},
                          {"extrapolation", extrap}};
            return run_cavity_table(resolved, util::parse_range(gamma_spec), seed, topt, out);
        }

        if (csweep->parsed() || fig3->parsed()) {
            apply_config(cfg, "gamma0", gamma0_spec);
            apply_config(cfg, "modes", cav_modes);
            cav_det.from_config(cfg);
            json resolved{{"command", fig3->parsed() ? "fig3" : "cavity-sweep"},
                          {"table", table_path},
                          {"gamma0", gamma0_spec},
                          {"modes", cav_modes},
                          {"tolerance", tolerance}};
            cav_det.record(resolved);
            return run_cavity_sweep(resolved, table_path, util::parse_range(gamma0_spec),
                                    cav_modes, cav_det, tolerance, seed, out, fig3->parsed());
        }

        if (rmtv->parsed()) {
            apply_config(cfg, "n_list", n_list_spec);
            apply_config(cfg, "gamma", rmt_gamma);
            apply_config(cfg, "samples", rmt_samples);
            apply_config(cfg, "resonance_factor", rmt_rf);
            json resolved{{"command", "rmt-validate"}, {"n_list", n_list_spec},
                          {"gamma", rmt_gamma}, {"samples", rmt_samples},
                          {"resonance_factor", rmt_rf}};
            return run_rmt_validate(resolved, util::parse_range(n_list_spec), rmt_gamma,
                                    rmt_samples, seed, rmt_rf, out);
        }

        if (psim->parsed()) {
            apply_config(cfg, "bins", ps_bins);
            apply_config(cfg, "window_coherences", ps_window);
            apply_config(cfg, "windows", ps_windows);
            apply_config(cfg, "qq11", qq11);
            apply_config(cfg, "qq22", qq22);
            apply_config(cfg, "qq12", qq12);
            ps_det.from_config(cfg);
            json resolved{{"command", "photosim"}, {"bins", ps_bins},
                          {"window_coherences", ps_window}, {"windows", ps_windows},
                          {"qq11", qq11}, {"qq22", qq22}, {"qq12", qq12}};
            ps_det.record(resolved);
            return run_photosim(resolved, ps_bins, ps_window, ps_windows, qq11, qq22, qq12,
                                ps_det, seed, out);
        }
        throw std::invalid_argument("no subcommand");
    } catch (const core::IntegrationError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::out_of_range& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
