#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "radcorr/util/csv.hpp"
#include "radcorr/util/ranges.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using Catch::Matchers::WithinRel;

namespace {

const std::string kCli = RADCORR_CLI_PATH;

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const auto out_file = fs::temp_directory_path() / "radcorr_cli_stdout.txt";
    const std::string cmd = kCli + " " + args + " > " + out_file.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WEXITSTATUS(status), ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / name; }

} // namespace

TEST_CASE("range specifications") {
    using radcorr::util::parse_range;
    const auto list = parse_range("0.1,0.5,2");
    REQUIRE(list.size() == 3);
    CHECK(list[1] == 0.5);
    const auto lin = parse_range("0:1:5");
    REQUIRE(lin.size() == 5);
    CHECK_THAT(lin[1], WithinRel(0.25, 1e-12));
    const auto lg = parse_range("1e-2:1e2:5:log");
    REQUIRE(lg.size() == 5);
    CHECK_THAT(lg[1] / lg[0], WithinRel(10.0, 1e-9));
    CHECK(parse_range("7")[0] == 7.0);
    CHECK_THROWS(parse_range("1:2"));
    CHECK(parse_range("").empty());
    CHECK_THROWS(parse_range("1:2:3:cubic"));
    CHECK_THROWS(parse_range("-1:1:3:log"));
}

TEST_CASE("cli geometry prints a json summary") {
    const auto r = run_cli("geometry --wavelength 500e-9 --source-diameter 1e-3 "
                           "--distance 1.0 --area 1e-6");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK_THAT(j.at("coherence_length").get<double>(), WithinRel(5e-4, 1e-9));
    CHECK_THAT(j.at("crossover_distance").get<double>(), WithinRel(0.07937005259841, 1e-9));
    CHECK(j.at("mode_count").get<long>() == 25132741);
}

TEST_CASE("cli fig2 emits the figure schema and is reproducible") {
    const auto out1 = tmp("fig2_a.csv"), out2 = tmp("fig2_b.csv");
    const std::string args = "fig2 --s0 0.01,1,100 --seed 99 --out ";
    REQUIRE(run_cli(args + out1.string()).exit_code == 0);
    REQUIRE(run_cli(args + out2.string()).exit_code == 0);
    CHECK(slurp(out1) == slurp(out2)); // bit-identical rerun

    const auto text = slurp(out1);
    CHECK(text.rfind("# config: ", 0) == 0);
    CHECK(text.find("\n# seed: 99\n") != std::string::npos);
    const auto table = radcorr::util::read_csv_file(out1.string());
    REQUIRE(table.columns ==
            std::vector<std::string>{"s0", "C_kl_reduced", "C_kk_minus_I_reduced",
                                     "I_k_reduced"});
    REQUIRE(table.rows.size() == 3);
    CHECK_THAT(table.rows[1][table.column_index("C_kl_reduced")],
               WithinRel(0.018399841927667, 1e-6));
    CHECK_THAT(table.rows[2][table.column_index("I_k_reduced")],
               WithinRel(2.30196108995, 1e-6));
    fs::remove(out1);
    fs::remove(out2);
}

TEST_CASE("cli fig2 with an empty grid writes a header-only csv") {
    const auto out = tmp("fig2_empty.csv");
    REQUIRE(run_cli("fig2 --s0 \"\" --out " + out.string()).exit_code == 0);
    const auto table = radcorr::util::read_csv_file(out.string());
    REQUIRE(table.columns.size() == 4);
    CHECK(table.rows.empty());
    CHECK(radcorr::util::parse_range("").empty());
    fs::remove(out);
}

TEST_CASE("cli cavity table and sweep round trip") {
    const auto tbl = tmp("cav_table.csv");
    const auto fig = tmp("fig3.csv");
    REQUIRE(run_cli("cavity-table --grid 0.5,1,2 --samples 150 --mid-samples 150 "
                    "--modes 12 --extrapolation none --seed 7 --out " + tbl.string())
                .exit_code == 0);
    const auto table_text = slurp(tbl);
    CHECK(table_text.find("gamma,mean_sigma,mean_sigma_sq,se_mean,se_sq,N,samples") !=
          std::string::npos);

    REQUIRE(run_cli("fig3 --table " + tbl.string() +
                    " --gamma0 0.3,1 --modes 12 --seed 8 --out " + fig.string())
                .exit_code == 0);
    const auto sweep = radcorr::util::read_csv_file(fig.string());
    REQUIRE(sweep.columns ==
            std::vector<std::string>{"gamma0", "C_kl_reduced", "C_kk_minus_I_reduced",
                                     "I_k_reduced", "cross_ratio", "short_ratio"});
    REQUIRE(sweep.rows.size() == 2);
    CHECK(sweep.rows[0][sweep.column_index("I_k_reduced")] > 0.0);

    // missing table file is an input error
    CHECK(run_cli("fig3 --table /nonexistent.csv --gamma0 1 --out " + fig.string())
              .exit_code == 3);
    fs::remove(tbl);
    fs::remove(fig);
}

TEST_CASE("cli rmt-validate writes the report schema") {
    const auto out = tmp("rmt.json");
    const auto r = run_cli("rmt-validate --n-list 4,8 --gamma 1.0 --samples 500 "
                           "--seed 3 --out " + out.string());
    REQUIRE(r.exit_code == 0); // all checks pass
    const json j = json::parse(slurp(out));
    CHECK(j.at("verdict") == "pass");
    REQUIRE(j.at("checks").is_array());
    for (const auto& c : j.at("checks")) {
        CHECK(c.contains("check"));
        CHECK(c.contains("N"));
        CHECK(c.contains("samples"));
        CHECK(c.contains("estimate"));
        CHECK(c.contains("error"));
        CHECK(c.contains("verdict"));
    }
    fs::remove(out);
}

TEST_CASE("cli photosim emits counts and summary") {
    const auto prefix = tmp("psim").string();
    const auto r = run_cli("photosim --bins 32 --windows 300 --window-coherences 6 "
                           "--seed 5 --out " + prefix);
    REQUIRE(r.exit_code == 0);
    const auto counts = radcorr::util::read_csv_file(prefix + ".counts.csv");
    REQUIRE(counts.columns ==
            std::vector<std::string>{"window_index", "n_k", "n_l"});
    REQUIRE(counts.rows.size() == 300);
    const json j = json::parse(slurp(prefix + ".summary.json"));
    CHECK(j.at("empirical").contains("C_kl"));
    CHECK(j.at("empirical").at("few_windows").get<bool>());
    CHECK(j.at("analytic").contains("I_k"));
    fs::remove(prefix + ".counts.csv");
    fs::remove(prefix + ".summary.json");
}

TEST_CASE("cli config file feeds defaults, flags override") {
    const auto cfg = tmp("cfg.json");
    {
        std::ofstream f(cfg);
        f << R"({"wavelength": 1e-6, "distance": 2.0})";
    }
    const auto r = run_cli("--config " + cfg.string() + " geometry");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK_THAT(j.at("coherence_length").get<double>(), WithinRel(2e-3, 1e-9));
    CHECK(j.at("config").at("wavelength").get<double>() == 1e-6);
    fs::remove(cfg);
}

TEST_CASE("cli input errors exit with code 3") {
    CHECK(run_cli("fig2 --s0 1:2 --out /tmp/x.csv").exit_code == 3);       // bad range
    CHECK(run_cli("fig2 --s0 1 --lr -0.5 --out /tmp/x.csv").exit_code == 3); // bad params
    CHECK(run_cli("nonsense").exit_code == 3);                              // unknown command
    CHECK(run_cli("--help").exit_code == 0);
}
