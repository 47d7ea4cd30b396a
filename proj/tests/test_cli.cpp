#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hestonfx/analytic.hpp"
#include "hestonfx/io.hpp"

using nlohmann::json;
using namespace hestonfx;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    const std::string out_path = "/tmp/hfx_cli_stdout.txt";
    const std::string err_path = "/tmp/hfx_cli_stderr.txt";
    const std::string cmd =
        std::string(CLI_BIN) + " " + args + " > " + out_path + " 2> " + err_path;
    const int raw = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    res.out = slurp(out_path);
    res.err = slurp(err_path);
    return res;
}

const std::string kParams = std::string("--params ") + DATA_DIR + "/sample_params.json";
const std::string kSmile = std::string(DATA_DIR) + "/sample_smile.csv";

io::ParamsDoc sample_doc() {
    return io::read_params_json(std::string(DATA_DIR) + "/sample_params.json");
}

// Rows after the "# config:" comment and the header line.
std::vector<std::string> csv_rows(const std::string& body) {
    std::vector<std::string> rows;
    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        rows.push_back(line);
    }
    return rows;
}

std::vector<double> split_row(const std::string& row) {
    std::vector<double> vals;
    std::istringstream in(row);
    std::string cell;
    while (std::getline(in, cell, ',')) vals.push_back(std::stod(cell));
    return vals;
}

} // namespace

TEST_CASE("price analytic passes the library value through unchanged") {
    const auto r = run("price " + kParams + " --strike 4.2 --tau 0.5 --type call");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.err.empty());
    const json doc = json::parse(r.out);

    const auto d = sample_doc();
    const double want = vanilla_price(d.params, d.env, VanillaOption::call(4.2, 0.5));
    // JSON serialization must be full precision: exact double round trip.
    CHECK(doc["result"]["price"].get<double>() == want);
    CHECK(doc["config"]["params"]["kappa"].get<double>() == d.params.kappa);
    CHECK(doc["config"]["price"]["method"] == "analytic");
}

TEST_CASE("repeated runs are byte-identical") {
    const std::string cmd = "price " + kParams + " --strike 4 --tau 1 --method mc"
                            " --paths 20000 --steps 50 --seed 5";
    const auto a = run(cmd);
    const auto b = run(cmd);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    const auto t1 = run(cmd + " --threads 1");
    const auto t3 = run(cmd + " --threads 3");
    REQUIRE(t1.exit_code == 0);
    CHECK(t1.out == t3.out);
}

TEST_CASE("parameter overrides land in both the config echo and the result") {
    const auto base = run("price " + kParams + " --strike 4 --tau 0.5");
    const auto bumped = run("price " + kParams + " --strike 4 --tau 0.5 --sigma 0.25");
    REQUIRE(base.exit_code == 0);
    REQUIRE(bumped.exit_code == 0);
    const json jb = json::parse(base.out);
    const json jo = json::parse(bumped.out);
    CHECK(jb["config"]["params"]["sigma"].get<double>() == 0.3);
    CHECK(jo["config"]["params"]["sigma"].get<double>() == 0.25);
    CHECK(jb["result"]["price"].get<double>() != jo["result"]["price"].get<double>());
}

TEST_CASE("fft and mc methods agree with the analytic price") {
    const auto d = sample_doc();
    const double want = vanilla_price(d.params, d.env, VanillaOption::call(4.0, 0.5));

    // The requested strike lands between ladder nodes, so this sees the chord
    // interpolation error (~3e-4 at the default grid spacing), not raw FFT accuracy.
    const auto f = run("price " + kParams + " --strike 4 --tau 0.5 --method fft");
    REQUIRE(f.exit_code == 0);
    const double fft_price = json::parse(f.out)["result"]["price"].get<double>();
    CHECK(std::fabs(fft_price - want) < 5e-3 * want);
    CHECK(fft_price - want > -1e-8);  // chord of a convex curve never undershoots

    const auto m = run("price " + kParams + " --strike 4 --tau 0.5 --method mc --paths 40000");
    REQUIRE(m.exit_code == 0);
    const json jm = json::parse(m.out);
    const double mc_price = jm["result"]["price"].get<double>();
    const double se = jm["result"]["standard_error"].get<double>();
    CHECK(se > 0.0);
    CHECK(std::fabs(mc_price - want) < 4.0 * se);
}

TEST_CASE("greeks subcommand reports the closed-form values exactly") {
    const auto r = run("greeks " + kParams + " --strike 4.2 --tau 0.5 --type put");
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    const auto d = sample_doc();
    const Greeks g = all_greeks(d.params, d.env, VanillaOption::put(4.2, 0.5));
    CHECK(doc["result"]["price"].get<double>() == g.price);
    CHECK(doc["result"]["spot_delta"].get<double>() == g.delta);
    CHECK(doc["result"]["dual_delta"].get<double>() == g.dual_delta);
    CHECK(doc["result"]["gamma"].get<double>() == g.gamma);
    CHECK(doc["result"]["rho_rd"].get<double>() == g.rho_rd);
    CHECK(doc["result"]["rho_rf"].get<double>() == g.rho_rf);
    CHECK(doc["result"]["vega"].get<double>() == g.vega);
    CHECK(doc["result"]["volga"].get<double>() == g.volga);
    CHECK(doc["result"]["calendar_theta"].get<double>() == g.theta);
}

TEST_CASE("density subcommand emits a config comment and a positive grid") {
    const auto r = run("density " + kParams + " --t 1 --x-min -0.6 --x-max 0.6 --points 41");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("# config:", 0) == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 42);  // header + 41 samples
    CHECK(rows[0] == "x,density");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto vals = split_row(rows[i]);
        REQUIRE(vals.size() == 2);
        CHECK(vals[1] > 0.0);
    }
    const auto mid = split_row(rows[21]);
    CHECK(mid[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("fft subcommand writes the full ladder with increasing strikes") {
    const auto r = run("fft " + kParams + " --tau 0.5 --fft-n 1024 --fft-eta 0.25");
    REQUIRE(r.exit_code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1025);
    CHECK(rows[0] == "strike,call_price,put_price");
    double prev = 0.0;
    for (std::size_t i = 1; i < rows.size(); i += 64) {
        const auto vals = split_row(rows[i]);
        REQUIRE(vals.size() == 3);
        CHECK(vals[0] > prev);
        CHECK(vals[1] >= 0.0);
        CHECK(vals[2] >= 0.0);
        prev = vals[0];
    }
}

TEST_CASE("simulate summary reports deterministic boundary statistics") {
    const std::string cmd = "simulate " +
                            kParams + " --horizon 0.5 --paths 2000 --steps 100 --seed 4";
    const auto r = run(cmd);
    REQUIRE(r.exit_code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(!rows.empty());
    CHECK(rows[0] == "metric,value");
    double total_steps = -1.0, zero_fraction = -1.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto pos = rows[i].find(',');
        const std::string key = rows[i].substr(0, pos);
        const double val = std::stod(rows[i].substr(pos + 1));
        if (key == "total_steps") total_steps = val;
        if (key == "zero_variance_fraction") zero_fraction = val;
    }
    CHECK(total_steps == 50.0);
    CHECK(zero_fraction == 0.0);  // QE with the Feller condition comfortably met

    const auto again = run(cmd + " --threads 3");
    CHECK(again.out == r.out);
}

TEST_CASE("simulate paths mode caps the emitted trajectories") {
    const auto r = run("simulate " + kParams + " --horizon 0.25 --paths 1000 --steps 8"
                       " --steps-total --emit paths --max-emit-paths 4");
    REQUIRE(r.exit_code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 1 + 4 * 9);  // header + 4 paths x 9 states
    CHECK(rows[0] == "path,time,spot,variance");
}

TEST_CASE("feller subcommand emits the classification report") {
    const auto r = run("feller " + kParams);
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    const json& res = doc["result"];
    CHECK(res["alpha_dim"].get<double>() == doctest::Approx(32.0 / 9.0).epsilon(1e-14));
    CHECK(res["satisfied"].get<bool>());
    CHECK(res["outflowing"].get<bool>());
    CHECK(res["regime"] == "strictly-positive");
    CHECK(res["bessel"]["beta"].get<double>() == doctest::Approx(0.01125).epsilon(1e-14));
}

TEST_CASE("forward-vol subcommand") {
    const auto flat = run("forward-vol " + kParams + " --sigma-t1 0.3 --sigma-t2 0.3"
                          " --t1 0.5 --t2 1.0");
    REQUIRE(flat.exit_code == 0);
    CHECK(json::parse(flat.out)["result"]["forward_sigma"].get<double>() == 0.3);

    const auto rising = run("forward-vol " + kParams + " --sigma-t1 0.3 --sigma-t2 0.5"
                            " --t1 0.5 --t2 1.0 --rho-t1 -0.01 --rho-t2 -0.35");
    REQUIRE(rising.exit_code == 0);
    const json jr = json::parse(rising.out);
    CHECK(jr["result"]["forward_sigma"].get<double>() > 0.5);
    CHECK(jr["result"]["forward_rho"].get<double>() == -0.35);

    // The rho options only make sense as a pair.
    const auto lonely = run("forward-vol " + kParams + " --sigma-t1 0.3 --sigma-t2 0.5"
                            " --t1 0.5 --t2 1.0 --rho-t1 -0.01");
    CHECK(lonely.exit_code == 2);
}

TEST_CASE("calibrate fits the shipped sample smile") {
    const std::string fit_csv = "/tmp/hfx_cli_fit.csv";
    const auto r = run("calibrate " + kParams + " --smile " + kSmile +
                       " --fixed-kappa 1.5 --fixed-v0 0.01 --fit-csv " + fit_csv);
    REQUIRE(r.exit_code == 0);
    const json doc = json::parse(r.out);
    const json& slice = doc["result"]["slices"][0];
    REQUIRE(slice["ok"].get<bool>());
    CHECK(slice["converged"].get<bool>());
    CHECK(slice["sse"].get<double>() < 1e-8);
    CHECK(std::fabs(slice["sigma"].get<double>() - 0.2) < 0.01);
    CHECK(std::fabs(slice["theta"].get<double>() - 0.015) < 1e-3);
    CHECK(std::fabs(slice["rho"].get<double>() - 0.05) < 0.02);
    CHECK(slice["pillars"].size() == 5);
    CHECK(doc["result"]["forwards"].empty());  // single tenor

    const std::string fit = slurp(fit_csv);
    CHECK(fit.rfind("tenor_years,delta,strike,market_vol,model_vol", 0) == 0);
    CHECK(csv_rows(fit).size() == 6);  // header + 5 pillars
}

TEST_CASE("smile-sweep emits one smile per parameter value") {
    const auto r = run("smile-sweep " + kParams + " --param sigma --values 0.1,0.3"
                       " --tau 0.5 --v0 0.01 --theta 0.015 --kappa 1.5 --rho 0.0");
    REQUIRE(r.exit_code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 11);  // header + 2 values x 5 default pillars
    CHECK(rows[0] == "param_value,delta,model_vol");
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(split_row(rows[i])[2] > 0.0);
}

TEST_CASE("--out writes exactly what stdout would have carried") {
    const std::string path = "/tmp/hfx_cli_outfile.json";
    const auto direct = run("greeks " + kParams + " --strike 4 --tau 0.5");
    const auto filed = run("greeks " + kParams + " --strike 4 --tau 0.5 --out " + path);
    REQUIRE(direct.exit_code == 0);
    REQUIRE(filed.exit_code == 0);
    CHECK(filed.out.empty());
    CHECK(slurp(path) == direct.out);
}

TEST_CASE("usage problems exit 2 with a JSON error object") {
    const auto none = run("");
    CHECK(none.exit_code == 2);

    const auto unknown = run("frobnicate --x 1");
    CHECK(unknown.exit_code == 2);
    CHECK(json::parse(unknown.err)["error"] == "UsageError");

    const auto missing = run("price " + kParams + " --tau 0.5");  // no --strike
    CHECK(missing.exit_code == 2);
    CHECK(json::parse(missing.err)["error"] == "UsageError");
}

TEST_CASE("invalid domain inputs exit 2 with the library error name") {
    const auto r = run("price " + kParams + " --strike -1 --tau 0.5");
    CHECK(r.exit_code == 2);
    CHECK(json::parse(r.err)["error"] == "NonPositiveStrike");

    const auto bad_rho = run("price " + kParams + " --strike 4 --tau 0.5 --rho 1.5");
    CHECK(bad_rho.exit_code == 2);
    CHECK(json::parse(bad_rho.err)["error"] == "CorrelationOutOfRange");
}

TEST_CASE("numerical failures exit 1 with the library error name") {
    const auto r = run("price " + kParams + " --strike 4 --tau 10 --method fft"
                       " --kappa 0.5 --theta 0.09 --sigma 0.9 --rho 0.8 --v0 2.5"
                       " --fft-alpha 25");
    CHECK(r.exit_code == 1);
    CHECK(json::parse(r.err)["error"] == "MomentConditionViolated");
}
