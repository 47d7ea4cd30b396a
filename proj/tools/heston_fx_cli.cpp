#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hestonfx/analytic.hpp"
#include "hestonfx/calibration.hpp"
#include "hestonfx/errors.hpp"
#include "hestonfx/fft.hpp"
#include "hestonfx/garman_kohlhagen.hpp"
#include "hestonfx/io.hpp"
#include "hestonfx/mc.hpp"
#include "hestonfx/types.hpp"
#include "hestonfx/variance.hpp"

namespace hfx = hestonfx;
using nlohmann::json;

namespace {

// Merged parameter document plus the per-flag overrides the user supplied.
struct ParamArgs {
    std::string params_file;
    std::map<std::string, double> overrides;

    hfx::io::ParamsDoc load() const {
        auto doc = hfx::io::read_params_json(params_file);
        auto get = [&](const char* key, double& slot) {
            auto it = overrides.find(key);
            if (it != overrides.end()) slot = it->second;
        };
        get("kappa", doc.params.kappa);
        get("theta", doc.params.theta);
        get("sigma", doc.params.sigma);
        get("rho", doc.params.rho);
        get("v0", doc.params.v0);
        get("lambda", doc.params.lambda);
        get("spot", doc.env.spot);
        get("rd", doc.env.rd);
        get("rf", doc.env.rf);
        return doc;
    }
};

void add_param_flags(CLI::App* sub, ParamArgs& args) {
    sub->add_option("--params", args.params_file, "parameter JSON document")
        ->required()
        ->check(CLI::ExistingFile);
    for (const char* key : {"kappa", "theta", "sigma", "rho", "v0", "lambda", "spot", "rd", "rf"}) {
        sub->add_option_function<double>(
            std::string("--") + key,
            [&args, key](double v) { args.overrides[std::string(key)] = v; },
            std::string("override ") + key + " from the document");
    }
}

json params_json(const hfx::HestonParams& p, const hfx::MarketEnv& env) {
    return json::parse(hfx::io::params_to_json(p, env));
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        hfx::io::write_file(out_path, content);
}

void emit_json(const std::string& out_path, const json& j) {
    emit(out_path, j.dump(2) + "\n");
}

std::string config_comment(const json& cfg) {
    return "# config: " + cfg.dump() + "\n";
}

hfx::Scheme parse_scheme(const std::string& name) {
    if (name == "euler-absorbing") return hfx::Scheme::EulerAbsorbing;
    if (name == "euler-reflecting") return hfx::Scheme::EulerReflecting;
    if (name == "qe") return hfx::Scheme::QuadraticExponential;
    throw hfx::Error(hfx::ErrorCode::InvalidConfig,
                     "scheme must be euler-absorbing, euler-reflecting, or qe");
}

json feller_json(const hfx::FellerReport& rep) {
    return json{{"alpha_dim", rep.alpha_dim},
                {"satisfied", rep.satisfied},
                {"outflowing", rep.outflowing},
                {"regime", hfx::regime_name(rep.regime)}};
}

int phi_of(const std::string& type) {
    if (type == "call") return 1;
    if (type == "put") return -1;
    throw hfx::Error(hfx::ErrorCode::InvalidOptionSign, "type must be call or put");
}

std::vector<double> default_pillars() { return {-0.10, -0.25, 0.50, 0.25, 0.10}; }

// ---- subcommand payloads --------------------------------------------------

struct PriceArgs {
    ParamArgs params;
    double strike = 0.0;
    double tau = 0.0;
    std::string type = "call";
    std::string method = "analytic";
    std::string form = "transformed";
    std::int64_t mc_paths = 100000;
    std::int64_t mc_steps = 100;
    bool steps_total = false;
    std::string scheme = "qe";
    std::uint64_t seed = 0;
    int threads = 0;
    int fft_n = 4096;
    double fft_eta = 0.1;
    double fft_alpha = 0.75;
    std::string out;
};

int run_price(const PriceArgs& a) {
    const auto doc = a.params.load();
    const hfx::VanillaOption opt{a.strike, a.tau, phi_of(a.type)};
    const auto form = [&] {
        if (a.form == "transformed") return hfx::CfFormulation::Transformed;
        if (a.form == "original") return hfx::CfFormulation::Original;
        throw hfx::Error(hfx::ErrorCode::InvalidConfig, "form must be transformed or original");
    }();

    json cfg{{"params", params_json(doc.params, doc.env)},
             {"price",
              {{"strike", a.strike},
               {"tau", a.tau},
               {"type", a.type},
               {"method", a.method},
               {"form", a.form}}}};
    json result;

    if (a.method == "analytic") {
        result["price"] = hfx::vanilla_price(doc.params, doc.env, opt, {}, form);
    } else if (a.method == "fft") {
        hfx::FftGrid grid{a.fft_n, a.fft_eta, a.fft_alpha};
        cfg["price"]["fft"] = {{"n", grid.n}, {"eta", grid.eta}, {"alpha", grid.alpha}};
        const auto ladder = hfx::fft_price_ladder(doc.params, doc.env, a.tau, grid);
        result["price"] = opt.phi > 0 ? ladder.call_at(a.strike) : ladder.put_at(a.strike);
        result["clamped_grid_points"] = ladder.clamped;
    } else if (a.method == "mc") {
        hfx::SimConfig sim;
        sim.scheme = parse_scheme(a.scheme);
        sim.n_paths = a.mc_paths;
        sim.n_steps = a.mc_steps;
        sim.steps_per_year = !a.steps_total;
        sim.horizon = a.tau;
        sim.seed = a.seed;
        sim.threads = a.threads;
        cfg["price"]["mc"] = {{"paths", sim.n_paths},
                              {"steps", sim.n_steps},
                              {"steps_per_year", sim.steps_per_year},
                              {"scheme", a.scheme},
                              {"seed", sim.seed},
                              {"antithetic", sim.antithetic}};
        const auto ts = hfx::simulate_terminal(doc.params, doc.env, sim);
        const auto mc = hfx::mc_price(ts, opt, doc.env);
        result["price"] = mc.price;
        result["standard_error"] = mc.standard_error;
    } else {
        throw hfx::Error(hfx::ErrorCode::InvalidConfig, "method must be analytic, fft, or mc");
    }

    emit_json(a.out, json{{"config", cfg}, {"result", result}});
    return 0;
}

struct GreeksArgs {
    ParamArgs params;
    double strike = 0.0;
    double tau = 0.0;
    std::string type = "call";
    std::string out;
};

int run_greeks(const GreeksArgs& a) {
    const auto doc = a.params.load();
    const hfx::VanillaOption opt{a.strike, a.tau, phi_of(a.type)};
    const auto g = hfx::all_greeks(doc.params, doc.env, opt);
    json cfg{{"params", params_json(doc.params, doc.env)},
             {"greeks", {{"strike", a.strike}, {"tau", a.tau}, {"type", a.type}}}};
    json result{{"price", g.price},       {"spot_delta", g.delta},
                {"dual_delta", g.dual_delta}, {"gamma", g.gamma},
                {"rho_rd", g.rho_rd},     {"rho_rf", g.rho_rf},
                {"vega", g.vega},         {"volga", g.volga},
                {"calendar_theta", g.theta}};
    emit_json(a.out, json{{"config", cfg}, {"result", result}});
    return 0;
}

struct DensityArgs {
    ParamArgs params;
    double t = 1.0;
    double x_min = 0.0, x_max = 0.0;
    int points = 201;
    std::string out;
};

int run_density(const DensityArgs& a) {
    const auto doc = a.params.load();
    if (a.points < 2 || !(a.x_max > a.x_min))
        throw hfx::Error(hfx::ErrorCode::InvalidConfig,
                         "density needs points >= 2 and x_max > x_min");
    std::vector<double> xs(static_cast<std::size_t>(a.points));
    for (int i = 0; i < a.points; ++i)
        xs[static_cast<std::size_t>(i)] =
            a.x_min + (a.x_max - a.x_min) * static_cast<double>(i) /
                          static_cast<double>(a.points - 1);
    const auto dens = hfx::marginal_density(doc.params, a.t, xs);

    json cfg{{"params", params_json(doc.params, doc.env)},
             {"density",
              {{"t", a.t}, {"x_min", a.x_min}, {"x_max", a.x_max}, {"points", a.points}}}};
    std::string body = config_comment(cfg) + "x,density\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        body += hfx::io::fmt(xs[i]) + "," + hfx::io::fmt(dens[i]) + "\n";
    emit(a.out, body);
    return 0;
}

struct FftArgs {
    ParamArgs params;
    double tau = 0.0;
    int n = 4096;
    double eta = 0.1;
    double alpha = 0.75;
    std::string out;
};

int run_fft(const FftArgs& a) {
    const auto doc = a.params.load();
    const hfx::FftGrid grid{a.n, a.eta, a.alpha};
    const auto ladder = hfx::fft_price_ladder(doc.params, doc.env, a.tau, grid);
    json cfg{{"params", params_json(doc.params, doc.env)},
             {"fft",
              {{"tau", a.tau},
               {"n", grid.n},
               {"eta", grid.eta},
               {"alpha", grid.alpha},
               {"clamped_grid_points", ladder.clamped}}}};
    std::string body = config_comment(cfg) + "strike,call_price,put_price\n";
    for (std::size_t i = 0; i < ladder.log_strikes.size(); ++i) {
        const double k = std::exp(ladder.log_strikes[i]);
        body += hfx::io::fmt(k) + "," + hfx::io::fmt(ladder.call_prices[i]) + "," +
                hfx::io::fmt(ladder.put_on_grid(i)) + "\n";
    }
    emit(a.out, body);
    return 0;
}

struct SimArgs {
    ParamArgs params;
    double horizon = 1.0;
    std::int64_t paths = 100000;
    std::int64_t steps = 100;
    bool steps_total = false;
    std::string scheme = "qe";
    std::uint64_t seed = 0;
    bool no_antithetic = false;
    int threads = 0;
    std::string mode = "summary";
    std::int64_t emit_paths = 10;
    std::string out;
};

int run_simulate(const SimArgs& a) {
    const auto doc = a.params.load();
    hfx::SimConfig sim;
    sim.scheme = parse_scheme(a.scheme);
    sim.n_paths = a.paths;
    sim.n_steps = a.steps;
    sim.steps_per_year = !a.steps_total;
    sim.horizon = a.horizon;
    sim.seed = a.seed;
    sim.antithetic = !a.no_antithetic;
    sim.threads = a.threads;

    json cfg{{"params", params_json(doc.params, doc.env)},
             {"simulate",
              {{"horizon", sim.horizon},
               {"paths", sim.n_paths},
               {"steps", sim.n_steps},
               {"steps_per_year", sim.steps_per_year},
               {"scheme", a.scheme},
               {"seed", sim.seed},
               {"antithetic", sim.antithetic},
               {"emit", a.mode}}}};

    if (a.mode == "paths") {
        // Trajectory emission for plots; capped so a fat path count cannot
        // accidentally fill the disk.
        hfx::SimConfig small = sim;
        small.n_paths = std::min<std::int64_t>(sim.n_paths, a.emit_paths);
        if (small.antithetic && small.n_paths % 2 != 0)
            small.n_paths = std::max<std::int64_t>(2, small.n_paths - 1);
        cfg["simulate"]["emitted_paths"] = small.n_paths;
        const auto ps = hfx::simulate(doc.params, doc.env, small);
        std::string body = config_comment(cfg) + "path,time,spot,variance\n";
        for (std::int64_t p = 0; p < ps.n_paths; ++p)
            for (std::int64_t s = 0; s <= ps.n_steps; ++s)
                body += std::to_string(p) + "," +
                        hfx::io::fmt(ps.times[static_cast<std::size_t>(s)]) + "," +
                        hfx::io::fmt(ps.spot_at(p, s)) + "," +
                        hfx::io::fmt(ps.var_at(p, s)) + "\n";
        emit(a.out, body);
        return 0;
    }
    if (a.mode != "summary")
        throw hfx::Error(hfx::ErrorCode::InvalidConfig, "--emit must be summary or paths");

    const auto ts = hfx::simulate_terminal(doc.params, doc.env, sim);
    const auto stats = hfx::boundary_stats(ts);
    auto mean_se = [](const std::vector<double>& xs) {
        long double sum = 0.0L, sq = 0.0L;
        for (double x : xs) {
            sum += x;
            sq += static_cast<long double>(x) * x;
        }
        const long double n = static_cast<long double>(xs.size());
        const double mean = static_cast<double>(sum / n);
        const double var = static_cast<double>((sq - sum * sum / n) / (n - 1.0L));
        return std::pair<double, double>(mean, std::sqrt(std::max(var, 0.0) / xs.size()));
    };
    const auto [sp_mean, sp_se] = mean_se(ts.spot);
    const auto [v_mean, v_se] = mean_se(ts.var);
    std::string body = config_comment(cfg) + "metric,value\n";
    auto row = [&](const char* k, double v) { body += std::string(k) + "," + hfx::io::fmt(v) + "\n"; };
    row("total_steps", static_cast<double>(ts.n_steps));
    row("terminal_spot_mean", sp_mean);
    row("terminal_spot_se", sp_se);
    row("terminal_var_mean", v_mean);
    row("terminal_var_se", v_se);
    row("zero_variance_fraction", stats.zero_fraction);
    row("min_variance_q00", stats.min_variance_quantile(0.0));
    row("min_variance_q25", stats.min_variance_quantile(0.25));
    row("min_variance_q50", stats.min_variance_quantile(0.5));
    row("min_variance_q75", stats.min_variance_quantile(0.75));
    row("min_variance_q100", stats.min_variance_quantile(1.0));
    emit(a.out, body);
    return 0;
}

struct FellerArgs {
    ParamArgs params;
    std::string out;
};

int run_feller(const FellerArgs& a) {
    const auto doc = a.params.load();
    const auto rep = hfx::feller_check(doc.params);
    const auto map = hfx::bessel_transform_check(doc.params.kappa, doc.params.sigma,
                                                 doc.params.theta);
    json cfg{{"params", params_json(doc.params, doc.env)}};
    json result = feller_json(rep);
    result["bessel"] = {{"beta", map.beta}, {"alpha_dim", map.alpha_dim}};
    emit_json(a.out, json{{"config", cfg}, {"result", result}});
    return 0;
}

struct FwdVolArgs {
    ParamArgs params;
    double sigma_t1 = 0.0, sigma_t2 = 0.0;
    double t1 = 0.0, t2 = 0.0;
    std::optional<double> rho_t1, rho_t2;
    std::string out;
};

int run_forward_vol(const FwdVolArgs& a) {
    const auto doc = a.params.load();
    json cfg{{"params", params_json(doc.params, doc.env)},
             {"forward_vol",
              {{"sigma_t1", a.sigma_t1},
               {"sigma_t2", a.sigma_t2},
               {"t1", a.t1},
               {"t2", a.t2}}}};
    json result{{"forward_sigma",
                 hfx::forward_vol_of_vol(a.sigma_t1, a.sigma_t2, a.t1, a.t2, doc.params.kappa,
                                         doc.params.theta, doc.params.v0)}};
    if (a.rho_t1 && a.rho_t2) {
        cfg["forward_vol"]["rho_t1"] = *a.rho_t1;
        cfg["forward_vol"]["rho_t2"] = *a.rho_t2;
        result["forward_rho"] = hfx::forward_correlation(*a.rho_t1, *a.rho_t2, a.t1, a.t2);
    }
    emit_json(a.out, json{{"config", cfg}, {"result", result}});
    return 0;
}

struct CalibrateArgs {
    ParamArgs params;
    std::string smile_file;
    double fixed_kappa = 1.5;
    double fixed_v0 = -1.0;
    int max_evals = 2000;
    std::string fit_csv;
    std::string out;
};

int run_calibrate(const CalibrateArgs& a) {
    const auto doc = a.params.load();
    const auto slices = hfx::io::read_smile_csv(a.smile_file);
    hfx::CalibrationConfig cal;
    cal.fixed_kappa = a.fixed_kappa;
    cal.fixed_v0 = a.fixed_v0;
    cal.max_evals = a.max_evals;
    const auto surface = hfx::calibrate_surface(slices, doc.env, cal);

    json cfg{{"params", params_json(doc.params, doc.env)},
             {"calibrate",
              {{"smile_file", a.smile_file},
               {"fixed_kappa", cal.fixed_kappa},
               {"fixed_v0", cal.fixed_v0},
               {"max_evals", cal.max_evals},
               {"delta_convention", "plain-spot"}}}};

    json jslices = json::array();
    std::string fit_body = "tenor_years,delta,strike,market_vol,model_vol\n";
    for (std::size_t i = 0; i < surface.slices.size(); ++i) {
        const auto& oc = surface.slices[i];
        json js{{"tenor_years", surface.tenors[i]}, {"ok", oc.ok}};
        if (!oc.ok) {
            js["error"] = oc.error;
            jslices.push_back(js);
            continue;
        }
        const auto& r = oc.result;
        js["sigma"] = r.params.sigma;
        js["theta"] = r.params.theta;
        js["rho"] = r.params.rho;
        js["fixed_v0"] = r.params.v0;
        js["fixed_kappa"] = r.params.kappa;
        js["sse"] = r.sse;
        js["iterations"] = r.iterations;
        js["converged"] = r.converged;
        js["feller"] = feller_json(r.feller);
        js["kappa_retry_hint"] = r.kappa_retry_hint;
        if (r.kappa_retry_hint) js["suggested_kappa"] = r.suggested_kappa;
        json pillars = json::array();
        for (std::size_t k = 0; k < r.strikes.size(); ++k) {
            pillars.push_back({{"delta", slices[i].quotes[k].delta_pillar},
                               {"strike", r.strikes[k]},
                               {"market_vol", r.market_vols[k]},
                               {"model_vol", r.model_vols[k]},
                               {"error", r.per_pillar_errors[k]}});
            fit_body += hfx::io::fmt(surface.tenors[i]) + "," +
                        hfx::io::fmt(slices[i].quotes[k].delta_pillar) + "," +
                        hfx::io::fmt(r.strikes[k]) + "," + hfx::io::fmt(r.market_vols[k]) +
                        "," + hfx::io::fmt(r.model_vols[k]) + "\n";
        }
        js["pillars"] = pillars;
        jslices.push_back(js);
    }
    json jfwd = json::array();
    for (const auto& f : surface.forwards) {
        json jf{{"t1", f.t1}, {"t2", f.t2}, {"ok", f.ok}};
        if (f.ok) {
            jf["forward_sigma"] = f.forward_sigma;
            jf["forward_rho"] = f.forward_rho;
        } else {
            jf["error"] = f.error;
        }
        jfwd.push_back(jf);
    }
    json result{{"shared_v0", surface.shared_v0}, {"slices", jslices}, {"forwards", jfwd}};
    if (!a.fit_csv.empty()) hfx::io::write_file(a.fit_csv, fit_body);
    emit_json(a.out, json{{"config", cfg}, {"result", result}});
    return 0;
}

struct SweepArgs {
    ParamArgs params;
    std::string param = "sigma";
    std::vector<double> values;
    double tau = 0.5;
    std::vector<double> deltas = default_pillars();
    std::string out;
};

int run_smile_sweep(const SweepArgs& a) {
    const auto doc = a.params.load();
    if (a.values.empty())
        throw hfx::Error(hfx::ErrorCode::InvalidConfig, "--values must list at least one value");
    json cfg{{"params", params_json(doc.params, doc.env)},
             {"smile_sweep",
              {{"param", a.param},
               {"values", a.values},
               {"tau", a.tau},
               {"deltas", a.deltas}}}};
    std::string body = config_comment(cfg) + "param_value,delta,model_vol\n";
    for (double v : a.values) {
        hfx::HestonParams p = doc.params;
        if (a.param == "sigma")
            p.sigma = v;
        else if (a.param == "theta")
            p.theta = v;
        else if (a.param == "rho")
            p.rho = v;
        else if (a.param == "kappa")
            p.kappa = v;
        else if (a.param == "v0")
            p.v0 = v;
        else
            throw hfx::Error(hfx::ErrorCode::InvalidConfig,
                             "--param must be one of sigma, theta, rho, kappa, v0");
        const auto quotes = hfx::model_smile_at_deltas(p, doc.env, a.tau, a.deltas);
        for (const auto& q : quotes)
            body += hfx::io::fmt(v) + "," + hfx::io::fmt(q.delta_pillar) + "," +
                    hfx::io::fmt(q.implied_vol) + "\n";
    }
    emit(a.out, body);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heston FX vanilla pricing, diagnostics, and smile calibration"};
    app.require_subcommand(1);

    PriceArgs price;
    auto* sp = app.add_subcommand("price", "price one vanilla by analytic, fft, or mc");
    add_param_flags(sp, price.params);
    sp->add_option("--strike", price.strike, "strike")->required();
    sp->add_option("--tau", price.tau, "maturity in years")->required();
    sp->add_option("--type", price.type, "call or put");
    sp->add_option("--method", price.method, "analytic, fft, or mc");
    sp->add_option("--form", price.form, "transformed or original characteristic function");
    sp->add_option("--paths", price.mc_paths, "mc paths");
    sp->add_option("--steps", price.mc_steps, "mc steps (per year unless --steps-total)");
    sp->add_flag("--steps-total", price.steps_total, "treat --steps as the total count");
    sp->add_option("--scheme", price.scheme, "euler-absorbing, euler-reflecting, or qe");
    sp->add_option("--seed", price.seed, "rng seed");
    sp->add_option("--threads", price.threads, "worker threads (0 = HESTON_FX_THREADS)");
    sp->add_option("--fft-n", price.fft_n, "fft grid size (power of two)");
    sp->add_option("--fft-eta", price.fft_eta, "fft frequency spacing");
    sp->add_option("--fft-alpha", price.fft_alpha, "fft damping");
    sp->add_option("--out", price.out, "output file (default stdout)");

    GreeksArgs greeks;
    auto* sg = app.add_subcommand("greeks", "closed-form greeks for one vanilla");
    add_param_flags(sg, greeks.params);
    sg->add_option("--strike", greeks.strike, "strike")->required();
    sg->add_option("--tau", greeks.tau, "maturity in years")->required();
    sg->add_option("--type", greeks.type, "call or put");
    sg->add_option("--out", greeks.out, "output file (default stdout)");

    DensityArgs density;
    auto* sd = app.add_subcommand("density", "marginal density of centered log-spot");
    add_param_flags(sd, density.params);
    sd->add_option("--t", density.t, "time lag in years");
    sd->add_option("--x-min", density.x_min, "grid start")->required();
    sd->add_option("--x-max", density.x_max, "grid end")->required();
    sd->add_option("--points", density.points, "grid points");
    sd->add_option("--out", density.out, "output file (default stdout)");

    FftArgs fft;
    auto* sf = app.add_subcommand("fft", "full strike ladder by Carr-Madan fft");
    add_param_flags(sf, fft.params);
    sf->add_option("--tau", fft.tau, "maturity in years")->required();
    sf->add_option("--fft-n", fft.n, "grid size (power of two)");
    sf->add_option("--fft-eta", fft.eta, "frequency spacing");
    sf->add_option("--fft-alpha", fft.alpha, "damping");
    sf->add_option("--out", fft.out, "output file (default stdout)");

    SimArgs sim;
    auto* ss = app.add_subcommand("simulate", "simulate coupled spot/variance paths");
    add_param_flags(ss, sim.params);
    ss->add_option("--horizon", sim.horizon, "horizon in years");
    ss->add_option("--paths", sim.paths, "path count");
    ss->add_option("--steps", sim.steps, "steps (per year unless --steps-total)");
    ss->add_flag("--steps-total", sim.steps_total, "treat --steps as the total count");
    ss->add_option("--scheme", sim.scheme, "euler-absorbing, euler-reflecting, or qe");
    ss->add_option("--seed", sim.seed, "rng seed");
    ss->add_flag("--no-antithetic", sim.no_antithetic, "disable antithetic pairing");
    ss->add_option("--threads", sim.threads, "worker threads (0 = HESTON_FX_THREADS)");
    ss->add_option("--emit", sim.mode, "summary or paths");
    ss->add_option("--max-emit-paths", sim.emit_paths, "trajectory cap for --emit paths");
    ss->add_option("--out", sim.out, "output file (default stdout)");

    FellerArgs feller;
    auto* sfe = app.add_subcommand("feller", "Feller condition and Bessel-map report");
    add_param_flags(sfe, feller.params);
    sfe->add_option("--out", feller.out, "output file (default stdout)");

    FwdVolArgs fwd;
    auto* sfw = app.add_subcommand("forward-vol", "forward vol-of-vol between two tenors");
    add_param_flags(sfw, fwd.params);
    sfw->add_option("--sigma-t1", fwd.sigma_t1, "spot vol-of-vol to t1")->required();
    sfw->add_option("--sigma-t2", fwd.sigma_t2, "spot vol-of-vol to t2")->required();
    sfw->add_option("--t1", fwd.t1, "first tenor")->required();
    sfw->add_option("--t2", fwd.t2, "second tenor")->required();
    double rho1 = 0.0, rho2 = 0.0;
    auto* o1 = sfw->add_option("--rho-t1", rho1, "spot correlation to t1");
    auto* o2 = sfw->add_option("--rho-t2", rho2, "spot correlation to t2")->needs(o1);
    o1->needs(o2);
    sfw->add_option("--out", fwd.out, "output file (default stdout)");

    CalibrateArgs cal;
    auto* sc = app.add_subcommand("calibrate", "fit (sigma, theta, rho) per smile slice");
    add_param_flags(sc, cal.params);
    sc->add_option("--smile", cal.smile_file, "smile CSV (tenor_years,delta,quote_vol)")
        ->required()
        ->check(CLI::ExistingFile);
    sc->add_option("--fixed-kappa", cal.fixed_kappa, "fixed mean reversion");
    sc->add_option("--fixed-v0", cal.fixed_v0, "fixed v0 (negative: ATM^2)");
    sc->add_option("--max-evals", cal.max_evals, "objective evaluation budget");
    sc->add_option("--fit-csv", cal.fit_csv, "also write per-pillar fit CSV here");
    sc->add_option("--out", cal.out, "output file (default stdout)");

    SweepArgs sweep;
    auto* sw = app.add_subcommand("smile-sweep", "model smiles over one parameter sweep");
    add_param_flags(sw, sweep.params);
    sw->add_option("--param", sweep.param, "sigma, theta, rho, kappa, or v0");
    sw->add_option("--values", sweep.values, "comma-separated parameter values")
        ->required()
        ->delimiter(',');
    sw->add_option("--tau", sweep.tau, "slice maturity");
    sw->add_option("--deltas", sweep.deltas, "delta pillars")->delimiter(',');
    sw->add_option("--out", sweep.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << json{{"error", "UsageError"}, {"message", e.what()}}.dump() << "\n";
        return 2;
    }

    try {
        if (sp->parsed()) return run_price(price);
        if (sg->parsed()) return run_greeks(greeks);
        if (sd->parsed()) return run_density(density);
        if (sf->parsed()) return run_fft(fft);
        if (ss->parsed()) return run_simulate(sim);
        if (sfe->parsed()) return run_feller(feller);
        if (sfw->parsed()) {
            if (o1->count()) fwd.rho_t1 = rho1;
            if (o2->count()) fwd.rho_t2 = rho2;
            return run_forward_vol(fwd);
        }
        if (sc->parsed()) return run_calibrate(cal);
        if (sw->parsed()) return run_smile_sweep(sweep);
        std::cerr << json{{"error", "UsageError"}, {"message", "no subcommand"}}.dump() << "\n";
        return 2;
    } catch (const hfx::Error& e) {
        std::cerr << json{{"error", e.name()}, {"message", e.what()}}.dump() << "\n";
        return hfx::is_input_error(e.code()) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "InternalError"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
}
