#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <random>
#include <vector>

#include "hestonfx/analytic.hpp"
#include "hestonfx/mc.hpp"

using namespace hestonfx;

namespace {

const HestonParams kFig1{2.0, 0.04, 0.3, -0.05, 0.04, 0.0};
const MarketEnv kEnv{4.0, 0.05, 0.03};

struct Moments {
    double mean = 0.0;
    double var = 0.0;
    double se_mean = 0.0;
    double se_var = 0.0;
};

Moments sample_moments(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    double m = 0.0;
    for (double v : x) m += v;
    m /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    Moments out;
    out.mean = m;
    out.var = m2 * n / (n - 1.0);
    out.se_mean = std::sqrt(m2 / n);
    out.se_var = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    return out;
}

// Exact CIR transition: v_T | v_0 is c times a noncentral chi-square, sampled
// through the Poisson-Gamma mixture. Independent of the engine's RNG on purpose.
std::vector<double> exact_cir_draws(const HestonParams& p, double T, std::size_t n,
                                    std::uint64_t seed) {
    const double e = std::exp(-p.kappa * T);
    const double c = p.sigma * p.sigma * (1.0 - e) / (4.0 * p.kappa);
    const double df = 4.0 * p.kappa * p.theta / (p.sigma * p.sigma);
    const double lambda = p.v0 * e / c;
    std::mt19937_64 rng(seed);
    std::poisson_distribution<long> pois(lambda / 2.0);
    std::vector<double> out(n);
    for (auto& v : out) {
        const double shape = df / 2.0 + static_cast<double>(pois(rng));
        std::gamma_distribution<double> gamma(shape, 2.0);
        v = c * gamma(rng);
    }
    return out;
}

double cir_exact_mean(const HestonParams& p, double T) {
    const double e = std::exp(-p.kappa * T);
    return p.theta + (p.v0 - p.theta) * e;
}

double cir_exact_var(const HestonParams& p, double T) {
    const double e = std::exp(-p.kappa * T);
    const double s2 = p.sigma * p.sigma;
    return p.v0 * s2 / p.kappa * (e - e * e) +
           p.theta * s2 / (2.0 * p.kappa) * (1.0 - e) * (1.0 - e);
}

} // namespace

TEST_CASE("config validation catches bad fields") {
    SimConfig cfg;
    cfg.n_paths = 1;
    CHECK_THROWS_AS(simulate(kFig1, kEnv, cfg), ValidationError);

    cfg = {};
    cfg.n_paths = 1001;  // odd with antithetic on
    CHECK(!validate(cfg).empty());
    cfg.antithetic = false;
    CHECK(validate(cfg).empty());

    cfg = {};
    cfg.n_steps = 0;
    CHECK_THROWS_AS(simulate(kFig1, kEnv, cfg), ValidationError);

    cfg = {};
    cfg.horizon = 0.0;
    CHECK_THROWS_AS(simulate(kFig1, kEnv, cfg), ValidationError);

    cfg = {};
    cfg.threads = -1;
    CHECK_THROWS_AS(simulate(kFig1, kEnv, cfg), ValidationError);
}

TEST_CASE("total_steps rounds steps-per-year against the horizon") {
    SimConfig cfg;
    cfg.n_steps = 100;
    cfg.horizon = 0.25;
    CHECK(cfg.total_steps() == 25);
    cfg.horizon = 0.003;  // llround(0.3) = 0, clamped to one step
    CHECK(cfg.total_steps() == 1);
    cfg.steps_per_year = false;
    cfg.n_steps = 7;
    cfg.horizon = 2.0;
    CHECK(cfg.total_steps() == 7);
}

TEST_CASE("time grid spans [0, horizon] with the requested step count") {
    SimConfig cfg;
    cfg.n_paths = 4;
    cfg.n_steps = 7;
    cfg.steps_per_year = false;
    cfg.horizon = 2.0;
    cfg.antithetic = false;
    const PathSet ps = simulate(kFig1, kEnv, cfg);
    CHECK(ps.n_steps == 7);
    CHECK(ps.times.size() == 8);
    CHECK(ps.times.front() == 0.0);
    CHECK(ps.times.back() == doctest::Approx(2.0).epsilon(1e-15));
    for (std::int64_t i = 0; i < cfg.n_paths; ++i) {
        CHECK(ps.spot_at(i, 0) == kEnv.spot);
        CHECK(ps.var_at(i, 0) == kFig1.v0);
    }
}

TEST_CASE("bit-identical replay for every scheme and any thread count") {
    for (Scheme scheme :
         {Scheme::EulerAbsorbing, Scheme::EulerReflecting, Scheme::QuadraticExponential}) {
        CAPTURE(scheme_name(scheme));
        SimConfig cfg;
        cfg.scheme = scheme;
        cfg.n_paths = 2000;
        cfg.n_steps = 20;
        cfg.steps_per_year = false;
        cfg.horizon = 0.5;
        cfg.seed = 42;
        cfg.threads = 1;
        const PathSet a = simulate(kFig1, kEnv, cfg);
        const PathSet b = simulate(kFig1, kEnv, cfg);
        CHECK(a.spot == b.spot);
        CHECK(a.var == b.var);

        cfg.threads = 3;
        const PathSet c = simulate(kFig1, kEnv, cfg);
        CHECK(a.spot == c.spot);
        CHECK(a.var == c.var);

        cfg.threads = 1;
        cfg.seed = 43;
        const PathSet d = simulate(kFig1, kEnv, cfg);
        CHECK(a.spot != d.spot);
    }
}

TEST_CASE("antithetic pairing reuses the plain streams with flipped draws") {
    SimConfig anti;
    anti.scheme = Scheme::EulerAbsorbing;
    anti.n_paths = 400;
    anti.n_steps = 16;
    anti.steps_per_year = false;
    anti.horizon = 0.25;
    anti.seed = 9;
    SimConfig plain = anti;
    plain.antithetic = false;
    plain.n_paths = 200;

    const PathSet a = simulate(kFig1, kEnv, anti);
    const PathSet p = simulate(kFig1, kEnv, plain);

    // Even path 2s replays plain path s exactly; odd path 2s+1 is its mirror.
    for (std::int64_t s = 0; s < plain.n_paths; ++s)
        for (std::int64_t t = 0; t <= p.n_steps; ++t) {
            CHECK(a.spot_at(2 * s, t) == p.spot_at(s, t));
            CHECK(a.var_at(2 * s, t) == p.var_at(s, t));
        }

    // The mirror lane differs but shares the starting point.
    bool some_diff = false;
    for (std::int64_t s = 0; s < plain.n_paths && !some_diff; ++s)
        some_diff = a.spot_at(2 * s + 1, p.n_steps) != a.spot_at(2 * s, p.n_steps);
    CHECK(some_diff);
}

TEST_CASE("antithetic pairs shrink the ATM standard error") {
    SimConfig cfg;
    cfg.n_paths = 40000;
    cfg.n_steps = 50;
    cfg.horizon = 0.5;
    cfg.seed = 11;
    const VanillaOption atm = VanillaOption::call(4.0, 0.5);

    const McPrice with = mc_price(simulate_terminal(kFig1, kEnv, cfg), atm, kEnv);
    cfg.antithetic = false;
    const McPrice without = mc_price(simulate_terminal(kFig1, kEnv, cfg), atm, kEnv);
    CHECK(with.standard_error < without.standard_error);
    CHECK(with.standard_error > 0.0);
}

TEST_CASE("schemes agree with each other and with the analytic price") {
    const double tau = 0.5;
    const VanillaOption atm = VanillaOption::call(4.0, tau);
    const double exact = vanilla_price(kFig1, kEnv, atm);

    SimConfig cfg;
    cfg.n_paths = 60000;
    cfg.n_steps = 200;
    cfg.horizon = tau;
    cfg.seed = 7;

    double qe_price = 0.0, qe_se = 0.0;
    for (Scheme scheme :
         {Scheme::QuadraticExponential, Scheme::EulerAbsorbing, Scheme::EulerReflecting}) {
        CAPTURE(scheme_name(scheme));
        cfg.scheme = scheme;
        const McPrice est = mc_price(simulate_terminal(kFig1, kEnv, cfg), atm, kEnv);
        if (scheme == Scheme::QuadraticExponential) {
            qe_price = est.price;
            qe_se = est.standard_error;
            CHECK(std::fabs(est.price - exact) <= 3.0 * est.standard_error);
        } else {
            const double pooled = std::sqrt(est.standard_error * est.standard_error +
                                            qe_se * qe_se);
            CHECK(std::fabs(est.price - qe_price) <= 3.0 * pooled);
        }
    }
}

TEST_CASE("QE terminal variance matches the exact CIR transition") {
    const double T = 1.0;
    SimConfig cfg;
    cfg.n_paths = 40000;
    cfg.n_steps = 100;
    cfg.horizon = T;
    cfg.seed = 3;
    cfg.antithetic = false;  // keep draws independent for clean standard errors
    const TerminalSet ts = simulate_terminal(kFig1, kEnv, cfg);
    const Moments engine = sample_moments(ts.var);

    const double want_mean = cir_exact_mean(kFig1, T);
    const double want_var = cir_exact_var(kFig1, T);
    CHECK(std::fabs(engine.mean - want_mean) <= 3.0 * engine.se_mean);
    CHECK(std::fabs(engine.var - want_var) <= 3.0 * engine.se_var);

    // The independent noncentral chi-square sampler agrees with the same targets,
    // and with the engine within pooled errors.
    const Moments oracle = sample_moments(exact_cir_draws(kFig1, T, 40000, 77));
    CHECK(std::fabs(oracle.mean - want_mean) <= 3.0 * oracle.se_mean);
    CHECK(std::fabs(oracle.var - want_var) <= 3.0 * oracle.se_var);
    const double pooled =
        std::sqrt(engine.se_mean * engine.se_mean + oracle.se_mean * oracle.se_mean);
    CHECK(std::fabs(engine.mean - oracle.mean) <= 3.0 * pooled);
}

TEST_CASE("discounted terminal spot reproduces the forward") {
    const double tau = 1.0;
    SimConfig cfg;
    cfg.n_paths = 100000;
    cfg.n_steps = 100;
    cfg.horizon = tau;
    cfg.seed = 21;
    const TerminalSet ts = simulate_terminal(kFig1, kEnv, cfg);

    // Average antithetic pairs first, as the price estimator does.
    std::vector<double> pair_means(ts.spot.size() / 2);
    for (std::size_t g = 0; g < pair_means.size(); ++g)
        pair_means[g] = 0.5 * (ts.spot[2 * g] + ts.spot[2 * g + 1]);
    const Moments m = sample_moments(pair_means);
    const double forward = kEnv.spot * std::exp(kEnv.drift() * tau);
    CHECK(std::fabs(m.mean - forward) <= 3.0 * m.se_mean);
}

TEST_CASE("Euler increments recover the driving correlation") {
    const HestonParams p{1.5, 0.04, 0.4, -0.6, 0.04, 0.0};
    SimConfig cfg;
    cfg.scheme = Scheme::EulerAbsorbing;
    cfg.n_paths = 4000;
    cfg.n_steps = 50;
    cfg.steps_per_year = false;
    cfg.horizon = 0.5;
    cfg.seed = 13;
    cfg.antithetic = false;
    const PathSet ps = simulate(p, kEnv, cfg);
    const double dt = cfg.horizon / static_cast<double>(cfg.n_steps);
    const double mu = kEnv.drift();

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    std::int64_t n = 0;
    for (std::int64_t i = 0; i < ps.n_paths; ++i)
        for (std::int64_t t = 0; t < ps.n_steps; ++t) {
            const double v = ps.var_at(i, t);
            const double vn2 = ps.var_at(i, t + 1);
            if (v < 1e-8 || vn2 <= 0.0) continue;  // skip absorbed or truncated steps
            const double dx = std::log(ps.spot_at(i, t + 1) / ps.spot_at(i, t));
            const double z1 = (dx - (mu - 0.5 * v) * dt) / std::sqrt(v * dt);
            const double zv = (vn2 - v - p.kappa * (p.theta - v) * dt) /
                              (p.sigma * std::sqrt(v * dt));
            sxy += z1 * zv;
            sxx += z1 * z1;
            syy += zv * zv;
            ++n;
        }
    REQUIRE(n > 100000);
    const double corr = sxy / std::sqrt(sxx * syy);
    CHECK(std::fabs(corr - p.rho) < 5.0 * (1.0 - p.rho * p.rho) / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("vanishing vol of vol collapses variance onto the deterministic path") {
    HestonParams quiet = kFig1;
    quiet.sigma = 1e-8;
    quiet.v0 = 0.09;
    for (Scheme scheme :
         {Scheme::EulerAbsorbing, Scheme::EulerReflecting, Scheme::QuadraticExponential}) {
        CAPTURE(scheme_name(scheme));
        SimConfig cfg;
        cfg.scheme = scheme;
        cfg.n_paths = 64;
        cfg.n_steps = 40;
        cfg.steps_per_year = false;
        cfg.horizon = 1.0;
        cfg.seed = 1;
        const PathSet ps = simulate(quiet, kEnv, cfg);
        const BoundaryStats st = boundary_stats(ps);
        CHECK(st.zero_observations == 0);
        for (std::int64_t i = 0; i < ps.n_paths; i += 17)
            for (std::int64_t t = 0; t <= ps.n_steps; ++t) {
                const double s = ps.times[static_cast<std::size_t>(t)];
                const double ode =
                    quiet.theta + (quiet.v0 - quiet.theta) * std::exp(-quiet.kappa * s);
                // Euler integrates the ODE with O(dt) error; QE is exact in the limit.
                CHECK(ps.var_at(i, t) == doctest::Approx(ode).epsilon(2e-3));
            }
    }
}

TEST_CASE("v0 = 0 is a valid starting point for every scheme") {
    HestonParams p = kFig1;
    p.v0 = 0.0;
    for (Scheme scheme :
         {Scheme::EulerAbsorbing, Scheme::EulerReflecting, Scheme::QuadraticExponential}) {
        CAPTURE(scheme_name(scheme));
        SimConfig cfg;
        cfg.scheme = scheme;
        cfg.n_paths = 100;
        cfg.n_steps = 25;
        cfg.steps_per_year = false;
        cfg.horizon = 0.25;
        cfg.antithetic = false;
        const PathSet ps = simulate(p, kEnv, cfg);
        const BoundaryStats st = boundary_stats(ps);
        CHECK(st.zero_observations >= ps.n_paths);  // the whole initial column
        double end_mean = 0.0;
        for (std::int64_t i = 0; i < ps.n_paths; ++i) {
            end_mean += ps.var_at(i, ps.n_steps);
            for (std::int64_t t = 0; t <= ps.n_steps; ++t) {
                CHECK(ps.var_at(i, t) >= 0.0);
                CHECK(ps.spot_at(i, t) > 0.0);
                CHECK(std::isfinite(ps.spot_at(i, t)));
            }
        }
        // Mean reversion pulls the variance off the floor.
        CHECK(end_mean / static_cast<double>(ps.n_paths) > 0.0);
    }
}

TEST_CASE("tiny strike call prices the discounted forward") {
    SimConfig cfg;
    cfg.n_paths = 40000;
    cfg.n_steps = 50;
    cfg.horizon = 0.5;
    cfg.seed = 17;
    const TerminalSet ts = simulate_terminal(kFig1, kEnv, cfg);
    const VanillaOption deep = VanillaOption::call(1e-10, 0.5);
    const McPrice est = mc_price(ts, deep, kEnv);
    const double want = kEnv.spot * std::exp(-kEnv.rf * 0.5);
    CHECK(std::fabs(est.price - want) <= 3.0 * est.standard_error + 1e-10);
}

TEST_CASE("call-put parity holds pathwise on a common path set") {
    SimConfig cfg;
    cfg.n_paths = 20000;
    cfg.n_steps = 50;
    cfg.horizon = 0.5;
    cfg.seed = 23;
    const TerminalSet ts = simulate_terminal(kFig1, kEnv, cfg);
    const double strike = 4.2;
    const McPrice call = mc_price(ts, VanillaOption::call(strike, 0.5), kEnv);
    const McPrice put = mc_price(ts, VanillaOption::put(strike, 0.5), kEnv);

    const double df = std::exp(-kEnv.rd * 0.5);
    double mean_spot = 0.0;
    for (double s : ts.spot) mean_spot += s;
    mean_spot /= static_cast<double>(ts.spot.size());
    // (S-K)+ - (K-S)+ = S - K pathwise, so the identity is exact up to roundoff.
    CHECK(call.price - put.price ==
          doctest::Approx(df * (mean_spot - strike)).epsilon(1e-12));

    const double want = kEnv.spot * std::exp(-kEnv.rf * 0.5) - strike * df;
    const double pooled = std::sqrt(call.standard_error * call.standard_error +
                                    put.standard_error * put.standard_error);
    CHECK(std::fabs(call.price - put.price - want) <= 3.0 * pooled);
}

TEST_CASE("option maturity must match the simulated horizon") {
    SimConfig cfg;
    cfg.n_paths = 100;
    cfg.n_steps = 10;
    cfg.horizon = 1.0;
    const TerminalSet ts = simulate_terminal(kFig1, kEnv, cfg);
    CHECK_THROWS_AS(mc_price(ts, VanillaOption::call(4.0, 0.5), kEnv), Error);
    try {
        mc_price(ts, VanillaOption::call(4.0, 0.5), kEnv);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::HorizonMismatch);
    }
    CHECK_NOTHROW(mc_price(ts, VanillaOption::call(4.0, 1.0), kEnv));
}

TEST_CASE("QE price matches the analytic benchmark at scale") {
    const double tau = 0.5;
    const VanillaOption atm = VanillaOption::call(4.0, tau);
    const double exact = vanilla_price(kFig1, kEnv, atm);
    SimConfig cfg;
    cfg.n_paths = 200000;
    cfg.n_steps = 100;
    cfg.horizon = tau;
    cfg.seed = 2;
    const McPrice est = mc_price(simulate_terminal(kFig1, kEnv, cfg), atm, kEnv);
    CHECK(std::fabs(est.price - exact) <= 3.0 * est.standard_error);
    CHECK(est.standard_error < 5e-3);
}

TEST_CASE("boundary statistics agree between full and terminal simulations") {
    const HestonParams violating{0.5, 0.01, 0.3, -0.05, 0.01, 0.0};
    SimConfig cfg;
    cfg.scheme = Scheme::EulerAbsorbing;
    cfg.n_paths = 2000;
    cfg.n_steps = 100;
    cfg.horizon = 1.0;
    cfg.seed = 31;
    const PathSet ps = simulate(violating, kEnv, cfg);
    const TerminalSet ts = simulate_terminal(violating, kEnv, cfg);

    const BoundaryStats full = boundary_stats(ps);
    const BoundaryStats term = boundary_stats(ts);
    CHECK(full.observations == term.observations);
    CHECK(full.observations == cfg.n_paths * (ps.n_steps + 1));
    CHECK(full.zero_observations == term.zero_observations);
    CHECK(full.zero_observations > 0);  // absorbing + violated Feller hits the floor
    CHECK(full.zero_fraction == doctest::Approx(term.zero_fraction).epsilon(1e-15));
    REQUIRE(full.path_min_variance.size() == term.path_min_variance.size());
    for (std::size_t i = 0; i < full.path_min_variance.size(); ++i)
        CHECK(full.path_min_variance[i] == term.path_min_variance[i]);

    CHECK(full.min_variance_quantile(0.0) == full.path_min_variance.front());
    CHECK(full.min_variance_quantile(1.0) == full.path_min_variance.back());
    CHECK(full.min_variance_quantile(0.25) <= full.min_variance_quantile(0.75));
    CHECK_THROWS_AS(full.min_variance_quantile(1.5), Error);

    // Terminal states replay the full simulation bit for bit.
    for (std::int64_t i = 0; i < cfg.n_paths; i += 97) {
        CHECK(ts.spot[static_cast<std::size_t>(i)] == ps.spot_at(i, ps.n_steps));
        CHECK(ts.var[static_cast<std::size_t>(i)] == ps.var_at(i, ps.n_steps));
    }
}
