#include "hestonfx/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "hestonfx/math/normal.hpp"
#include "hestonfx/math/philox.hpp"

namespace hestonfx {

const char* scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::EulerAbsorbing: return "euler-absorbing";
        case Scheme::EulerReflecting: return "euler-reflecting";
        case Scheme::QuadraticExponential: return "qe";
    }
    return "unknown";
}

std::int64_t SimConfig::total_steps() const {
    if (!steps_per_year) return n_steps;
    const double raw = static_cast<double>(n_steps) * horizon;
    return std::max<std::int64_t>(1, std::llround(raw));
}

std::vector<Violation> validate(const SimConfig& cfg) {
    std::vector<Violation> out;
    if (cfg.n_paths < 2)
        out.push_back({ErrorCode::InvalidConfig, "n_paths must be >= 2"});
    if (cfg.antithetic && cfg.n_paths % 2 != 0)
        out.push_back({ErrorCode::InvalidConfig, "antithetic sampling needs an even n_paths"});
    if (cfg.n_steps < 1)
        out.push_back({ErrorCode::InvalidConfig, "n_steps must be >= 1"});
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon))
        out.push_back({ErrorCode::InvalidConfig, "horizon must be finite and > 0"});
    if (cfg.threads < 0)
        out.push_back({ErrorCode::InvalidConfig, "threads must be >= 0"});
    return out;
}

void ensure_valid(const SimConfig& cfg) {
    auto v = validate(cfg);
    if (!v.empty()) throw ValidationError(std::move(v));
}

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HESTON_FX_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<int>(std::min<long>(n, 256));
    }
    return 1;
}

struct StepConsts {
    double dt = 0.0;
    double sqrt_dt = 0.0;
    double mu = 0.0;
    double kappa = 0.0;
    double theta = 0.0;
    double sigma = 0.0;
    double rho = 0.0;
    double rho_bar = 0.0;  // sqrt(1 - rho^2)
    // QE: conditional mean/variance are affine in v, s^2 = c1 v + c2.
    double e1 = 0.0;  // exp(-kappa dt)
    double c1 = 0.0;
    double c2 = 0.0;
    double k0 = 0.0;  // uncorrected drift constant, fallback only
    double k1 = 0.0;
    double k2 = 0.0;
    double k3 = 0.0;
    double k4 = 0.0;
    double a_mart = 0.0;  // A = k2 + k4/2 in the martingale correction
};

StepConsts make_consts(const HestonParams& p, const MarketEnv& env, double dt) {
    StepConsts c;
    c.dt = dt;
    c.sqrt_dt = std::sqrt(dt);
    c.mu = env.drift();
    c.kappa = p.kappa;
    c.theta = p.theta;
    c.sigma = p.sigma;
    c.rho = p.rho;
    c.rho_bar = std::sqrt(std::max(1.0 - p.rho * p.rho, 0.0));
    c.e1 = std::exp(-p.kappa * dt);
    const double s2 = p.sigma * p.sigma;
    c.c1 = s2 * c.e1 * (1.0 - c.e1) / p.kappa;
    c.c2 = p.theta * s2 * (1.0 - c.e1) * (1.0 - c.e1) / (2.0 * p.kappa);
    const double g1 = 0.5, g2 = 0.5;  // central weighting of v across the step
    c.k0 = -p.rho * p.kappa * p.theta * dt / p.sigma;
    c.k1 = g1 * dt * (p.kappa * p.rho / p.sigma - 0.5) - p.rho / p.sigma;
    c.k2 = g2 * dt * (p.kappa * p.rho / p.sigma - 0.5) + p.rho / p.sigma;
    c.k3 = g1 * dt * (1.0 - p.rho * p.rho);
    c.k4 = g2 * dt * (1.0 - p.rho * p.rho);
    c.a_mart = c.k2 + 0.5 * c.k4;
    return c;
}

// One step of the coupled system in (v, log S). z1 drives the spot; the
// variance driver is rho z1 + sqrt(1-rho^2) z2 for the Euler patches, while
// QE consumes z2 through the variance draw and keeps z1 independent of it.
inline void step_euler(bool reflect, const StepConsts& c, double z1, double z2,
                       double& v, double& x) {
    const double sv = std::sqrt(v) * c.sqrt_dt;
    x += (c.mu - 0.5 * v) * c.dt + sv * z1;
    const double zv = c.rho * z1 + c.rho_bar * z2;
    const double vn = v + c.kappa * (c.theta - v) * c.dt + c.sigma * sv * zv;
    v = reflect ? std::fabs(vn) : std::max(vn, 0.0);
}

inline void step_qe(const StepConsts& c, double z1, double z2, double& v, double& x) {
    const double m = c.theta + (v - c.theta) * c.e1;
    const double s2 = c.c1 * v + c.c2;
    const double psi = s2 / (m * m);
    const double kv = (c.k1 + 0.5 * c.k3) * v;

    double vn, k0s;
    if (psi < 1e-12) {
        vn = m;
        k0s = -kv - c.a_mart * m;
    } else if (psi <= 1.5) {
        const double inv = 2.0 / psi;
        const double b2 = inv - 1.0 + std::sqrt(inv) * std::sqrt(inv - 1.0);
        const double a = m / (1.0 + b2);
        const double zb = std::sqrt(b2) + z2;
        vn = a * zb * zb;
        const double den = 1.0 - 2.0 * c.a_mart * a;
        k0s = den > 0.0 ? -c.a_mart * b2 * a / den + 0.5 * std::log(den) - kv : c.k0;
    } else {
        const double pm = (psi - 1.0) / (psi + 1.0);
        const double beta = (1.0 - pm) / m;
        const double u = std::min(normal::cdf(z2), 0x1.fffffffffffffp-1);
        vn = u <= pm ? 0.0 : std::log((1.0 - pm) / (1.0 - u)) / beta;
        k0s = beta > c.a_mart
                  ? -std::log(pm + beta * (1.0 - pm) / (beta - c.a_mart)) - kv
                  : c.k0;
    }
    x += c.mu * c.dt + k0s + c.k1 * v + c.k2 * vn +
         std::sqrt(std::max(c.k3 * v + c.k4 * vn, 0.0)) * z1;
    v = vn;
}

// Recorders receive every post-step state in log-spot form; only the full
// recorder pays for the exponential at each step.
struct PathRecorder {
    PathSet* out;
    void record(std::int64_t path, std::int64_t step, double x, double v) const {
        const std::size_t idx =
            static_cast<std::size_t>(path * (out->n_steps + 1) + step);
        out->spot[idx] = std::exp(x);
        out->var[idx] = v;
    }
    void finish(std::int64_t, double, double) const {}
};

struct TerminalRecorder {
    TerminalSet* out;
    void record(std::int64_t, std::int64_t, double, double) const {}
    void finish(std::int64_t path, double x, double v) const {
        out->spot[static_cast<std::size_t>(path)] = std::exp(x);
        out->var[static_cast<std::size_t>(path)] = v;
    }
};

struct ZeroTally {
    std::int64_t zeros = 0;
    double min_v = std::numeric_limits<double>::infinity();
    void observe(double v) {
        if (v == 0.0) ++zeros;
        if (v < min_v) min_v = v;
    }
};

template <typename Recorder>
void run_streams(const HestonParams& p, const MarketEnv& env, const SimConfig& cfg,
                 std::int64_t n_steps, std::int64_t stream_lo, std::int64_t stream_hi,
                 Recorder rec, std::vector<double>* min_var, std::int64_t* zero_total) {
    const Philox rng(cfg.seed);
    const StepConsts c = make_consts(p, env, cfg.horizon / static_cast<double>(n_steps));
    const double x0 = std::log(env.spot);
    const int lanes = cfg.antithetic ? 2 : 1;
    std::int64_t zeros = 0;

    for (std::int64_t s = stream_lo; s < stream_hi; ++s) {
        double v[2] = {p.v0, p.v0};
        double x[2] = {x0, x0};
        ZeroTally tally[2];
        tally[0].observe(p.v0);
        tally[1].observe(p.v0);
        for (int lane = 0; lane < lanes; ++lane)
            rec.record(s * lanes + lane, 0, x0, p.v0);

        for (std::int64_t step = 0; step < n_steps; ++step) {
            double z1, z2;
            rng.normal_pair(static_cast<std::uint64_t>(s),
                            static_cast<std::uint32_t>(step), 0, z1, z2);
            for (int lane = 0; lane < lanes; ++lane) {
                const double sgn = lane == 0 ? 1.0 : -1.0;
                switch (cfg.scheme) {
                    case Scheme::EulerAbsorbing:
                        step_euler(false, c, sgn * z1, sgn * z2, v[lane], x[lane]);
                        break;
                    case Scheme::EulerReflecting:
                        step_euler(true, c, sgn * z1, sgn * z2, v[lane], x[lane]);
                        break;
                    case Scheme::QuadraticExponential:
                        step_qe(c, sgn * z1, sgn * z2, v[lane], x[lane]);
                        break;
                }
                tally[lane].observe(v[lane]);
                rec.record(s * lanes + lane, step + 1, x[lane], v[lane]);
            }
        }
        for (int lane = 0; lane < lanes; ++lane) {
            const std::int64_t path = s * lanes + lane;
            rec.finish(path, x[lane], v[lane]);
            zeros += tally[lane].zeros;
            if (min_var) (*min_var)[static_cast<std::size_t>(path)] = tally[lane].min_v;
        }
    }
    if (zero_total) *zero_total = zeros;
}

template <typename Recorder>
std::int64_t drive(const HestonParams& p, const MarketEnv& env, const SimConfig& cfg,
                   std::int64_t n_steps, Recorder rec, std::vector<double>* min_var) {
    const std::int64_t n_streams = cfg.antithetic ? cfg.n_paths / 2 : cfg.n_paths;
    const int n_threads =
        static_cast<int>(std::min<std::int64_t>(resolve_threads(cfg.threads), n_streams));
    std::vector<std::int64_t> zeros(static_cast<std::size_t>(n_threads), 0);

    if (n_threads == 1) {
        run_streams(p, env, cfg, n_steps, 0, n_streams, rec, min_var, &zeros[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        const std::int64_t chunk = (n_streams + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const std::int64_t lo = t * chunk;
            const std::int64_t hi = std::min<std::int64_t>(lo + chunk, n_streams);
            if (lo >= hi) break;
            pool.emplace_back([&, t, lo, hi] {
                run_streams(p, env, cfg, n_steps, lo, hi, rec, min_var, &zeros[t]);
            });
        }
        for (auto& th : pool) th.join();
    }

    std::int64_t total = 0;
    for (std::int64_t z : zeros) total += z;
    return total;
}

double discounted_payoff(double spot, const VanillaOption& opt, double df) {
    return df * std::max(opt.phi * (spot - opt.strike), 0.0);
}

McPrice reduce_payoffs(const std::vector<double>& spots, bool antithetic,
                       const VanillaOption& opt, const MarketEnv& env) {
    const double df = std::exp(-env.rd * opt.tau);
    const std::size_t group = antithetic ? 2 : 1;
    const std::size_t n_groups = spots.size() / group;
    long double sum = 0.0L, sum_sq = 0.0L;
    for (std::size_t g = 0; g < n_groups; ++g) {
        double y = 0.0;
        for (std::size_t k = 0; k < group; ++k)
            y += discounted_payoff(spots[g * group + k], opt, df);
        y /= static_cast<double>(group);
        sum += y;
        sum_sq += static_cast<long double>(y) * y;
    }
    McPrice out;
    const long double n = static_cast<long double>(n_groups);
    out.price = static_cast<double>(sum / n);
    if (n_groups > 1) {
        const long double var = (sum_sq - sum * sum / n) / (n - 1.0L);
        out.standard_error =
            static_cast<double>(std::sqrt(std::max(var, 0.0L) / n));
    } else {
        out.standard_error = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

void check_horizon(double tau, double horizon) {
    if (std::fabs(tau - horizon) > 1e-12 * std::max(1.0, std::fabs(horizon)))
        throw Error(ErrorCode::HorizonMismatch,
                    "option maturity does not match the simulated horizon");
}

}  // namespace

PathSet simulate(const HestonParams& p, const MarketEnv& env, const SimConfig& cfg) {
    hestonfx::ensure_valid(p);
    hestonfx::ensure_valid(env);
    ensure_valid(cfg);

    PathSet out;
    out.n_paths = cfg.n_paths;
    out.n_steps = cfg.total_steps();
    out.horizon = cfg.horizon;
    out.scheme = cfg.scheme;
    out.seed = cfg.seed;
    out.antithetic = cfg.antithetic;
    out.times.resize(static_cast<std::size_t>(out.n_steps + 1));
    for (std::int64_t i = 0; i <= out.n_steps; ++i)
        out.times[static_cast<std::size_t>(i)] =
            cfg.horizon * static_cast<double>(i) / static_cast<double>(out.n_steps);
    const std::size_t cells =
        static_cast<std::size_t>(out.n_paths) * static_cast<std::size_t>(out.n_steps + 1);
    out.spot.assign(cells, 0.0);
    out.var.assign(cells, 0.0);

    drive(p, env, cfg, out.n_steps, PathRecorder{&out}, nullptr);
    return out;
}

TerminalSet simulate_terminal(const HestonParams& p, const MarketEnv& env,
                              const SimConfig& cfg) {
    hestonfx::ensure_valid(p);
    hestonfx::ensure_valid(env);
    ensure_valid(cfg);

    TerminalSet out;
    out.n_paths = cfg.n_paths;
    out.n_steps = cfg.total_steps();
    out.horizon = cfg.horizon;
    out.scheme = cfg.scheme;
    out.seed = cfg.seed;
    out.antithetic = cfg.antithetic;
    out.spot.assign(static_cast<std::size_t>(out.n_paths), 0.0);
    out.var.assign(static_cast<std::size_t>(out.n_paths), 0.0);
    out.min_var.assign(static_cast<std::size_t>(out.n_paths), 0.0);
    out.observations = out.n_paths * (out.n_steps + 1);

    out.zero_observations =
        drive(p, env, cfg, out.n_steps, TerminalRecorder{&out}, &out.min_var);
    return out;
}

McPrice mc_price(const PathSet& paths, const VanillaOption& opt, const MarketEnv& env) {
    hestonfx::ensure_valid(opt);
    check_horizon(opt.tau, paths.horizon);
    std::vector<double> terminal(static_cast<std::size_t>(paths.n_paths));
    for (std::int64_t i = 0; i < paths.n_paths; ++i)
        terminal[static_cast<std::size_t>(i)] = paths.spot_at(i, paths.n_steps);
    return reduce_payoffs(terminal, paths.antithetic, opt, env);
}

McPrice mc_price(const TerminalSet& paths, const VanillaOption& opt, const MarketEnv& env) {
    hestonfx::ensure_valid(opt);
    check_horizon(opt.tau, paths.horizon);
    return reduce_payoffs(paths.spot, paths.antithetic, opt, env);
}

double BoundaryStats::min_variance_quantile(double q) const {
    if (path_min_variance.empty() || !(q >= 0.0) || !(q <= 1.0))
        throw Error(ErrorCode::BadInput, "quantile needs stats and q in [0,1]");
    const double pos = q * static_cast<double>(path_min_variance.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, path_min_variance.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * path_min_variance[lo] + w * path_min_variance[hi];
}

BoundaryStats boundary_stats(const PathSet& paths) {
    BoundaryStats st;
    st.observations = paths.n_paths * (paths.n_steps + 1);
    st.path_min_variance.resize(static_cast<std::size_t>(paths.n_paths));
    for (std::int64_t i = 0; i < paths.n_paths; ++i) {
        double min_v = std::numeric_limits<double>::infinity();
        for (std::int64_t s = 0; s <= paths.n_steps; ++s) {
            const double v = paths.var_at(i, s);
            if (v == 0.0) ++st.zero_observations;
            if (v < min_v) min_v = v;
        }
        st.path_min_variance[static_cast<std::size_t>(i)] = min_v;
    }
    std::sort(st.path_min_variance.begin(), st.path_min_variance.end());
    st.zero_fraction =
        static_cast<double>(st.zero_observations) / static_cast<double>(st.observations);
    return st;
}

BoundaryStats boundary_stats(const TerminalSet& paths) {
    BoundaryStats st;
    st.observations = paths.observations;
    st.zero_observations = paths.zero_observations;
    st.path_min_variance = paths.min_var;
    std::sort(st.path_min_variance.begin(), st.path_min_variance.end());
    st.zero_fraction =
        static_cast<double>(st.zero_observations) / static_cast<double>(st.observations);
    return st;
}

}  // namespace hestonfx
