#pragma once

#include <cstdint>
#include <vector>

#include "hestonfx/errors.hpp"
#include "hestonfx/types.hpp"

namespace hestonfx {

enum class Scheme { EulerAbsorbing, EulerReflecting, QuadraticExponential };

const char* scheme_name(Scheme scheme);

// n_steps counts steps per year when steps_per_year is set, otherwise the
// total over the horizon. threads = 0 defers to HESTON_FX_THREADS (default 1);
// draws are a pure function of (seed, path, step), so output is bit-identical
// for any thread count.
struct SimConfig {
    Scheme scheme = Scheme::QuadraticExponential;
    std::int64_t n_paths = 100000;
    std::int64_t n_steps = 100;
    bool steps_per_year = true;
    double horizon = 1.0;
    std::uint64_t seed = 0;
    bool antithetic = true;
    int threads = 0;

    std::int64_t total_steps() const;
};

std::vector<Violation> validate(const SimConfig& cfg);
void ensure_valid(const SimConfig& cfg);

// Row-major [n_paths x (n_steps+1)] matrices; column 0 holds (spot, v0).
// Variance entries are >= 0 and spot entries > 0 under every scheme.
struct PathSet {
    std::int64_t n_paths = 0;
    std::int64_t n_steps = 0;
    double horizon = 0.0;
    Scheme scheme = Scheme::QuadraticExponential;
    std::uint64_t seed = 0;
    bool antithetic = true;
    std::vector<double> times;
    std::vector<double> spot;
    std::vector<double> var;

    double spot_at(std::int64_t path, std::int64_t step) const {
        return spot[static_cast<std::size_t>(path * (n_steps + 1) + step)];
    }
    double var_at(std::int64_t path, std::int64_t step) const {
        return var[static_cast<std::size_t>(path * (n_steps + 1) + step)];
    }
};

// Terminal-only variant for path counts where storing full trajectories is
// not practical; carries the zero-boundary tallies boundary_stats needs.
struct TerminalSet {
    std::int64_t n_paths = 0;
    std::int64_t n_steps = 0;
    double horizon = 0.0;
    Scheme scheme = Scheme::QuadraticExponential;
    std::uint64_t seed = 0;
    bool antithetic = true;
    std::vector<double> spot;     // value at the horizon, one entry per path
    std::vector<double> var;
    std::vector<double> min_var;  // per-path minimum over the time grid
    std::int64_t observations = 0;
    std::int64_t zero_observations = 0;
};

PathSet simulate(const HestonParams& p, const MarketEnv& env, const SimConfig& cfg);
TerminalSet simulate_terminal(const HestonParams& p, const MarketEnv& env,
                              const SimConfig& cfg);

struct McPrice {
    double price = 0.0;
    double standard_error = 0.0;
};

// Discounted-payoff estimator. Antithetic pairs are averaged before the
// sample deviation is taken. opt.tau must equal the simulated horizon.
McPrice mc_price(const PathSet& paths, const VanillaOption& opt, const MarketEnv& env);
McPrice mc_price(const TerminalSet& paths, const VanillaOption& opt, const MarketEnv& env);

struct BoundaryStats {
    std::int64_t observations = 0;
    std::int64_t zero_observations = 0;
    double zero_fraction = 0.0;
    std::vector<double> path_min_variance;  // ascending

    double min_variance_quantile(double q) const;
};

BoundaryStats boundary_stats(const PathSet& paths);
BoundaryStats boundary_stats(const TerminalSet& paths);

} // namespace hestonfx
