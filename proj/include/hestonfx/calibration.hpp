#pragma once

#include <string>
#include <vector>

#include "hestonfx/analytic.hpp"
#include "hestonfx/errors.hpp"
#include "hestonfx/math/quadrature.hpp"
#include "hestonfx/types.hpp"
#include "hestonfx/variance.hpp"

namespace hestonfx {

// Delta-quoted smile pillar: signed plain spot delta (calls positive, puts
// negative, no premium adjustment) and the quoted annualized vol.
struct SmileQuote {
    double delta_pillar = 0.0;
    double implied_vol = 0.0;
};

struct SmileSlice {
    double tau = 0.0;
    std::vector<SmileQuote> quotes;
};

std::vector<Violation> validate(const SmileSlice& slice);
void ensure_valid(const SmileSlice& slice);

// Inverts the spot-delta convention: K such that the Garman-Kohlhagen spot
// delta at (K, vol) equals delta. Throws DeltaOutOfRange when |delta| e^{rf tau}
// falls outside (0, 1).
double strike_from_delta(const MarketEnv& env, double tau, double delta, double vol);

// Bisection on [1e-4, 5]; the returned vol reprices within 1e-10 absolute.
double implied_vol(const MarketEnv& env, const VanillaOption& opt, double price);

// Model-implied vols at the pillar strikes retrieved once from the market
// quotes (the quotes fix the strikes; the model is then read at them).
std::vector<double> model_smile(const HestonParams& p, const MarketEnv& env,
                                const SmileSlice& slice, const QuadratureConfig& quad = {});

// Self-consistent smile at given deltas: strikes and vols agree with the
// model's own quotes (fixed point of retrieve-strikes / re-imply). Used to
// synthesize slices that a round-trip calibration can fit to SSE ~ 0.
std::vector<SmileQuote> model_smile_at_deltas(const HestonParams& p, const MarketEnv& env,
                                              double tau, const std::vector<double>& deltas,
                                              const QuadratureConfig& quad = {});

struct CalibrationConfig {
    double fixed_kappa = 1.5;
    double fixed_v0 = -1.0;    // negative: use (ATM quote vol)^2
    double init_sigma = 0.3;
    double init_theta = -1.0;  // negative: use (ATM quote vol)^2
    double init_rho = 0.0;
    int max_evals = 2000;
    double diameter_tol = 1e-8;
    double spread_tol = 1e-12;
    int restarts = 2;
    std::vector<double> weights;  // optional per-pillar weights, empty = equal
    QuadratureConfig quad{};
};

// sse = sum of w_i * err_i^2 over the reported per_pillar_errors (exact
// bookkeeping, unit weights by default). vols are model minus market.
struct CalibrationResult {
    HestonParams params{};
    double sse = 0.0;
    std::vector<double> per_pillar_errors;
    std::vector<double> strikes;
    std::vector<double> market_vols;
    std::vector<double> model_vols;
    FellerReport feller{};
    int iterations = 0;
    bool converged = false;
    bool kappa_retry_hint = false;  // Feller failed: suggest refitting with kappa below
    double suggested_kappa = 3.0;
    std::vector<double> trace;  // best SSE per simplex iteration, non-increasing
};

CalibrationResult calibrate_slice(const SmileSlice& slice, const MarketEnv& env,
                                  const CalibrationConfig& cfg = {});

struct SliceOutcome {
    bool ok = false;
    std::string error;  // error name when !ok
    CalibrationResult result{};
};

struct ForwardEntry {
    double t1 = 0.0;
    double t2 = 0.0;
    bool ok = false;
    std::string error;
    double forward_sigma = 0.0;
    double forward_rho = 0.0;
};

// Independent per-slice fits sharing one v0 (from config, or the first
// slice's ATM quote), plus forward vol-of-vol / correlation between
// consecutive tenors. Per-slice and per-pair failures are collected, never
// fatal to the other slices.
struct SurfaceResult {
    std::vector<double> tenors;
    std::vector<SliceOutcome> slices;
    std::vector<ForwardEntry> forwards;
    double shared_v0 = 0.0;
};

SurfaceResult calibrate_surface(const std::vector<SmileSlice>& slices, const MarketEnv& env,
                                const CalibrationConfig& cfg = {});

} // namespace hestonfx
