#include "hestonfx/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "hestonfx/garman_kohlhagen.hpp"
#include "hestonfx/math/nelder_mead.hpp"
#include "hestonfx/math/normal.hpp"

namespace hestonfx {

std::vector<Violation> validate(const SmileSlice& slice) {
    std::vector<Violation> out;
    if (!(slice.tau > 0.0) || !std::isfinite(slice.tau))
        out.push_back({ErrorCode::NonPositiveMaturity, "slice tau must be finite and > 0"});
    if (slice.quotes.empty()) {
        out.push_back({ErrorCode::BadInput, "slice needs at least one quote"});
        return out;
    }
    for (const auto& q : slice.quotes) {
        const double ad = std::fabs(q.delta_pillar);
        if (!(ad > 0.0) || !(ad < 1.0) || !std::isfinite(ad)) {
            out.push_back({ErrorCode::DeltaOutOfRange, "delta pillars must satisfy 0 < |delta| < 1"});
            break;
        }
    }
    for (const auto& q : slice.quotes) {
        if (!(q.implied_vol > 0.0) || !std::isfinite(q.implied_vol)) {
            out.push_back({ErrorCode::BadInput, "quoted vols must be finite and > 0"});
            break;
        }
    }
    for (std::size_t i = 0; i < slice.quotes.size(); ++i)
        for (std::size_t k = i + 1; k < slice.quotes.size(); ++k)
            if (slice.quotes[i].delta_pillar == slice.quotes[k].delta_pillar) {
                out.push_back({ErrorCode::BadInput, "delta pillars must be distinct"});
                return out;
            }
    return out;
}

void ensure_valid(const SmileSlice& slice) {
    auto v = validate(slice);
    if (!v.empty()) throw ValidationError(std::move(v));
}

double strike_from_delta(const MarketEnv& env, double tau, double delta, double vol) {
    hestonfx::ensure_valid(env);
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw Error(ErrorCode::NonPositiveMaturity, "tau must be finite and > 0");
    if (!(vol > 0.0) || !std::isfinite(vol))
        throw Error(ErrorCode::BadInput, "vol must be finite and > 0");
    if (!std::isfinite(delta) || delta == 0.0)
        throw Error(ErrorCode::DeltaOutOfRange, "delta must be finite and nonzero");
    const double phi = delta > 0.0 ? 1.0 : -1.0;
    const double a = phi * delta * std::exp(env.rf * tau);
    if (!(a > 0.0) || !(a < 1.0))
        throw Error(ErrorCode::DeltaOutOfRange,
                    "|delta| e^{rf tau} must lie strictly inside (0, 1)");
    const double root_tau = std::sqrt(tau);
    return env.spot * std::exp(-phi * normal::inv_cdf(a) * vol * root_tau +
                               (env.rd - env.rf + 0.5 * vol * vol) * tau);
}

double implied_vol(const MarketEnv& env, const VanillaOption& opt, double price) {
    hestonfx::ensure_valid(env);
    hestonfx::ensure_valid(opt);
    if (!std::isfinite(price))
        throw Error(ErrorCode::BadInput, "price must be finite");

    constexpr double kLo = 1e-4, kHi = 5.0, kPriceTol = 1e-10;
    double lo = kLo, hi = kHi;
    double f_lo = gk::price(env, opt, lo) - price;
    double f_hi = gk::price(env, opt, hi) - price;
    // The GK price is strictly increasing in vol, so the band test is just
    // a sign check at the bracket ends.
    if (f_lo > 0.0 || f_hi < 0.0)
        throw Error(ErrorCode::PriceOutOfBand,
                    "price lies outside the vol-in-[1e-4, 5] arbitrage band");
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;

    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double diff = gk::price(env, opt, mid) - price;
        if (std::fabs(diff) <= kPriceTol && hi - lo <= 1e-9) return mid;
        if (diff > 0.0)
            hi = mid;
        else
            lo = mid;
        const double next = 0.5 * (lo + hi);
        if (next == mid && std::fabs(diff) <= kPriceTol) return mid;
        if (next == mid) break;  // interval at machine precision, tolerance unmet
        mid = next;
    }
    if (std::fabs(gk::price(env, opt, mid) - price) <= kPriceTol) return mid;
    throw Error(ErrorCode::BracketExhausted, "bisection failed to reprice within 1e-10");
}

namespace {

std::size_t atm_index(const SmileSlice& slice) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < slice.quotes.size(); ++i) {
        const double d = std::fabs(std::fabs(slice.quotes[i].delta_pillar) - 0.5);
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

std::vector<double> pillar_strikes(const MarketEnv& env, const SmileSlice& slice) {
    std::vector<double> ks;
    ks.reserve(slice.quotes.size());
    for (const auto& q : slice.quotes)
        ks.push_back(strike_from_delta(env, slice.tau, q.delta_pillar, q.implied_vol));
    return ks;
}

// Price each pillar as the quoted side (puts at negative deltas) and invert.
// Parity makes the implied vol side-independent; pricing the OTM side keeps
// the inversion away from the forward bound.
std::vector<double> vols_at_strikes(const HestonParams& p, const MarketEnv& env, double tau,
                                    const std::vector<double>& strikes,
                                    const std::vector<int>& phis,
                                    const QuadratureConfig& quad) {
    std::vector<double> vols(strikes.size());
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        const VanillaOption opt{strikes[i], tau, phis[i]};
        vols[i] = implied_vol(env, opt, vanilla_price(p, env, opt, quad));
    }
    return vols;
}

std::vector<int> quote_phis(const SmileSlice& slice) {
    std::vector<int> phis;
    phis.reserve(slice.quotes.size());
    for (const auto& q : slice.quotes) phis.push_back(q.delta_pillar > 0.0 ? 1 : -1);
    return phis;
}

} // namespace

std::vector<double> model_smile(const HestonParams& p, const MarketEnv& env,
                                const SmileSlice& slice, const QuadratureConfig& quad) {
    hestonfx::ensure_valid(p);
    ensure_valid(slice);
    return vols_at_strikes(p, env, slice.tau, pillar_strikes(env, slice), quote_phis(slice),
                           quad);
}

std::vector<SmileQuote> model_smile_at_deltas(const HestonParams& p, const MarketEnv& env,
                                              double tau, const std::vector<double>& deltas,
                                              const QuadratureConfig& quad) {
    hestonfx::ensure_valid(p);
    SmileSlice slice;
    slice.tau = tau;
    const double v_eff = p.v0 > 0.0 ? p.v0 : p.theta;
    for (double d : deltas) slice.quotes.push_back({d, std::sqrt(v_eff)});
    ensure_valid(slice);

    for (int round = 0; round < 100; ++round) {
        const auto vols = model_smile(p, env, slice, quad);
        double shift = 0.0;
        for (std::size_t i = 0; i < vols.size(); ++i) {
            shift = std::max(shift, std::fabs(vols[i] - slice.quotes[i].implied_vol));
            slice.quotes[i].implied_vol = vols[i];
        }
        if (shift < 1e-12) break;
    }
    return slice.quotes;
}

CalibrationResult calibrate_slice(const SmileSlice& slice, const MarketEnv& env,
                                  const CalibrationConfig& cfg) {
    hestonfx::ensure_valid(env);
    ensure_valid(slice);
    if (slice.quotes.size() < 3)
        throw Error(ErrorCode::DegenerateSlice,
                    "three parameters need at least three pillars");
    if (!cfg.weights.empty() && cfg.weights.size() != slice.quotes.size())
        throw Error(ErrorCode::InvalidConfig, "weight vector must match the pillar count");
    if (!(cfg.fixed_kappa > 0.0) || !std::isfinite(cfg.fixed_kappa))
        throw Error(ErrorCode::NonPositiveKappa, "fixed kappa must be finite and > 0");

    const double atm_vol = slice.quotes[atm_index(slice)].implied_vol;
    const double v0 = cfg.fixed_v0 >= 0.0 ? cfg.fixed_v0 : atm_vol * atm_vol;
    const double theta0 = cfg.init_theta > 0.0 ? cfg.init_theta : atm_vol * atm_vol;

    const auto strikes = pillar_strikes(env, slice);
    const auto phis = quote_phis(slice);
    std::vector<double> weights = cfg.weights;
    if (weights.empty()) weights.assign(slice.quotes.size(), 1.0);

    auto make_params = [&](const std::vector<double>& x) {
        HestonParams p;
        p.kappa = cfg.fixed_kappa;
        p.theta = std::exp(x[1]);
        p.sigma = std::exp(x[0]);
        p.rho = std::tanh(x[2]);
        p.v0 = v0;
        p.lambda = 0.0;
        return p;
    };

    auto objective = [&](const std::vector<double>& x) {
        const HestonParams p = make_params(x);
        try {
            const auto vols = vols_at_strikes(p, env, slice.tau, strikes, phis, cfg.quad);
            double sse = 0.0;
            for (std::size_t i = 0; i < vols.size(); ++i) {
                const double e = vols[i] - slice.quotes[i].implied_vol;
                sse += weights[i] * e * e;
            }
            return sse;
        } catch (const Error&) {
            return 1e300;  // infeasible trial point, reject
        }
    };

    SimplexOptions opts;
    opts.max_evals = cfg.max_evals;
    opts.diameter_tol = cfg.diameter_tol;
    opts.spread_tol = cfg.spread_tol;
    opts.restarts = cfg.restarts;
    const std::vector<double> x0 = {std::log(cfg.init_sigma), std::log(theta0),
                                    std::atanh(cfg.init_rho)};
    const std::vector<double> steps = {0.5, 0.5, 0.25};
    const auto sol = nelder_mead(objective, x0, steps, opts);

    CalibrationResult res;
    res.params = make_params(sol.x);
    res.strikes = strikes;
    res.market_vols.reserve(slice.quotes.size());
    for (const auto& q : slice.quotes) res.market_vols.push_back(q.implied_vol);
    res.model_vols = vols_at_strikes(res.params, env, slice.tau, strikes, phis, cfg.quad);
    res.per_pillar_errors.resize(strikes.size());
    res.sse = 0.0;
    for (std::size_t i = 0; i < strikes.size(); ++i) {
        res.per_pillar_errors[i] = res.model_vols[i] - res.market_vols[i];
        res.sse += weights[i] * res.per_pillar_errors[i] * res.per_pillar_errors[i];
    }
    res.feller = feller_check(res.params);
    res.iterations = sol.evals;
    res.converged = sol.converged;
    res.kappa_retry_hint = !res.feller.satisfied;
    res.trace = sol.trace;
    return res;
}

SurfaceResult calibrate_surface(const std::vector<SmileSlice>& slices, const MarketEnv& env,
                                const CalibrationConfig& cfg) {
    hestonfx::ensure_valid(env);
    if (slices.empty()) throw Error(ErrorCode::BadInput, "surface needs at least one slice");
    for (std::size_t i = 1; i < slices.size(); ++i)
        if (!(slices[i].tau > slices[i - 1].tau))
            throw Error(ErrorCode::BadInput, "slice tenors must be strictly increasing");

    SurfaceResult out;
    out.shared_v0 = cfg.fixed_v0;
    if (out.shared_v0 < 0.0) {
        const auto& first = slices.front();
        ensure_valid(first);
        const double atm = first.quotes[atm_index(first)].implied_vol;
        out.shared_v0 = atm * atm;
    }

    CalibrationConfig slice_cfg = cfg;
    slice_cfg.fixed_v0 = out.shared_v0;
    for (const auto& slice : slices) {
        out.tenors.push_back(slice.tau);
        SliceOutcome oc;
        try {
            oc.result = calibrate_slice(slice, env, slice_cfg);
            oc.ok = true;
        } catch (const Error& e) {
            oc.error = e.name();
        }
        out.slices.push_back(std::move(oc));
    }

    for (std::size_t i = 1; i < out.slices.size(); ++i) {
        const auto& lo = out.slices[i - 1];
        const auto& hi = out.slices[i];
        ForwardEntry fe;
        fe.t1 = out.tenors[i - 1];
        fe.t2 = out.tenors[i];
        if (lo.ok && hi.ok) {
            try {
                // H-weights use the later slice's theta: it is the level in
                // force on (t1, t2], where the forward parameters live.
                fe.forward_sigma = forward_vol_of_vol(
                    lo.result.params.sigma, hi.result.params.sigma, fe.t1, fe.t2,
                    cfg.fixed_kappa, hi.result.params.theta, out.shared_v0);
                fe.forward_rho = forward_correlation(lo.result.params.rho,
                                                     hi.result.params.rho, fe.t1, fe.t2);
                fe.ok = true;
            } catch (const Error& e) {
                fe.error = e.name();
            }
        } else {
            fe.error = "slice-failed";
        }
        out.forwards.push_back(std::move(fe));
    }
    return out;
}

} // namespace hestonfx
