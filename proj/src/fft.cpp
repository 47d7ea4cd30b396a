#include "hestonfx/fft.hpp"

#include <algorithm>
#include <cmath>

#include "hestonfx/detail/cf_core.hpp"

namespace hestonfx {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;

// In-place radix-2 Cooley-Tukey, forward convention X_u = sum_j e^{-2 pi i j u / n} x_j.
void fft_inplace(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * kPi / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

void check_grid(const FftGrid& grid) {
    const bool pow2 = grid.n > 1 && (grid.n & (grid.n - 1)) == 0;
    if (!pow2 || !(grid.eta > 0.0) || !(grid.alpha > 0.0))
        throw Error(ErrorCode::InvalidConfig,
                    "FFT grid needs n a power of two, eta > 0, alpha > 0");
}

cplx shifted_cf(const HestonParams& p, const MarketEnv& env, double tau, double v,
                double alpha) {
    // f_2 along the damped line: frequency v - (alpha + 1) i, j = 2 branch.
    const cplx phi(v, -(alpha + 1.0));
    return detail::cf_value(p, env.drift(), std::log(env.spot), p.v0, tau, phi, 2,
                            CfFormulation::Transformed);
}

} // namespace

std::complex<double> psi_transform(const HestonParams& p, const MarketEnv& env, double tau,
                                   double v, const FftGrid& grid) {
    ensure_valid(p);
    ensure_valid(env);
    check_grid(grid);
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw Error(ErrorCode::NonPositiveMaturity, "tau must be finite and > 0");

    const double alpha = grid.alpha;
    // moment condition E[S_T^(alpha+1)] < inf, checked at zero frequency
    const cplx moment = shifted_cf(p, env, tau, 0.0, alpha);
    if (!std::isfinite(moment.real()) || !std::isfinite(moment.imag()))
        throw Error(ErrorCode::MomentConditionViolated,
                    "E[S_T^(alpha+1)] is not finite for this grid damping");

    const cplx numerator = std::exp(-env.rd * tau) * shifted_cf(p, env, tau, v, alpha);
    const cplx denominator(alpha * alpha + alpha - v * v, (2.0 * alpha + 1.0) * v);
    return numerator / denominator;
}

FftResult fft_price_ladder(const HestonParams& p, const MarketEnv& env, double tau,
                           const FftGrid& grid) {
    ensure_valid(p);
    ensure_valid(env);
    check_grid(grid);
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw Error(ErrorCode::NonPositiveMaturity, "tau must be finite and > 0");

    const int n = grid.n;
    const double eta = grid.eta;
    const double alpha = grid.alpha;
    const double lam = 2.0 * kPi / (n * eta);   // log-strike spacing
    const double b = kPi / eta;                 // ladder spans [-b, b)

    {
        const cplx moment = shifted_cf(p, env, tau, 0.0, alpha);
        if (!std::isfinite(moment.real()) || !std::isfinite(moment.imag()))
            throw Error(ErrorCode::MomentConditionViolated,
                        "E[S_T^(alpha+1)] is not finite for this grid damping");
    }

    const double df_dom = std::exp(-env.rd * tau);
    std::vector<cplx> work(n);
    for (int j = 0; j < n; ++j) {
        const double vj = eta * j;
        const cplx numerator = df_dom * shifted_cf(p, env, tau, vj, alpha);
        const cplx denominator(alpha * alpha + alpha - vj * vj, (2.0 * alpha + 1.0) * vj);
        const cplx psi = numerator / denominator;
        // Simpson weights eta/3 {3 + (-1)^(j+1) - delta_j0}: eta/3, 4eta/3, 2eta/3, ...
        const double w = (eta / 3.0) * (3.0 + ((j % 2 == 0) ? -1.0 : 1.0) - (j == 0 ? 1.0 : 0.0));
        work[j] = std::exp(cplx(0.0, b * vj)) * psi * w;
    }
    fft_inplace(work);

    FftResult out;
    out.grid = grid;
    out.tau = tau;
    out.fwd_disc = env.spot * std::exp(-env.rf * tau);
    out.df_dom = df_dom;
    out.log_strikes.resize(n);
    out.call_prices.resize(n);
    for (int u = 0; u < n; ++u) {
        const double k = -b + lam * u;
        out.log_strikes[u] = k;
        const double raw = std::exp(-alpha * k) / kPi * work[u].real();
        if (raw < 0.0) {
            ++out.clamped;
            out.call_prices[u] = 0.0;
        } else {
            out.call_prices[u] = raw;
        }
    }
    return out;
}

double FftResult::call_at(double strike) const {
    if (!(strike > 0.0) || !std::isfinite(strike))
        throw Error(ErrorCode::NonPositiveStrike, "strike must be finite and > 0");
    const double k = std::log(strike);
    if (k < log_strikes.front() || k > log_strikes.back())
        throw Error(ErrorCode::StrikeOutOfRange, "strike outside the FFT ladder");
    const auto it = std::upper_bound(log_strikes.begin(), log_strikes.end(), k);
    const std::size_t hi = std::min<std::size_t>(
        log_strikes.size() - 1, static_cast<std::size_t>(it - log_strikes.begin()));
    if (hi == 0) return call_prices.front();
    const std::size_t lo = hi - 1;
    // Interpolate linearly in the strike itself, not in k: the call is convex in
    // strike, so the chord sits above the curve and the lookup never undershoots.
    // Linear-in-k would not have that guarantee (deep ITM the call is concave in k).
    const double k_lo = std::exp(log_strikes[lo]);
    const double k_hi = std::exp(log_strikes[hi]);
    const double t = (strike - k_lo) / (k_hi - k_lo);
    return (1.0 - t) * call_prices[lo] + t * call_prices[hi];
}

double FftResult::put_at(double strike) const {
    const double call = call_at(strike);
    return std::max(call - fwd_disc + strike * df_dom, 0.0);
}

double FftResult::put_on_grid(int u) const {
    if (u < 0 || static_cast<std::size_t>(u) >= call_prices.size())
        throw Error(ErrorCode::StrikeOutOfRange, "grid index outside the ladder");
    const double strike = std::exp(log_strikes[u]);
    return std::max(call_prices[u] - fwd_disc + strike * df_dom, 0.0);
}

} // namespace hestonfx
