#include "hestonfx/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "hestonfx/detail/cf_core.hpp"

namespace hestonfx {

namespace {

using cplx = std::complex<double>;
using detail::cf_terms_c;
constexpr cplx kI{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;
constexpr double kPhiFloor = 1e-12;   // zero-frequency limit is evaluated here

enum class Kind {
    TailProb,    // Re{ e^{-i phi y} f_j / (i phi) }
    Density,     // Re{ e^{-i phi y} f_j }
    DvTail,      // Re{ D_j e^{-i phi y} f_j / (i phi) }
    Dv2Tail,     // Re{ D_j^2 e^{-i phi y} f_j / (i phi) }
};

double cf_fourier_integral(const HestonParams& p, double mu, double x, double v, double tau,
                           double y, int j, CfFormulation form, const QuadratureConfig& quad,
                           Kind kind) {
    auto integrand = [&](double phi_var) -> double {
        const cplx phi(std::max(phi_var, kPhiFloor), 0.0);
        const detail::CfTermsC t = cf_terms_c(p, mu, tau, phi, j, form);
        cplx val = std::exp(t.C + t.D * v + kI * phi * (x - y));
        switch (kind) {
            case Kind::TailProb: val /= kI * phi; break;
            case Kind::Density: break;
            case Kind::DvTail: val *= t.D / (kI * phi); break;
            case Kind::Dv2Tail: val *= t.D * t.D / (kI * phi); break;
        }
        return val.real();
    };
    if (quad.rule == QuadRule::GaussLaguerre) return gauss_laguerre_100(integrand);
    return integrate_semi_infinite(integrand, quad).value;
}

struct PricePieces {
    double df_d, df_f;   // domestic / foreign discount factors
    double x, y;         // log spot, log strike
};

PricePieces pieces(const MarketEnv& env, const VanillaOption& opt) {
    return {std::exp(-env.rd * opt.tau), std::exp(-env.rf * opt.tau), std::log(env.spot),
            std::log(opt.strike)};
}

void check_inputs(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt) {
    ensure_valid(p);
    ensure_valid(env);
    ensure_valid(opt);
}

} // namespace

CfTerms cf_terms(const HestonParams& p, const MarketEnv& env, double tau, double phi_var,
                 int j, CfFormulation form) {
    ensure_valid(p);
    if (j != 1 && j != 2)
        throw Error(ErrorCode::InvalidConfig, "cf term index j must be 1 or 2");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw Error(ErrorCode::NonPositiveMaturity, "tau must be finite and > 0");
    const detail::CfTermsC t = cf_terms_c(p, env.drift(), tau, cplx(phi_var, 0.0), j, form);
    return {t.d, t.g, t.C, t.D};
}

std::complex<double> characteristic_fn(const HestonParams& p, const MarketEnv& env, double x,
                                       double v, double tau, double phi_var, int j,
                                       CfFormulation form) {
    ensure_valid(p);
    if (j != 1 && j != 2)
        throw Error(ErrorCode::InvalidConfig, "cf term index j must be 1 or 2");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw Error(ErrorCode::NonPositiveMaturity, "tau must be finite and > 0");
    return detail::cf_value(p, env.drift(), x, v, tau, cplx(phi_var, 0.0), j, form);
}

double prob_P(const HestonParams& p, const MarketEnv& env, double x, double v, double tau,
              double y, int j, const QuadratureConfig& quad, CfFormulation form) {
    ensure_valid(p);
    if (j != 1 && j != 2)
        throw Error(ErrorCode::InvalidConfig, "cf term index j must be 1 or 2");
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw Error(ErrorCode::NonPositiveMaturity, "tau must be finite and > 0");
    return 0.5 +
           cf_fourier_integral(p, env.drift(), x, v, tau, y, j, form, quad, Kind::TailProb) /
               kPi;
}

double vanilla_price(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
                     const QuadratureConfig& quad, CfFormulation form) {
    check_inputs(p, env, opt);
    const auto pc = pieces(env, opt);
    const double P1 = prob_P(p, env, pc.x, p.v0, opt.tau, pc.y, 1, quad, form);
    const double P2 = prob_P(p, env, pc.x, p.v0, opt.tau, pc.y, 2, quad, form);
    const double phi = opt.phi;
    const double p_plus = 0.5 * (1.0 - phi) + phi * P1;
    const double p_minus = 0.5 * (1.0 - phi) + phi * P2;
    const double raw = phi * (env.spot * pc.df_f * p_plus - opt.strike * pc.df_d * p_minus);
    return std::max(raw, 0.0);   // wing quadrature noise only; never a real sign flip
}

double spot_delta(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
                  const QuadratureConfig& quad, CfFormulation form) {
    check_inputs(p, env, opt);
    const auto pc = pieces(env, opt);
    const double P1 = prob_P(p, env, pc.x, p.v0, opt.tau, pc.y, 1, quad, form);
    const double phi = opt.phi;
    return phi * pc.df_f * (0.5 * (1.0 - phi) + phi * P1);
}

double dual_delta(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
                  const QuadratureConfig& quad, CfFormulation form) {
    check_inputs(p, env, opt);
    const auto pc = pieces(env, opt);
    const double P2 = prob_P(p, env, pc.x, p.v0, opt.tau, pc.y, 2, quad, form);
    const double phi = opt.phi;
    return -phi * pc.df_d * (0.5 * (1.0 - phi) + phi * P2);
}

double gamma(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
             const QuadratureConfig& quad, CfFormulation form) {
    check_inputs(p, env, opt);
    const auto pc = pieces(env, opt);
    const double p1 = cf_fourier_integral(p, env.drift(), pc.x, p.v0, opt.tau, pc.y, 1, form,
                                          quad, Kind::Density) / kPi;
    return pc.df_f / env.spot * p1;
}

RatesRho rates_rho(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
                   const QuadratureConfig& quad, CfFormulation form) {
    check_inputs(p, env, opt);
    const auto pc = pieces(env, opt);
    const double P1 = prob_P(p, env, pc.x, p.v0, opt.tau, pc.y, 1, quad, form);
    const double P2 = prob_P(p, env, pc.x, p.v0, opt.tau, pc.y, 2, quad, form);
    const double phi = opt.phi;
    const double p_plus = 0.5 * (1.0 - phi) + phi * P1;
    const double p_minus = 0.5 * (1.0 - phi) + phi * P2;
    return {phi * opt.strike * pc.df_d * opt.tau * p_minus,
            -phi * env.spot * pc.df_f * opt.tau * p_plus};
}

VegaVolga vega_volga(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
                     const QuadratureConfig& quad, CfFormulation form) {
    check_inputs(p, env, opt);
    const auto pc = pieces(env, opt);
    const double mu = env.drift();
    const double dP1 =
        cf_fourier_integral(p, mu, pc.x, p.v0, opt.tau, pc.y, 1, form, quad, Kind::DvTail) / kPi;
    const double dP2 =
        cf_fourier_integral(p, mu, pc.x, p.v0, opt.tau, pc.y, 2, form, quad, Kind::DvTail) / kPi;
    const double d2P1 =
        cf_fourier_integral(p, mu, pc.x, p.v0, opt.tau, pc.y, 1, form, quad, Kind::Dv2Tail) / kPi;
    const double d2P2 =
        cf_fourier_integral(p, mu, pc.x, p.v0, opt.tau, pc.y, 2, form, quad, Kind::Dv2Tail) / kPi;
    // the (1 - phi)/2 piece of P_plus/P_minus has no v0 dependence, so the phi
    // factors cancel: vega and volga are identical for calls and puts.
    return {env.spot * pc.df_f * dP1 - opt.strike * pc.df_d * dP2,
            env.spot * pc.df_f * d2P1 - opt.strike * pc.df_d * d2P2};
}

double calendar_theta(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
                      const QuadratureConfig& quad, CfFormulation form) {
    check_inputs(p, env, opt);
    const double price = vanilla_price(p, env, opt, quad, form);
    const double delta = spot_delta(p, env, opt, quad, form);
    const double gam = gamma(p, env, opt, quad, form);
    const auto vv = vega_volga(p, env, opt, quad, form);

    // cross derivative d2Price/dS dv0 by central bump of delta in v0
    const double hv = std::max(1e-6, 1e-3 * p.v0);
    HestonParams up = p, dn = p;
    up.v0 = p.v0 + hv;
    double cross;
    if (p.v0 >= hv) {
        dn.v0 = p.v0 - hv;
        cross = (spot_delta(up, env, opt, quad, form) - spot_delta(dn, env, opt, quad, form)) /
                (2.0 * hv);
    } else {
        cross = (spot_delta(up, env, opt, quad, form) - delta) / hv;
    }

    const double S = env.spot;
    const double v = p.v0;
    return env.rd * price - 0.5 * v * S * S * gam - p.rho * p.sigma * v * S * cross -
           0.5 * p.sigma * p.sigma * v * vv.volga - (env.rd - env.rf) * S * delta -
           (p.kappa * (p.theta - v) - p.lambda * v) * vv.vega;
}

Greeks all_greeks(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
                  const QuadratureConfig& quad, CfFormulation form) {
    Greeks g{};
    g.price = vanilla_price(p, env, opt, quad, form);
    g.delta = spot_delta(p, env, opt, quad, form);
    g.dual_delta = dual_delta(p, env, opt, quad, form);
    g.gamma = gamma(p, env, opt, quad, form);
    const auto rr = rates_rho(p, env, opt, quad, form);
    g.rho_rd = rr.rho_rd;
    g.rho_rf = rr.rho_rf;
    const auto vv = vega_volga(p, env, opt, quad, form);
    g.vega = vv.vega;
    g.volga = vv.volga;
    g.theta = calendar_theta(p, env, opt, quad, form);
    return g;
}

std::vector<double> marginal_density(const HestonParams& p, double time_lag,
                                     const std::vector<double>& x_grid,
                                     const QuadratureConfig& quad) {
    ensure_valid(p);
    if (!(time_lag > 0.0) || !std::isfinite(time_lag))
        throw Error(ErrorCode::NonPositiveMaturity, "time lag must be finite and > 0");

    const double s2 = p.sigma * p.sigma;
    const double kt_over_s2 = p.kappa * p.theta / s2;

    // log of the Fourier transform exp(F_t(xi)) of the centred return density;
    // cosh/sinh folded into exponentials so large |Omega| t cannot overflow.
    auto log_transform = [&](double xi) -> cplx {
        const cplx gam = p.kappa + kI * p.rho * p.sigma * xi;
        const cplx omega = std::sqrt(gam * gam + s2 * (xi * xi - kI * xi));
        const cplx A = (omega * omega - gam * gam + 2.0 * p.kappa * gam) /
                       (2.0 * p.kappa * omega);
        const cplx z = 0.5 * omega * time_lag;
        // log(cosh z + A sinh z) = z + log((1+A)/2 + e^{-2z}(1-A)/2), Re z >= 0
        const cplx logcs =
            z + std::log(0.5 * (1.0 + A) + 0.5 * (1.0 - A) * std::exp(-2.0 * z));
        return kt_over_s2 * gam * time_lag - 2.0 * kt_over_s2 * logcs;
    };

    std::vector<double> out;
    out.reserve(x_grid.size());
    for (const double x : x_grid) {
        auto integrand = [&](double xi) -> double {
            // integrand is even in xi up to conjugation, so fold to [0, inf)
            return std::exp(log_transform(xi) + kI * xi * x).real();
        };
        const double dens = integrate_semi_infinite(integrand, quad).value / kPi;
        out.push_back(dens);
    }
    return out;
}

BranchScanReport branch_jump_scan(const HestonParams& p, const MarketEnv& env, double tau,
                                  int j, CfFormulation form, double phi_max, double step) {
    ensure_valid(p);
    if (!(phi_max > 0.0) || !(step > 0.0) || step >= phi_max)
        throw Error(ErrorCode::InvalidConfig, "branch scan needs 0 < step < phi_max");

    BranchScanReport report;
    report.threshold = kPi * p.kappa * p.theta / (p.sigma * p.sigma);

    double prev = cf_terms(p, env, tau, step, j, form).C.imag();
    for (double phi = 2.0 * step; phi <= phi_max + 0.5 * step; phi += step) {
        const double cur = cf_terms(p, env, tau, phi, j, form).C.imag();
        const double jump = std::fabs(cur - prev);
        report.max_jump = std::max(report.max_jump, jump);
        if (jump > report.threshold) {
            if (report.jump_count == 0) report.first_jump_phi = phi;
            ++report.jump_count;
        }
        prev = cur;
    }
    return report;
}

} // namespace hestonfx
