#include "hestonfx/variance.hpp"

#include <cmath>
#include <limits>

namespace hestonfx {

const char* regime_name(BesselRegime regime) {
    switch (regime) {
        case BesselRegime::HitsZeroRecurrent: return "hits-zero-recurrent";
        case BesselRegime::StrictlyPositiveBoundary: return "strictly-positive-boundary";
        case BesselRegime::StrictlyPositive: return "strictly-positive";
    }
    return "unknown";
}

FellerReport feller_check(const HestonParams& p) {
    ensure_valid(p);
    FellerReport rep;
    rep.alpha_dim = p.feller_alpha();
    rep.satisfied = rep.alpha_dim >= 2.0;
    rep.outflowing = rep.alpha_dim > 2.0;
    if (rep.alpha_dim > 2.0)
        rep.regime = BesselRegime::StrictlyPositive;
    else if (rep.alpha_dim == 2.0)
        rep.regime = BesselRegime::StrictlyPositiveBoundary;
    else
        rep.regime = BesselRegime::HitsZeroRecurrent;
    return rep;
}

BesselMap bessel_transform_check(double kappa, double sigma, double theta) {
    if (!(kappa > 0.0) || !(sigma > 0.0) || !(theta > 0.0) || !std::isfinite(kappa) ||
        !std::isfinite(sigma) || !std::isfinite(theta))
        throw Error(ErrorCode::BadInput, "bessel transform needs positive kappa, sigma, theta");
    BesselMap map;
    map.beta = sigma * sigma / (4.0 * kappa);
    // Same expression as HestonParams::feller_alpha so the two reports agree
    // bit for bit; theta / beta would round differently.
    map.alpha_dim = 4.0 * kappa * theta / (sigma * sigma);
    return map;
}

TermParams TermParams::flat(double kappa, double theta, double sigma, double horizon) {
    TermParams tp;
    tp.tenor_end = {horizon};
    tp.kappa = {kappa};
    tp.theta = {theta};
    tp.sigma = {sigma};
    return tp;
}

std::vector<Violation> validate(const TermParams& tp) {
    std::vector<Violation> out;
    const std::size_t n = tp.tenor_end.size();
    if (n == 0) {
        out.push_back({ErrorCode::BadInput, "term structure needs at least one segment"});
        return out;
    }
    if (tp.kappa.size() != n || tp.theta.size() != n || tp.sigma.size() != n)
        out.push_back({ErrorCode::BadInput, "kappa/theta/sigma must share the tenor grid"});
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(tp.tenor_end[i] > prev) || !std::isfinite(tp.tenor_end[i])) {
            out.push_back({ErrorCode::BadInput, "tenor ends must be finite and strictly increasing"});
            break;
        }
        prev = tp.tenor_end[i];
    }
    auto positive = [&](const std::vector<double>& v, ErrorCode code, const char* what) {
        for (double x : v)
            if (!(x > 0.0) || !std::isfinite(x)) {
                out.push_back({code, what});
                return;
            }
    };
    if (tp.kappa.size() == n) positive(tp.kappa, ErrorCode::NonPositiveKappa, "kappa values must be finite and > 0");
    if (tp.theta.size() == n) positive(tp.theta, ErrorCode::NonPositiveTheta, "theta values must be finite and > 0");
    if (tp.sigma.size() == n) positive(tp.sigma, ErrorCode::NonPositiveSigma, "sigma values must be finite and > 0");
    return out;
}

void ensure_valid(const TermParams& tp) {
    auto v = validate(tp);
    if (!v.empty()) throw ValidationError(std::move(v));
}

namespace {

void check_moment_inputs(const TermParams& tp, double v0, double t) {
    ensure_valid(tp);
    if (!(v0 >= 0.0) || !std::isfinite(v0))
        throw Error(ErrorCode::NegativeInitialVariance, "v0 must be finite and >= 0");
    if (!(t >= 0.0) || !std::isfinite(t))
        throw Error(ErrorCode::BadInput, "t must be finite and >= 0");
    if (t > tp.tenor_end.back() * (1.0 + 1e-12))
        throw Error(ErrorCode::HorizonMismatch, "t lies past the tenor grid");
}

} // namespace

double cir_mean(const TermParams& tp, double v0, double t) {
    check_moment_inputs(tp, v0, t);
    double g = v0;
    double a = 0.0;
    for (std::size_t i = 0; i < tp.segments() && a < t; ++i) {
        const double b = std::min(tp.tenor_end[i], t);
        const double e = std::exp(-tp.kappa[i] * (b - a));
        g = tp.theta[i] + (g - tp.theta[i]) * e;
        a = b;
    }
    return g;
}

double cir_variance(const TermParams& tp, double v0, double t) {
    check_moment_inputs(tp, v0, t);
    // Var(v_b) = e^{-2 kappa d} Var(v_a) + sigma^2 e^{-2K(b)} int_a^b g e^{2K},
    // with the segment integral written in decaying exponentials so nothing
    // overflows however long the grid is.
    double g = v0;
    double var = 0.0;
    double a = 0.0;
    for (std::size_t i = 0; i < tp.segments() && a < t; ++i) {
        const double b = std::min(tp.tenor_end[i], t);
        const double d = b - a;
        const double k = tp.kappa[i];
        const double th = tp.theta[i];
        const double s2 = tp.sigma[i] * tp.sigma[i];
        const double e1 = std::exp(-k * d);
        const double e2 = e1 * e1;
        var = e2 * var +
              s2 * (th * -std::expm1(-2.0 * k * d) / (2.0 * k) +
                    (g - th) * e1 * -std::expm1(-k * d) / k);
        g = th + (g - th) * e1;
        a = b;
    }
    return var;
}

double forward_h_weight(double t, double kappa, double theta, double v0) {
    return theta / (2.0 * kappa) * std::exp(2.0 * kappa * t) +
           (v0 - theta) / kappa * std::exp(kappa * t) + (theta / 2.0 - v0) / kappa;
}

namespace {

// H(t) e^{-2 kappa t_ref}: every exponent is <= 0 for t <= t_ref, so the
// ratio arithmetic in forward_vol_of_vol stays finite for any horizon.
double scaled_h_weight(double t, double t_ref, double kappa, double theta, double v0) {
    return theta / (2.0 * kappa) * std::exp(2.0 * kappa * (t - t_ref)) +
           (v0 - theta) / kappa * std::exp(kappa * (t - 2.0 * t_ref)) +
           (theta / 2.0 - v0) / kappa * std::exp(-2.0 * kappa * t_ref);
}

void check_forward_horizon(double t1, double t2) {
    if (!(t1 > 0.0) || !(t2 > t1) || !std::isfinite(t2))
        throw Error(ErrorCode::BadInput, "forward horizon needs 0 < t1 < t2");
}

} // namespace

double forward_vol_of_vol(double sigma_t1, double sigma_t2, double t1, double t2,
                          double kappa, double theta, double v0) {
    check_forward_horizon(t1, t2);
    if (!(sigma_t1 > 0.0) || !(sigma_t2 > 0.0) || !std::isfinite(sigma_t1) ||
        !std::isfinite(sigma_t2))
        throw Error(ErrorCode::NonPositiveSigma, "spot vol-of-vol levels must be finite and > 0");
    if (!(kappa > 0.0) || !(theta > 0.0) || !(v0 >= 0.0) || !std::isfinite(kappa) ||
        !std::isfinite(theta) || !std::isfinite(v0))
        throw Error(ErrorCode::BadInput, "forward vol-of-vol needs kappa, theta > 0 and v0 >= 0");
    if (sigma_t1 == sigma_t2) return sigma_t2;  // flat term structure, exact

    const double h1 = scaled_h_weight(t1, t2, kappa, theta, v0);
    const double h2 = scaled_h_weight(t2, t2, kappa, theta, v0);
    const double numer = sigma_t2 * sigma_t2 * h2 - sigma_t1 * sigma_t1 * h1;
    if (numer < 0.0)
        throw Error(ErrorCode::NegativeForwardVariance,
                    "term inputs imply negative forward variance of v");
    return std::sqrt(numer / (h2 - h1));
}

double forward_correlation(double rho_t1, double rho_t2, double t1, double t2) {
    check_forward_horizon(t1, t2);
    auto in_range = [](double r) { return std::isfinite(r) && r > -1.0 && r < 1.0; };
    if (!in_range(rho_t1) || !in_range(rho_t2))
        throw Error(ErrorCode::CorrelationOutOfRange, "correlations must lie in (-1, 1)");
    return rho_t2;
}

} // namespace hestonfx
