#pragma once

#include <cmath>
#include <complex>

#include "hestonfx/analytic.hpp"
#include "hestonfx/types.hpp"

// Characteristic-function exponent algebra shared by the quadrature and FFT
// pricers. General in the frequency argument: the FFT evaluates f_2 along a
// line shifted below the real axis.
namespace hestonfx::detail {

using cplx = std::complex<double>;
inline constexpr cplx kImag{0.0, 1.0};

// log(1 + z) without cancellation for small |z|.
inline cplx clog1p(const cplx& z) {
    const double x = z.real();
    const double y = z.imag();
    return {0.5 * std::log1p(2.0 * x + x * x + y * y), std::atan2(y, 1.0 + x)};
}

struct CfTermsC {
    cplx d, g, C, D;
};

inline CfTermsC cf_terms_c(const HestonParams& p, double mu, double tau, const cplx& phi,
                           int j, CfFormulation form) {
    const double u_j = (j == 1) ? 0.5 : -0.5;
    const double b_j = p.kappa + p.lambda - ((j == 1) ? p.sigma * p.rho : 0.0);
    const double s2 = p.sigma * p.sigma;

    const cplx beta = b_j - p.rho * p.sigma * phi * kImag;
    const cplx q = 2.0 * u_j * phi * kImag - phi * phi;
    const cplx d = std::sqrt(beta * beta - s2 * q);
    const cplx drift = mu * phi * kImag * tau;

    if (form == CfFormulation::Transformed) {
        // beta - d evaluated as (beta^2 - d^2)/(beta + d) = s2 q / (beta + d):
        // no cancellation as sigma -> 0, and the kappa theta / sigma^2
        // prefactor cancels analytically against it.
        const cplx bmd_over_s2 = q / (beta + d);           // (beta - d) / sigma^2
        const cplx gt = s2 * bmd_over_s2 / (beta + d);     // g-tilde = (beta - d)/(beta + d)
        const cplx emdt = std::exp(-d * tau);
        const cplx log_ratio = clog1p(-gt * emdt) - clog1p(-gt);
        const cplx C = drift + p.kappa * p.theta *
                                   (bmd_over_s2 * tau - (2.0 / s2) * log_ratio);
        const cplx D = bmd_over_s2 * (1.0 - emdt) / (1.0 - gt * emdt);
        return {d, gt, C, D};
    }

    // Original principal-branch form, kept verbatim so its long-maturity branch
    // crossings stay observable. Only the exp(d tau) overflow region switches
    // to an algebraically identical rewrite.
    if (phi == 0.0) return {d, 0.0, 0.0, 0.0};  // removable 0/0: d = beta there
    const cplx bpd = beta + d;
    const cplx g = bpd / (beta - d);
    const cplx dt = d * tau;
    cplx C, D;
    if (dt.real() < 650.0) {
        const cplx edt = std::exp(dt);
        C = drift + (p.kappa * p.theta / s2) *
                        (bpd * tau - 2.0 * std::log((1.0 - g * edt) / (1.0 - g)));
        D = (bpd / s2) * (1.0 - edt) / (1.0 - g * edt);
    } else {
        const cplx emdt = std::exp(-dt);
        C = drift + (p.kappa * p.theta / s2) *
                        (bpd * tau - 2.0 * (dt + std::log((emdt - g) / (1.0 - g))));
        D = (bpd / s2) * (emdt - 1.0) / (emdt - g);
    }
    return {d, g, C, D};
}

inline cplx cf_value(const HestonParams& p, double mu, double x, double v, double tau,
                     const cplx& phi, int j, CfFormulation form) {
    const CfTermsC t = cf_terms_c(p, mu, tau, phi, j, form);
    // exponents combined before the single final exponential
    return std::exp(t.C + t.D * v + kImag * phi * x);
}

} // namespace hestonfx::detail
