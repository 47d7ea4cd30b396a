#pragma once

#include <functional>

#include "hestonfx/errors.hpp"

namespace hestonfx {

enum class QuadRule {
    AdaptiveLobatto,   // default: adaptive Gauss-Lobatto after mapping [0,inf) onto (0,1]
    GaussLaguerre,     // fixed 100-point Gauss-Laguerre, provided for benchmarking
};

// Controls for the semi-infinite Fourier integrals behind the pricer.
struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_evals = 200000;
    double truncation = 100.0;   // upper phi bound, consulted only by fixed-bound rules
    QuadRule rule = QuadRule::AdaptiveLobatto;
};

struct QuadResult {
    double value;
    int evals;
    bool converged;
};

// Adaptive 4-point Gauss-Lobatto with a 7-point Kronrod refinement on each
// interval (the quadl scheme of Gander & Gautschi). Throws
// Error(QuadratureNotConverged) when the evaluation budget runs out before
// every subinterval meets the tolerance.
QuadResult adaptive_lobatto(const std::function<double(double)>& f, double a, double b,
                            const QuadratureConfig& cfg);

// integral of f over [0, inf) via the substitution phi = (1 - u) / u, which maps
// [0, inf) onto (0, 1]. The u = 1 endpoint (phi = 0) is evaluated at
// phi = 1e-12; integrands with a removable singularity at zero frequency must
// be finite there. The u = 0 endpoint (phi = inf) is taken as zero, which is
// exact for integrands decaying faster than phi^-2.
QuadResult integrate_semi_infinite(const std::function<double(double)>& f,
                                   const QuadratureConfig& cfg);

// Fixed 100-point Gauss-Laguerre rule for integral of f over [0, inf). The
// weight e^{-x} is absorbed into the stored weights, so f is the plain
// integrand. No error estimate; intended as a cross-check rule.
double gauss_laguerre_100(const std::function<double(double)>& f);

} // namespace hestonfx
