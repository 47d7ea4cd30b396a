#pragma once

#include <cstddef>
#include <vector>

#include "hestonfx/errors.hpp"
#include "hestonfx/types.hpp"

namespace hestonfx {

enum class BesselRegime { HitsZeroRecurrent, StrictlyPositiveBoundary, StrictlyPositive };

const char* regime_name(BesselRegime regime);

// alpha_dim = 4 kappa theta / sigma^2, the squared-Bessel dimension of the
// variance process. satisfied and outflowing are both derived from alpha_dim
// so the report can never contradict itself: satisfied at alpha >= 2,
// outflowing strictly above 2 (the alpha = 2 boundary is satisfied but not
// outflowing).
struct FellerReport {
    double alpha_dim = 0.0;
    bool satisfied = false;
    bool outflowing = false;
    BesselRegime regime = BesselRegime::HitsZeroRecurrent;
};

FellerReport feller_check(const HestonParams& p);

// v = Y with Y a squared Bessel process scaled by beta = sigma^2 / (4 kappa);
// alpha_dim = theta / beta matches feller_check bit for bit.
struct BesselMap {
    double beta = 0.0;
    double alpha_dim = 0.0;
};

BesselMap bessel_transform_check(double kappa, double sigma, double theta);

// Piecewise-constant kappa/theta/sigma sharing one tenor grid. Segment i is
// right-continuous and covers (tenor_end[i-1], tenor_end[i]], starting at 0.
struct TermParams {
    std::vector<double> tenor_end;
    std::vector<double> kappa;
    std::vector<double> theta;
    std::vector<double> sigma;

    static TermParams flat(double kappa, double theta, double sigma, double horizon);
    std::size_t segments() const { return tenor_end.size(); }
};

std::vector<Violation> validate(const TermParams& tp);
void ensure_valid(const TermParams& tp);

// E(v_t) and Var(v_t) for the time-dependent CIR process, evaluated exactly
// segment by segment (no numerical quadrature). t past the tenor grid is a
// HorizonMismatch.
double cir_mean(const TermParams& tp, double v0, double t);
double cir_variance(const TermParams& tp, double v0, double t);

// H(t) = int_0^t E(v_s) e^{2 kappa s} ds for constant kappa/theta/v0, the
// weight behind the forward vol-of-vol formula.
double forward_h_weight(double t, double kappa, double theta, double v0);

// Forward vol-of-vol on (t1, t2]: the level that, applied after t1 on top of
// sigma_t1 before t1, reproduces the flat-sigma_t2 variance of v at t2.
// kappa, theta, v0 are held constant across the horizon.
double forward_vol_of_vol(double sigma_t1, double sigma_t2, double t1, double t2,
                          double kappa, double theta, double v0);

// Forward correlation on (t1, t2] is just the later spot level.
double forward_correlation(double rho_t1, double rho_t2, double t1, double t2);

} // namespace hestonfx
