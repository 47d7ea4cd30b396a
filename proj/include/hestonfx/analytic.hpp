#pragma once

#include <complex>
#include <vector>

#include "hestonfx/math/quadrature.hpp"
#include "hestonfx/types.hpp"

namespace hestonfx {

// Two algebraically equivalent writings of the characteristic-function
// exponents. Original is the textbook form whose principal-branch complex log
// jumps at long maturities; Transformed flips the sign in front of the root
// term, stays on one branch for all maturities, and is the default everywhere.
// Original is retained for regression tests and the branch-jump detector.
enum class CfFormulation {
    Transformed,
    Original,
};

// Ingredients of f_j = exp(C_j + D_j v + i phi x). g holds g_j for Original
// and its reciprocal for Transformed.
struct CfTerms {
    std::complex<double> d;
    std::complex<double> g;
    std::complex<double> C;
    std::complex<double> D;
};

CfTerms cf_terms(const HestonParams& p, const MarketEnv& env, double tau, double phi_var,
                 int j, CfFormulation form = CfFormulation::Transformed);

// f_j(x, v, tau; phi) for j in {1, 2}. j = 2 is the log-spot characteristic
// function; j = 1 its share-measure counterpart.
std::complex<double> characteristic_fn(const HestonParams& p, const MarketEnv& env, double x,
                                       double v, double tau, double phi_var, int j,
                                       CfFormulation form = CfFormulation::Transformed);

// Tail probability P_j(x, v, tau; y) = Pr(log S_T > y) under the respective
// measure, computed as 1/2 + (1/pi) integral_0^inf Re{e^{-i phi y} f_j / (i phi)} dphi.
double prob_P(const HestonParams& p, const MarketEnv& env, double x, double v, double tau,
              double y, int j, const QuadratureConfig& quad = {},
              CfFormulation form = CfFormulation::Transformed);

// Undiscounted-probability weights entering the price:
// P_plus = (1 - phi)/2 + phi P_1, P_minus = (1 - phi)/2 + phi P_2.
double vanilla_price(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
                     const QuadratureConfig& quad = {},
                     CfFormulation form = CfFormulation::Transformed);

// First-order Greeks in closed form (single quadratures, no bumping).
double spot_delta(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
                  const QuadratureConfig& quad = {},
                  CfFormulation form = CfFormulation::Transformed);
double dual_delta(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
                  const QuadratureConfig& quad = {},
                  CfFormulation form = CfFormulation::Transformed);
double gamma(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
             const QuadratureConfig& quad = {},
             CfFormulation form = CfFormulation::Transformed);

struct RatesRho {
    double rho_rd;   // dPrice/d rd
    double rho_rf;   // dPrice/d rf
};
RatesRho rates_rho(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
                   const QuadratureConfig& quad = {},
                   CfFormulation form = CfFormulation::Transformed);

struct VegaVolga {
    double vega;    // dPrice/d v0
    double volga;   // d2Price/d v0^2
};
VegaVolga vega_volga(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
                     const QuadratureConfig& quad = {},
                     CfFormulation form = CfFormulation::Transformed);

// Calendar theta dPrice/dt from the pricing PDE residual: every term except
// the spot/variance cross derivative uses the closed-form Greeks above; the
// cross term bumps spot_delta in v0.
double calendar_theta(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
                      const QuadratureConfig& quad = {},
                      CfFormulation form = CfFormulation::Transformed);

struct Greeks {
    double price;
    double delta;
    double dual_delta;
    double gamma;
    double rho_rd;
    double rho_rf;
    double vega;
    double volga;
    double theta;
};
Greeks all_greeks(const HestonParams& p, const MarketEnv& env, const VanillaOption& opt,
                  const QuadratureConfig& quad = {},
                  CfFormulation form = CfFormulation::Transformed);

// Density of the centred log return x_t = log(S_t / S_0) - (rd - rf) t at each
// grid point, by Fourier inversion of exp(F_t(xi)). Independent of the spot
// level and rates by construction.
std::vector<double> marginal_density(const HestonParams& p, double time_lag,
                                     const std::vector<double>& x_grid,
                                     const QuadratureConfig& quad = {});

// Scans Im C_j on a frequency grid and flags steps larger than
// pi kappa theta / sigma^2, the signature of a principal-branch crossing.
struct BranchScanReport {
    int jump_count = 0;
    double first_jump_phi = 0.0;   // meaningful when jump_count > 0
    double max_jump = 0.0;         // largest |delta Im C_j| seen
    double threshold = 0.0;
    bool continuous() const { return jump_count == 0; }
};
BranchScanReport branch_jump_scan(const HestonParams& p, const MarketEnv& env, double tau,
                                  int j, CfFormulation form, double phi_max = 100.0,
                                  double step = 0.01);

} // namespace hestonfx
