#pragma once

#include <vector>

#include "hestonfx/errors.hpp"

namespace hestonfx {

// Square-root stochastic variance model for an FX rate under the domestic
// risk-neutral measure:
//
//   dS = S ((rd - rf) dt + sqrt(v) dW1)
//   dv = kappa (theta - v) dt + sigma sqrt(v) dW2,   d<W1,W2> = rho dt
//
// lambda is the market price of volatility risk; pricing formulas keep it as
// an explicit shift of the mean-reversion speed.
struct HestonParams {
    double kappa;          // variance mean-reversion speed, > 0
    double theta;          // long-run variance level, > 0
    double sigma;          // volatility of variance, > 0
    double rho;            // spot/variance correlation, in (-1, 1)
    double v0;             // initial variance, >= 0
    double lambda = 0.0;   // market price of volatility risk, finite

    // Dimensionless boundary classification number 4 kappa theta / sigma^2.
    double feller_alpha() const { return 4.0 * kappa * theta / (sigma * sigma); }
};

struct MarketEnv {
    double spot;   // current FX rate (domestic units per foreign unit), > 0
    double rd;     // domestic short rate, finite
    double rf;     // foreign short rate, finite

    double drift() const { return rd - rf; }
};

struct VanillaOption {
    double strike;   // > 0
    double tau;      // time to maturity in years, > 0
    int phi;         // +1 call, -1 put

    static VanillaOption call(double strike, double tau) { return {strike, tau, +1}; }
    static VanillaOption put(double strike, double tau) { return {strike, tau, -1}; }
};

// Each validate() returns the complete list of violated constraints (empty
// means valid); ensure_valid() throws ValidationError carrying that list.
std::vector<Violation> validate(const HestonParams& p);
std::vector<Violation> validate(const MarketEnv& env);
std::vector<Violation> validate(const VanillaOption& opt);

void ensure_valid(const HestonParams& p);
void ensure_valid(const MarketEnv& env);
void ensure_valid(const VanillaOption& opt);

} // namespace hestonfx
