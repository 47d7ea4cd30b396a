#pragma once

#include "hestonfx/types.hpp"

namespace hestonfx::gk {

// Garman-Kohlhagen closed forms: Black-Scholes on an FX rate with the foreign
// rate as the dividend yield. Used for strike retrieval from deltas, implied
// vol inversion, and as the sigma -> 0 limit of the stochastic-variance model.

double price(const MarketEnv& env, const VanillaOption& opt, double vol);

// Spot delta phi e^{-rf tau} N(phi d1).
double spot_delta(const MarketEnv& env, const VanillaOption& opt, double vol);

// dPrice/dVol, identical for calls and puts.
double vega(const MarketEnv& env, const VanillaOption& opt, double vol);

} // namespace hestonfx::gk
