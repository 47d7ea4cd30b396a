#pragma once

namespace hestonfx::normal {

double pdf(double x);

// Phi(x) via erfc, accurate in both tails.
double cdf(double x);

// Phi^-1(p) for p in (0, 1), Wichura's PPND16 algorithm (AS 241), relative
// accuracy around 1e-15 across the full range.
double inv_cdf(double p);

} // namespace hestonfx::normal
