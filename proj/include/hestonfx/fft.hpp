#pragma once

#include <complex>
#include <vector>

#include "hestonfx/analytic.hpp"
#include "hestonfx/types.hpp"

namespace hestonfx {

// Damped-call transform grid: n frequencies spaced eta apart, producing a
// log-strike ladder of spacing 2 pi / (n eta) centred on zero. The Simpson
// weights alias the deep-ITM wing at k - pi/eta into every node with weight
// e^{-alpha pi / eta} S e^{-rf tau} / 3, so eta must keep alpha pi / eta
// large: 0.1 puts the alias near 7e-11, while 0.25 would leave 1e-4.
struct FftGrid {
    int n = 4096;          // power of two
    double eta = 0.1;      // frequency spacing
    double alpha = 0.75;   // damping exponent; needs E[S_T^(alpha+1)] finite
};

struct FftResult {
    std::vector<double> log_strikes;   // k_u = -pi/eta + u * 2 pi / (n eta)
    std::vector<double> call_prices;   // clamped at zero in the wings
    FftGrid grid;
    double tau = 0.0;
    double fwd_disc = 0.0;             // S e^{-rf tau}
    double df_dom = 0.0;               // e^{-rd tau}
    int clamped = 0;                   // count of negative wing prices clamped

    // Linear interpolation in strike between the two bracketing grid nodes.
    // Deliberately linear in the strike itself: the call price is convex in
    // strike, so the chord never undershoots the true curve.
    // Throws Error(StrikeOutOfRange) outside the ladder.
    double call_at(double strike) const;

    // Parity-implied put, from the interpolated call.
    double put_at(double strike) const;

    // Parity-implied put at a grid node.
    double put_on_grid(int u) const;
};

// Damped-call Fourier transform psi(v) = e^{-rd tau} f_2(v - (alpha+1) i) /
// (alpha^2 + alpha - v^2 + i (2 alpha + 1) v). Throws
// Error(MomentConditionViolated) when the moment E[S_T^(alpha+1)] is not finite.
std::complex<double> psi_transform(const HestonParams& p, const MarketEnv& env, double tau,
                                   double v, const FftGrid& grid = {});

// Whole call ladder by one FFT over the Simpson-weighted transform samples.
FftResult fft_price_ladder(const HestonParams& p, const MarketEnv& env, double tau,
                           const FftGrid& grid = {});

} // namespace hestonfx
