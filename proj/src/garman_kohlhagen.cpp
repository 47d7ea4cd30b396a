#include "hestonfx/garman_kohlhagen.hpp"

#include <cmath>

#include "hestonfx/math/normal.hpp"

namespace hestonfx::gk {

namespace {

struct D12 {
    double d1, d2;
};

D12 d12(const MarketEnv& env, const VanillaOption& opt, double vol) {
    const double sq = vol * std::sqrt(opt.tau);
    const double d1 = (std::log(env.spot / opt.strike) +
                       (env.rd - env.rf + 0.5 * vol * vol) * opt.tau) / sq;
    return {d1, d1 - sq};
}

} // namespace

double price(const MarketEnv& env, const VanillaOption& opt, double vol) {
    const auto [d1, d2] = d12(env, opt, vol);
    const double phi = opt.phi;
    return phi * (env.spot * std::exp(-env.rf * opt.tau) * normal::cdf(phi * d1) -
                  opt.strike * std::exp(-env.rd * opt.tau) * normal::cdf(phi * d2));
}

double spot_delta(const MarketEnv& env, const VanillaOption& opt, double vol) {
    const auto [d1, d2] = d12(env, opt, vol);
    (void)d2;
    return opt.phi * std::exp(-env.rf * opt.tau) * normal::cdf(opt.phi * d1);
}

double vega(const MarketEnv& env, const VanillaOption& opt, double vol) {
    const auto [d1, d2] = d12(env, opt, vol);
    (void)d2;
    return env.spot * std::exp(-env.rf * opt.tau) * normal::pdf(d1) * std::sqrt(opt.tau);
}

} // namespace hestonfx::gk
