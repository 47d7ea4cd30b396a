#include "hestonfx/types.hpp"

#include <cmath>

namespace hestonfx {

namespace {

bool finite(double x) { return std::isfinite(x); }

} // namespace

std::vector<Violation> validate(const HestonParams& p) {
    std::vector<Violation> out;
    if (!finite(p.kappa) || p.kappa <= 0.0)
        out.push_back({ErrorCode::NonPositiveKappa, "kappa must be finite and > 0"});
    if (!finite(p.theta) || p.theta <= 0.0)
        out.push_back({ErrorCode::NonPositiveTheta, "theta must be finite and > 0"});
    if (!finite(p.sigma) || p.sigma <= 0.0)
        out.push_back({ErrorCode::NonPositiveSigma, "sigma must be finite and > 0"});
    if (!finite(p.rho) || p.rho <= -1.0 || p.rho >= 1.0)
        out.push_back({ErrorCode::CorrelationOutOfRange, "rho must lie in (-1, 1)"});
    if (!finite(p.v0) || p.v0 < 0.0)
        out.push_back({ErrorCode::NegativeInitialVariance, "v0 must be finite and >= 0"});
    if (!finite(p.lambda))
        out.push_back({ErrorCode::NonFiniteLambda, "lambda must be finite"});
    return out;
}

std::vector<Violation> validate(const MarketEnv& env) {
    std::vector<Violation> out;
    if (!finite(env.spot) || env.spot <= 0.0)
        out.push_back({ErrorCode::NonPositiveSpot, "spot must be finite and > 0"});
    if (!finite(env.rd))
        out.push_back({ErrorCode::NonFiniteRate, "rd must be finite"});
    if (!finite(env.rf))
        out.push_back({ErrorCode::NonFiniteRate, "rf must be finite"});
    return out;
}

std::vector<Violation> validate(const VanillaOption& opt) {
    std::vector<Violation> out;
    if (!finite(opt.strike) || opt.strike <= 0.0)
        out.push_back({ErrorCode::NonPositiveStrike, "strike must be finite and > 0"});
    if (!finite(opt.tau) || opt.tau <= 0.0)
        out.push_back({ErrorCode::NonPositiveMaturity, "tau must be finite and > 0"});
    if (opt.phi != 1 && opt.phi != -1)
        out.push_back({ErrorCode::InvalidOptionSign, "phi must be +1 (call) or -1 (put)"});
    return out;
}

namespace {

template <typename T>
void throw_if_invalid(const T& value) {
    auto violations = validate(value);
    if (!violations.empty()) throw ValidationError(std::move(violations));
}

} // namespace

void ensure_valid(const HestonParams& p) { throw_if_invalid(p); }
void ensure_valid(const MarketEnv& env) { throw_if_invalid(env); }
void ensure_valid(const VanillaOption& opt) { throw_if_invalid(opt); }

} // namespace hestonfx
