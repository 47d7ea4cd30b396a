#include "hestonfx/errors.hpp"

namespace hestonfx {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPositiveKappa: return "NonPositiveKappa";
        case ErrorCode::NonPositiveTheta: return "NonPositiveTheta";
        case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
        case ErrorCode::CorrelationOutOfRange: return "CorrelationOutOfRange";
        case ErrorCode::NegativeInitialVariance: return "NegativeInitialVariance";
        case ErrorCode::NonFiniteLambda: return "NonFiniteLambda";
        case ErrorCode::NonPositiveSpot: return "NonPositiveSpot";
        case ErrorCode::NonFiniteRate: return "NonFiniteRate";
        case ErrorCode::NonPositiveStrike: return "NonPositiveStrike";
        case ErrorCode::NonPositiveMaturity: return "NonPositiveMaturity";
        case ErrorCode::InvalidOptionSign: return "InvalidOptionSign";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::BadInput: return "BadInput";
        case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
        case ErrorCode::MomentConditionViolated: return "MomentConditionViolated";
        case ErrorCode::StrikeOutOfRange: return "StrikeOutOfRange";
        case ErrorCode::HorizonMismatch: return "HorizonMismatch";
        case ErrorCode::DeltaOutOfRange: return "DeltaOutOfRange";
        case ErrorCode::PriceOutOfBand: return "PriceOutOfBand";
        case ErrorCode::BracketExhausted: return "BracketExhausted";
        case ErrorCode::DegenerateSlice: return "DegenerateSlice";
        case ErrorCode::NegativeForwardVariance: return "NegativeForwardVariance";
    }
    return "UnknownError";
}

bool is_input_error(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonPositiveKappa:
        case ErrorCode::NonPositiveTheta:
        case ErrorCode::NonPositiveSigma:
        case ErrorCode::CorrelationOutOfRange:
        case ErrorCode::NegativeInitialVariance:
        case ErrorCode::NonFiniteLambda:
        case ErrorCode::NonPositiveSpot:
        case ErrorCode::NonFiniteRate:
        case ErrorCode::NonPositiveStrike:
        case ErrorCode::NonPositiveMaturity:
        case ErrorCode::InvalidOptionSign:
        case ErrorCode::InvalidConfig:
        case ErrorCode::BadInput:
            return true;
        default:
            return false;
    }
}

namespace {

std::string join_messages(const std::vector<Violation>& violations) {
    std::string out = "parameter validation failed:";
    for (const auto& v : violations) {
        out += " [";
        out += error_name(v.code);
        out += "] ";
        out += v.message;
        out += ";";
    }
    return out;
}

} // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(violations.empty() ? ErrorCode::BadInput : violations.front().code,
            join_messages(violations)),
      violations_(std::move(violations)) {}

} // namespace hestonfx
