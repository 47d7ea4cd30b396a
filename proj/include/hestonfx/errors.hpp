#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hestonfx {

// Stable machine-readable failure names. Throw sites pick exactly one, the CLI
// prints them verbatim on the error stream, and tests match on them.
enum class ErrorCode {
    // input validation
    NonPositiveKappa,
    NonPositiveTheta,
    NonPositiveSigma,
    CorrelationOutOfRange,
    NegativeInitialVariance,
    NonFiniteLambda,
    NonPositiveSpot,
    NonFiniteRate,
    NonPositiveStrike,
    NonPositiveMaturity,
    InvalidOptionSign,
    InvalidConfig,
    BadInput,
    // computation
    QuadratureNotConverged,
    MomentConditionViolated,
    StrikeOutOfRange,
    HorizonMismatch,
    DeltaOutOfRange,
    PriceOutOfBand,
    BracketExhausted,
    DegenerateSlice,
    NegativeForwardVariance,
};

const char* error_name(ErrorCode code);

// True for errors that indicate bad user input rather than a failed computation.
// The CLI maps these to exit code 2, everything else to exit code 1.
bool is_input_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what_arg)
        : std::runtime_error(what_arg), code_(code) {}

    ErrorCode code() const { return code_; }
    const char* name() const { return error_name(code_); }

private:
    ErrorCode code_;
};

struct Violation {
    ErrorCode code;
    std::string message;
};

// Carries the complete list of violated constraints, not just the first one.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);

    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

} // namespace hestonfx
