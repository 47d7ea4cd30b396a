#pragma once

#include <string>
#include <vector>

#include "hestonfx/calibration.hpp"
#include "hestonfx/types.hpp"

namespace hestonfx::io {

// Flat parameter document: one JSON object with exactly the keys
// kappa, theta, sigma, rho, v0, lambda, spot, rd, rf. Missing or non-numeric
// keys raise BadInput naming every offender at once.
struct ParamsDoc {
    HestonParams params;
    MarketEnv env;
};

ParamsDoc parse_params_json(const std::string& text);
ParamsDoc read_params_json(const std::string& path);
std::string params_to_json(const HestonParams& p, const MarketEnv& env);

// Smile quotes as CSV with header `tenor_years,delta,quote_vol`, one quote
// per row, grouped into slices by tenor (ascending; pillar order preserved).
std::vector<SmileSlice> parse_smile_csv(const std::string& text);
std::vector<SmileSlice> read_smile_csv(const std::string& path);
std::string smile_to_csv(const std::vector<SmileSlice>& slices);

// Shortest round-trip decimal for doubles; used everywhere CSV is emitted so
// output is byte-identical across runs.
std::string fmt(double x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace hestonfx::io
