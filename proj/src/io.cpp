#include "hestonfx/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hestonfx::io {

namespace {

constexpr const char* kParamKeys[] = {"kappa", "theta", "sigma", "rho", "v0",
                                      "lambda", "spot", "rd", "rf"};

double pick(const nlohmann::json& j, const char* key) { return j.at(key).get<double>(); }

} // namespace

ParamsDoc parse_params_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw Error(ErrorCode::BadInput, "parameter document is not a JSON object");

    std::string missing, unknown;
    for (const char* key : kParamKeys) {
        if (!j.contains(key) || !j.at(key).is_number()) {
            if (!missing.empty()) missing += ", ";
            missing += key;
        }
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find_if(std::begin(kParamKeys), std::end(kParamKeys),
                         [&](const char* k) { return it.key() == k; }) ==
            std::end(kParamKeys)) {
            if (!unknown.empty()) unknown += ", ";
            unknown += it.key();
        }
    }
    if (!missing.empty())
        throw Error(ErrorCode::BadInput, "missing or non-numeric keys: " + missing);
    if (!unknown.empty())
        throw Error(ErrorCode::BadInput, "unknown keys: " + unknown);

    ParamsDoc doc;
    doc.params.kappa = pick(j, "kappa");
    doc.params.theta = pick(j, "theta");
    doc.params.sigma = pick(j, "sigma");
    doc.params.rho = pick(j, "rho");
    doc.params.v0 = pick(j, "v0");
    doc.params.lambda = pick(j, "lambda");
    doc.env.spot = pick(j, "spot");
    doc.env.rd = pick(j, "rd");
    doc.env.rf = pick(j, "rf");
    return doc;
}

ParamsDoc read_params_json(const std::string& path) {
    return parse_params_json(read_file(path));
}

std::string params_to_json(const HestonParams& p, const MarketEnv& env) {
    nlohmann::json j;
    j["kappa"] = p.kappa;
    j["theta"] = p.theta;
    j["sigma"] = p.sigma;
    j["rho"] = p.rho;
    j["v0"] = p.v0;
    j["lambda"] = p.lambda;
    j["spot"] = env.spot;
    j["rd"] = env.rd;
    j["rf"] = env.rf;
    return j.dump(2);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r' && ch != ' ' && ch != '\t') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& field, std::size_t line_no) {
    char* end = nullptr;
    const double x = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size())
        throw Error(ErrorCode::BadInput,
                    "smile CSV line " + std::to_string(line_no) + ": bad number '" + field + "'");
    return x;
}

} // namespace

std::vector<SmileSlice> parse_smile_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    std::vector<SmileSlice> slices;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            auto f = split_fields(line);
            if (f.size() != 3 || f[0] != "tenor_years" || f[1] != "delta" || f[2] != "quote_vol")
                throw Error(ErrorCode::BadInput,
                            "smile CSV must start with header tenor_years,delta,quote_vol");
            saw_header = true;
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 3)
            throw Error(ErrorCode::BadInput,
                        "smile CSV line " + std::to_string(line_no) + ": expected 3 fields");
        const double tenor = parse_number(f[0], line_no);
        const double delta = parse_number(f[1], line_no);
        const double vol = parse_number(f[2], line_no);
        auto it = std::find_if(slices.begin(), slices.end(),
                               [&](const SmileSlice& s) { return s.tau == tenor; });
        if (it == slices.end()) {
            slices.push_back({tenor, {}});
            it = std::prev(slices.end());
        }
        it->quotes.push_back({delta, vol});
    }
    if (!saw_header) throw Error(ErrorCode::BadInput, "smile CSV is empty");
    if (slices.empty()) throw Error(ErrorCode::BadInput, "smile CSV has no quotes");
    std::stable_sort(slices.begin(), slices.end(),
                     [](const SmileSlice& a, const SmileSlice& b) { return a.tau < b.tau; });
    return slices;
}

std::vector<SmileSlice> read_smile_csv(const std::string& path) {
    return parse_smile_csv(read_file(path));
}

std::string smile_to_csv(const std::vector<SmileSlice>& slices) {
    std::string out = "tenor_years,delta,quote_vol\n";
    for (const auto& s : slices)
        for (const auto& q : s.quotes)
            out += fmt(s.tau) + "," + fmt(q.delta_pillar) + "," + fmt(q.implied_vol) + "\n";
    return out;
}

std::string fmt(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::BadInput, "cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::BadInput, "cannot write file: " + path);
    out << content;
    if (!out) throw Error(ErrorCode::BadInput, "failed writing file: " + path);
}

} // namespace hestonfx::io
