#include <array>
#include <cmath>

#include "hestonfx/math/quadrature.hpp"

namespace hestonfx {

namespace {

constexpr int kN = 100;

struct Rule {
    std::array<double, kN> x;   // nodes
    std::array<double, kN> w;   // weights with e^{x} folded in: integral f = sum w_i f(x_i)
};

// Nodes by Newton iteration on L_n (standard recurrence), weights from the
// derivative relation L_n'(x) = n (L_n(x) - L_{n-1}(x)) / x.
Rule build_rule() {
    Rule rule{};
    double z = 0.0;
    for (int i = 0; i < kN; ++i) {
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * kN);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * kN);
        } else {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.x[i - 2]);
        }
        double pp = 0.0, p2 = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0;
            p2 = 0.0;
            for (int j = 1; j <= kN; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0 - z) * p2 - (j - 1.0) * p3) / j;
            }
            pp = kN * (p1 - p2) / z;
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) <= 1e-14 * z) break;
        }
        rule.x[i] = z;
        const double denom = pp * kN * p2;
        // w_i e^{x_i} computed in log space; denom magnitudes reach ~1e160.
        rule.w[i] = -std::copysign(std::exp(z - std::log(std::fabs(denom))), denom);
    }
    return rule;
}

const Rule& rule() {
    static const Rule r = build_rule();
    return r;
}

} // namespace

double gauss_laguerre_100(const std::function<double(double)>& f) {
    const Rule& r = rule();
    double sum = 0.0;
    for (int i = 0; i < kN; ++i) sum += r.w[i] * f(r.x[i]);
    return sum;
}

} // namespace hestonfx
