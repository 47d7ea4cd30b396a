#include "hestonfx/math/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hestonfx/errors.hpp"

namespace hestonfx {

namespace {

struct Vertex {
    std::vector<double> x;
    double f;
};

double diameter(const std::vector<Vertex>& simplex) {
    double d = 0.0;
    const auto& base = simplex.front().x;
    for (std::size_t i = 1; i < simplex.size(); ++i)
        for (std::size_t k = 0; k < base.size(); ++k)
            d = std::max(d, std::fabs(simplex[i].x[k] - base[k]));
    return d;
}

} // namespace

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x0,
                          const std::vector<double>& init_steps,
                          const SimplexOptions& opts) {
    const std::size_t n = x0.size();
    if (n == 0 || init_steps.size() != n)
        throw Error(ErrorCode::InvalidConfig, "simplex needs matching x0 and step sizes");

    SimplexResult result;
    result.x = x0;
    result.fx = std::numeric_limits<double>::infinity();

    auto evaluate = [&](const std::vector<double>& x) {
        ++result.evals;
        const double v = f(x);
        return std::isfinite(v) ? v : 1e300;
    };

    std::vector<double> steps = init_steps;
    std::vector<double> center = x0;

    for (int round = 0; round <= opts.restarts; ++round) {
        if (result.evals >= opts.max_evals) break;

        std::vector<Vertex> simplex;
        simplex.reserve(n + 1);
        simplex.push_back({center, evaluate(center)});
        for (std::size_t k = 0; k < n && result.evals < opts.max_evals; ++k) {
            auto x = center;
            x[k] += steps[k];
            simplex.push_back({x, evaluate(x)});
        }
        if (simplex.size() != n + 1) break;

        bool round_converged = false;
        while (result.evals < opts.max_evals) {
            std::sort(simplex.begin(), simplex.end(),
                      [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
            result.trace.push_back(simplex.front().f);

            if (diameter(simplex) < opts.diameter_tol &&
                simplex.back().f - simplex.front().f < opts.spread_tol) {
                round_converged = true;
                break;
            }

            std::vector<double> centroid(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i].x[k] / n;

            auto blend = [&](double coeff) {
                std::vector<double> x(n);
                for (std::size_t k = 0; k < n; ++k)
                    x[k] = centroid[k] + coeff * (simplex[n].x[k] - centroid[k]);
                return x;
            };

            const auto xr = blend(-1.0);
            const double fr = evaluate(xr);
            if (fr < simplex[0].f) {
                const auto xe = blend(-2.0);
                const double fe = evaluate(xe);
                if (fe < fr)
                    simplex[n] = {xe, fe};
                else
                    simplex[n] = {xr, fr};
                continue;
            }
            if (fr < simplex[n - 1].f) {
                simplex[n] = {xr, fr};
                continue;
            }
            const bool outside = fr < simplex[n].f;
            const auto xc = blend(outside ? -0.5 : 0.5);
            const double fc = evaluate(xc);
            if (fc < std::min(fr, simplex[n].f)) {
                simplex[n] = {xc, fc};
                continue;
            }
            // shrink toward the best vertex
            for (std::size_t i = 1; i <= n && result.evals < opts.max_evals; ++i) {
                for (std::size_t k = 0; k < n; ++k)
                    simplex[i].x[k] = simplex[0].x[k] + 0.5 * (simplex[i].x[k] - simplex[0].x[k]);
                simplex[i].f = evaluate(simplex[i].x);
            }
        }

        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        const bool improved = simplex.front().f < result.fx;
        if (improved) {
            result.x = simplex.front().x;
            result.fx = simplex.front().f;
        }
        result.converged = round_converged;

        if (round_converged && !improved && round > 0) break;   // stable incumbent
        center = result.x;
        for (auto& s : steps) s *= 0.1;
    }
    return result;
}

} // namespace hestonfx
