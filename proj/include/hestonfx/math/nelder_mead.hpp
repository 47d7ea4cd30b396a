#pragma once

#include <functional>
#include <vector>

namespace hestonfx {

struct SimplexOptions {
    int max_evals = 2000;
    double diameter_tol = 1e-8;   // max coordinate spread of the simplex
    double spread_tol = 1e-12;    // f(worst) - f(best)
    int restarts = 2;             // rebuilds around the incumbent within the budget
};

struct SimplexResult {
    std::vector<double> x;
    double fx = 0.0;
    int evals = 0;
    bool converged = false;
    std::vector<double> trace;    // best objective value after each iteration
};

// Nelder-Mead downhill simplex with standard coefficients (reflect 1, expand 2,
// contract 1/2, shrink 1/2). The trace of best values is non-increasing by
// construction. Restarts rebuild a smaller simplex around the incumbent to
// escape premature collapse; they share the single evaluation budget.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x0,
                          const std::vector<double>& init_steps,
                          const SimplexOptions& opts = {});

} // namespace hestonfx
