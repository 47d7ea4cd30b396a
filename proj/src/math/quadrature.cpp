#include "hestonfx/math/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace hestonfx {

namespace {

// Gauss-Lobatto abscissae for the 13-point startup stencil.
constexpr double kAlpha = 0.81649658092772603273;   // sqrt(2/3)
constexpr double kBeta = 0.44721359549995793928;    // 1/sqrt(5)
constexpr double kX1 = 0.942882415695480;
constexpr double kX2 = 0.641853342345781;
constexpr double kX3 = 0.236383199662150;

struct Workspace {
    const std::function<double(double)>& f;
    double tol;        // absolute accept threshold for |i1 - i2| per interval
    int max_evals;
    int evals = 0;
    bool converged = true;

    double eval(double x) {
        if (++evals > max_evals)
            throw Error(ErrorCode::QuadratureNotConverged,
                        "adaptive Lobatto exceeded the evaluation budget");
        return f(x);
    }
};

double step(Workspace& ws, double a, double b, double fa, double fb, int depth) {
    const double m = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double mll = m - kAlpha * h;
    const double ml = m - kBeta * h;
    const double mr = m + kBeta * h;
    const double mrr = m + kAlpha * h;

    const double fmll = ws.eval(mll);
    const double fml = ws.eval(ml);
    const double fm = ws.eval(m);
    const double fmr = ws.eval(mr);
    const double fmrr = ws.eval(mrr);

    const double i2 = (h / 6.0) * (fa + fb + 5.0 * (fml + fmr));
    const double i1 = (h / 1470.0) *
                      (77.0 * (fa + fb) + 432.0 * (fmll + fmrr) + 625.0 * (fml + fmr) +
                       672.0 * fm);

    if (std::fabs(i1 - i2) <= ws.tol || mll <= a || b <= mrr || depth >= 48) {
        if (mll <= a || b <= mrr || depth >= 48) {
            // interval no longer splittable at working precision
            if (std::fabs(i1 - i2) > ws.tol) ws.converged = false;
        }
        return i1;
    }
    return step(ws, a, mll, fa, fmll, depth + 1) + step(ws, mll, ml, fmll, fml, depth + 1) +
           step(ws, ml, m, fml, fm, depth + 1) + step(ws, m, mr, fm, fmr, depth + 1) +
           step(ws, mr, mrr, fmr, fmrr, depth + 1) + step(ws, mrr, b, fmrr, fb, depth + 1);
}

} // namespace

QuadResult adaptive_lobatto(const std::function<double(double)>& f, double a, double b,
                            const QuadratureConfig& cfg) {
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b))
        throw Error(ErrorCode::InvalidConfig, "adaptive Lobatto needs a finite interval a < b");
    if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol >= 0.0) || cfg.max_evals < 13)
        throw Error(ErrorCode::InvalidConfig, "bad quadrature tolerances or budget");

    Workspace ws{f, 0.0, cfg.max_evals};

    const double m = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double x[13] = {a,
                          m - kX1 * h,
                          m - kAlpha * h,
                          m - kX2 * h,
                          m - kBeta * h,
                          m - kX3 * h,
                          m,
                          m + kX3 * h,
                          m + kBeta * h,
                          m + kX2 * h,
                          m + kAlpha * h,
                          m + kX1 * h,
                          b};
    double y[13];
    for (int i = 0; i < 13; ++i) y[i] = ws.eval(x[i]);

    // 13-point Kronrod estimate of the whole integral fixes the error scale.
    const double is = h * (0.0158271919734802 * (y[0] + y[12]) +
                           0.0942738402188500 * (y[1] + y[11]) +
                           0.155071987336585 * (y[2] + y[10]) +
                           0.188821573960182 * (y[3] + y[9]) +
                           0.199773405226859 * (y[4] + y[8]) +
                           0.224926465333340 * (y[5] + y[7]) +
                           0.242611071901408 * y[6]);

    ws.tol = std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(is));

    const double value = step(ws, a, b, y[0], y[12], 0);
    return {value, ws.evals, ws.converged};
}

QuadResult integrate_semi_infinite(const std::function<double(double)>& f,
                                   const QuadratureConfig& cfg) {
    static constexpr double kPhiFloor = 1e-12;
    auto g = [&f](double u) -> double {
        if (u <= 0.0) return 0.0;   // phi = inf limit of a decaying integrand
        const double phi = std::max((1.0 - u) / u, kPhiFloor);
        const double value = f(phi) / (u * u);
        return std::isfinite(value) ? value : 0.0;   // underflowed tail
    };
    return adaptive_lobatto(g, 0.0, 1.0, cfg);
}

} // namespace hestonfx
