// Bracketed scalar root finding (Brent's method).
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace xp2::numerics {

/// Sign-change interval for root finding. Requires lo < hi and
/// f(lo)*f(hi) <= 0 for the function handed to find_root.
struct Bracket {
    double lo;
    double hi;
};

/// Thrown when an iterative solver cannot meet its contract
/// (no sign change, non-finite evaluation, iteration cap).
class solver_error : public std::runtime_error {
  public:
    explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

/// Brent's method on a bracketing interval. Returns r with bracket width
/// <= tol + a few ulps of |r|. Guaranteed to converge for continuous f,
/// superlinear when f is smooth near the root.
template <typename F>
double find_root(F&& f, Bracket b, double tol = 1e-12, int max_iter = 200) {
    if (!(b.lo < b.hi)) throw std::invalid_argument("find_root: bracket requires lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("find_root: tol must be positive");

    double a = b.lo, bb = b.hi;
    double fa = f(a), fb = f(bb);
    if (!std::isfinite(fa) || !std::isfinite(fb))
        throw solver_error("find_root: non-finite function value at bracket endpoint");
    if (fa == 0.0) return a;
    if (fb == 0.0) return bb;
    if ((fa > 0.0) == (fb > 0.0))
        throw solver_error("find_root: no sign change across bracket");

    double c = a, fc = fa;
    double d = bb - a, e = d;
    const double eps = std::numeric_limits<double>::epsilon();

    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = bb - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = bb; bb = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * eps * std::fabs(bb) + 0.5 * tol;
        const double xm = 0.5 * (c - bb);
        if (std::fabs(xm) <= tol1 || fb == 0.0) return bb;

        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            // inverse quadratic interpolation, falling back to secant
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (bb - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = bb;
        fa = fb;
        bb += (std::fabs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(bb);
        if (!std::isfinite(fb)) throw solver_error("find_root: non-finite function value");
    }
    throw solver_error("find_root: iteration cap reached");
}

}  // namespace xp2::numerics
