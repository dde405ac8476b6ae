// Adaptive Gauss-Kronrod quadrature (7/15 pair, bisection refinement).
#pragma once

#include <cmath>
#include <stdexcept>

#include "xp2/numerics/roots.hpp"

namespace xp2::numerics {

namespace detail {

// 15-point Kronrod abscissae/weights with the embedded 7-point Gauss rule.
inline constexpr double kronrod_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kronrod_w[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gauss_w[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
void gk15(F& f, double lo, double hi, double& result, double& err) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const double fc = f(c);
    double res_g = gauss_w[3] * fc;
    double res_k = kronrod_w[7] * fc;
    for (int i = 0; i < 7; ++i) {
        const double x = h * kronrod_x[i];
        const double fs = f(c - x) + f(c + x);
        res_k += kronrod_w[i] * fs;
        if (i % 2 == 1) res_g += gauss_w[i / 2] * fs;
    }
    result = res_k * h;
    err = std::fabs((res_k - res_g) * h);
}

template <typename F>
double quad_rec(F& f, double lo, double hi, double tol_abs, int depth) {
    double result, err;
    gk15(f, lo, hi, result, err);
    if (!std::isfinite(result)) throw solver_error("quad: non-finite integrand");
    if (err <= tol_abs || depth >= 60) {
        if (depth >= 60 && err > tol_abs)
            throw solver_error("quad: accuracy not reached (max subdivisions)");
        return result;
    }
    const double mid = 0.5 * (lo + hi);
    return quad_rec(f, lo, mid, 0.5 * tol_abs, depth + 1) +
           quad_rec(f, mid, hi, 0.5 * tol_abs, depth + 1);
}

}  // namespace detail

/// Adaptive estimate of the integral of f over [lo, hi] to relative
/// accuracy tol. Endpoint singularities must be substituted away by the
/// caller; the kernel only bisects.
template <typename F>
double quad(F&& f, double lo, double hi, double tol = 1e-12) {
    if (!(tol > 0.0)) throw std::invalid_argument("quad: tol must be positive");
    if (lo == hi) return 0.0;
    double sign = 1.0;
    if (lo > hi) {
        std::swap(lo, hi);
        sign = -1.0;
    }
    double coarse, err0;
    detail::gk15(f, lo, hi, coarse, err0);
    // absolute target from the coarse magnitude; floor keeps near-zero
    // integrals from demanding impossible relative accuracy
    const double scale = std::max(std::fabs(coarse), 1e-300);
    const double tol_abs = std::max(tol * scale, 1e-305);
    return sign * detail::quad_rec(f, lo, hi, tol_abs, 0);
}

}  // namespace xp2::numerics
