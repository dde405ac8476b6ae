// Exact classical dynamics of H = (x^2+a^2)(p^2+a^2): closed-form
// trajectories in Jacobi sn, the orbit period through K(m), the
// phase-space boundary, the hyperbolic canonical transform, and a direct
// Hamilton-equation integrator used as an independent oracle.
#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "xp2/model.hpp"
#include "xp2/numerics/ode.hpp"
#include "xp2/numerics/roots.hpp"
#include "xp2/specfun/elliptic.hpp"

namespace xp2::classical {

inline double hamiltonian(const ModelParams& params, PhasePoint pt) {
    const double a2 = params.a2();
    return (pt.x * pt.x + a2) * (pt.p * pt.p + a2);
}

/// The general model H = (x^2+a^2)(p^2+b^2) is canonically equivalent to
/// the symmetric form with regulator a' = sqrt(|ab|):
///     H_{a,b}(x, p) = H_{a'}(x / r, r p),   r = sqrt(|a|/|b|).
/// Returns the symmetric-model parameters and r.
inline std::pair<ModelParams, double> normalize_general(double a, double b) {
    if (a == 0.0 || b == 0.0)
        throw std::domain_error("normalize_general: zero regulator is excluded");
    const double a_prime = std::sqrt(std::fabs(a * b));
    const double r = std::sqrt(std::fabs(a) / std::fabs(b));
    return {ModelParams(a_prime), r};
}

/// Orbit period T_E = (2/a^2) K(-E^2/a^4). E = 0 returns the limit
/// pi/a^2.
inline double period(const ModelParams& params, EnergyPoint ep) {
    const double a2 = params.a2();
    const double m = -(ep.e * ep.e) / (a2 * a2);
    return 2.0 / a2 * specfun::ellip_k(m);
}

/// High-energy form (2/E) ln(4E/a^2); with crude=true the rougher
/// (2/E) ln(E/a^2) estimate (the two differ by (2/E) ln 4 exactly).
inline double period_asymptotic(const ModelParams& params, EnergyPoint ep, bool crude = false) {
    if (!(ep.e > 0.0)) throw std::domain_error("period_asymptotic: requires E > 0");
    const double arg = (crude ? 1.0 : 4.0) * ep.e / params.a2();
    return 2.0 / ep.e * std::log(arg);
}

/// Closed-form orbit with x(0) = 0, p(0) = E/a:
///     x(t) = (E/a) sn(2 a^2 t | -E^2/a^4),  p(t) = x(t + T_E/4).
inline PhasePoint trajectory_point(const ModelParams& params, EnergyPoint ep, double t) {
    const double a2 = params.a2();
    const double m = -(ep.e * ep.e) / (a2 * a2);
    const double amp = ep.e / params.a;
    const double quarter = 0.25 * period(params, ep);
    return {amp * specfun::jacobi_sn(2.0 * a2 * t, m),
            amp * specfun::jacobi_sn(2.0 * a2 * (t + quarter), m)};
}

inline std::vector<PhasePoint> trajectory(const ModelParams& params, EnergyPoint ep,
                                          const std::vector<double>& times) {
    std::vector<PhasePoint> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(trajectory_point(params, ep, t));
    return out;
}

/// Hamilton's equations xdot = 2p(x^2+a^2), pdot = -2x(p^2+a^2) as a
/// first-order system (state = [x, p]).
inline numerics::OdeSystem hamilton_rhs(const ModelParams& params) {
    const double a2 = params.a2();
    numerics::OdeSystem sys;
    sys.dimension = 2;
    sys.rhs = [a2](double, const double* y, double* dydt) {
        const double x = y[0], p = y[1];
        dydt[0] = 2.0 * p * (x * x + a2);
        dydt[1] = -2.0 * x * (p * p + a2);
    };
    return sys;
}

/// Upper branch of the level set H = E^2 + a^4:
///     p(x) = sqrt((E^2 - a^2 x^2) / (x^2 + a^2)),  |x| <= E/a.
inline double phase_boundary(const ModelParams& params, EnergyPoint ep, double x) {
    const double a2 = params.a2();
    const double num = ep.e * ep.e - a2 * x * x;
    if (num < 0.0)
        throw std::domain_error("phase_boundary: |x| > E/a is classically forbidden");
    return std::sqrt(num / (x * x + a2));
}

inline UVPoint to_uv(const ModelParams& params, PhasePoint pt) {
    const double u = std::asinh(pt.x / params.a);
    const double v = pt.p * std::sqrt(pt.x * pt.x + params.a2());  // p * a cosh(u)
    return {u, v};
}

inline PhasePoint from_uv(const ModelParams& params, UVPoint uv) {
    return {params.a * std::sinh(uv.u), uv.v / (params.a * std::cosh(uv.u))};
}

/// H in the transformed coordinates: v^2 + a^4 cosh^2(u).
inline double hamiltonian_uv(const ModelParams& params, UVPoint uv) {
    const double ch = std::cosh(uv.u);
    return uv.v * uv.v + params.a4() * ch * ch;
}

/// Integrated orbit over [0, t_end] starting from x(0)=0, p(0)=E/a.
inline numerics::OdeTrajectory integrate_orbit(const ModelParams& params, EnergyPoint ep,
                                               double t_end, double tol = 1e-12) {
    return numerics::ode_solve(hamilton_rhs(params), {0.0, ep.e / params.a}, {0.0, t_end}, tol);
}

/// Period measured directly from the equations of motion: first return of
/// x to 0 with xdot > 0 (i.e. p > 0), refined by bisection on the dense
/// output. Independent of the elliptic-integral route.
inline double period_ode(const ModelParams& params, EnergyPoint ep, double tol = 1e-12) {
    if (!(ep.e > 0.0)) throw std::domain_error("period_ode: requires E > 0");
    // generous window: the asymptotic estimate underestimates mildly at
    // small E, so pad by half of the E->0 limit pi/a^2
    constexpr double pi = 3.141592653589793238462643383279503;
    const double guess = std::max(period_asymptotic(params, ep), 0.5 * pi / params.a2());
    const numerics::OdeTrajectory traj = integrate_orbit(params, ep, 2.5 * guess, tol);

    const auto& nodes = traj.nodes();
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double x0 = nodes[i - 1].y[0];
        const double x1 = nodes[i].y[0];
        if (x0 < 0.0 && x1 >= 0.0) {  // upward crossing: p > 0 here
            return numerics::find_root([&](double t) { return traj.at(t)[0]; },
                                       numerics::Bracket{nodes[i - 1].t, nodes[i].t},
                                       1e-14 * guess);
        }
    }
    throw numerics::solver_error("period_ode: no return crossing found in window");
}

}  // namespace xp2::classical
