// Semiclassical layer: action variable I(E), counting function
// N(E) = I/hbar, level inversion N(E_n) = n - delta, and the level-spacing
// law Delta E = pi hbar / (T_E E).
//
// Convention: I carries the 1/(2 pi) of the action definition, so
//     I(E) = (4 / 2 pi) * integral_0^{E/a} sqrt((E^2-a^2x^2)/(x^2+a^2)) dx
//          = (1 / 2 pi) * [enclosed phase-space area].
// With this prefactor N(E_1) = 1/2 lands the first semiclassical level at
// 1.05493 for a = hbar = 1, matching the quantum spectra to O(1/n).
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "xp2/classical.hpp"
#include "xp2/model.hpp"
#include "xp2/numerics/quadrature.hpp"
#include "xp2/numerics/roots.hpp"
#include "xp2/specfun/elliptic.hpp"
#include "xp2/spectrum.hpp"

namespace xp2::semiclassical {

inline constexpr double pi = 3.141592653589793238462643383279503;

/// Quantization offset and solver knobs. delta = 1/2 is the two-turning-
/// point WKB value; kept configurable for experimentation.
struct SemiclassicalConfig {
    double maslov_offset = 0.5;
    double quad_tol = 1e-12;
    double root_tol = 1e-12;

    void validate() const {
        if (!(maslov_offset >= 0.0 && maslov_offset < 1.0))
            throw std::domain_error("SemiclassicalConfig: need 0 <= delta < 1");
    }
};

/// Action variable by quadrature. The substitution x = (E/a) sin(theta)
/// removes the turning-point singularity:
///     I(E) = (2/pi) * integral_0^{pi/2} E^2 cos^2(theta)
///                     / sqrt(a^4 + E^2 sin^2(theta)) dtheta.
inline double action(const ModelParams& params, EnergyPoint ep, double quad_tol = 1e-12) {
    if (ep.e == 0.0) return 0.0;  // degenerate orbit
    const double e2 = ep.e * ep.e;
    const double a4 = params.a4();
    const double integral = numerics::quad(
        [e2, a4](double theta) {
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            return e2 * c * c / std::sqrt(a4 + e2 * s * s);
        },
        0.0, 0.5 * pi, quad_tol);
    return 2.0 / pi * integral;
}

/// Counting function from the elliptic closed form,
///     N(E) = (2 / (pi hbar)) [ (E^2+a^4)/a^2 K(-E^2/a^4)
///                              - a^2 Eint(-E^2/a^4) ].
inline double counting(const ModelParams& params, EnergyPoint ep) {
    if (ep.e == 0.0) return 0.0;
    const double a2 = params.a2();
    const double m = -(ep.e * ep.e) / (a2 * a2);
    const double bracket =
        ep.h_e / a2 * specfun::ellip_k(m) - a2 * specfun::ellip_e(m);
    return 2.0 / (pi * params.hbar) * bracket;
}

/// Counting function through the quadrature route; cross-check backend
/// for the closed form.
inline double counting_quad(const ModelParams& params, EnergyPoint ep,
                            double quad_tol = 1e-12) {
    return action(params, ep, quad_tol) / params.hbar;
}

/// Mean level spacing pi hbar / (T_E E); asymptotic=true replaces T_E by
/// its high-energy form, giving pi hbar / (2 ln(4E/a^2)).
inline double level_spacing(const ModelParams& params, EnergyPoint ep, bool asymptotic = false) {
    if (!(ep.e > 0.0)) throw std::domain_error("level_spacing: requires E > 0");
    const double t_e = asymptotic ? classical::period_asymptotic(params, ep)
                                  : classical::period(params, ep);
    return pi * params.hbar / (t_e * ep.e);
}

/// Solves N(E_n) = n - delta for n in [n_lo, n_hi]. Brackets are grown by
/// doubling from the previous level, seeded with the spacing estimate.
inline Spectrum semiclassical_levels(const ModelParams& params, const SemiclassicalConfig& cfg,
                                     int n_lo, int n_hi) {
    cfg.validate();
    if (n_lo < 1 || n_hi < n_lo)
        throw std::invalid_argument("semiclassical_levels: need 1 <= n_lo <= n_hi");

    Spectrum spec;
    spec.backend = Backend::semiclassical;
    spec.params = params;
    spec.config_summary = "delta=" + std::to_string(cfg.maslov_offset);

    double e_prev = 0.0;
    for (int n = 1; n <= n_hi; ++n) {
        const double target = static_cast<double>(n) - cfg.maslov_offset;
        auto g = [&](double e) {
            return counting(params, EnergyPoint::from_e(params, e)) - target;
        };
        double step = (e_prev > 0.0)
                          ? level_spacing(params, EnergyPoint::from_e(params, e_prev))
                          : 0.5 * params.a2();
        double lo = e_prev, hi = e_prev + step;
        while (g(hi) < 0.0) {
            lo = hi;
            step *= 2.0;
            hi += step;
            if (step > 1e12) throw numerics::solver_error("semiclassical_levels: bracket blowup");
        }
        const double e_n = numerics::find_root(g, {lo, hi}, cfg.root_tol);
        e_prev = e_n;
        if (n >= n_lo) {
            Level l;
            l.n = n;
            l.parity = parity_of_level(n);
            l.e = e_n;
            l.h_e = EnergyPoint::from_e(params, e_n).h_e;
            l.residual = std::fabs(g(e_n));
            l.backend = Backend::semiclassical;
            spec.levels.push_back(l);
        }
    }
    check_level_sequence(spec.levels);
    return spec;
}

inline Spectrum semiclassical_levels(const ModelParams& params, const SemiclassicalConfig& cfg,
                                     int n_max) {
    return semiclassical_levels(params, cfg, 1, n_max);
}

}  // namespace xp2::semiclassical
