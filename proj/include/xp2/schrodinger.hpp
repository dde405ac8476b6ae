// u-space reformulation: after x = a sinh(u) every ordering obeys a
// standard Schrodinger equation -phi'' + V_I(u) phi = E^2 phi with
//     V1 = -1/2 - (1/4) tanh^2 u + a^4 sinh^2 u
//     V2 =                         a^4 sinh^2 u
//     V3 = -1/2 + (3/4) tanh^2 u + a^4 sinh^2 u.
// Two more independent spectrum backends live here: a finite-difference
// eigensolver with Richardson extrapolation, and for form II the
// modified-Mathieu terminal-value condition.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "xp2/model.hpp"
#include "xp2/numerics/ode.hpp"
#include "xp2/numerics/tridiag.hpp"
#include "xp2/quantum.hpp"
#include "xp2/spectrum.hpp"

namespace xp2::schrodinger {

/// Effective potential of the given ordering at u.
inline double potential(QuantForm form, const ModelParams& params, double u) {
    const double sh = std::sinh(u);
    const double th = std::tanh(u);
    const double well = params.a4() * sh * sh;
    switch (form.id) {
        case 1: return -0.5 - 0.25 * th * th + well;
        case 2: return well;
        case 3: return -0.5 + 0.75 * th * th + well;
        default: throw std::invalid_argument("potential: bad form");
    }
}

/// Callable potential bound to one ordering; V(u) = V(-u), and the well
/// rises as a^4 e^{2|u|}/4 far out.
struct Potential {
    QuantForm form;
    ModelParams params;

    double operator()(double u) const { return potential(form, params, u); }
};

/// -phi'' + V_I phi = E^2 phi as a first-order system in u.
inline numerics::OdeSystem u_ode_rhs(QuantForm form, const ModelParams& params, double e) {
    const double e2 = e * e;
    numerics::OdeSystem sys;
    sys.dimension = 2;
    sys.rhs = [form, params, e2](double u, const double* y, double* dydt) {
        dydt[0] = y[1];
        dydt[1] = (potential(form, params, u) - e2) * y[0];
    };
    return sys;
}

/// Symmetric grid of interior points on (-u_max, u_max) with Dirichlet
/// walls at +-u_max.
struct GridSpec {
    double u_max = 0.0;
    int n_interior = 0;

    void validate() const {
        if (!(u_max > 0.0) || n_interior < 3)
            throw std::invalid_argument("GridSpec: need u_max > 0 and N >= 3");
    }
    double h() const { return 2.0 * u_max / (n_interior + 1); }
    double u_at(int i) const { return -u_max + (i + 1) * h(); }  // i in [0, n_interior)

    /// u_max = asinh(E_max/a^2) + 5 puts the walls deep in the forbidden
    /// region for every level up to E_max.
    static GridSpec for_max_energy(const ModelParams& params, double e_max, int n = 6000) {
        return {std::asinh(std::max(e_max, params.a2()) / params.a2()) + 5.0, n};
    }
};

/// Three-point discretization of -d^2/du^2 + V on the grid.
inline numerics::SymTridiag fd_tridiag(const std::function<double(double)>& v,
                                       const GridSpec& grid) {
    grid.validate();
    const int n = grid.n_interior;
    const double h2 = grid.h() * grid.h();
    numerics::SymTridiag t;
    t.diag.resize(n);
    t.off.assign(n - 1, -1.0 / h2);
    for (int i = 0; i < n; ++i) t.diag[i] = 2.0 / h2 + v(grid.u_at(i));
    return t;
}

/// Finite-difference spectrum: eigenvalues lambda = E^2 on the grid and
/// on its once-refined version, Richardson-extrapolated (the h^2 error
/// term cancels, leaving O(h^4)).
inline Spectrum spectrum_fd(QuantForm form, const ModelParams& params, const GridSpec& grid,
                            int n_max) {
    if (params.hbar != 1.0) {
        const ModelParams unit(params.a / std::sqrt(params.hbar), 1.0);
        return quantum::detail::rescale_from_unit_hbar(spectrum_fd(form, unit, grid, n_max),
                                                       params);
    }
    grid.validate();
    if (n_max < 1 || n_max > grid.n_interior / 4)
        throw std::invalid_argument("spectrum_fd: need 1 <= n_max <= N/4");

    const Potential v{form, params};
    const numerics::SymTridiag coarse = fd_tridiag(v, grid);
    const GridSpec fine{grid.u_max, 2 * grid.n_interior + 1};
    const numerics::SymTridiag refined = fd_tridiag(v, fine);

    const std::vector<double> lam_c = numerics::sym_eigen(coarse, n_max);
    const std::vector<double> lam_f = numerics::sym_eigen(refined, n_max);

    Spectrum spec;
    spec.backend = Backend::fd;
    spec.params = params;
    spec.config_summary = "form=" + std::to_string(form.id) +
                          " u_max=" + std::to_string(grid.u_max) +
                          " N=" + std::to_string(grid.n_interior);

    const double a4 = params.a4();
    for (int i = 0; i < n_max; ++i) {
        const double lam = (4.0 * lam_f[i] - lam_c[i]) / 3.0;
        Level l;
        l.n = i + 1;
        l.parity = parity_of_level(l.n);
        l.backend = Backend::fd;
        l.residual = std::fabs(lam_f[i] - lam_c[i]) / 3.0;  // extrapolation estimate
        if (lam < 0.0) {
            l.valid = false;
            l.e = 0.0;
            l.h_e = a4;
            spec.warnings.push_back("level " + std::to_string(l.n) +
                                    ": negative lambda (discretization noise)");
        } else {
            l.e = std::sqrt(lam);
            l.h_e = lam + a4;
        }
        spec.levels.push_back(l);
    }

    // wall check on the highest requested level: its eigenvector must
    // have died out at the boundary
    const std::vector<double> top = numerics::tridiag_eigenvector(refined, lam_f[n_max - 1]);
    double vmax = 0.0;
    for (double x : top) vmax = std::max(vmax, std::fabs(x));
    if (std::fabs(top.front()) > 1e-8 * vmax || std::fabs(top.back()) > 1e-8 * vmax)
        spec.warnings.push_back("u_max too small: eigenfunction reaches the Dirichlet wall");
    return spec;
}

/// Eigenfunction samples (u grid) for level n of the FD problem.
inline quantum::WavefunctionSamples fd_wavefunction(QuantForm form, const ModelParams& params,
                                                    const GridSpec& grid, int n) {
    grid.validate();
    const numerics::SymTridiag t = fd_tridiag(Potential{form, params}, grid);
    const std::vector<double> lam = numerics::sym_eigen(t, n);
    std::vector<double> vec = numerics::tridiag_eigenvector(t, lam[n - 1]);

    quantum::WavefunctionSamples out;
    out.x.resize(grid.n_interior);
    out.psi.resize(grid.n_interior);
    double norm = 0.0;
    for (int i = 0; i < grid.n_interior; ++i) norm += vec[i] * vec[i] * grid.h();
    const double s = 1.0 / std::sqrt(norm);
    for (int i = 0; i < grid.n_interior; ++i) {
        out.x[i] = grid.u_at(i);
        out.psi[i] = vec[i] * s;
    }
    return out;
}

// ---------------------------------------------------------------------
// modified-Mathieu eigencondition (form II)
// ---------------------------------------------------------------------

/// Parameter slots of the Mathieu connection for form II:
///     c = E^2 - a^4/2,  q = -a^4/4.
/// The continued (u-space) equation integrated below is
///     y'' = ((4q - c) - 2q cosh 2u) y  ==  y'' = (a^4 sinh^2 u - E^2) y,
/// i.e. the characteristic-value slot of the modified equation is 4q - c.
struct MathieuParams {
    double c;
    double q;

    static MathieuParams for_form2(const ModelParams& params, double e) {
        return {e * e - 0.5 * params.a4(), -0.25 * params.a4()};
    }
    double well_depth() const { return -4.0 * q; }        // a^4
    double energy_sq() const { return c - 2.0 * q; }      // E^2
};

/// Renormalized terminal value of the parity solution at u_max: the
/// finite-cutoff realization of "the Mathieu function vanishes at i inf".
/// Even parity starts (1, 0), odd (0, 1). Once the solution is locked on
/// the growing branch past the turning point (state and slope share a
/// sign while y'' = W y with W > 0, so no further zeros are possible) the
/// integration may stop early; the returned value keeps the sign and
/// stays continuous in the parameters, which is all root bracketing
/// needs.
inline double mathieu_terminal(MathieuParams mp, Parity parity, double u_max,
                               double tol = 1e-11) {
    if (!(u_max > 0.0)) throw std::invalid_argument("mathieu_terminal: u_max > 0 required");
    const double a4 = mp.well_depth();
    const double e2 = mp.energy_sq();

    double u_stop = u_max;
    if (a4 > 0.0) {
        // saturation cutoff: past the turning point, 40 units of WKB
        // growth pin the sign of y(u_max); integrating further only
        // scales the renormalized value
        const double a2 = std::sqrt(a4);
        const double sinh_turn = std::sqrt(std::max(e2, 0.0)) / a2;
        const double cosh_turn = std::sqrt(1.0 + sinh_turn * sinh_turn);
        const double e_abs = std::sqrt(std::max(e2, 0.0));
        const double cosh_stop = cosh_turn + (43.0 + 3.0 * e_abs) / a2;
        u_stop = std::min(u_max, std::acosh(cosh_stop) + 0.5);
    }

    numerics::OdeSystem sys;
    sys.dimension = 2;
    sys.rhs = [a4, e2](double u, const double* y, double* dydt) {
        const double sh = std::sinh(u);
        dydt[0] = y[1];
        dydt[1] = (a4 * sh * sh - e2) * y[0];
    };

    std::vector<double> y = (parity == Parity::even) ? std::vector<double>{1.0, 0.0}
                                                     : std::vector<double>{0.0, 1.0};
    numerics::OdeOptions opt;
    opt.tol = tol;
    numerics::ode_drive(sys, y, {0.0, u_stop}, opt,
                        [](double, std::vector<double>& state, const std::vector<double>&) {
                            const double mag =
                                std::max(std::fabs(state[0]), std::fabs(state[1]));
                            if (mag > 1e120) {
                                state[0] /= mag;
                                state[1] /= mag;
                                return true;
                            }
                            return false;
                        });
    const double scale = std::hypot(y[0], y[1]);
    return (scale == 0.0) ? 0.0 : y[0] / scale;
}

/// Form II spectrum from roots of the Mathieu terminal value.
inline Spectrum spectrum_mathieu(const ModelParams& params, int n_lo, int n_hi,
                                 double u_max = 12.0, double ode_tol = 1e-11,
                                 double root_tol = 1e-12) {
    if (params.hbar != 1.0) {
        const ModelParams unit(params.a / std::sqrt(params.hbar), 1.0);
        return quantum::detail::rescale_from_unit_hbar(
            spectrum_mathieu(unit, n_lo, n_hi, u_max, ode_tol, root_tol), params);
    }
    Spectrum spec = quantum::detail::scan_levels(
        params, n_lo, n_hi, 0.25, root_tol, Backend::mathieu, [&](double e, Parity parity) {
            return mathieu_terminal(MathieuParams::for_form2(params, e), parity, u_max, ode_tol);
        });
    spec.config_summary = "u_max=" + std::to_string(u_max);
    return spec;
}

inline Spectrum spectrum_mathieu(const ModelParams& params, int n_max, double u_max = 12.0) {
    return spectrum_mathieu(params, 1, n_max, u_max);
}

/// Outward-integrated Mathieu wavefunction samples on [-u_emit, u_emit];
/// e should be an eigenvalue from spectrum_mathieu.
inline quantum::WavefunctionSamples mathieu_wavefunction(const ModelParams& params, double e,
                                                         Parity parity, int n_points,
                                                         double u_emit = 0.0) {
    if (n_points < 3) throw std::invalid_argument("mathieu_wavefunction: n_points >= 3");
    const double a2 = params.a2();
    if (u_emit <= 0.0) u_emit = std::asinh(std::max(e, a2) / a2) + 1.5;

    QuantForm form2 = QuantForm::form(2);
    std::vector<double> y0 = (parity == Parity::even) ? std::vector<double>{1.0, 0.0}
                                                      : std::vector<double>{0.0, 1.0};
    const numerics::OdeTrajectory traj =
        numerics::ode_solve(u_ode_rhs(form2, params, e), y0, {0.0, u_emit}, 1e-11);

    const int half = n_points / 2;
    quantum::WavefunctionSamples out;
    out.x.resize(2 * half + 1);
    out.psi.resize(2 * half + 1);
    for (int i = 0; i <= half; ++i) {
        const double u = u_emit * static_cast<double>(i) / half;
        const double val = traj.at(u)[0];
        out.x[half + i] = u;
        out.psi[half + i] = val;
        out.x[half - i] = -u;
        out.psi[half - i] = (parity == Parity::even) ? val : -val;
    }
    if (parity == Parity::odd) out.psi[half] = 0.0;
    double norm = 0.0;
    const double h = out.x[1] - out.x[0];
    for (std::size_t i = 0; i + 2 < out.psi.size(); i += 2)
        norm += h / 3.0 *
                (out.psi[i] * out.psi[i] + 4.0 * out.psi[i + 1] * out.psi[i + 1] +
                 out.psi[i + 2] * out.psi[i + 2]);
    const double s = 1.0 / std::sqrt(norm);
    for (double& v : out.psi) v *= s;
    return out;
}

}  // namespace xp2::schrodinger
