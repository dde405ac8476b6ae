// Quantum spectra of the three operator orderings
//     H1 = 1/2 [(x^2+a^2)(p^2+a^2) + (p^2+a^2)(x^2+a^2)]
//     H2 = (x^2+a^2)^{1/4} p (x^2+a^2)^{1/2} p (x^2+a^2)^{1/4}
//          + a^2 (x^2+a^2)
//     H3 = (x^2+a^2)^{1/2} (p^2+a^2) (x^2+a^2)^{1/2}
// via two independent backends: parity-aware shooting on the unified wave
// equation, and dense diagonalization in a truncated harmonic-oscillator
// basis. Also hosts the ladder-operator identity check
// 1/2(AA^dag + A^dag A) = H1 + 3/4.
//
// Spectra for hbar != 1 reduce to the unit-hbar problem by the canonical
// rescaling a -> a/sqrt(hbar), E -> E/hbar.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "xp2/model.hpp"
#include "xp2/numerics/dense.hpp"
#include "xp2/numerics/ode.hpp"
#include "xp2/numerics/roots.hpp"
#include "xp2/semiclassical.hpp"
#include "xp2/spectrum.hpp"

namespace xp2::quantum {

using numerics::Mat;

// ---------------------------------------------------------------------
// shooting backend
// ---------------------------------------------------------------------

struct ShootingConfig {
    double x_max = 0.0;      // integration start; 0 = default 40/a
    double ode_tol = 1e-11;
    double scan_step = 0.25; // E scan resolution in units of the local level spacing
    double root_tol = 1e-12;

    double effective_x_max(const ModelParams& params) const {
        return x_max > 0.0 ? x_max : 40.0 / params.a;
    }
};

/// Unified wave equation as a first-order system in x, state (phi, phi'):
///     (x^2+a^2) phi'' + drift * x phi' + (E^2 + c - a^2 x^2) phi = 0.
inline numerics::OdeSystem ode_rhs(QuantForm form, const ModelParams& params, double e) {
    const double a2 = params.a2();
    const double e2c = e * e + form.c;
    const double drift = form.drift;
    numerics::OdeSystem sys;
    sys.dimension = 2;
    sys.rhs = [a2, e2c, drift](double x, const double* y, double* dydt) {
        dydt[0] = y[1];
        dydt[1] = -(drift * x * y[1] + (e2c - a2 * x * x) * y[0]) / (x * x + a2);
    };
    return sys;
}

namespace detail {

// Inward integration from x_max with the decaying asymptotic data
// phi ~ x^{-drift/2} e^{-a x}; rescales the state to avoid overflow
// (positive factors only, so signs survive).
inline void integrate_inward(QuantForm form, const ModelParams& params, double e,
                             const ShootingConfig& cfg, std::vector<double>& y) {
    const double xm = cfg.effective_x_max(params);
    y = {1.0, -(params.a + 0.5 * form.drift / xm)};
    numerics::OdeOptions opt;
    opt.tol = cfg.ode_tol;
    numerics::ode_drive(ode_rhs(form, params, e), y, {xm, 0.0}, opt,
                        [&params](double, std::vector<double>& state,
                                  const std::vector<double>&) {
                            const double mag = std::max(std::fabs(state[0]),
                                                        std::fabs(state[1]) / params.a);
                            if (mag > 1e120) {
                                state[0] /= mag;
                                state[1] /= mag;
                                return true;
                            }
                            return false;
                        });
}

}  // namespace detail

/// Shooting mismatch at the origin: phi'(0) for even parity, phi(0) for
/// odd, divided by the solution magnitude at 0 (sign-preserving). Zeros
/// in E are eigenvalues.
inline double shoot(QuantForm form, const ModelParams& params, double e, Parity parity,
                    const ShootingConfig& cfg = {}) {
    if (!(e >= 0.0)) throw std::domain_error("shoot: requires E >= 0");
    std::vector<double> y;
    detail::integrate_inward(form, params, e, cfg, y);
    const double scale = std::hypot(y[0], y[1] / params.a);
    if (scale == 0.0) return 0.0;
    return (parity == Parity::even ? y[1] / params.a : y[0]) / scale;
}

namespace detail {

inline Spectrum rescale_from_unit_hbar(Spectrum spec, const ModelParams& orig) {
    spec.params = orig;
    for (Level& l : spec.levels) {
        l.e *= orig.hbar;
        l.h_e = l.e * l.e + orig.a4();
    }
    return spec;
}

// Eigenvalue scan shared by the shooting and Mathieu-terminal backends:
// walks E per parity with steps tied to the local semiclassical spacing,
// brackets sign changes of the mismatch, refines with Brent, and indexes
// roots through the counting function. mismatch(e, parity) must be
// continuous in e with simple zeros at the eigenvalues.
inline Spectrum scan_levels(const ModelParams& params, int n_lo, int n_hi, double scan_step,
                            double root_tol, Backend backend,
                            const std::function<double(double, Parity)>& mismatch) {
    if (n_lo < 1 || n_hi < n_lo)
        throw std::invalid_argument("spectrum scan: need 1 <= n_lo <= n_hi");

    auto counting_at = [&](double e) {
        return semiclassical::counting(params, EnergyPoint::from_e(params, e));
    };
    auto e_at_nu = [&](double nu) {  // E with N(E) = nu (0 for nu <= 0)
        if (nu <= 0.0) return 0.0;
        double lo = 0.0, hi = params.a2(), step = params.a2();
        while (counting_at(hi) < nu) {
            lo = hi;
            step *= 2.0;
            hi += step;
        }
        return numerics::find_root([&](double e) { return counting_at(e) - nu; }, {lo, hi},
                                   1e-10);
    };

    // scan window: half a counting unit of margin on both sides protects
    // against the quantum-vs-semiclassical offset of low levels
    const double e_begin = e_at_nu(static_cast<double>(n_lo) - 1.0);
    const double e_hard_stop = e_at_nu(static_cast<double>(n_hi) + 1.0);

    Spectrum spec;
    spec.backend = backend;
    spec.params = params;

    for (Parity parity : {Parity::even, Parity::odd}) {
        // even parity lives on odd n
        const int wanted = (parity == Parity::even) ? (n_hi + 1) / 2 - n_lo / 2
                                                    : n_hi / 2 - (n_lo - 1) / 2;
        int found = 0;
        double e_prev = e_begin;
        double f_prev = mismatch(e_prev, parity);
        double e = e_prev;
        while (found < wanted && e < e_hard_stop) {
            const double spacing = semiclassical::level_spacing(
                params, EnergyPoint::from_e(params, std::max(e, 0.25 * params.a2())));
            e = e_prev + scan_step * spacing;
            const double f = mismatch(e, parity);
            if (!std::isfinite(f))
                throw numerics::solver_error("spectrum scan: non-finite mismatch");
            if (f == 0.0 || (f_prev < 0.0) != (f < 0.0)) {
                const double root =
                    (f == 0.0) ? e
                               : numerics::find_root([&](double ee) { return mismatch(ee, parity); },
                                                     {e_prev, e}, root_tol);
                const int n = static_cast<int>(std::lround(counting_at(root) + 0.5));
                if (parity_of_level(n) != parity)
                    throw numerics::solver_error(
                        "spectrum scan: level index / parity mismatch near E=" +
                        std::to_string(root) + " (rescan with finer step)");
                if (n >= n_lo && n <= n_hi) {
                    Level l;
                    l.n = n;
                    l.parity = parity;
                    l.e = root;
                    l.h_e = EnergyPoint::from_e(params, root).h_e;
                    // the eigenvalue is bracketed to root_tol; the raw
                    // mismatch magnitude is scale-dependent (near a step
                    // for terminal-value conditions) and says nothing
                    l.residual = root_tol;
                    l.backend = backend;
                    spec.levels.push_back(l);
                    ++found;
                }
            }
            e_prev = e;
            f_prev = f;
        }
        if (found < wanted)
            throw numerics::solver_error("spectrum scan: missing levels of parity " +
                                         std::string(to_string(parity)));
    }

    std::sort(spec.levels.begin(), spec.levels.end(),
              [](const Level& a, const Level& b) { return a.e < b.e; });
    check_level_sequence(spec.levels);
    if (spec.levels.front().n != n_lo || spec.levels.back().n != n_hi ||
        static_cast<int>(spec.levels.size()) != n_hi - n_lo + 1)
        throw numerics::solver_error("spectrum scan: level range incomplete");
    return spec;
}

}  // namespace detail

/// Levels n_lo..n_hi of the given form by parity-aware shooting.
inline Spectrum spectrum_shooting(QuantForm form, const ModelParams& params, int n_lo, int n_hi,
                                  const ShootingConfig& cfg = {}) {
    if (params.hbar != 1.0) {
        const ModelParams unit(params.a / std::sqrt(params.hbar), 1.0);
        return detail::rescale_from_unit_hbar(
            spectrum_shooting(form, unit, n_lo, n_hi, cfg), params);
    }
    Spectrum spec = detail::scan_levels(
        params, n_lo, n_hi, cfg.scan_step, cfg.root_tol, Backend::shooting,
        [&](double e, Parity parity) { return shoot(form, params, e, parity, cfg); });
    spec.config_summary = "form=" + std::to_string(form.id) +
                          " x_max=" + std::to_string(cfg.effective_x_max(params));
    return spec;
}

inline Spectrum spectrum_shooting(QuantForm form, const ModelParams& params, int n_max,
                                  const ShootingConfig& cfg = {}) {
    return spectrum_shooting(form, params, 1, n_max, cfg);
}

/// Position-space samples of the normalized eigenfunction psi_n on a
/// symmetric grid, recovered from the shot phi through
/// psi_2 = phi_2 / (x^2+a^2)^{1/4}, psi_3 = phi_3 / sqrt(x^2+a^2).
struct WavefunctionSamples {
    std::vector<double> x;
    std::vector<double> psi;

    int sign_changes() const {
        int count = 0;
        double last = 0.0;
        double max_abs = 0.0;
        for (double v : psi) max_abs = std::max(max_abs, std::fabs(v));
        const double floor = 1e-9 * max_abs;
        for (double v : psi) {
            if (std::fabs(v) <= floor) continue;
            if (last != 0.0 && (v > 0.0) != (last > 0.0)) ++count;
            last = v;
        }
        return count;
    }
};

inline WavefunctionSamples sample_wavefunction(QuantForm form, const ModelParams& params,
                                               double e, Parity parity, int n_points,
                                               double x_emit = 0.0,
                                               const ShootingConfig& cfg = {}) {
    if (n_points < 3) throw std::invalid_argument("sample_wavefunction: n_points >= 3");
    if (params.hbar != 1.0)
        throw std::invalid_argument("sample_wavefunction: rescale to hbar = 1 first");
    const double xm = (x_emit > 0.0) ? x_emit : cfg.effective_x_max(params);
    if (params.a * xm > 600.0)
        throw std::invalid_argument("sample_wavefunction: a*x_max too large for unscaled solve");

    // one dense inward solve; e close to an eigenvalue keeps the growing
    // mode negligible over the emitted window
    const numerics::OdeTrajectory traj =
        numerics::ode_solve(ode_rhs(form, params, e), {1.0, -(params.a + 0.5 * form.drift / xm)},
                            {xm, 0.0}, cfg.ode_tol);

    const int half = n_points / 2;
    WavefunctionSamples out;
    out.x.resize(2 * half + 1);
    out.psi.resize(2 * half + 1);
    const double a2 = params.a2();
    for (int i = 0; i <= half; ++i) {
        const double x = xm * static_cast<double>(i) / half;
        const double phi = traj.at(x)[0];
        double psi = phi;
        if (form.id == 2) psi = phi / std::pow(x * x + a2, 0.25);
        if (form.id == 3) psi = phi / std::sqrt(x * x + a2);
        out.x[half + i] = x;
        out.psi[half + i] = psi;
        out.x[half - i] = -x;
        out.psi[half - i] = (parity == Parity::even) ? psi : -psi;
    }
    if (parity == Parity::odd) out.psi[half] = 0.0;

    // unit L2 norm via composite Simpson on the uniform grid
    double norm = 0.0;
    const double h = out.x[1] - out.x[0];
    for (std::size_t i = 0; i + 2 < out.psi.size(); i += 2) {
        norm += h / 3.0 *
                (out.psi[i] * out.psi[i] + 4.0 * out.psi[i + 1] * out.psi[i + 1] +
                 out.psi[i + 2] * out.psi[i + 2]);
    }
    const double s = 1.0 / std::sqrt(norm);
    for (double& v : out.psi) v *= s;
    return out;
}

// ---------------------------------------------------------------------
// oscillator-basis matrix backend
// ---------------------------------------------------------------------

struct OscillatorBasisConfig {
    int n_basis = 400;
    double length_scale = 0.0;  // 0 = default sqrt(a)

    double effective_scale(const ModelParams& params) const {
        return length_scale > 0.0 ? length_scale : std::sqrt(params.a);
    }
    void validate() const {
        if (n_basis < 2) throw std::invalid_argument("OscillatorBasisConfig: n_basis >= 2");
    }
};

/// Position and momentum in the truncated oscillator basis. X is real
/// symmetric tridiagonal; P is purely imaginary antisymmetric, stored
/// through its real factor s with P = i s.
struct OscillatorOperators {
    Mat x;
    Mat s;
};

inline OscillatorOperators build_oscillator_matrices(const ModelParams& params,
                                                     const OscillatorBasisConfig& cfg) {
    cfg.validate();
    const int n = cfg.n_basis;
    const double scale = cfg.effective_scale(params);
    OscillatorOperators ops{Mat(n, n), Mat(n, n)};
    for (int k = 0; k + 1 < n; ++k) {
        const double ladder = std::sqrt(0.5 * (k + 1));
        ops.x(k, k + 1) = scale * ladder;
        ops.x(k + 1, k) = scale * ladder;
        ops.s(k, k + 1) = -ladder / scale;
        ops.s(k + 1, k) = ladder / scale;
    }
    return ops;
}

/// f(X) by spectral decomposition of the (symmetric) position matrix.
inline Mat function_of_x(const Mat& x, const std::function<double(double)>& f) {
    Mat u;
    std::vector<double> xi = numerics::dense_sym_eigen_full(x, &u);
    const int n = x.rows();
    Mat fu = u;  // columns scaled by f(xi)
    for (int col = 0; col < n; ++col) {
        const double fv = f(xi[col]);
        for (int row = 0; row < n; ++row) fu(row, col) *= fv;
    }
    return fu * u.transposed();
}

/// Hamiltonian matrix of the requested form with the exact operator
/// ordering, symmetrized against round-off. Operators are assembled in a
/// slightly padded basis and the leading block is returned: all retained
/// entries are then exact matrix elements of the untruncated operator
/// (the bands are narrow), so the truncation stays variational instead of
/// leaking indefinite corner junk into the low spectrum.
inline Mat matrix_hamiltonian(QuantForm form, const ModelParams& params,
                              const OscillatorBasisConfig& cfg) {
    OscillatorBasisConfig padded = cfg;
    padded.n_basis = cfg.n_basis + 8;
    const OscillatorOperators ops = build_oscillator_matrices(params, padded);
    const int n = padded.n_basis;
    const double a2 = params.a2();

    Mat xx = ops.x * ops.x;  // X^2 + a^2
    for (int i = 0; i < n; ++i) xx(i, i) += a2;
    Mat pp = -1.0 * (ops.s * ops.s);  // P^2 + a^2 = -S^2 + a^2
    for (int i = 0; i < n; ++i) pp(i, i) += a2;

    Mat h;
    switch (form.id) {
        case 1: {
            h = 0.5 * (xx * pp + pp * xx);
            break;
        }
        case 2: {
            const Mat q = function_of_x(ops.x, [a2](double t) { return std::pow(t * t + a2, 0.25); });
            const Mat r = function_of_x(ops.x, [a2](double t) { return std::sqrt(t * t + a2); });
            h = -1.0 * (q * (ops.s * (r * (ops.s * q)))) + a2 * xx;
            break;
        }
        case 3: {
            const Mat r = function_of_x(ops.x, [a2](double t) { return std::sqrt(t * t + a2); });
            h = r * (pp * r);
            break;
        }
        default:
            throw std::invalid_argument("matrix_hamiltonian: bad form");
    }
    h.symmetrize();
    return h.leading(cfg.n_basis);
}

/// Lowest n_max levels from dense diagonalization. Converts H_E
/// eigenvalues to E = sqrt(H_E - a^4); truncation artifacts below a^4 are
/// flagged invalid.
inline Spectrum spectrum_matrix(QuantForm form, const ModelParams& params,
                                const OscillatorBasisConfig& cfg, int n_max) {
    if (params.hbar != 1.0) {
        const ModelParams unit(params.a / std::sqrt(params.hbar), 1.0);
        return detail::rescale_from_unit_hbar(spectrum_matrix(form, unit, cfg, n_max), params);
    }
    cfg.validate();
    if (n_max < 1 || 4 * n_max > cfg.n_basis)
        throw std::invalid_argument("spectrum_matrix: need n_max <= n_basis/4");

    const Mat h = matrix_hamiltonian(form, params, cfg);
    const std::vector<double> lam = numerics::dense_sym_eigen(h, n_max);

    Spectrum spec;
    spec.backend = Backend::matrix;
    spec.params = params;
    spec.config_summary = "form=" + std::to_string(form.id) +
                          " n_basis=" + std::to_string(cfg.n_basis);
    const double a4 = params.a4();
    for (int i = 0; i < n_max; ++i) {
        Level l;
        l.n = i + 1;
        l.parity = parity_of_level(l.n);
        l.backend = Backend::matrix;
        l.h_e = lam[i];
        if (lam[i] < a4) {
            l.valid = false;
            l.e = 0.0;
            spec.warnings.push_back("level " + std::to_string(l.n) +
                                    ": H_E below a^4 (truncation artifact)");
        } else {
            l.e = std::sqrt(lam[i] - a4);
        }
        l.residual = 1e-12 * std::max(1.0, std::fabs(lam[i]));
        spec.levels.push_back(l);
    }
    return spec;
}

// ---------------------------------------------------------------------
// ladder-operator identity H1 + 3/4
// ---------------------------------------------------------------------

struct IdentityCheckResult {
    double norm_dev_a = 0.0;  // interior-block max |H'_1 - H1 - 3/4|
    double norm_dev_b = 0.0;
    double eig_dev_a = 0.0;  // max over low levels of |eig shift - 3/4|
    double eig_dev_b = 0.0;
};

/// Builds 1/2(AA^dag + A^dag A) and the mirrored variant from
///     A = 1/2(xp + px) + i a (x + p) - a^2
///     B = -1/2(xp + px) + i a (x - p) - a^2
/// (B is A under p -> -p) and measures the deviation from H1 + 3/4 on the
/// interior block, both entrywise and through low eigenvalues.
inline IdentityCheckResult shifted_identity_check(const ModelParams& params,
                                                  const OscillatorBasisConfig& cfg,
                                                  int n_levels = 10) {
    if (params.hbar != 1.0)
        throw std::invalid_argument("shifted_identity_check: defined at hbar = 1");
    cfg.validate();
    const OscillatorOperators ops = build_oscillator_matrices(params, cfg);
    const int n = cfg.n_basis;
    const int interior = n / 2;
    const double a = params.a;
    const double a2 = params.a2();

    Mat xx = ops.x * ops.x;
    for (int i = 0; i < n; ++i) xx(i, i) += a2;
    Mat pp = -1.0 * (ops.s * ops.s);
    for (int i = 0; i < n; ++i) pp(i, i) += a2;
    Mat h1 = 0.5 * (xx * pp + pp * xx);
    h1.symmetrize();

    const Mat dil = 0.5 * (ops.x * ops.s + ops.s * ops.x);  // 1/2(XS+SX), antisymmetric

    auto variant = [&](double sign_d, double sign_p) {
        // A-like operator F + iG with
        //   F = -sign_p * a S - a^2,  G = sign_d * dil + a X
        Mat f = (-sign_p * a) * ops.s;
        for (int i = 0; i < n; ++i) f(i, i) -= a2;
        Mat g = sign_d * dil + a * ops.x;
        const Mat ft = f.transposed();
        const Mat gt = g.transposed();
        Mat re = 0.5 * (f * ft + ft * f + g * gt + gt * g);
        Mat im = 0.5 * (g * ft - f * gt + ft * g - gt * f);
        return std::make_pair(std::move(re), std::move(im));
    };

    auto [re_a, im_a] = variant(+1.0, +1.0);
    auto [re_b, im_b] = variant(-1.0, -1.0);

    auto deviation = [&](const Mat& re, const Mat& im) {
        double dev = 0.0;
        for (int i = 0; i < interior; ++i)
            for (int j = 0; j < interior; ++j) {
                const double target = h1(i, j) + (i == j ? 0.75 : 0.0);
                dev = std::max(dev, std::fabs(re(i, j) - target));
                dev = std::max(dev, std::fabs(im(i, j)));
            }
        return dev;
    };

    const std::vector<double> e1 = numerics::dense_sym_eigen(h1.leading(interior), n_levels);
    auto eig_dev = [&](const Mat& re) {
        const std::vector<double> ep = numerics::dense_sym_eigen(re.leading(interior), n_levels);
        double dev = 0.0;
        for (int i = 0; i < n_levels; ++i)
            dev = std::max(dev, std::fabs(ep[i] - e1[i] - 0.75));
        return dev;
    };

    IdentityCheckResult out;
    out.norm_dev_a = deviation(re_a, im_a);
    out.norm_dev_b = deviation(re_b, im_b);
    out.eig_dev_a = eig_dev(re_a);
    out.eig_dev_b = eig_dev(re_b);
    return out;
}

}  // namespace xp2::quantum
