// Complete elliptic integrals K(m), E(m) and the Jacobi elliptic function
// sn(u|m).
//
// Parameter convention is m throughout (the modulus-squared slot):
//     K(m) = int_0^{pi/2} dtheta / sqrt(1 - m sin^2 theta)
// so a period written K(-E^2/a^4) evaluates the integrand
// 1/sqrt(1 + (E^2/a^4) sin^2 theta). Negative m is the primary use case
// here; mixing this up with the modulus-k convention is the classic bug.
//
// K and E go through Carlson symmetric forms R_F and R_D, which need no
// case analysis for m < 0. sn uses the descending-Landen/AGM recursion,
// with the imaginary-modulus transformation for m < 0.
#pragma once

#include <cmath>
#include <stdexcept>

namespace xp2::specfun {

/// Parameter m of the elliptic integrals (m < 1 here; m <= 0 is the
/// physically relevant range).
struct EllipticParameter {
    double m;
    EllipticParameter(double m_) : m(m_) {}
};

namespace detail {

/// Carlson symmetric integral R_F(x,y,z); x,y,z >= 0, at most one zero.
inline double carlson_rf(double x, double y, double z) {
    constexpr double errtol = 0.0010;
    constexpr double c1 = 1.0 / 24.0, c2 = 0.1, c3 = 3.0 / 44.0, c4 = 1.0 / 14.0;
    double xt = x, yt = y, zt = z;
    for (int it = 0; it < 200; ++it) {
        const double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
        const double lam = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        const double ave = (xt + yt + zt) / 3.0;
        const double dx = (ave - xt) / ave, dy = (ave - yt) / ave, dz = (ave - zt) / ave;
        if (std::max({std::fabs(dx), std::fabs(dy), std::fabs(dz)}) < errtol) {
            const double e2 = dx * dy - dz * dz;
            const double e3 = dx * dy * dz;
            return (1.0 + (c1 * e2 - c2 - c3 * e3) * e2 + c4 * e3) / std::sqrt(ave);
        }
    }
    throw std::runtime_error("carlson_rf: no convergence");
}

/// Carlson symmetric integral R_D(x,y,z) = R_J(x,y,z,z).
inline double carlson_rd(double x, double y, double z) {
    constexpr double errtol = 0.0010;
    constexpr double c1 = 3.0 / 14.0, c2 = 1.0 / 6.0, c3 = 9.0 / 22.0, c4 = 3.0 / 26.0;
    constexpr double c5 = 0.25 * c3, c6 = 1.5 * c4;
    double xt = x, yt = y, zt = z;
    double sum = 0.0, fac = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
        const double lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (zt + lam));
        fac *= 0.25;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        const double ave = 0.2 * (xt + yt + 3.0 * zt);
        const double dx = (ave - xt) / ave, dy = (ave - yt) / ave, dz = (ave - zt) / ave;
        if (std::max({std::fabs(dx), std::fabs(dy), std::fabs(dz)}) < errtol) {
            const double ea = dx * dy;
            const double eb = dz * dz;
            const double ec = ea - eb;
            const double ed = ea - 6.0 * eb;
            const double ee = ed + ec + ec;
            return 3.0 * sum +
                   fac *
                       (1.0 + ed * (-c1 + c5 * ed - c6 * dz * ee) +
                        dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))) /
                       (ave * std::sqrt(ave));
        }
    }
    throw std::runtime_error("carlson_rd: no convergence");
}

/// sn, cn, dn for parameter 0 <= m < 1 via the AGM recursion.
inline void sncndn_agm(double u, double m, double& sn, double& cn, double& dn) {
    if (m == 0.0) {
        sn = std::sin(u);
        cn = std::cos(u);
        dn = 1.0;
        return;
    }
    constexpr int max_depth = 64;
    double a[max_depth], c[max_depth];
    a[0] = 1.0;
    c[0] = std::sqrt(m);
    double b = std::sqrt(1.0 - m);
    int n = 0;
    while (std::fabs(c[n]) > 1e-17 * std::fabs(a[n]) && n + 1 < max_depth) {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = 0.5 * (a[n] - b);
        b = std::sqrt(a[n] * b);
        ++n;
    }
    double phi = std::ldexp(a[n] * u, n);
    for (int j = n; j >= 1; --j) {
        double s = c[j] * std::sin(phi) / a[j];
        s = std::min(1.0, std::max(-1.0, s));
        phi = 0.5 * (phi + std::asin(s));
    }
    sn = std::sin(phi);
    cn = std::cos(phi);
    // dn is strictly positive on the real axis for m < 1, so the defining
    // identity fixes it without the quarter-period degeneracy of the
    // amplitude-ratio formula
    dn = std::sqrt(std::max(0.0, 1.0 - m * sn * sn));
}

}  // namespace detail

/// Complete elliptic integral of the first kind, parameter convention.
inline double ellip_k(EllipticParameter p) {
    if (!(p.m < 1.0)) throw std::domain_error("ellip_k: requires m < 1");
    return detail::carlson_rf(0.0, 1.0 - p.m, 1.0);
}

/// Complete elliptic integral of the second kind, parameter convention.
inline double ellip_e(EllipticParameter p) {
    if (p.m == 1.0) return 1.0;
    if (p.m > 1.0) throw std::domain_error("ellip_e: requires m <= 1");
    return detail::carlson_rf(0.0, 1.0 - p.m, 1.0) -
           p.m / 3.0 * detail::carlson_rd(0.0, 1.0 - p.m, 1.0);
}

/// Jacobi sn(u|m), same parameter convention as ellip_k. m <= 0 is the
/// production range (trajectories); 0 <= m < 1 is supported for testing.
/// Negative parameter goes through the imaginary-modulus transformation
///     sn(u|-mu) = sn(v|m1) / (sqrt(1+mu) dn(v|m1)),
/// with m1 = mu/(1+mu) and v = u sqrt(1+mu). Arguments many periods out
/// are reduced modulo 4K first; the angle recursion loses accuracy when
/// 2^N a_N u gets large.
inline double jacobi_sn(double u, EllipticParameter p) {
    if (!(p.m < 1.0)) throw std::domain_error("jacobi_sn: requires m < 1");
    double sn, cn, dn;
    if (p.m >= 0.0) {
        double v = u;
        if (p.m > 0.0) {
            const double quarter = ellip_k(p);
            if (std::fabs(v) > 2.0 * quarter) v = std::remainder(v, 4.0 * quarter);
        }
        detail::sncndn_agm(v, p.m, sn, cn, dn);
        return sn;
    }
    const double mu = -p.m;
    const double m1 = mu / (1.0 + mu);
    const double root = std::sqrt(1.0 + mu);
    double v = u * root;
    const double quarter = ellip_k(m1);
    if (std::fabs(v) > 2.0 * quarter) v = std::remainder(v, 4.0 * quarter);
    detail::sncndn_agm(v, m1, sn, cn, dn);
    return sn / (root * dn);
}

}  // namespace xp2::specfun
