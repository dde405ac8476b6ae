// Symmetric tridiagonal eigenvalue tools: Sturm-sequence bisection for the
// k smallest eigenvalues, implicit-shift QL for full spectra (optionally
// accumulating eigenvectors), and inverse iteration for single vectors.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "xp2/numerics/roots.hpp"

namespace xp2::numerics {

/// Symmetric tridiagonal matrix: diag has length N, off length N-1.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> off;

    int size() const { return static_cast<int>(diag.size()); }
    void validate() const {
        if (diag.empty() || off.size() + 1 != diag.size())
            throw std::invalid_argument("SymTridiag: off-diagonal length must be N-1");
    }
};

namespace detail {

// Number of eigenvalues of m strictly below x (Sturm sequence via LDL^T).
inline int sturm_count(const SymTridiag& m, double x) {
    const int n = m.size();
    int count = 0;
    double q = m.diag[0] - x;
    if (q < 0.0) ++count;
    for (int i = 1; i < n; ++i) {
        if (q == 0.0) q = std::numeric_limits<double>::min();
        q = (m.diag[i] - x) - m.off[i - 1] * m.off[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

inline void gershgorin(const SymTridiag& m, double& lo, double& hi) {
    const int n = m.size();
    lo = std::numeric_limits<double>::max();
    hi = std::numeric_limits<double>::lowest();
    for (int i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::fabs(m.off[i - 1]) : 0.0) +
                         (i + 1 < n ? std::fabs(m.off[i]) : 0.0);
        lo = std::min(lo, m.diag[i] - r);
        hi = std::max(hi, m.diag[i] + r);
    }
}

}  // namespace detail

/// k smallest eigenvalues (ascending) by Sturm bisection. Robust for large
/// N when only a few eigenvalues are needed.
inline std::vector<double> sym_eigen(const SymTridiag& m, int k) {
    m.validate();
    const int n = m.size();
    if (k < 1 || k > n) throw std::invalid_argument("sym_eigen: need 1 <= k <= N");
    double lo, hi;
    detail::gershgorin(m, lo, hi);
    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = std::max({std::fabs(lo), std::fabs(hi), 1.0});
    std::vector<double> ev(k);
    for (int j = 0; j < k; ++j) {
        double a = (j == 0) ? lo : ev[j - 1];  // eigenvalues ascend
        double b = hi;
        // bisect to full relative precision of the eigenvalue itself,
        // with an absolute floor for eigenvalues near zero
        for (int it = 0; it < 220; ++it) {
            const double width_tol =
                2.0 * eps * std::max(std::fabs(a), std::fabs(b)) + 1e-30 * scale;
            if (b - a <= width_tol) break;
            const double mid = 0.5 * (a + b);
            if (detail::sturm_count(m, mid) >= j + 1)
                b = mid;
            else
                a = mid;
        }
        ev[j] = 0.5 * (a + b);
    }
    return ev;
}

/// Full spectrum by implicit-shift QL. If z is non-null it must point to a
/// row-major n*n matrix whose columns are pre-seeded (identity for a plain
/// tridiagonal; the Householder transform for a reduced dense matrix); on
/// return its columns are the eigenvectors matching the returned
/// eigenvalues. Eigenvalues are returned unsorted unless sort is true.
inline std::vector<double> tqli(SymTridiag m, double* z, int n_z, bool sort = true) {
    m.validate();
    const int n = m.size();
    std::vector<double>& d = m.diag;
    std::vector<double> e(n, 0.0);
    std::copy(m.off.begin(), m.off.end(), e.begin());  // e[0..n-2], e[n-1]=0

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int mm;
        do {
            for (mm = l; mm < n - 1; ++mm) {
                const double dd = std::fabs(d[mm]) + std::fabs(d[mm + 1]);
                if (std::fabs(e[mm]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (mm != l) {
                if (iter++ == 50) throw solver_error("tqli: too many QL iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[mm] - d[l] + e[l] / (g + (g >= 0.0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = mm - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[mm] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z) {
                        for (int row = 0; row < n_z; ++row) {
                            const double zi = z[row * n + i];
                            const double zi1 = z[row * n + i + 1];
                            z[row * n + i + 1] = s * zi + c * zi1;
                            z[row * n + i] = c * zi - s * zi1;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[mm] = 0.0;
            }
        } while (mm != l);
    }

    if (sort) {
        // selection sort keeping eigenvector columns aligned
        for (int i = 0; i < n - 1; ++i) {
            int kmin = i;
            for (int j = i + 1; j < n; ++j)
                if (d[j] < d[kmin]) kmin = j;
            if (kmin != i) {
                std::swap(d[i], d[kmin]);
                if (z)
                    for (int row = 0; row < n_z; ++row)
                        std::swap(z[row * n + i], z[row * n + kmin]);
            }
        }
    }
    return d;
}

/// Eigenvector for a given eigenvalue by inverse iteration (tridiagonal
/// LU with partial pivoting). Returns a unit vector; assumes lambda is an
/// accurate, well-separated eigenvalue.
inline std::vector<double> tridiag_eigenvector(const SymTridiag& m, double lambda) {
    m.validate();
    const int n = m.size();
    double lo, hi;
    detail::gershgorin(m, lo, hi);
    const double scale = std::max({std::fabs(lo), std::fabs(hi), 1.0});
    const double shift = lambda + 1e-13 * scale;  // keep the factorization nonsingular

    // banded LU of (m - shift I): sub a, diag b, super c, second super f
    std::vector<double> a(n, 0.0), b(n), c(n, 0.0), f(n, 0.0);
    for (int i = 0; i < n; ++i) b[i] = m.diag[i] - shift;
    for (int i = 0; i < n - 1; ++i) { a[i + 1] = m.off[i]; c[i] = m.off[i]; }

    std::vector<int> piv(n, 0);
    for (int i = 0; i < n - 1; ++i) {
        if (std::fabs(a[i + 1]) > std::fabs(b[i])) {
            piv[i] = 1;
            std::swap(b[i], a[i + 1]);
            std::swap(c[i], b[i + 1]);
            if (i + 2 < n) { f[i] = c[i + 1]; c[i + 1] = 0.0; }
        }
        if (b[i] == 0.0) b[i] = 1e-300;
        const double l = a[i + 1] / b[i];
        a[i + 1] = l;  // store multiplier
        b[i + 1] -= l * c[i];
        if (i + 2 < n) c[i + 1] -= l * f[i];
    }
    if (b[n - 1] == 0.0) b[n - 1] = 1e-300;

    auto solve = [&](std::vector<double>& v) {
        for (int i = 0; i < n - 1; ++i) {
            if (piv[i]) std::swap(v[i], v[i + 1]);
            v[i + 1] -= a[i + 1] * v[i];
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = v[i];
            if (i + 1 < n) s -= c[i] * v[i + 1];
            if (i + 2 < n) s -= f[i] * v[i + 2];
            v[i] = s / b[i];
        }
    };

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    for (int pass = 0; pass < 3; ++pass) {
        solve(v);
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) throw solver_error("tridiag_eigenvector: inverse iteration collapsed");
        for (double& x : v) x /= norm;
    }
    // deterministic sign: largest-magnitude component positive
    int imax = 0;
    for (int i = 1; i < n; ++i)
        if (std::fabs(v[i]) > std::fabs(v[imax])) imax = i;
    if (v[imax] < 0.0)
        for (double& x : v) x = -x;
    return v;
}

}  // namespace xp2::numerics
