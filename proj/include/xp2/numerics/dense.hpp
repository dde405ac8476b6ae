// Small dense real matrix type with Householder tridiagonalization and a
// symmetric eigensolver built on it. Sized for oscillator-basis
// Hamiltonians (N of a few hundred), not for general linear algebra.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "xp2/numerics/tridiag.hpp"

namespace xp2::numerics {

/// Row-major dense matrix of doubles.
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    Mat transposed() const {
        Mat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Leading principal submatrix (first n rows and columns).
    Mat leading(int n) const {
        Mat s(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s(i, j) = (*this)(i, j);
        return s;
    }

    Mat& operator+=(const Mat& o) {
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Mat& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }

    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(double s, Mat a) { return a *= s; }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Mat: dimension mismatch");
        Mat c(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            double* ci = &c.data_[static_cast<std::size_t>(i) * c.cols_];
            for (int k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                const double* bk = &b.data_[static_cast<std::size_t>(k) * b.cols_];
                for (int j = 0; j < b.cols_; ++j) ci[j] += aik * bk[j];
            }
        }
        return c;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::fabs(v));
        return m;
    }

    void symmetrize() {
        for (int i = 0; i < rows_; ++i)
            for (int j = i + 1; j < cols_; ++j) {
                const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
                (*this)(i, j) = v;
                (*this)(j, i) = v;
            }
    }

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Householder reduction of a symmetric matrix to tridiagonal form.
/// If accumulate is true, q is filled with the orthogonal transform so
/// that q^T * a * q is tridiagonal (q's columns feed tqli directly).
inline SymTridiag householder_tridiag(Mat a, Mat* q) {
    const int n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("householder_tridiag: square matrix required");
    std::vector<double> d(n, 0.0), e(n, 0.0);

    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::fabs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;  // store u/H for accumulation
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }

    if (q) {
        d[0] = 0.0;
        for (int i = 0; i < n; ++i) {
            if (d[i] != 0.0) {
                for (int j = 0; j < i; ++j) {
                    double g = 0.0;
                    for (int k = 0; k < i; ++k) g += a(i, k) * a(k, j);
                    for (int k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
                }
            }
            d[i] = a(i, i);
            a(i, i) = 1.0;
            for (int j = 0; j < i; ++j) a(j, i) = a(i, j) = 0.0;
        }
        *q = std::move(a);
    } else {
        for (int i = 0; i < n; ++i) d[i] = a(i, i);
    }

    SymTridiag t;
    t.diag = std::move(d);
    t.off.assign(n - 1, 0.0);
    for (int i = 1; i < n; ++i) t.off[i - 1] = e[i];
    return t;
}

/// Eigendecomposition of a dense symmetric matrix: all eigenvalues
/// ascending; eigenvectors (as columns of *vecs) when requested.
inline std::vector<double> dense_sym_eigen_full(const Mat& m, Mat* vecs) {
    const int n = m.rows();
    if (vecs) {
        Mat q;
        SymTridiag t = householder_tridiag(m, &q);
        std::vector<double> ev = tqli(std::move(t), q.data(), n, true);
        *vecs = std::move(q);
        return ev;
    }
    SymTridiag t = householder_tridiag(m, nullptr);
    if (n > 200) return sym_eigen(t, n);  // bisection beats QL without vectors
    return tqli(std::move(t), nullptr, 0, true);
}

/// k smallest eigenvalues of a dense symmetric matrix, ascending.
inline std::vector<double> dense_sym_eigen(const Mat& m, int k) {
    const int n = m.rows();
    if (k < 1 || k > n) throw std::invalid_argument("dense_sym_eigen: need 1 <= k <= N");
    SymTridiag t = householder_tridiag(m, nullptr);
    return sym_eigen(t, k);
}

}  // namespace xp2::numerics
