// Adaptive embedded Runge-Kutta integration (Dormand-Prince 5(4), PI step
// control) with cubic-Hermite dense output, plus a fixed-step RK4 debug
// backend.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "xp2/numerics/roots.hpp"

namespace xp2::numerics {

/// First-order system y' = f(t, y).
struct OdeSystem {
    int dimension = 0;
    std::function<void(double t, const double* y, double* dydt)> rhs;
};

/// One accepted integration node: state and derivative at time t.
struct OdeNode {
    double t;
    std::vector<double> y;
    std::vector<double> dy;
};

/// Accepted steps of an adaptive solve; samples anywhere in the covered
/// time range through piecewise cubic Hermite interpolation.
class OdeTrajectory {
  public:
    explicit OdeTrajectory(std::vector<OdeNode> nodes) : nodes_(std::move(nodes)) {
        forward_ = nodes_.back().t >= nodes_.front().t;
    }

    double t_begin() const { return nodes_.front().t; }
    double t_end() const { return nodes_.back().t; }
    const std::vector<OdeNode>& nodes() const { return nodes_; }

    std::vector<double> at(double t) const {
        std::vector<double> y(nodes_.front().y.size());
        sample(t, y.data());
        return y;
    }

    void sample(double t, double* y_out) const {
        const std::size_t k = locate(t);
        const OdeNode& n0 = nodes_[k];
        const OdeNode& n1 = nodes_[k + 1];
        const double h = n1.t - n0.t;
        const double s = (h == 0.0) ? 0.0 : (t - n0.t) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        for (std::size_t i = 0; i < n0.y.size(); ++i)
            y_out[i] = h00 * n0.y[i] + h10 * h * n0.dy[i] + h01 * n1.y[i] + h11 * h * n1.dy[i];
    }

  private:
    std::size_t locate(double t) const {
        // clamp to covered range; monotone node times in either direction
        std::size_t lo = 0, hi = nodes_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            const bool left = forward_ ? (t < nodes_[mid].t) : (t > nodes_[mid].t);
            (left ? hi : lo) = mid;
        }
        return lo;
    }

    std::vector<OdeNode> nodes_;
    bool forward_;
};

struct OdeOptions {
    double tol = 1e-10;        // relative and absolute error weight
    double max_step = 0.0;     // 0 = unlimited
    double initial_step = 0.0; // 0 = heuristic
    long max_steps = 2'000'000;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a2[1] = {1.0 / 5};
inline constexpr double dp_a3[2] = {3.0 / 40, 9.0 / 40};
inline constexpr double dp_a4[3] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
inline constexpr double dp_a5[4] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
inline constexpr double dp_a6[5] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                                    -5103.0 / 18656};
inline constexpr double dp_b[6] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                                   11.0 / 84};
inline constexpr double dp_e[7] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

}  // namespace detail

/// Adaptive driver. Calls on_step(t, y, dy) after every accepted step
/// (including the initial state); the callback may rescale y in place and
/// must then return true so stage data is refreshed. Integrates from
/// t_span[0] to t_span[1] in either direction.
template <typename Callback>
void ode_drive(const OdeSystem& sys, std::vector<double>& y, std::array<double, 2> t_span,
               const OdeOptions& opt, Callback&& on_step) {
    const int n = sys.dimension;
    if (static_cast<int>(y.size()) != n)
        throw std::invalid_argument("ode_drive: state dimension mismatch");
    if (!(opt.tol > 0.0)) throw std::invalid_argument("ode_drive: tol must be positive");

    const double t0 = t_span[0], t1 = t_span[1];
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    double t = t0;

    std::vector<double> k[7];
    for (auto& v : k) v.assign(n, 0.0);
    std::vector<double> y_try(n), y_stage(n);

    auto eval = [&](double tt, const std::vector<double>& yy, std::vector<double>& out) {
        sys.rhs(tt, yy.data(), out.data());
        for (double v : out)
            if (!std::isfinite(v)) throw solver_error("ode_drive: non-finite right-hand side");
    };

    eval(t, y, k[0]);
    if (on_step(t, y, k[0])) eval(t, y, k[0]);

    const double span = std::fabs(t1 - t0);
    if (span == 0.0) return;

    double h = opt.initial_step > 0.0 ? opt.initial_step : span * 1e-4;
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

    double err_old = 1e-4;
    const double safety = 0.9, beta = 0.04, expo1 = 0.2 - beta * 0.75;
    const double eps = std::numeric_limits<double>::epsilon();

    for (long steps = 0; steps < opt.max_steps; ++steps) {
        if ((t - t1) * dir >= 0.0) return;
        h = std::min(h, std::fabs(t1 - t));
        if (h <= eps * std::fabs(t) * 4.0 && h < span * 1e-14)
            throw solver_error("ode_drive: step size underflow (stiffness or singularity)");
        const double hs = h * dir;

        // stages 2..6
        const double* arows[5] = {detail::dp_a2, detail::dp_a3, detail::dp_a4, detail::dp_a5,
                                  detail::dp_a6};
        for (int s = 1; s <= 5; ++s) {
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j) acc += arows[s - 1][j] * k[j][i];
                y_stage[i] = y[i] + hs * acc;
            }
            eval(t + detail::dp_c[s] * hs, y_stage, k[s]);
        }
        // 5th-order solution, then FSAL stage 7 at the new point
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < 6; ++j) acc += detail::dp_b[j] * k[j][i];
            y_try[i] = y[i] + hs * acc;
        }
        eval(t + hs, y_try, k[6]);

        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            double e = 0.0;
            for (int j = 0; j < 7; ++j) e += detail::dp_e[j] * k[j][i];
            e *= hs;
            const double sk = opt.tol + opt.tol * std::max(std::fabs(y[i]), std::fabs(y_try[i]));
            err += (e / sk) * (e / sk);
        }
        err = std::sqrt(err / n);

        if (err <= 1.0) {
            t += hs;
            y.swap(y_try);
            k[0].swap(k[6]);
            if (on_step(t, y, k[0])) eval(t, y, k[0]);
            err_old = std::max(err, 1e-4);
        }
        double fac = safety * std::pow(std::max(err, 1e-16), -expo1) * std::pow(err_old, beta);
        fac = std::clamp(fac, 0.2, 5.0);
        h *= fac;
        if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    }
    throw solver_error("ode_drive: step count cap reached");
}

/// Adaptive solve storing every accepted step for dense sampling.
inline OdeTrajectory ode_solve(const OdeSystem& sys, std::vector<double> y0,
                               std::array<double, 2> t_span, double tol = 1e-10,
                               double max_step = 0.0) {
    OdeOptions opt;
    opt.tol = tol;
    opt.max_step = max_step;
    std::vector<OdeNode> nodes;
    ode_drive(sys, y0, t_span, opt, [&](double t, const std::vector<double>& y,
                                        const std::vector<double>& dy) {
        nodes.push_back({t, y, dy});
        return false;
    });
    if (nodes.size() < 2) {
        nodes.push_back(nodes.front());  // zero-span solve
    }
    return OdeTrajectory(std::move(nodes));
}

/// Solution values at caller-requested times (each inside the span).
inline std::vector<std::vector<double>> ode_solve_at(const OdeSystem& sys, std::vector<double> y0,
                                                     std::array<double, 2> t_span,
                                                     const std::vector<double>& times,
                                                     double tol = 1e-10) {
    const OdeTrajectory traj = ode_solve(sys, std::move(y0), t_span, tol);
    std::vector<std::vector<double>> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(traj.at(t));
    return out;
}

/// Fixed-step classical RK4; debug backend for cross-checking the
/// adaptive integrator.
inline std::vector<double> rk4_solve(const OdeSystem& sys, std::vector<double> y,
                                     std::array<double, 2> t_span, long n_steps) {
    const int n = sys.dimension;
    const double h = (t_span[1] - t_span[0]) / static_cast<double>(n_steps);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = t_span[0];
    for (long s = 0; s < n_steps; ++s) {
        sys.rhs(t, y.data(), k1.data());
        for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        sys.rhs(t + 0.5 * h, tmp.data(), k2.data());
        for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        sys.rhs(t + 0.5 * h, tmp.data(), k3.data());
        for (int i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        sys.rhs(t + h, tmp.data(), k4.data());
        for (int i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        t += h;
    }
    return y;
}

}  // namespace xp2::numerics
