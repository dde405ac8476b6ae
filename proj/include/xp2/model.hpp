// Core value types of the regularized (xp)^2 model
//     H(x, p) = (x^2 + a^2)(p^2 + a^2),   a > 0.
#pragma once

#include <cmath>
#include <stdexcept>

namespace xp2 {

/// Model constants: regulator a and reduced Planck constant hbar.
struct ModelParams {
    double a = 1.0;
    double hbar = 1.0;

    ModelParams() = default;
    ModelParams(double a_, double hbar_ = 1.0) : a(a_), hbar(hbar_) {
        if (!(a > 0.0)) throw std::domain_error("ModelParams: regulator a must be positive");
        if (!(hbar > 0.0)) throw std::domain_error("ModelParams: hbar must be positive");
    }

    double a2() const { return a * a; }
    double a4() const { return a * a * a * a; }
};

/// Energy label pair (E, H_E) with H_E = E^2 + a^4 enforced.
struct EnergyPoint {
    double e;
    double h_e;

    static EnergyPoint from_e(const ModelParams& params, double e) {
        if (!(e >= 0.0)) throw std::domain_error("EnergyPoint: E must be non-negative");
        return EnergyPoint{e, e * e + params.a4()};
    }
    static EnergyPoint from_h(const ModelParams& params, double h_e) {
        if (!(h_e >= params.a4()))
            throw std::domain_error("EnergyPoint: H_E below the ground value a^4");
        return EnergyPoint{std::sqrt(h_e - params.a4()), h_e};
    }
};

struct PhasePoint {
    double x;
    double p;
};

/// Canonically transformed coordinates, x = a sinh(u), p = v/(a cosh(u)).
struct UVPoint {
    double u;
    double v;
};

}  // namespace xp2
