// Shared spectrum vocabulary: operator-ordering forms, parity, levels and
// backend-tagged spectra.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "xp2/model.hpp"

namespace xp2 {

/// The three self-adjoint orderings of (x^2+a^2)(p^2+a^2). All reduce to
/// one wave equation
///     (x^2+a^2) phi'' + drift * x phi' + (E^2 + c - a^2 x^2) phi = 0
/// with (drift, c) = (2, 1), (1, 0), (0, 0) for forms I, II, III.
struct QuantForm {
    int id;        // 1, 2, 3
    double c;      // constant term shift
    double drift;  // first-derivative coefficient (3 - id)

    static QuantForm form(int id) {
        switch (id) {
            case 1: return {1, 1.0, 2.0};
            case 2: return {2, 0.0, 1.0};
            case 3: return {3, 0.0, 0.0};
            default: throw std::invalid_argument("QuantForm: id must be 1, 2 or 3");
        }
    }
};

enum class Parity { even, odd };

/// Level n carries parity even for odd n (ground state even), odd
/// otherwise; node count is n - 1.
inline Parity parity_of_level(int n) { return (n % 2 == 1) ? Parity::even : Parity::odd; }

inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

enum class Backend { shooting, matrix, fd, mathieu, semiclassical };

inline const char* to_string(Backend b) {
    switch (b) {
        case Backend::shooting: return "shooting";
        case Backend::matrix: return "matrix";
        case Backend::fd: return "fd";
        case Backend::mathieu: return "mathieu";
        case Backend::semiclassical: return "semiclassical";
    }
    return "?";
}

/// One bound state.
struct Level {
    int n = 0;  // 1-based index
    Parity parity = Parity::even;
    double e = 0.0;
    double h_e = 0.0;
    double residual = 0.0;  // solver residual / error estimate
    Backend backend = Backend::shooting;
    bool valid = true;  // false for truncation/discretization artifacts
};

/// Ordered list of levels plus solver provenance.
struct Spectrum {
    std::vector<Level> levels;
    Backend backend = Backend::shooting;
    ModelParams params;
    std::string config_summary;
    std::vector<std::string> warnings;

    const Level& at_n(int n) const {
        for (const Level& l : levels)
            if (l.n == n) return l;
        throw std::out_of_range("Spectrum: no level with index n=" + std::to_string(n));
    }
};

/// Strict parity alternation and monotonicity check shared by every
/// spectrum backend. Throws on violation (a missed level).
inline void check_level_sequence(const std::vector<Level>& levels) {
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i].parity != parity_of_level(levels[i].n))
            throw std::runtime_error("spectrum: parity alternation violated at n=" +
                                     std::to_string(levels[i].n));
        if (i > 0) {
            if (levels[i].n != levels[i - 1].n + 1 || !(levels[i].e > levels[i - 1].e))
                throw std::runtime_error("spectrum: level ordering violated at n=" +
                                         std::to_string(levels[i].n));
        }
    }
}

}  // namespace xp2
