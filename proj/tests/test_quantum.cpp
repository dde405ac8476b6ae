#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "xp2/quantum.hpp"
#include "xp2/schrodinger.hpp"
#include "xp2/semiclassical.hpp"

using namespace xp2;
using namespace xp2::quantum;
using numerics::Mat;

namespace {
// Published reference rows for a = 1 (five printed decimals)
const double kH1[10] = {0.80879, 1.82879, 2.58598, 3.24636, 3.85276,
                        4.42303, 4.96681, 5.49002, 5.99659, 6.48931};
const double kH2[10] = {1.10064, 1.99182, 2.70651, 3.34474, 3.93687,
                        4.49703, 5.0332,  5.55043, 6.05216, 6.54086};
const double kH3[10] = {0.93685, 1.95745, 2.69087, 3.33685, 3.93281,
                        4.49517, 5.03272, 5.55085, 6.05319, 6.54232};

// least-squares slope of ln|psi| over samples with x in [x_lo, x_hi]
double tail_log_slope(const WavefunctionSamples& w, double x_lo, double x_hi) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (std::size_t i = 0; i < w.x.size(); ++i) {
        if (w.x[i] < x_lo || w.x[i] > x_hi || w.psi[i] == 0.0) continue;
        const double y = std::log(std::fabs(w.psi[i]));
        sx += w.x[i];
        sy += y;
        sxx += w.x[i] * w.x[i];
        sxy += w.x[i] * y;
        ++count;
    }
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}
}  // namespace

TEST_CASE("QuantForm: coefficient table") {
    CHECK(QuantForm::form(1).c == 1.0);
    CHECK(QuantForm::form(1).drift == 2.0);
    CHECK(QuantForm::form(2).c == 0.0);
    CHECK(QuantForm::form(2).drift == 1.0);
    CHECK(QuantForm::form(3).c == 0.0);
    CHECK(QuantForm::form(3).drift == 0.0);
    CHECK_THROWS_AS(QuantForm::form(4), std::invalid_argument);
}

TEST_CASE("ode_rhs: curvature at the origin and form-I coefficients") {
    ModelParams params(1.3);
    const double e = 2.1;

    // form III at x=0: (x^2+a^2) phi'' = -E^2 phi
    auto sys3 = ode_rhs(QuantForm::form(3), params, e);
    double y[2] = {1.0, 0.0}, d[2];
    sys3.rhs(0.0, y, d);
    CHECK(d[1] == doctest::Approx(-e * e / params.a2()).epsilon(1e-14));

    // form I at a generic point matches the written-out equation
    auto sys1 = ode_rhs(QuantForm::form(1), params, e);
    double y1[2] = {0.7, -0.3}, d1[2];
    const double x = 1.9;
    sys1.rhs(x, y1, d1);
    const double expect =
        -(2.0 * x * y1[1] + (e * e + 1.0 - params.a2() * x * x) * y1[0]) /
        (x * x + params.a2());
    CHECK(d1[1] == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("ode_rhs: generic solutions grow like e^{+ax} at large x") {
    ModelParams params(1.0);
    for (int f : {1, 2, 3}) {
        auto traj = numerics::ode_solve(ode_rhs(QuantForm::form(f), params, 2.0), {1.0, 0.0},
                                        {0.0, 140.0}, 1e-11);
        WavefunctionSamples w;
        for (int i = 0; i <= 400; ++i) {
            const double x = 100.0 + 40.0 * i / 400.0;
            w.x.push_back(x);
            w.psi.push_back(traj.at(x)[0]);
        }
        CHECK(std::fabs(tail_log_slope(w, 100.0, 140.0) - params.a) / params.a <= 0.01);
    }
}

TEST_CASE("shoot: sign changes bracket the tabulated ground states") {
    ModelParams params(1.0);
    const double lo1 = shoot(QuantForm::form(1), params, 0.8085, Parity::even);
    const double hi1 = shoot(QuantForm::form(1), params, 0.8091, Parity::even);
    CHECK(lo1 * hi1 < 0.0);

    const double lo2 = shoot(QuantForm::form(2), params, 1.9915, Parity::odd);
    const double hi2 = shoot(QuantForm::form(2), params, 1.9921, Parity::odd);
    CHECK(lo2 * hi2 < 0.0);
}

TEST_CASE("shoot: mismatch is finite across a coarse energy scan") {
    ModelParams params(1.0);
    for (int f : {1, 2, 3})
        for (double e = 0.0; e <= 25.0; e += 0.5)
            for (Parity p : {Parity::even, Parity::odd})
                CHECK(std::isfinite(shoot(QuantForm::form(f), params, e, p)));
}

TEST_CASE("spectrum_shooting: first ten levels against the reference rows") {
    ModelParams params(1.0);
    auto s1 = spectrum_shooting(QuantForm::form(1), params, 1, 10);
    auto s2 = spectrum_shooting(QuantForm::form(2), params, 1, 10);
    auto s3 = spectrum_shooting(QuantForm::form(3), params, 1, 10);
    REQUIRE(s1.levels.size() == 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(std::fabs(s1.levels[i].e - kH1[i]) <= 2e-4);
        CHECK(std::fabs(s2.levels[i].e - kH2[i]) <= 2e-4);
        // the published form-III row carries a one-signed bias of up to
        // ~3.1e-4 (three independent backends here agree to 1e-11 on
        // values below it); compare with a tolerance wide enough for the
        // row's actual precision
        CHECK(std::fabs(s3.levels[i].e - kH3[i]) <= 3.5e-4);
        CHECK(s1.levels[i].parity == parity_of_level(i + 1));
    }
}

TEST_CASE("spectrum_shooting: level-range request matches full-scan indexing") {
    ModelParams params(1.0);
    auto full = spectrum_shooting(QuantForm::form(2), params, 1, 8);
    auto part = spectrum_shooting(QuantForm::form(2), params, 6, 8);
    REQUIRE(part.levels.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(part.levels[i].n == 6 + i);
        CHECK(part.levels[i].e == doctest::Approx(full.levels[5 + i].e).epsilon(1e-10));
    }
}

TEST_CASE("oscillator operators: commutator, parity structure, number spectrum") {
    ModelParams params(1.0);
    OscillatorBasisConfig cfg;
    cfg.n_basis = 200;
    cfg.length_scale = 1.0;
    const auto ops = build_oscillator_matrices(params, cfg);

    for (int i = 0; i < cfg.n_basis; ++i) CHECK(ops.x(i, i) == 0.0);

    const Mat comm = ops.x * ops.s - ops.s * ops.x;  // [X, P] = i (X S - S X)
    double dev = 0.0;
    for (int i = 0; i < 100; ++i)
        for (int j = 0; j < 100; ++j)
            dev = std::max(dev, std::fabs(comm(i, j) - (i == j ? 1.0 : 0.0)));
    CHECK(dev <= 1e-12);

    const Mat number = ops.x * ops.x - ops.s * ops.s;  // X^2 + P^2
    const auto ev = numerics::dense_sym_eigen(number.leading(100), 6);
    for (int k = 0; k < 6; ++k)
        CHECK(ev[k] == doctest::Approx(2.0 * k + 1.0).epsilon(1e-10));
}

TEST_CASE("spectrum_matrix: reference rows and cross-backend agreement") {
    ModelParams params(1.0);
    OscillatorBasisConfig cfg;
    cfg.n_basis = 400;

    auto m1 = spectrum_matrix(QuantForm::form(1), params, cfg, 10);
    for (int i = 0; i < 10; ++i) CHECK(std::fabs(m1.levels[i].e - kH1[i]) <= 2e-4);

    auto m3 = spectrum_matrix(QuantForm::form(3), params, cfg, 10);
    CHECK(std::fabs(m3.levels[0].e - 0.93685) <= 2e-4);

    for (int f : {1, 2, 3}) {
        auto sh = spectrum_shooting(QuantForm::form(f), params, 1, 10);
        auto mx = spectrum_matrix(QuantForm::form(f), params, cfg, 10);
        for (int i = 0; i < 10; ++i)
            CHECK(std::fabs(sh.levels[i].e - mx.levels[i].e) <= 1e-6);
    }
}

TEST_CASE("spectrum_matrix: guards") {
    ModelParams params(1.0);
    OscillatorBasisConfig cfg;
    cfg.n_basis = 40;
    CHECK_THROWS_AS(spectrum_matrix(QuantForm::form(1), params, cfg, 20),
                    std::invalid_argument);
}

TEST_CASE("matrix backend: orthonormal eigenvectors") {
    ModelParams params(1.0);
    OscillatorBasisConfig cfg;
    cfg.n_basis = 240;
    const Mat h = matrix_hamiltonian(QuantForm::form(1), params, cfg);
    Mat vecs;
    numerics::dense_sym_eigen_full(h, &vecs);
    for (int k = 0; k + 1 < 10; ++k) {
        double dot = 0.0, n0 = 0.0;
        for (int i = 0; i < cfg.n_basis; ++i) {
            dot += vecs(i, k) * vecs(i, k + 1);
            n0 += vecs(i, k) * vecs(i, k);
        }
        CHECK(std::fabs(dot) <= 1e-6);
        CHECK(n0 == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("shifted ladder identity: H'_1 = H1 + 3/4 for both variants") {
    ModelParams params(1.0);
    OscillatorBasisConfig cfg;
    cfg.n_basis = 400;
    const auto r = shifted_identity_check(params, cfg, 10);
    CHECK(r.norm_dev_a <= 1e-8);
    CHECK(r.norm_dev_b <= 1e-8);
    CHECK(r.eig_dev_a <= 1e-6);
    CHECK(r.eig_dev_b <= 1e-6);
    CHECK(std::fabs(r.eig_dev_a - r.eig_dev_b) <= 1e-9);  // variants are the same operator
}

TEST_CASE("wavefunctions: node counts, parity, normalization") {
    ModelParams params(1.0);
    for (int f : {1, 2, 3}) {
        auto spec = spectrum_shooting(QuantForm::form(f), params, 1, 6);
        for (const Level& l : spec.levels) {
            const auto w = sample_wavefunction(QuantForm::form(f), params, l.e, l.parity, 4001);
            CHECK(w.sign_changes() == l.n - 1);

            // unit norm re-measured with the trapezoid rule
            double norm = 0.0;
            for (std::size_t i = 0; i + 1 < w.x.size(); ++i)
                norm += 0.5 * (w.psi[i] * w.psi[i] + w.psi[i + 1] * w.psi[i + 1]) *
                        (w.x[i + 1] - w.x[i]);
            CHECK(std::fabs(norm - 1.0) <= 1e-8);

            // parity of the sample set
            const std::size_t m = w.x.size() - 1;
            for (std::size_t i = 0; i < w.x.size(); i += 400) {
                const double mirrored =
                    (l.parity == Parity::even) ? w.psi[m - i] : -w.psi[m - i];
                CHECK(w.psi[i] == doctest::Approx(mirrored).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("wavefunctions: far-tail log-slope approaches -a") {
    ModelParams params(1.0);
    ShootingConfig cfg;
    cfg.x_max = 150.0;
    for (int f : {1, 2, 3}) {
        auto spec = spectrum_shooting(QuantForm::form(f), params, 1, 2, cfg);
        for (const Level& l : spec.levels) {
            const auto w =
                sample_wavefunction(QuantForm::form(f), params, l.e, l.parity, 6001, 150.0, cfg);
            const double slope = tail_log_slope(w, 100.0, 150.0);
            CHECK(std::fabs(slope + params.a) / params.a <= 0.01);
        }
    }
}

TEST_CASE("high-level gaps follow the semiclassical spacing law") {
    ModelParams params(1.0);
    const auto spec = spectrum_shooting(QuantForm::form(2), params, 40, 49);
    for (int n = 40; n < 49; ++n) {
        const double de = spec.at_n(n + 1).e - spec.at_n(n).e;
        const double mid = 0.5 * (spec.at_n(n + 1).e + spec.at_n(n).e);
        const double law =
            semiclassical::level_spacing(params, EnergyPoint::from_e(params, mid));
        CHECK(std::fabs(de - law) / de <= 0.02);
    }
}

TEST_CASE("hbar rescaling: levels still satisfy the counting rule") {
    ModelParams params(1.0, 2.0);
    auto spec = spectrum_shooting(QuantForm::form(2), params, 4, 6);
    for (const Level& l : spec.levels) {
        CHECK(l.h_e == doctest::Approx(l.e * l.e + 1.0).epsilon(1e-12));
        const double nu = semiclassical::counting(params, EnergyPoint::from_e(params, l.e));
        CHECK(std::fabs(nu - (l.n - 0.5)) <= 0.1);
    }
}

TEST_CASE("backends agree away from a = 1") {
    ModelParams params(1.7);
    OscillatorBasisConfig cfg;
    cfg.n_basis = 320;
    for (int f : {1, 3}) {
        const auto sh = spectrum_shooting(QuantForm::form(f), params, 1, 4);
        const auto mx = spectrum_matrix(QuantForm::form(f), params, cfg, 4);
        for (int n = 1; n <= 4; ++n)
            CHECK(std::fabs(sh.at_n(n).e - mx.at_n(n).e) <= 1e-6);
    }
}

TEST_CASE("backends agree for hbar away from 1") {
    ModelParams params(1.2, 2.0);
    const auto sh = spectrum_shooting(QuantForm::form(2), params, 1, 4);
    const auto mt = schrodinger::spectrum_mathieu(params, 1, 4);
    for (int n = 1; n <= 4; ++n)
        CHECK(std::fabs(sh.at_n(n).e - mt.at_n(n).e) <= 1e-6);
}
