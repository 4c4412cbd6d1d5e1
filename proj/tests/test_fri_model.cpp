#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include <sphfri/errors.hpp>
#include <sphfri/fri_model.hpp>
#include <sphfri/sh_core.hpp>

#include "support.hpp"

using namespace sphfri;
using testsup::kPi;
using cplx = std::complex<double>;

TEST_CASE("dirac_node encodes location as sin(theta) e^{-i phi}") {
    Dirac d1{kPi / 2.0, 0.0, 1.0};
    CHECK(std::abs(dirac_node(d1) - cplx(1.0, 0.0)) <= 1e-15);
    Dirac d2{kPi / 2.0, kPi / 2.0, 1.0};
    CHECK(std::abs(dirac_node(d2) - cplx(0.0, -1.0)) <= 1e-15);
    Dirac d3{kPi / 6.0, kPi, 1.0};
    CHECK(std::abs(dirac_node(d3) - cplx(-0.5, 0.0)) <= 1e-15);
}

TEST_CASE("great_circle_distance basics") {
    SphDirection a{0.3, 1.0};
    CHECK(great_circle_distance(a, a) <= 1e-12);
    SphDirection b{0.7, 1.0};
    CHECK(great_circle_distance(a, b) == doctest::Approx(0.4).epsilon(1e-12));
    SphDirection c{kPi - 0.3, 1.0 + kPi};
    CHECK(great_circle_distance(a, c) == doctest::Approx(kPi).epsilon(1e-12));
    // symmetric
    CHECK(great_circle_distance(b, a) == great_circle_distance(a, b));
}

TEST_CASE("generate_instance: deterministic per seed, distinct across seeds") {
    InstanceGenConfig cfg;
    cfg.K = 6;
    cfg.rng_seed = 42;
    auto a = generate_instance(cfg);
    auto b = generate_instance(cfg);
    REQUIRE(a.size() == 6);
    REQUIRE(b.size() == 6);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].theta == b[i].theta);
        CHECK(a[i].phi == b[i].phi);
        CHECK(a[i].alpha == b[i].alpha);
    }
    cfg.rng_seed = 43;
    auto c = generate_instance(cfg);
    CHECK(a[0].theta != c[0].theta);
}

TEST_CASE("generate_instance: honors ranges, separation, node distinctness") {
    InstanceGenConfig cfg;
    cfg.K = 20;
    cfg.rng_seed = 7;
    auto sig = generate_instance(cfg);
    REQUIRE(sig.size() == 20);
    const double sep = kPi / 60.0;  // default pi/(3K)
    for (size_t i = 0; i < sig.size(); ++i) {
        CHECK(sig[i].theta > 0.0);
        CHECK(sig[i].theta < kPi);
        CHECK(sig[i].phi >= 0.0);
        CHECK(sig[i].phi < 2.0 * kPi);
        CHECK(std::abs(sig[i].alpha.real()) <= 1.0);
        CHECK(std::abs(sig[i].alpha.imag()) <= 1.0);
        for (size_t j = i + 1; j < sig.size(); ++j) {
            CHECK(great_circle_distance({sig[i].theta, sig[i].phi},
                                        {sig[j].theta, sig[j].phi}) >= sep);
            CHECK(std::abs(dirac_node(sig[i]) - dirac_node(sig[j])) >= 1e-6);
        }
    }
}

TEST_CASE("generate_instance: amplitude floor and colatitude law") {
    InstanceGenConfig cfg;
    cfg.K = 8;
    cfg.rng_seed = 11;
    cfg.amplitude_floor = 1.2;
    auto sig = generate_instance(cfg);
    for (const auto& d : sig) CHECK(std::abs(d.alpha) >= 1.2);

    cfg.theta_distribution = ThetaDistribution::UniformColatitude;
    auto alt = generate_instance(cfg);
    REQUIRE(alt.size() == 8);
    CHECK(alt[0].theta != sig[0].theta);  // a different sampling law
    for (const auto& d : alt) {
        CHECK(d.theta > 0.0);
        CHECK(d.theta < kPi);
    }
}

TEST_CASE("generate_instance: attempt budget and config validation") {
    InstanceGenConfig cfg;
    cfg.K = 10;
    cfg.min_separation = 3.0;  // ten points pairwise >= 3.0 cannot fit
    cfg.max_attempts = 2000;
    cfg.rng_seed = 1;
    CHECK_THROWS_AS(generate_instance(cfg), GenerationError);

    InstanceGenConfig bad;
    bad.K = 0;
    CHECK_THROWS_AS(generate_instance(bad), std::invalid_argument);
    bad = InstanceGenConfig{};
    bad.amplitude_lo = 1.0;
    bad.amplitude_hi = -1.0;
    CHECK_THROWS_AS(generate_instance(bad), std::invalid_argument);
    bad = InstanceGenConfig{};
    bad.min_separation = -0.5;
    CHECK_THROWS_AS(generate_instance(bad), std::invalid_argument);
    bad = InstanceGenConfig{};
    bad.max_attempts = 0;
    CHECK_THROWS_AS(generate_instance(bad), std::invalid_argument);
}

TEST_CASE("forward coefficients: single Dirac against the sifting rule") {
    Dirac d{kPi / 2.0, 0.0, 1.0};
    auto flm = forward_sh_coefficients({d}, 2);
    CHECK(flm.bandlimit() == 2);
    CHECK(std::abs(flm.at(0, 0) - cplx(1.0 / std::sqrt(4.0 * kPi))) <= 1e-15);
    // f_11 = conj(Y_1^1(pi/2, 0)), a negative real number
    auto y11 = eval_ylm(1, 1, SphDirection{kPi / 2.0, 0.0});
    CHECK(std::abs(flm.at(1, 1) - std::conj(y11)) <= 1e-16);
    CHECK(flm.at(1, 1).real() ==
          doctest::Approx(-std::sqrt(3.0 / (8.0 * kPi))).epsilon(1e-14));

    // weighted, arbitrary direction
    Dirac g{1.2, 0.7, cplx(1.3, -0.4)};
    auto glm = forward_sh_coefficients({g}, 5);
    for (int l = 0; l < 5; ++l)
        for (int m = -l; m <= l; ++m) {
            auto want = g.alpha * std::conj(eval_ylm(l, m, {g.theta, g.phi}));
            CHECK(std::abs(glm.at(l, m) - want) <= 1e-15 * std::max(1.0, std::abs(want)));
        }

    CHECK_THROWS_AS(forward_sh_coefficients({d}, 0), std::invalid_argument);
}

TEST_CASE("forward coefficients: linear in the ensemble") {
    InstanceGenConfig cfg;
    cfg.K = 3;
    cfg.rng_seed = 21;
    auto a = generate_instance(cfg);
    cfg.K = 2;
    cfg.rng_seed = 22;
    auto b = generate_instance(cfg);

    DiracEnsemble both = a;
    both.insert(both.end(), b.begin(), b.end());

    const int L = 6;
    auto fa = forward_sh_coefficients(a, L);
    auto fb = forward_sh_coefficients(b, L);
    auto fc = forward_sh_coefficients(both, L);
    for (int l = 0; l < L; ++l)
        for (int m = -l; m <= l; ++m)
            CHECK(std::abs(fc.at(l, m) - (fa.at(l, m) + fb.at(l, m))) <= 1e-14);
}

TEST_CASE("forward coefficients: real amplitudes give conjugate symmetry") {
    DiracEnsemble sig{{0.9, 1.4, 0.8}, {2.0, 4.1, -0.5}, {1.1, 5.9, 1.7}};
    const int L = 7;
    auto flm = forward_sh_coefficients(sig, L);
    for (int l = 0; l < L; ++l)
        for (int m = 0; m <= l; ++m) {
            auto want = std::conj(flm.at(l, m));
            if (m % 2 != 0) want = -want;
            CHECK(std::abs(flm.at(l, -m) - want) <= 1e-12);
        }
}

TEST_CASE("forward coefficients: empty ensemble is the zero signal") {
    auto flm = forward_sh_coefficients({}, 3);
    for (const auto& v : flm.values()) CHECK(v == cplx(0.0));
}

TEST_CASE("forward coefficients match quadrature projection of the field") {
    InstanceGenConfig cfg;
    cfg.K = 3;
    cfg.rng_seed = 23;
    auto sig = generate_instance(cfg);
    const int L = 8;
    auto flm = forward_sh_coefficients(sig, L);

    std::vector<double> gl_x, gl_w;
    testsup::gauss_legendre(8, gl_x, gl_w);  // exact through degree 15
    const int n_phi = 16;                    // > 2(L-1) Fourier modes
    const double dphi = 2.0 * kPi / double(n_phi);

    for (int l = 0; l < L; ++l) {
        for (int m = -l; m <= l; ++m) {
            cplx proj = 0.0;
            for (size_t i = 0; i < gl_x.size(); ++i) {
                double theta = std::acos(gl_x[i]);
                for (int j = 0; j < n_phi; ++j) {
                    SphDirection dir{theta, dphi * double(j)};
                    proj += gl_w[i] * dphi * eval_bandlimited(flm, dir) *
                            std::conj(eval_ylm(l, m, dir));
                }
            }
            CHECK(std::abs(proj - flm.at(l, m)) <= 1e-10);
        }
    }
}

TEST_CASE("eval_bandlimited: constant band, overload agreement, localization") {
    Dirac d{1.0, 2.0, 1.0};

    // L = 1 keeps only the constant term
    auto f1 = forward_sh_coefficients({d}, 1);
    cplx c = f1.at(0, 0) / std::sqrt(4.0 * kPi);
    CHECK(std::abs(eval_bandlimited({d}, 1, {0.4, 0.1}) - c) <= 1e-14);
    CHECK(std::abs(eval_bandlimited({d}, 1, {2.9, 5.2}) - c) <= 1e-14);

    // ensemble and coefficient overloads see the same field
    const int L = 12;
    auto flm = forward_sh_coefficients({d}, L);
    for (double theta : {0.3, 1.0, 2.5})
        for (double phi : {0.0, 2.0, 4.4}) {
            auto via_sig = eval_bandlimited({d}, L, {theta, phi});
            auto via_flm = eval_bandlimited(flm, {theta, phi});
            CHECK(std::abs(via_sig - via_flm) <= 1e-12);
        }

    // the band-limited spike peaks near the true location
    double best = -1.0, best_theta = 0.0, best_phi = 0.0;
    for (int i = 1; i < 40; ++i)
        for (int j = 0; j < 80; ++j) {
            SphDirection dir{kPi * double(i) / 40.0, 2.0 * kPi * double(j) / 80.0};
            double mag = std::abs(eval_bandlimited(flm, dir));
            if (mag > best) {
                best = mag;
                best_theta = dir.theta;
                best_phi = dir.phi;
            }
        }
    CHECK(great_circle_distance({best_theta, best_phi}, {1.0, 2.0}) <= 0.15);

    CHECK(std::abs(eval_bandlimited(DiracEnsemble{}, 4, {1.0, 1.0})) == 0.0);
}

TEST_CASE("ShCoefficients packing and bounds") {
    ShCoefficients flm(3);
    flm.at(2, -1) = cplx(3.0, -2.0);
    CHECK(flm.values()[5] == cplx(3.0, -2.0));  // l*l + l + m = 4 + 2 - 1
    CHECK_THROWS_AS(flm.at(3, 0), std::invalid_argument);
    CHECK_THROWS_AS(flm.at(1, 2), std::invalid_argument);
    CHECK_THROWS_AS(flm.at(1, -2), std::invalid_argument);
}
