#include "wavelab/spectral.hpp"

#include "wavelab/errors.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace wavelab;
using testing::max_abs_diff;
using testing::naive_dft;
using testing::random_lowmode_field;

namespace {
const GridPtr g64 = make_grid(2.0 * M_PI, 64);
}

TEST_CASE("grid invariants") {
    CHECK_THROWS_AS(Grid(2.0 * M_PI, 6), InvalidParams);
    CHECK_THROWS_AS(Grid(2.0 * M_PI, 33), InvalidParams);
    CHECK_THROWS_AS(Grid(-1.0, 64), InvalidParams);

    const Grid g(10.0, 16);
    CHECK(g.spacing() * g.size() == doctest::Approx(g.length()).epsilon(1e-15));
    // Antisymmetric wavenumbers except the unpaired Nyquist mode.
    for (int k = 1; k < 8; ++k)
        CHECK(g.wavenumber_of_mode(k) == -g.wavenumber_of_mode(-k));
    CHECK(g.mode_at(8) == -8);
    CHECK(g.wavenumbers()[8] == doctest::Approx(-8 * 2.0 * M_PI / 10.0));
}

TEST_CASE("field invariants") {
    CHECK_THROWS_AS(Field(g64, std::vector<double>(10, 0.0)), InvalidParams);
    Field f = Field::constant(g64, 1.0);
    CHECK(f.finite());
    auto v = f.values();
    v[3] = std::nan("");
    CHECK_FALSE(Field(g64, v).finite());
}

TEST_CASE("forward: DC mode and single-mode identities") {
    const Spectrum dc = forward(Field::constant(g64, 1.0));
    CHECK(std::abs(dc.coeff(0) - 1.0) < 1e-14);
    for (int k = 1; k < 32; ++k) CHECK(std::abs(dc.coeff(k)) < 1e-14);

    const Spectrum s = forward(Field::sample(g64, [](double x) { return std::sin(x); }));
    CHECK(std::abs(s.coeff(1) - std::complex<double>(0.0, -0.5)) < 1e-14);
    CHECK(std::abs(s.coeff(-1) - std::complex<double>(0.0, 0.5)) < 1e-14);
    CHECK(std::abs(s.coeff(2)) < 1e-14);
    CHECK(std::abs(s.coeff(0)) < 1e-14);
}

TEST_CASE("forward matches the naive DFT oracle") {
    const Field f = random_lowmode_field(g64, 7, 20);
    const Spectrum s = forward(f);
    const auto oracle = naive_dft(f);
    for (int p = 0; p < 64; ++p)
        CHECK(std::abs(s.coeffs()[p] - oracle[p]) < 1e-12);
}

TEST_CASE("inverse: round trip, zeros, forced asymmetry") {
    const Field f = random_lowmode_field(g64, 1, 30);
    const Field back = inverse(forward(f));
    CHECK(max_abs_diff(f, back) < 1e-12 * std::max(1.0, f.max_abs()));

    CHECK(inverse(Spectrum::zeros(g64)).max_abs() == 0.0);

    const Spectrum sine = Spectrum::zeros(g64)
                              .with_coeff(1, {0.0, -0.5})
                              .with_coeff(-1, {0.0, 0.5});
    const Field back_sine = inverse(sine);
    const Field expect = Field::sample(g64, [](double x) { return std::sin(x); });
    CHECK(max_abs_diff(back_sine, expect) < 1e-13);

    const Spectrum broken = Spectrum::zeros(g64).with_coeff(1, {1.0, 0.0});
    CHECK_THROWS_AS(inverse(broken), NonHermitianSpectrum);
}

TEST_CASE("apply_multiplier: identity, bessel symbol, helmholtz symbol") {
    const Field f = random_lowmode_field(g64, 2);
    CHECK(max_abs_diff(apply_multiplier(f, MultiplierSymbol::identity()), f) < 1e-13);

    const Field cosx = Field::sample(g64, [](double x) { return std::cos(x); });
    const Field twice = apply_multiplier(cosx, MultiplierSymbol::bessel(2.0));
    CHECK(max_abs_diff(twice, 2.0 * cosx) < 1e-12);

    const Field cos2x = Field::sample(g64, [](double x) { return std::cos(2.0 * x); });
    const Field damped = apply_multiplier(cos2x, MultiplierSymbol::helmholtz_inverse(-0.1));
    CHECK(max_abs_diff(damped, (1.0 / 1.4) * cos2x) < 1e-12);

    // A symbol that breaks real-valuedness must be rejected on inversion.
    const MultiplierSymbol odd_real("asym", [](double xi) {
        return std::complex<double>(0.0, xi >= 0 ? 1.0 : 0.0);
    });
    CHECK_THROWS_AS(apply_multiplier(f, odd_real), NonHermitianSpectrum);

    const MultiplierSymbol blows("inf_at_1", [](double xi) {
        return std::complex<double>(1.0 / (xi - 1.0), 0.0);
    });
    CHECK_THROWS_AS(apply_multiplier(f, blows), InvalidParams);
}

TEST_CASE("derivative: single modes, constants, third order") {
    const Field sinx = Field::sample(g64, [](double x) { return std::sin(x); });
    const Field cosx = Field::sample(g64, [](double x) { return std::cos(x); });
    CHECK(max_abs_diff(derivative(sinx, 1), cosx) < 1e-12);

    CHECK(derivative(Field::constant(g64, 3.5), 1).max_abs() < 1e-14);

    const Field sin3x = Field::sample(g64, [](double x) { return std::sin(3.0 * x); });
    const Field expect = Field::sample(g64, [](double x) { return -27.0 * std::cos(3.0 * x); });
    CHECK(max_abs_diff(derivative(sin3x, 3), expect) < 27.0 * 1e-12);
}

TEST_CASE("bessel potential: s=0, closed form, group property") {
    const Field f = random_lowmode_field(g64, 3);
    CHECK(max_abs_diff(bessel_potential(f, 0.0), f) == 0.0);

    const Field cos2x = Field::sample(g64, [](double x) { return std::cos(2.0 * x); });
    CHECK(max_abs_diff(bessel_potential(cos2x, -1.0), (1.0 / std::sqrt(5.0)) * cos2x) < 1e-12);

    const Field round = bessel_potential(bessel_potential(f, 1.6), -1.6);
    CHECK(max_abs_diff(round, f) < 1e-11 * std::max(1.0, f.max_abs()));
}

TEST_CASE("helmholtz inverse: constants, closed form, sign guard, contraction") {
    const Field c = Field::constant(g64, 2.5);
    CHECK(max_abs_diff(helmholtz_inverse(c, -0.05), c) < 1e-13);

    const Field sin4x = Field::sample(g64, [](double x) { return std::sin(4.0 * x); });
    CHECK(max_abs_diff(helmholtz_inverse(sin4x, -0.05), (1.0 / 1.8) * sin4x) < 1e-12);

    CHECK_THROWS_AS(helmholtz_inverse(sin4x, 0.1), InvalidSign);
    CHECK_THROWS_AS(helmholtz_inverse(sin4x, 0.0), InvalidSign);

    // Applying the forward operator (1 + mubeta dxx) recovers the field.
    const Field f = random_lowmode_field(g64, 4);
    const double mb = -0.07;
    const Field inv = helmholtz_inverse(f, mb);
    const Field fwd = inv + mb * derivative(inv, 2);
    CHECK(max_abs_diff(fwd, f) < 1e-11 * std::max(1.0, f.max_abs()));

    // Contraction in every Sobolev norm.
    for (double s : {-1.0, 0.0, 1.3, 2.0})
        CHECK(sobolev_norm(helmholtz_inverse(f, mb), s) <= sobolev_norm(f, s) * (1 + 1e-14));
}

TEST_CASE("sobolev norm: sine closed forms, zero field, Parseval") {
    const Field sinx = Field::sample(g64, [](double x) { return std::sin(x); });
    CHECK(sobolev_norm(sinx, 0.0) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    CHECK(sobolev_norm(sinx, 1.0) == doctest::Approx(std::sqrt(2.0 * M_PI)).epsilon(1e-13));

    for (double s : {-1.0, 0.0, 2.0}) CHECK(sobolev_norm(Field::zeros(g64), s) == 0.0);

    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const Field f = random_lowmode_field(g64, seed, 31);
        const double spectral = sobolev_norm(f, 0.0);
        CHECK(std::abs(quadrature_l2_norm(f) - spectral) <= 1e-12 * spectral);
    }
}

TEST_CASE("multiplier composition equals the product symbol") {
    const Field f = random_lowmode_field(g64, 5);
    const auto m1 = MultiplierSymbol::bessel(1.3);
    const auto m2 = MultiplierSymbol::helmholtz_inverse(-0.2);
    const Field two_pass = apply_multiplier(apply_multiplier(f, m1), m2);
    const Field one_pass = apply_multiplier(f, m1.compose(m2));
    CHECK(max_abs_diff(two_pass, one_pass) < 1e-12 * std::max(1.0, f.max_abs()));
}

TEST_CASE("dealias: transparent below cutoff, kills top mode, contracts") {
    const Field low = random_lowmode_field(g64, 6, /*kmax=*/21);
    CHECK(max_abs_diff(dealias(low), low) < 1e-13);

    const Field top = Field::sample(g64, [](double x) { return std::cos(31.0 * x); });
    CHECK(dealias(top).max_abs() < 1e-13);

    const Field f = random_lowmode_field(g64, 8, 31);
    CHECK(sobolev_norm(dealias(f), 0.0) <= sobolev_norm(f, 0.0) * (1 + 1e-14));
}

TEST_CASE("spectral operators act exactly on every resolved single mode") {
    const double mb = -0.01;
    for (int k = 1; k < 32; ++k) {
        for (bool use_sin : {false, true}) {
            const Field mode = Field::sample(g64, [=](double x) {
                return use_sin ? std::sin(k * x) : std::cos(k * x);
            });
            const Field anti = Field::sample(g64, [=](double x) {
                return use_sin ? std::cos(k * x) : -std::sin(k * x);
            });
            CHECK(max_abs_diff(derivative(mode, 1), static_cast<double>(k) * anti) <
                  1e-11 * k);
            const double bes = std::pow(1.0 + k * k, 0.8);
            CHECK(max_abs_diff(bessel_potential(mode, 1.6), bes * mode) < 1e-11 * bes);
            const double helm = 1.0 / (1.0 - mb * k * k);
            CHECK(max_abs_diff(helmholtz_inverse(mode, mb), helm * mode) < 1e-11);
        }
    }
}

TEST_CASE("multiplier inequality chain") {
    SUBCASE("xi = 0 gives ratio 0 and the default sweep passes") {
        const auto rep = multiplier_inequality_check(0.01, -1.0, 1e4, 100000);
        CHECK(rep.passed);
        CHECK(rep.violations == 0);
        CHECK(rep.max_ratio <= 1.0);
        CHECK(rep.max_ratio > 0.9);  // the chain is asymptotically sharp
    }
    SUBCASE("|mu beta| >= 1 is rejected") {
        CHECK_THROWS_AS(multiplier_inequality_check(2.0, -1.0, 1e4, 100), InvalidParams);
    }
    SUBCASE("wrong-sign beta is rejected") {
        CHECK_THROWS_AS(multiplier_inequality_check(0.01, 1.0, 1e4, 100), InvalidParams);
    }
}

TEST_CASE("unresolved energy fraction flags top-band content") {
    CHECK(unresolved_energy_fraction(random_lowmode_field(g64, 3, 10)) < 1e-30);
    const Field top = Field::sample(g64, [](double x) { return std::cos(30.0 * x); });
    CHECK(unresolved_energy_fraction(top) > 0.99);
}
