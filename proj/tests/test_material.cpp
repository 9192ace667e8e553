#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "lifshitz/material.hpp"
#include "oracles.hpp"

using namespace lifshitz;

namespace {

Material lorentz(double lambda0, double omega0, double gamma) {
    Material m;
    m.lambda0 = lambda0;
    m.omega0 = omega0;
    m.bath.kind = BathKind::ohmic;
    m.bath.gamma = gamma;
    return m;
}

}  // namespace

TEST_CASE("vacuum material has unit permittivity") {
    Material m;
    m.lambda0 = 0.0;
    for (double w : {0.01, 1.0, 37.0}) {
        const cplx e = permittivity_fourier(m, w);
        CHECK(e.real() == 1.0);
        CHECK(e.imag() == 0.0);
    }
}

TEST_CASE("ohmic oscillator permittivity matches the Lorentz closed form") {
    const Material m = lorentz(1.3, 0.8, 0.15);
    for (double w : {0.05, 0.5, 0.8, 1.1, 9.0}) {
        const cplx got = permittivity_fourier(m, w);
        const cplx want = oracle::lorentz_eps(1.3, 0.8, 0.15, w);
        CHECK(std::abs(got - want) <= 1e-14 * std::abs(want));
    }
    for (double xi : {0.01, 0.7, 20.0}) {
        const cplx got = permittivity(m, cplx(xi, 0.0));
        CHECK(std::abs(got.real() - oracle::lorentz_eps_imag(1.3, 0.8, 0.15, xi)) <= 1e-14);
        CHECK(got.imag() == 0.0);
    }
}

TEST_CASE("real-frequency permittivity is Hermitian and passive") {
    auto g = oracle::rng(11);
    for (int i = 0; i < 50; ++i) {
        const Material m = oracle::random_lossy(g);
        const double w = oracle::log_uniform(g, 1e-3, 1e2);
        const cplx p = permittivity_fourier(m, w);
        const cplx n = permittivity_fourier(m, -w);
        CHECK(std::abs(n - std::conj(p)) <= 1e-15 * std::abs(p));
        CHECK(p.imag() > 0.0);
    }
}

TEST_CASE("Lorentz cutoff bath reduces to ohmic for a large cutoff") {
    Material a = lorentz(1.0, 1.0, 0.3);
    Material b = a;
    b.bath.kind = BathKind::ohmic_lorentz_cutoff;
    b.bath.cutoff = 1e9;
    for (double w : {0.1, 1.0, 3.0}) CHECK(std::abs(permittivity_fourier(a, w) - permittivity_fourier(b, w)) < 1e-8);
    // Finite cutoff: Im D(-i w) = (gamma/2) w L^2 / (L^2 + w^2).
    b.bath.cutoff = 2.0;
    const cplx d = bath_dissipation(b.bath, cplx(0.0, -1.5));
    CHECK(std::abs(d.imag() - 0.15 * 1.5 * 4.0 / (4.0 + 2.25)) < 1e-15);
}

TEST_CASE("permittivity FDR identity holds to 1e-12 over random samples") {
    auto g = oracle::rng(3);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        Material m = oracle::random_lossy(g);
        if (i % 2 == 1) {
            m.bath.kind = BathKind::ohmic_lorentz_cutoff;
            m.bath.cutoff = oracle::log_uniform(g, 0.5, 100.0);
        }
        const double w = oracle::log_uniform(g, 1e-3, 1e2);
        const FdrSides f = fdr_epsilon_identity(m, w);
        worst = std::max(worst, std::abs(f.lhs - f.rhs) / std::abs(f.lhs));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("noise kernel tends to its classical and quantum limits") {
    Material m = lorentz(1.0, 1.0, 0.4);
    m.beta_bath = kInf;
    CHECK(noise_fourier(m, 2.0) == doctest::Approx(2.0 * 0.2).epsilon(1e-15));
    m.beta_bath = 1e-3;
    // Classical limit: (2/beta) * gamma/2.
    CHECK(noise_fourier(m, 1e-4) == doctest::Approx(2.0 / 1e-3 * 0.2).epsilon(1e-10));
}

TEST_CASE("undamped oscillator reports its pole") {
    Material m = lorentz(1.0, 1.0, 0.0);
    CHECK_THROWS_AS(qbm_green(m, cplx(0.0, 1.0)), SingularityError);
}

TEST_CASE("epsilon table interpolates in log frequency and clamps outside") {
    const EpsilonTable t({1.0, 4.0}, {cplx(2.0, 1.0), cplx(4.0, 3.0)});
    // log-midpoint of [1, 4] is 2.
    CHECK(std::abs(t.at(2.0) - cplx(3.0, 2.0)) < 1e-15);
    CHECK(std::abs(t.at(-2.0) - cplx(3.0, -2.0)) < 1e-15);
    CHECK(t.at(10.0).real() == 4.0);
    CHECK(t.at(10.0).imag() == 0.0);
    CHECK(t.at(0.5).real() == 2.0);
    CHECK(!t.constant());
    CHECK(EpsilonTable({1.0, 2.0}, {cplx(3.0), cplx(3.0)}).constant());
}

TEST_CASE("epsilon table Kramers-Kronig continuation reproduces the oscillator") {
    const Material m = lorentz(1.0, 1.0, 0.3);
    const EpsilonTable t = tabulate_permittivity(m, 1e-3, 1e3, 4000);
    for (double xi : {0.1, 1.0, 5.0}) {
        const double want = oracle::lorentz_eps_imag(1.0, 1.0, 0.3, xi);
        CHECK(std::abs(t.imag_axis(xi) - want) <= 1e-3 * want);
    }
}

TEST_CASE("epsilon table parser reports line numbers") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return load_epsilon_table(in);
    };
    CHECK(parse("# header\n1, 2, 0.5\n2, 3, 0\n").size() == 2);
    CHECK(parse("1 2 0.5\n\n2 3 0\n").size() == 2);
    auto line_of = [&](const std::string& text) {
        try {
            parse(text);
        } catch (const ParseError& e) {
            return e.line;
        }
        return -1;
    };
    CHECK(line_of("1,2,0\nfoo,2,0\n") == 2);
    CHECK(line_of("1,2,0\n1,2,0\n") == 2);
    CHECK(line_of("1,2,-0.1\n") == 1);
    CHECK(line_of("0,2,0\n") == 1);
    CHECK(line_of("1,2,0,7\n") == 1);
    CHECK(line_of("1,nan,0\n") == 1);
    CHECK(line_of("# nothing\n") > -1);
}

TEST_CASE("material validation rejects bad parameters") {
    Material m = lorentz(1.0, 1.0, 0.1);
    m.omega0 = -1.0;
    CHECK_THROWS_AS(m.validate(), DomainError);
    m = lorentz(1.0, 1.0, -0.1);
    CHECK_THROWS_AS(m.validate(), DomainError);
    m = lorentz(1.0, 1.0, 0.1);
    m.bath.kind = BathKind::ohmic_lorentz_cutoff;
    CHECK_THROWS_AS(m.validate(), DomainError);
}
