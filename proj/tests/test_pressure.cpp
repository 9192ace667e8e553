#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "lifshitz/pressure.hpp"
#include "oracles.hpp"

using namespace lifshitz;

namespace {

Material lorentz(double lambda0, double omega0, double gamma, double T) {
    Material m;
    m.lambda0 = lambda0;
    m.omega0 = omega0;
    m.bath.kind = BathKind::ohmic;
    m.bath.gamma = gamma;
    m.beta_bath = m.beta_dof = T > 0.0 ? 1.0 / T : kInf;
    return m;
}

Geometry plates(double gap, double T, double gamma = 0.1) {
    Geometry g;
    g.gap = gap;
    g.left = lorentz(1.0, 1.0, gamma, T);
    g.right = lorentz(1.0, 1.0, gamma, T);
    return g;
}

// Lifshitz pressure between identical Lorentz half-spaces as a Matsubara sum,
// written out independently of the library.
double lifshitz_oracle(double lambda0, double omega0, double gamma, double l, double T) {
    boost::math::quadrature::exp_sinh<double> q;
    double sum = 0.0;
    for (int n = 0; n < 100000; ++n) {
        const double xi = 2.0 * kPi * T * n;
        const double eps = oracle::lorentz_eps_imag(lambda0, omega0, gamma, xi);
        auto f = [&](double Q) {
            const double k = std::hypot(xi, Q);
            const double e = std::exp(-2.0 * k * l);
            if (Q == 0.0 || e == 0.0) return 0.0;
            const double kn = std::hypot(std::sqrt(eps) * xi, Q);
            const double rte = (k - kn) / (k + kn), rtm = (eps * k - kn) / (eps * k + kn);
            double acc = 0.0;
            for (double r : {rte, rtm}) acc += r * r * e / (1.0 - r * r * e);
            return Q * k * acc;
        };
        const double term = (n == 0 ? 0.5 : 1.0) * q.integrate(f, 1e-13);
        sum += term;
        if (n > 2 && std::abs(term) < 1e-13 * std::abs(sum)) break;
    }
    return -(T / kPi) * sum;
}

}  // namespace

TEST_CASE("independent Lifshitz oracle reproduces the ideal mirror") {
    // r = +-1 limit is approached by eps -> infinity at T -> 0.
    const double p = lifshitz_oracle(1e4, 1e-3, 0.0, 1.0, 2e-4);
    CHECK(p == doctest::Approx(oracle::ideal_mirror(1.0)).epsilon(2e-2));
}

TEST_CASE("Matsubara sum agrees with the independent oracle") {
    for (double T : {0.1, 1.0})
        for (double l : {0.5, 2.0}) {
            const double want = lifshitz_oracle(1.0, 1.0, 0.1, l, T);
            CHECK(equilibrium_matsubara(plates(l, T), T) == doctest::Approx(want).epsilon(1e-7));
        }
}

TEST_CASE("theta contraction matches finite-difference curls") {
    Geometry g = plates(1.0, 0.0);
    g.right = lorentz(1.4, 1.7, 0.05, 0.0);
    g.z_field = 0.13;
    const cplx s1(0.3, -0.8), s2(0.3, 0.8);
    const double Q = 0.9;
    const std::array<double, 2> qh{0.6, 0.8}, mq{-0.6, -0.8};
    for (Plate p : {Plate::L, Plate::R}) {
        const GreenBlock b1 = green_gap_from_plate(g, p, s1, Q, qh);
        const GreenBlock b2 = green_gap_from_plate(g, p, s2, Q, mq);
        const double h = 1e-4;
        auto curl_fd = [&](const GreenBlock& b, std::array<double, 2> qhat) {
            const CMat3 G = b.evaluate(g.z_field, b.z_src);
            const CMat3 gp = b.evaluate(g.z_field + h, b.z_src), gm = b.evaluate(g.z_field - h, b.z_src);
            const CMat3 gp2 = b.evaluate(g.z_field + 2 * h, b.z_src), gm2 = b.evaluate(g.z_field - 2 * h, b.z_src);
            CMat3 c{};
            for (int col = 0; col < 3; ++col) {
                auto dz = [&](int row) {
                    return (-gp2[row][col] + 8.0 * gp[row][col] - 8.0 * gm[row][col] + gm2[row][col]) / (12.0 * h);
                };
                const cplx dx = kI * Q * qhat[0], dy = kI * Q * qhat[1];
                c[0][col] = dy * G[2][col] - dz(1);
                c[1][col] = dz(0) - dx * G[2][col];
                c[2][col] = dx * G[1][col] - dy * G[0][col];
            }
            return std::pair{G, c};
        };
        const auto [G1, C1] = curl_fd(b1, qh);
        const auto [G2, C2] = curl_fd(b2, mq);
        const double lam[3] = {1.0, 1.0, -1.0};
        cplx e = 0.0, m = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int b = 0; b < 3; ++b) {
                e += lam[i] * s1 * s2 * G1[i][b] * G2[i][b];
                m += lam[i] * C1[i][b] * C2[i][b];
            }
        const ThetaParts t = theta_contract_parts(b1, b2);
        CHECK(std::abs(t.electric - e) <= 1e-12 * std::abs(e));
        CHECK(std::abs(t.magnetic - m) <= 1e-8 * std::abs(m));
    }
}

TEST_CASE("theta contraction rejects mismatched blocks") {
    const Geometry g = plates(1.0, 0.0);
    const GreenBlock b1 = green_gap_from_plate(g, Plate::L, cplx(0.3, -0.8), 0.9, {1.0, 0.0});
    const GreenBlock b2 = green_gap_from_plate(g, Plate::L, cplx(0.3, 0.8), 0.9, {1.0, 0.0});
    CHECK_THROWS_AS(theta_contract(b1, b2), DomainError);
}

TEST_CASE("pre- and post-FDR source weights give the same integrand") {
    auto rng = oracle::rng(5);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        Geometry g;
        g.gap = oracle::uniform(rng, 0.3, 3.0);
        g.left = oracle::random_lossy(rng);
        g.right = oracle::random_lossy(rng);
        g.left.beta_bath = 1.0 / oracle::uniform(rng, 0.05, 2.0);
        g.right.beta_bath = 1.0 / oracle::uniform(rng, 0.05, 2.0);
        const double w = oracle::log_uniform(rng, 1e-2, 10.0);
        const double Q = oracle::log_uniform(rng, 1e-2, 10.0);
        const cplx a = bath_integrand(g, w, Q, SourceWeight::post_fdr);
        const cplx b = bath_integrand(g, w, Q, SourceWeight::pre_fdr);
        worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("lossless plates are the small-loss limit of lossy ones") {
    auto slab = [](cplx eps) {
        Material m;
        m.table = std::make_shared<EpsilonTable>(std::vector<double>{1e-6, 1e6}, std::vector<cplx>{eps, eps});
        m.beta_bath = m.beta_dof = 1.0;
        return m;
    };
    for (auto [w, Q] : {std::pair{1.0, 0.5}, {1.0, 1.5}, {2.0, 2.5}}) {
        Geometry a, b;
        a.left = slab(4.0);
        a.right = slab(2.0);
        b.left = slab(cplx(4.0, 1e-4));
        b.right = slab(cplx(2.0, 1e-4));
        const double lossless = bath_integrand(a, w, Q, SourceWeight::post_fdr).real();
        const double lossy = bath_integrand(b, w, Q, SourceWeight::post_fdr).real();
        CHECK(std::abs(lossless - lossy) <= 5e-4 * std::abs(lossless));
    }
}

TEST_CASE("integrand is real and the zero-point plus thermal weights add up") {
    const Geometry g = plates(1.0, 0.7);
    for (double w : {0.2, 1.0, 3.0})
        for (double Q : {0.1, 1.5, 4.0}) {
            const cplx full = bath_integrand(g, w, Q, SourceWeight::post_fdr);
            const cplx zp = bath_integrand(g, w, Q, SourceWeight::zero_point);
            const cplx th = bath_integrand(g, w, Q, SourceWeight::thermal);
            CHECK(std::abs(full - zp - th) <= 1e-14 * std::abs(full));
            CHECK(std::abs(full.imag()) <= 1e-12 * std::abs(full));
        }
}

TEST_CASE("steady pressure at equal temperatures equals the Matsubara sum") {
    for (double T : {0.1, 1.0}) {
        const Geometry g = plates(1.0, T);
        PressureOptions o;
        o.rel_tol = 1e-5;
        const PressureResult r = steady_pressure(g, o);
        const double eq = lifshitz_oracle(1.0, 1.0, 0.1, 1.0, T);
        CHECK(r.value == doctest::Approx(eq).epsilon(1e-4));
        CHECK(std::abs(r.imag) <= 1e-10 * std::abs(r.value));
        CHECK(r.baseline_subtracted);
        double sum = 0.0;
        for (double b : r.breakdown) sum += b;
        CHECK(sum == doctest::Approx(r.value).epsilon(1e-12));
    }
}

TEST_CASE("zero-temperature pressure matches the oracle's low-temperature limit") {
    const PressureResult r = zero_point_pressure(plates(1.0, 0.0), 1e-8);
    CHECK(r.value == doctest::Approx(lifshitz_oracle(1.0, 1.0, 0.1, 1.0, 1e-3)).epsilon(1e-5));
}

TEST_CASE("swapping the plates leaves the pressure unchanged") {
    Geometry a;
    a.gap = 0.8;
    a.left = lorentz(1.0, 1.0, 0.1, 0.5);
    a.right = lorentz(1.5, 2.0, 0.3, 1.2);
    Geometry b = a;
    std::swap(b.left, b.right);
    PressureOptions o;
    o.rel_tol = 1e-5;
    const PressureResult ra = steady_pressure(a, o), rb = steady_pressure(b, o);
    CHECK(std::abs(ra.value - rb.value) <= 1e-10 * std::abs(ra.value));
    for (int pol = 0; pol < 2; ++pol)
        for (int sec = 0; sec < 2; ++sec) {
            const auto P = pol ? Polarization::TM : Polarization::TE;
            const auto S = sec ? Sector::evanescent : Sector::propagating;
            CHECK(std::abs(ra.breakdown[breakdown_index(Plate::L, P, S)] -
                           rb.breakdown[breakdown_index(Plate::R, P, S)]) <= 1e-10 * std::abs(ra.value));
        }
}

TEST_CASE("infinite-separation baseline does not depend on the gap") {
    PressureOptions o;
    o.rel_tol = 1e-5;
    o.subtract_infinite_separation = false;
    const PressureResult r1 = steady_pressure(plates(0.7, 1.0), o);
    const PressureResult r2 = steady_pressure(plates(1.9, 1.0), o);
    CHECK_FALSE(r1.baseline_subtracted);
    double b1 = 0.0, b2 = 0.0;
    for (int i = 0; i < 8; ++i) {
        b1 += r1.baseline[i];
        b2 += r2.baseline[i];
    }
    CHECK(b1 != 0.0);
    CHECK(b1 == doctest::Approx(b2).epsilon(1e-5));
    // Regularizing removes exactly the baseline and is idempotent.
    const PressureResult g1 = regularize(r1);
    CHECK(g1.baseline_subtracted);
    CHECK(g1.value == doctest::Approx(r1.value - b1).epsilon(1e-14));
    CHECK(regularize(g1).value == g1.value);
}

TEST_CASE("regularized pressure decays at least as the inverse cube at T = 1") {
    PressureOptions o;
    o.rel_tol = 1e-5;
    std::vector<double> ls = {0.2, 0.45, 1.0, 2.0}, lp;
    double prev = kInf;
    for (double l : ls) {
        const double p = std::abs(steady_pressure(plates(l, 1.0), o).value);
        CHECK(p < prev);
        prev = p;
        lp.push_back(std::log(p));
    }
    // Least-squares slope of log|P| against log l.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        const double x = std::log(ls[i]);
        sx += x;
        sy += lp[i];
        sxx += x * x;
        sxy += x * lp[i];
    }
    const double n = static_cast<double>(ls.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(-slope >= 3.0);
}

TEST_CASE("vacuum plates give zero pressure") {
    Geometry g;
    g.left.lambda0 = 0.0;
    g.right.lambda0 = 0.0;
    g.left.beta_bath = g.right.beta_bath = 1.0;
    CHECK(steady_pressure(g).value == 0.0);
    CHECK(equilibrium_matsubara(g, 1.0) == 0.0);
}

TEST_CASE("pressure options are validated") {
    PressureOptions o;
    o.rel_tol = 0.5;
    CHECK_THROWS_AS(steady_pressure(plates(1.0, 1.0), o), DomainError);
    o.rel_tol = 0.0;
    CHECK_THROWS_AS(o.validate(), DomainError);
}

TEST_CASE("CSV row carries every breakdown column") {
    PressureResult r;
    r.value = -1.5;
    r.err = 1e-9;
    r.breakdown[3] = 0.25;
    r.baseline_subtracted = true;
    const std::string row = csv_row(1.0, 0.5, 2.0, r);
    CHECK(row == "1,0.5,2,-1.5,1e-09,0,0,0,0.25,0,0,0,0,1");
    const std::string header = csv_header();
    CHECK(std::count(header.begin(), header.end(), ',') == 13);
}
