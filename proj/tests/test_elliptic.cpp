#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "nahmlab/elliptic.hpp"

using namespace nahmlab;

namespace {

// Independent oracle for eta1 via the Eisenstein series E2:
//   2*eta1 = (pi^2/3) * E2,  E2 = 1 - 24 sum_{n>=1} n Q^n / (1 - Q^n),  Q = exp(2 pi i tau).
cplx eta1_oracle(cplx tau) {
    cplx Q = std::exp(cplx(0.0, 2.0 * kPi) * tau);
    cplx s{};
    cplx Qn = 1.0;
    for (int n = 1; n <= 60; ++n) {
        Qn *= Q;
        s += double(n) * Qn / (1.0 - Qn);
    }
    cplx e2 = 1.0 - 24.0 * s;
    return kPi * kPi / 6.0 * e2;
}

} // namespace

TEST_CASE("eta1 matches the Eisenstein series oracle") {
    for (cplx tau : {cplx(0.0, 1.0), cplx(0.3, 1.2), cplx(-0.4, 0.8)}) {
        Elliptic ell{Lattice(tau)};
        CHECK(std::abs(ell.eta1() - eta1_oracle(tau)) < 1e-12);
    }
    // Square torus closed form: eta1 = pi/2.
    Elliptic sq{Lattice(cplx(0.0, 1.0))};
    CHECK(std::abs(sq.eta1() - kPi / 2.0) < 1e-12);
}

TEST_CASE("quasi-periods of zeta and sigma") {
    Lattice lat(cplx(0.3, 1.2));
    Elliptic ell{lat};
    cplx z(0.31, 0.27);
    CHECK(std::abs(ell.zeta(z + 1.0) - ell.zeta(z) - 2.0 * ell.eta1()) < 1e-11);
    CHECK(std::abs(ell.zeta(z + lat.tau) - ell.zeta(z) - 2.0 * ell.eta3()) < 1e-11);
    // Legendre relation, with eta3 measured rather than assumed.
    cplx eta3_measured = (ell.zeta(z + lat.tau) - ell.zeta(z)) / 2.0;
    CHECK(std::abs(ell.eta1() * lat.tau - eta3_measured - cplx(0.0, kPi)) < 1e-11);
    cplx ratio = ell.sigma(z + 1.0) / ell.sigma(z);
    cplx expected = -std::exp(2.0 * ell.eta1() * (z + 0.5));
    CHECK(std::abs(ratio - expected) < 1e-10);
    ratio = ell.sigma(z + lat.tau) / ell.sigma(z);
    expected = -std::exp(2.0 * ell.eta3() * (z + 0.5 * lat.tau));
    CHECK(std::abs(ratio - expected) < 1e-10);
}

TEST_CASE("wp is doubly periodic and even; zeta and sigma are odd") {
    Lattice lat(cplx(0.3, 1.2));
    Elliptic ell{lat};
    for (cplx z : {cplx(0.21, 0.33), cplx(-0.4, 0.18), cplx(0.62, -0.35)}) {
        CHECK(std::abs(ell.wp(z + 1.0) - ell.wp(z)) < 1e-10 * (1.0 + std::abs(ell.wp(z))));
        CHECK(std::abs(ell.wp(z + lat.tau) - ell.wp(z)) < 1e-10 * (1.0 + std::abs(ell.wp(z))));
        CHECK(std::abs(ell.wp(-z) - ell.wp(z)) < 1e-10 * (1.0 + std::abs(ell.wp(z))));
        CHECK(std::abs(ell.wp_prime(-z) + ell.wp_prime(z)) < 1e-10 * (1.0 + std::abs(ell.wp_prime(z))));
        CHECK(std::abs(ell.zeta(-z) + ell.zeta(z)) < 1e-10);
        CHECK(std::abs(ell.sigma(-z) + ell.sigma(z)) < 1e-10);
    }
}

TEST_CASE("Laurent behavior at the origin") {
    Elliptic ell{Lattice(cplx(0.3, 1.2))};
    cplx z(1e-3, 5e-4);
    CHECK(std::abs(z * z * ell.wp(z) - 1.0) < 1e-5);
    CHECK(std::abs(z * ell.zeta(z) - 1.0) < 1e-5);
    CHECK(std::abs(ell.sigma(z) / z - 1.0) < 1e-5);
    CHECK(std::abs(z * z * z * ell.wp_prime(z) + 2.0) < 1e-5);
}

TEST_CASE("wp satisfies its differential equations") {
    for (cplx tau : {cplx(0.0, 1.0), cplx(0.3, 1.2)}) {
        Elliptic ell{Lattice(tau)};
        auto e = ell.critical_values();
        cplx g2 = ell.g2();
        cplx g3 = 4.0 * e[0] * e[1] * e[2];
        CHECK(std::abs(e[0] + e[1] + e[2]) < 1e-10);
        for (cplx z : {cplx(0.23, 0.31), cplx(0.71, 0.12), cplx(0.4, 0.65)}) {
            cplx p = ell.wp(z), pp = ell.wp_prime(z);
            cplx resid = pp * pp - (4.0 * p * p * p - g2 * p - g3);
            double scale = std::abs(pp * pp) + std::abs(4.0 * p * p * p) + 1.0;
            CHECK(std::abs(resid) / scale < 1e-10);
            // Second derivative vs central finite difference.
            double h = 1e-5;
            cplx fd = (ell.wp_prime(z + h) - ell.wp_prime(z - h)) / (2.0 * h);
            CHECK(std::abs(ell.wp_second(z) - fd) < 1e-4 * (1.0 + std::abs(fd)));
        }
    }
}

TEST_CASE("square torus critical values are lemniscatic") {
    Elliptic ell{Lattice(cplx(0.0, 1.0))};
    auto e = ell.critical_values();
    CHECK(std::abs(e[0] + e[1]) < 1e-10);      // e at 1/2 and tau/2 are opposite
    CHECK(std::abs(e[2]) < 1e-10);             // e at (1+tau)/2 vanishes
    CHECK(e[0].real() > 0.0);
    CHECK(std::abs(e[0].imag()) < 1e-10);
    CHECK(std::abs(4.0 * e[0] * e[1] * e[2]) < 1e-9);  // g3 = 0
}

TEST_CASE("theta series truncation is saturated") {
    for (cplx tau : {cplx(0.0, 1.0), cplx(0.3, 1.2), cplx(-0.4, 0.8)}) {
        Elliptic ell{Lattice(tau)};
        for (cplx v : {cplx(0.3, 0.2), cplx(1.1, -0.4), cplx(2.0, 0.45)}) {
            for (int d = 0; d <= 3; ++d) {
                cplx a = ell.theta1(v, d, Elliptic::kTerms);
                cplx b = ell.theta1(v, d, 2 * Elliptic::kTerms);
                CHECK(std::abs(a - b) < 1e-12 * (1.0 + std::abs(b)));
            }
        }
    }
}

TEST_CASE("wp_inverse round trips across the value plane") {
    for (cplx tau : {cplx(0.0, 1.0), cplx(0.3, 1.2)}) {
        Elliptic ell{Lattice(tau)};
        auto e = ell.critical_values();
        std::vector<cplx> targets = {
            cplx(2.3, 1.1),  cplx(-4.0, 0.3),  cplx(0.01, -0.02), cplx(100.0, 40.0),
            cplx(-80.0, 5.0), cplx(0.0, 12.0), cplx(1.0, -9.0),
            e[0] + cplx(1e-3, 2e-3), e[1] - cplx(2e-3, 1e-3), e[2] + cplx(0.0, 1e-3),
            e[0] + cplx(0.3, -0.2), e[2] - cplx(0.5, 0.1)};
        for (cplx P : targets) {
            cplx z = ell.wp_inverse(P);
            CHECK(std::abs(ell.wp(z) - P) < 1e-8 * (1.0 + std::abs(P)));
            // Deterministic output.
            CHECK(std::abs(ell.wp_inverse(P) - z) == 0.0);
        }
    }
}

TEST_CASE("lattice points are flagged as poles") {
    Elliptic ell{Lattice(cplx(0.0, 1.0))};
    CHECK_THROWS_AS(ell.wp(cplx(0.0)), PoleAtLattice);
    CHECK_THROWS_AS(ell.zeta(cplx(1.0) + ell.lat().tau), PoleAtLattice);
    CHECK(std::abs(ell.sigma(cplx(0.0))) < 1e-12);
}

TEST_CASE("one-shot wrapper agrees with the class") {
    Lattice lat(cplx(0.3, 1.2));
    Elliptic ell{lat};
    cplx z(0.37, 0.21);
    auto [p, pp, zt] = weierstrass(z, lat);
    CHECK(std::abs(p - ell.wp(z)) < 1e-13 * (1.0 + std::abs(p)));
    CHECK(std::abs(pp - ell.wp_prime(z)) < 1e-13 * (1.0 + std::abs(pp)));
    CHECK(std::abs(zt - ell.zeta(z)) < 1e-13);
}
