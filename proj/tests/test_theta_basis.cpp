#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nahmlab/theta_basis.hpp"

using namespace nahmlab;

TEST_CASE("basis elements are exactly 1-periodic") {
    for (cplx tau : {cplx(0.0, 1.0), cplx(0.3, 1.2)}) {
        for (int n = 1; n <= 4; ++n) {
            ThetaBasis tb(n, Lattice(tau));
            for (int j = 0; j < n; ++j) {
                for (cplx z : {cplx(0.23, 0.37), cplx(-0.41, 0.12), cplx(0.68, -0.29)}) {
                    cplx a = tb.eval(j, z), b = tb.eval(j, z + 1.0);
                    CHECK(std::abs(a - b) < 1e-10 * (1.0 + std::abs(a)));
                }
            }
        }
    }
}

TEST_CASE("the tau-direction automorphy factor is shared by all elements") {
    for (cplx tau : {cplx(0.0, 1.0), cplx(0.3, 1.2)}) {
        Lattice lat(tau);
        for (int n = 1; n <= 4; ++n) {
            ThetaBasis tb(n, lat);
            for (cplx z : {cplx(0.23, 0.37), cplx(0.57, 0.11)}) {
                cplx e = tb.automorphy_factor(z);
                for (int j = 0; j < n; ++j) {
                    cplx a = tb.eval(j, z);
                    cplx b = tb.eval(j, z + tau);
                    CHECK(std::abs(b - e * a) < 1e-9 * (1.0 + std::abs(b)));
                }
            }
        }
    }
}

TEST_CASE("each element carries exactly n zeros per cell") {
    for (cplx tau : {cplx(0.0, 1.0), cplx(0.3, 1.2)}) {
        for (int n = 1; n <= 4; ++n) {
            ThetaBasis tb(n, Lattice(tau));
            for (int j = 0; j < n; ++j) CHECK(tb.zero_count(j) == n);
        }
    }
}

TEST_CASE("degree-2 elements reproduce sigma^2 and sigma^2 wp") {
    Lattice lat(cplx(0.0, 1.0));
    ThetaBasis tb(2, lat);
    const Elliptic& ell = tb.elliptic();
    cplx z(0.31, 0.17);
    cplx pref = std::exp(-2.0 * ell.eta1() * z * z);
    cplx s2 = ell.sigma(z) * ell.sigma(z);
    CHECK(std::abs(tb.eval(0, z) - pref * s2) < 1e-12);
    CHECK(std::abs(tb.eval(1, z) - pref * s2 * ell.wp(z)) < 1e-10);
    // Ratio of the two elements is wp, independent of the common prefactor.
    CHECK(std::abs(tb.eval(1, z) / tb.eval(0, z) - ell.wp(z)) < 1e-9);
    // Removable singularity at the origin: sigma^2 wp -> 1.
    CHECK(std::abs(tb.eval(1, cplx(0.0)) - 1.0) < 1e-12);
    CHECK(std::abs(tb.eval(0, cplx(0.0))) < 1e-12);
}

TEST_CASE("direct evaluation matches the Laurent leading term at the seam") {
    Lattice lat(cplx(0.3, 1.2));
    ThetaBasis tb(3, lat);
    const Elliptic& ell = tb.elliptic();
    // Just outside the limit-branch cutoff the direct product must agree with
    // the leading Laurent coefficient to the expansion's accuracy.
    int expo[3] = {3, 1, 0};
    double lead[3] = {1.0, 1.0, -2.0};
    for (int j = 0; j < 3; ++j) {
        cplx z(1.05e-5, 0.3e-5);
        cplx pref = std::exp(-3.0 * ell.eta1() * z * z) * std::exp(cplx(0.0, kPi) * z);
        cplx tp = 1.0;
        for (int i = 0; i < expo[j]; ++i) tp *= z;
        cplx predicted = pref * lead[j] * tp;
        cplx direct = tb.eval(j, z);
        CHECK(std::abs(direct - predicted) < 1e-8 * (1.0 + std::abs(predicted)));
    }
}

TEST_CASE("winding count recovers enclosed zeros") {
    std::vector<cplx> loop(128), flat(128);
    for (int i = 0; i < 128; ++i) {
        cplx z = std::polar(1.0, 2 * kPi * i / 128.0);
        loop[i] = z - cplx(0.2, 0.1);
        flat[i] = cplx(3.0, 1.0) + 0.2 * z;
    }
    CHECK(winding_count(loop) == 1);
    CHECK(winding_count(flat) == 0);
    std::vector<cplx> dbl(128);
    for (int i = 0; i < 128; ++i) dbl[i] = loop[i] * loop[i];
    CHECK(winding_count(dbl) == 2);
}
