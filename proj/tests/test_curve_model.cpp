#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nahmlab/curve_model.hpp"

using namespace nahmlab;

namespace {

BuiltinK1 std_params() {
    BuiltinK1 p;
    p.a = cplx(0.6, 0.0);
    p.b = cplx(0.0, 0.0);
    p.xi0 = cplx(0.25, 0.25);
    p.lat = Lattice(cplx(0.0, 1.0));
    return p;
}

} // namespace

TEST_CASE("builtin charge-1 curve vanishes exactly on the graph of phi") {
    auto p = std_params();
    CurveOps ops(builtin_k1_model(p));
    for (cplx xi : {cplx(0.1, 0.6), cplx(0.7, 0.15), cplx(0.42, 0.81), cplx(0.9, 0.9)}) {
        cplx w = builtin_k1_phi(p, xi);
        cplx f = ops.eval_F(xi, w);
        double scale = std::abs(ops.theta_coeff(0, xi)) + std::abs(ops.theta_coeff(1, xi)) * std::abs(w);
        CHECK(std::abs(f) < 1e-9 * (scale + 1.0));
    }
}

TEST_CASE("sheet over xi equals phi and is even and periodic") {
    auto p = std_params();
    CurveOps ops(builtin_k1_model(p));
    for (cplx xi : {cplx(0.13, 0.57), cplx(0.66, 0.21), cplx(0.35, 0.9)}) {
        auto sh = ops.sheets_over_xi(xi);
        REQUIRE(sh.size() == 1);
        CHECK(std::abs(sh[0] - builtin_k1_phi(p, xi)) < 1e-8 * (1.0 + std::abs(sh[0])));
        auto shm = ops.sheets_over_xi(-xi);
        CHECK(std::abs(shm[0] - sh[0]) < 1e-8 * (1.0 + std::abs(sh[0])));
        auto shp = ops.sheets_over_xi(xi + 1.0);
        CHECK(std::abs(shp[0] - sh[0]) < 1e-8 * (1.0 + std::abs(sh[0])));
        auto sht = ops.sheets_over_xi(xi + p.lat.tau);
        CHECK(std::abs(sht[0] - sh[0]) < 1e-8 * (1.0 + std::abs(sh[0])));
    }
}

TEST_CASE("fiber pair over w inverts the sheet map") {
    auto p = std_params();
    CurveOps ops(builtin_k1_model(p));
    for (cplx xi : {cplx(0.1, 0.6), cplx(0.77, 0.4), cplx(0.31, 0.08)}) {
        cplx w = builtin_k1_phi(p, xi);
        auto [ea, eb] = ops.sheets_over_w(w);
        double da = torus_distance(ea, xi, p.lat);
        double db = torus_distance(eb, xi, p.lat);
        CHECK(std::min(da, db) < 1e-7);
        // The pair is symmetric: eta and -eta agree modulo the lattice.
        CHECK(lattice_distance(ea + eb, p.lat) < 1e-7);
        // Both entries solve the curve equation.
        CHECK(std::abs(ops.eval_F(ea, w)) < 1e-6 * (1.0 + std::abs(w)));
        CHECK(std::abs(ops.eval_F(eb, w)) < 1e-6 * (1.0 + std::abs(w)));
    }
}

TEST_CASE("evaluation close to the puncture is refused") {
    auto p = std_params();
    CurveOps ops(builtin_k1_model(p));
    CHECK_THROWS_AS(ops.sheets_over_xi(p.xi0 + cplx(1e-10, 0.0)), NearPuncture);
    CHECK_THROWS_AS(ops.sheets_over_xi(-p.xi0 - cplx(0.0, 1e-10)), NearPuncture);
}

TEST_CASE("branch points sit over the torsion values of the double cover") {
    auto p = std_params();
    Elliptic ell(p.lat);
    CurveOps ops(builtin_k1_model(p));
    auto bp = ops.branch_points();
    REQUIRE(bp.size() == 4);
    auto hp = ell.half_periods();
    // Independent prediction: the sheet map evaluated at the three half periods,
    // plus the pole image b - 2 a zeta(xi0) coming from the sigma^2 factor.
    std::vector<cplx> expect;
    for (auto t : hp) expect.push_back(builtin_k1_phi(p, t));
    expect.push_back(p.b - 2.0 * p.a * ell.zeta(p.xi0));
    for (int t = 0; t < 4; ++t) {
        CHECK(bp[t].torsion_index == t);
        CHECK(std::abs(bp[t].w - expect[t]) < 1e-8 * (1.0 + std::abs(expect[t])));
        CHECK(bp[t].derivative_margin > 1e-8);
        // The two xi-sheets collide at the 2-torsion value.
        auto [ea, eb] = ops.sheets_over_w(bp[t].w);
        cplx xi_t = (t < 3) ? hp[t] : cplx{};
        CHECK(torus_distance(ea, xi_t, p.lat) < 1e-5);
        CHECK(torus_distance(eb, xi_t, p.lat) < 1e-5);
    }
    CHECK(ops.genus_estimate() == 1);
    CHECK(ops.is_smooth());
}

TEST_CASE("constant sheet map is rejected as degenerate") {
    auto p = std_params();
    p.a = cplx(0.0, 0.0);
    p.b = cplx(0.7, 0.2);
    auto m = builtin_k1_model(p);
    CHECK_FALSE(is_smooth(m));
    CHECK_THROWS_AS(branch_points(m), CountMismatch);
}

TEST_CASE("model validation rejects malformed input") {
    auto p = std_params();
    auto m = builtin_k1_model(p);
    auto bad = m;
    bad.coeffs.pop_back();
    CHECK_THROWS_AS(validate_model(bad), ConfigError);
    bad = m;
    bad.xi0 = cplx(0.5, 0.0);  // 2-torsion: the puncture pair would collide
    CHECK_THROWS_AS(validate_model(bad), ConfigError);
    bad = m;
    bad.coeffs.back() = {cplx(1.0), cplx(0.0)};  // leading row misses the puncture
    CHECK_THROWS_AS(validate_model(bad), ConfigError);
}

TEST_CASE("free wrappers agree with the cached context") {
    auto p = std_params();
    auto m = builtin_k1_model(p);
    CurveOps ops(m);
    cplx xi(0.21, 0.43);
    CHECK(std::abs(eval_F(m, xi, cplx(0.5, 0.2)) - ops.eval_F(xi, cplx(0.5, 0.2))) < 1e-13);
    CHECK(sheets_over_xi(m, xi) == ops.sheets_over_xi(xi));
    CHECK(genus_estimate(m) == 1);
}
