#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nahmlab/fiber_dirac.hpp"

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

// Test-side oracle: the full flat singular spectrum from the closed-form
// mode values, sorted ascending.
std::vector<double> analytic_spectrum(cplx xi, cplx eta, const Lattice& lat, int N) {
    std::vector<double> out;
    double ks = kappa_scale(lat);
    for (int s = 0; s < 2; ++s) {
        cplx nu = s == 0 ? xi + eta : xi - eta;
        for (int m = -N; m <= N; ++m)
            for (int n = -N; n <= N; ++n)
                out.push_back(ks * std::abs(cplx(double(m)) * lat.tau - cplx(double(n)) - nu));
    }
    std::sort(out.begin(), out.end());
    return out;
}

Mat2 test_gauge() {
    // A fixed non-trivial unitary.
    double c = std::cos(0.7), s = std::sin(0.7);
    Mat2 U;
    U << cplx(c, 0.0), cplx(0.0, s), cplx(0.0, s), cplx(c, 0.0);
    return U;
}

} // namespace

TEST_CASE("flat spectrum matches the analytic mode formula") {
    for (cplx tau : {cplx(0.0, 1.0), cplx(0.3, 1.2)}) {
        Lattice lat(tau);
        FiberData data;
        data.lat = lat;
        data.eta = cplx(0.31, 0.17);
        for (int N : {4, 8, 16}) {
            DualPoint xi{cplx(0.12, 0.44)};
            auto op = assemble_fiber(data, xi, N);
            auto got = min_singulars(op, op.dim());
            auto want = analytic_spectrum(xi.xi, data.eta, lat, N);
            REQUIRE(got.size() == want.size());
            for (std::size_t i = 0; i < got.size(); ++i)
                CHECK(std::abs(got[i] - want[i]) < 1e-10 * (1.0 + want[i]));
        }
    }
}

TEST_CASE("kernel appears exactly at the matching twists") {
    Lattice lat;
    FiberData trivial;
    trivial.lat = lat;
    trivial.eta = cplx(0.0);
    auto op0 = assemble_fiber(trivial, DualPoint{cplx(0.0)}, 4);
    auto sv = min_singulars(op0, 3);
    CHECK(sv[0] < 1e-12);
    CHECK(sv[1] < 1e-12);      // both line summands are trivial
    CHECK(sv[2] > 0.5);        // no further kernel directions

    FiberData split;
    split.lat = lat;
    split.eta = cplx(0.31, 0.17);
    auto op1 = assemble_fiber(split, DualPoint{-split.eta}, 6);
    auto sv1 = min_singulars(op1, 2);
    CHECK(sv1[0] < 1e-12);
    CHECK(sv1[1] > 0.1);

    // Lattice-shifted resonance inside the window is detected too.
    auto op2 = assemble_fiber(split, DualPoint{-split.eta + cplx(2.0, 0.0) + lat.tau}, 6);
    CHECK(min_singulars(op2, 1)[0] < 1e-11);
}

TEST_CASE("generic twist keeps the spectrum bounded below by the distance") {
    Lattice lat;
    FiberData data;
    data.lat = lat;
    data.eta = cplx(0.31, 0.17);
    for (cplx xi : {cplx(0.1, 0.8), cplx(0.5, 0.03), cplx(0.77, 0.42)}) {
        double d = std::min(lattice_distance(xi + data.eta, lat), lattice_distance(xi - data.eta, lat));
        if (d < 0.05) continue;
        auto op = assemble_fiber(data, DualPoint{xi}, 8);
        CHECK(min_singulars(op, 1)[0] > 0.1 * d);
        CHECK(std::abs(min_singulars(op, 1)[0] - flat_sigma_min(xi, data.eta, lat)) < 1e-12);
    }
}

TEST_CASE("singular values are invariant under constant gauge conjugation") {
    Lattice lat;
    FiberData plain;
    plain.lat = lat;
    plain.eta = cplx(0.27, 0.31);
    FourierTerm t1;
    t1.p = 1;
    t1.q = 0;
    t1.coeff << cplx(0.1, 0.05), cplx(0.02, -0.01), cplx(-0.03, 0.04), cplx(0.06, 0.0);
    FourierTerm t2;
    t2.p = 0;
    t2.q = -1;
    t2.coeff << cplx(0.0, 0.08), cplx(0.05, 0.01), cplx(0.01, -0.02), cplx(-0.04, 0.03);
    plain.terms = {t1, t2};

    FiberData rotated = plain;
    rotated.gauge = test_gauge();

    DualPoint xi{cplx(0.21, 0.37)};
    auto a = min_singulars(assemble_fiber(plain, xi, 4), 12);
    auto b = min_singulars(assemble_fiber(rotated, xi, 4), 12);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
}

TEST_CASE("rotated flat data is block-diagonal in the diagonalizing gauge") {
    Lattice lat;
    FiberData rotated;
    rotated.lat = lat;
    rotated.eta = cplx(0.27, 0.31);
    rotated.gauge = test_gauge();
    DualPoint xi{cplx(0.21, 0.37)};
    auto op = assemble_fiber(rotated, xi, 3);
    REQUIRE_FALSE(op.flat);
    // Conjugating back must kill all inter-summand coupling.
    int nm = op.modes();
    Mat2 U = test_gauge();
    double offdiag = 0.0;
    for (int i = 0; i < nm; ++i) {
        Mat2 block;
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t) block(s, t) = op.dense(s * nm + i, t * nm + i);
        Mat2 back = U.adjoint() * block * U;
        offdiag += std::abs(back(0, 1)) + std::abs(back(1, 0));
    }
    CHECK(offdiag < 1e-12 * nm);
    // Spectrum agrees with the plain flat assembly.
    FiberData plain = rotated;
    plain.gauge = Mat2::Identity();
    auto a = min_singulars(assemble_fiber(plain, xi, 3), 8);
    auto b = min_singulars(op, 8);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
}

TEST_CASE("min_singulars is a nondecreasing prefix family") {
    Lattice lat;
    FiberData data;
    data.lat = lat;
    data.eta = cplx(0.31, 0.17);
    auto op = assemble_fiber(data, DualPoint{cplx(0.4, 0.2)}, 5);
    auto three = min_singulars(op, 3);
    auto six = min_singulars(op, 6);
    for (int i = 0; i < 3; ++i) CHECK(three[i] == six[i]);
    for (int i = 1; i < 6; ++i) CHECK(six[i] >= six[i - 1]);
}

TEST_CASE("kernel detections persist under truncation doubling") {
    Lattice lat;
    FiberData data;
    data.lat = lat;
    data.eta = cplx(0.31, 0.17);
    DualPoint xi{-data.eta};
    auto a = min_singulars(assemble_fiber(data, xi, 6), 4);
    auto b = min_singulars(assemble_fiber(data, xi, 12), 4);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
}

TEST_CASE("curve scan recovers the charge-1 sheet graph") {
    auto p = std_params();
    auto model = builtin_k1_model(p);
    ScanTolerances tol;
    auto xi_grid = make_xi_grid(12, p.lat, p.xi0, tol.delta);
    auto w_grid = make_w_grid(21, 6.0);
    auto cloud = scan_instanton_curve(model, xi_grid, w_grid, tol);
    REQUIRE_FALSE(cloud.points.empty());

    // Every hit sits on the oracle graph and carries a certified tiny sigma.
    for (const auto& pt : cloud.points) {
        cplx w_true = builtin_k1_phi(p, pt.xi);
        CHECK(chordal(pt.w, w_true) < 1e-6);
        CHECK(pt.sigma_min < default_kernel_tol(p.lat));
    }

    // Exactly one hit per xi whose sheet value lies inside the window.
    int expected = 0;
    for (cplx xi : xi_grid) {
        cplx w_true = builtin_k1_phi(p, xi);
        if (std::abs(w_true.real()) < 5.5 && std::abs(w_true.imag()) < 5.5) ++expected;
    }
    CHECK(int(cloud.points.size()) >= expected);

    // Symmetry under negation of xi: the mirrored point is present.
    Lattice lat = p.lat;
    for (const auto& pt : cloud.points) {
        bool found = false;
        for (const auto& qt : cloud.points)
            if (torus_distance(qt.xi, -pt.xi, lat) < 1e-9 && std::abs(qt.w - pt.w) < 1e-5) {
                found = true;
                break;
            }
        CHECK(found);
    }
}

TEST_CASE("cloud accuracy doubles with both grids") {
    auto p = std_params();
    auto model = builtin_k1_model(p);
    ScanTolerances tol;
    // Ground-truth samples of the sheet graph on a fine grid, windowed.
    CurveCloud truth;
    for (cplx xi : make_xi_grid(64, p.lat, p.xi0, 0.12)) {
        cplx w = builtin_k1_phi(p, xi);
        if (std::abs(w.real()) < 4.0 && std::abs(w.imag()) < 4.0)
            truth.points.push_back({xi, w, 0, 0.0, 0.0});
    }
    double d[2];
    int n = 8, m = 15;
    for (int level = 0; level < 2; ++level) {
        auto cloud = scan_instanton_curve(model, make_xi_grid(n, p.lat, p.xi0, tol.delta),
                                          make_w_grid(m, 6.0), tol);
        REQUIRE_FALSE(cloud.points.empty());
        d[level] = hausdorff(truth, cloud, p.lat).first;  // truth -> cloud coverage
        n *= 2;
        m = 2 * m - 1;
    }
    CHECK(d[1] < d[0]);
    CHECK(d[0] / d[1] > 2.0 / 1.5);
    CHECK(d[0] / d[1] < 2.0 * 1.5);
}

TEST_CASE("line frame picks the resonant Fourier mode") {
    auto p = std_params();
    auto model = builtin_k1_model(p);
    ScanTolerances tol;
    cplx xi(0.13, 0.57);
    cplx w = builtin_k1_phi(p, xi);
    auto fr = line_frame(model, {xi, w, 0, 0.0, 0.0}, 6, tol);
    CHECK(fr.residual < 1e-8);
    CHECK(fr.second_singular > 0.05);
    // Expected resonance: xi + s*eta lands on the lattice point m*tau - n.
    CurveOps ops(model);
    cplx eta = ops.sheets_over_w(w).first;
    cplx nu = fr.summand == 0 ? xi + eta : xi - eta;
    cplx hit = cplx(double(fr.m)) * p.lat.tau - cplx(double(fr.n));
    CHECK(std::abs(nu - hit) < 1e-7);
}

TEST_CASE("line frame refuses non-regular fibers") {
    auto p = std_params();
    auto model = builtin_k1_model(p);
    ScanTolerances tol;
    // Over the branch value with 2-torsion eta = 1/2 and twist xi = 1/2 both
    // summands resonate simultaneously.
    cplx w_branch = builtin_k1_phi(p, cplx(0.5, 0.0));
    CHECK_THROWS_AS(line_frame(model, {cplx(0.5, 0.0), w_branch, 0, 0.0, 0.0}, 6, tol),
                    RankAmbiguity);
}

TEST_CASE("gamma holonomy is exactly trivial on small contractible loops") {
    auto p = std_params();
    auto model = builtin_k1_model(p);
    ScanTolerances tol;
    cplx base(0.15, 0.6);
    for (double side : {0.04, 0.08}) {
        std::vector<CurvePoint> loop;
        std::vector<cplx> corners = {base, base + side, base + side + side * p.lat.tau,
                                     base + side * p.lat.tau};
        for (int e = 0; e < 4; ++e)
            for (int i = 0; i < 3; ++i) {
                cplx xi = corners[e] + (corners[(e + 1) % 4] - corners[e]) * (double(i) / 3.0);
                loop.push_back({xi, builtin_k1_phi(p, xi), 0, 0.0, 0.0});
            }
        cplx hol = gamma_holonomy(model, loop, 6, tol);
        CHECK(std::abs(hol - 1.0) < 1e-12);
        std::vector<CurvePoint> rev(loop.rbegin(), loop.rend());
        cplx back = gamma_holonomy(model, rev, 6, tol);
        CHECK(std::abs(back - std::conj(hol)) < 1e-12);
    }
}

TEST_CASE("gamma holonomy rejects loops through branch values") {
    auto p = std_params();
    auto model = builtin_k1_model(p);
    ScanTolerances tol;
    CurveOps ops(model);
    auto bp = ops.branch_points();
    // A loop whose w-leg passes within the branch margin.
    std::vector<CurvePoint> loop(4);
    for (int i = 0; i < 4; ++i) loop[i] = {cplx(0.1 + 0.01 * i, 0.6), bp[0].w, 0, 0.0, 0.0};
    CHECK_THROWS_AS(gamma_holonomy(model, loop, 6, tol), BranchTooClose);
}
