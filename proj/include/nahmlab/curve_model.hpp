#pragma once

#include <array>
#include <utility>
#include <vector>

#include "nahmlab/theta_basis.hpp"

namespace nahmlab {

// Spectral curve in T^ x C, cut out by F(xi, w) = sum_j theta_j(xi) w^j where
// each theta_j lives in the degree-2 basis: theta_j = c[j][0] u_0 + c[j][1] u_1.
// Writing A(w) = sum_j c[j][0] w^j and B(w) = sum_j c[j][1] w^j this is
// F = u_0(xi) (A(w) + wp(xi) B(w)), so the projection to w is generically 2:1
// and the projection to xi is k:1.
struct CurveModel {
    int k{1};
    Lattice lat{};
    cplx xi0{0.25, 0.25};
    std::vector<std::array<cplx, 2>> coeffs;  // (k+1) rows, j = 0..k
};

// Charge-1 family: the single sheet over xi is the elliptic function
//   phi(xi) = a (zeta(xi - xi0) - zeta(xi + xi0)) + b
//           = a (wp'(xi0) / (wp(xi) - wp(xi0)) - 2 zeta(xi0)) + b.
struct BuiltinK1 {
    cplx a{0.6, 0.0};
    cplx b{0.0, 0.0};
    cplx xi0{0.25, 0.25};
    Lattice lat{};
};

CurveModel builtin_k1_model(const BuiltinK1& p);
cplx builtin_k1_phi(const BuiltinK1& p, cplx xi);

struct BranchPoint {
    cplx w{};             // base point in the w-plane
    cplx xi{};            // the 2-torsion value where the two xi-sheets meet
    int torsion_index{};  // 0..2: half periods; 3: xi = 0
    double derivative_margin{};
};

// Cached evaluation context; all module operations are methods plus free
// forwarding wrappers below.
class CurveOps {
public:
    explicit CurveOps(const CurveModel& m);

    const CurveModel& model() const { return model_; }
    const ThetaBasis& basis() const { return basis_; }
    const Elliptic& ell() const { return basis_.elliptic(); }

    cplx theta_coeff(int j, cplx xi) const;
    cplx A(cplx w) const { return horner(acoef_, w); }
    cplx B(cplx w) const { return horner(bcoef_, w); }
    cplx A_prime(cplx w) const { return horner_prime(acoef_, w); }
    cplx B_prime(cplx w) const { return horner_prime(bcoef_, w); }

    cplx eval_F(cplx xi, cplx w) const;

    // The k sheet values w with F(xi, w) = 0, lexicographically ordered.
    std::vector<cplx> sheets_over_xi(cplx xi) const;

    // The two xi-zeros {eta, -eta} of F(., w), reduced to the fundamental cell.
    std::pair<cplx, cplx> sheets_over_w(cplx w) const;
    std::pair<cplx, cplx> fiber_pair(cplx w) const { return sheets_over_w(w); }

    // All 4k base points where the two xi-sheets collide, with winding
    // certificates of simplicity and pairwise distinctness.
    std::vector<BranchPoint> branch_points() const;

    int genus_estimate() const;
    bool is_smooth() const;

private:
    static cplx horner(const std::vector<cplx>& c, cplx w);
    static cplx horner_prime(const std::vector<cplx>& c, cplx w);
    std::vector<cplx> poly_roots(const std::vector<cplx>& c, const char* what) const;

    CurveModel model_;
    ThetaBasis basis_;
    std::vector<cplx> acoef_, bcoef_;
    double coeff_scale_;
};

void validate_model(const CurveModel& m);

inline cplx eval_F(const CurveModel& m, cplx xi, cplx w) { return CurveOps(m).eval_F(xi, w); }
inline std::vector<cplx> sheets_over_xi(const CurveModel& m, cplx xi) { return CurveOps(m).sheets_over_xi(xi); }
inline std::pair<cplx, cplx> sheets_over_w(const CurveModel& m, cplx w) { return CurveOps(m).sheets_over_w(w); }
inline std::pair<cplx, cplx> fiber_pair(const CurveModel& m, cplx w) { return CurveOps(m).fiber_pair(w); }
inline std::vector<BranchPoint> branch_points(const CurveModel& m) { return CurveOps(m).branch_points(); }
inline int genus_estimate(const CurveModel& m) { return CurveOps(m).genus_estimate(); }
inline bool is_smooth(const CurveModel& m) { return CurveOps(m).is_smooth(); }

} // namespace nahmlab
