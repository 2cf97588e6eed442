#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "nahmlab/cloud.hpp"
#include "nahmlab/curve_model.hpp"

namespace nahmlab {

using Mat2 = Eigen::Matrix2cd;

// One Fourier coefficient of a rank-2 perturbation: couples mode (m,n) to
// (m+p, n+q) with the given 2x2 matrix.
struct FourierTerm {
    int p{0}, q{0};
    Mat2 coeff = Mat2::Zero();
};

// Restriction of the instanton to a single fiber T_w: a flat splitting
// L_eta + L_{-eta}, optionally conjugated by a constant gauge and perturbed
// by a finite Fourier series.
struct FiberData {
    Lattice lat{};
    cplx eta{};
    Mat2 gauge = Mat2::Identity();
    std::vector<FourierTerm> terms;

    bool plain_flat() const {
        return terms.empty() && (gauge - Mat2::Identity()).norm() < 1e-14;
    }
};

// Fourier-truncated twisted fiber Dirac operator.  For plain flat data the
// matrix is diagonal over modes; otherwise it is kept densely.
struct FiberOperator {
    int N{0};
    cplx xi{};
    Lattice lat{};
    bool flat{true};
    std::vector<cplx> diag_plus, diag_minus;  // mode-ordered, summands L_{+eta}, L_{-eta}
    Eigen::MatrixXcd dense;

    int modes() const { return (2 * N + 1) * (2 * N + 1); }
    int dim() const { return 2 * modes(); }
    int mode_index(int m, int n) const { return (m + N) * (2 * N + 1) + (n + N); }
    double op_norm() const;
    Eigen::MatrixXcd materialize() const;
};

FiberOperator assemble_fiber(const FiberData& data, DualPoint xi, int N);

// The `count` smallest singular values, nondecreasing.
std::vector<double> min_singulars(const FiberOperator& op, int count);

// Closed-form smallest singular value of the flat fiber operator in the
// untruncated limit: kappa_scale * min over sheets of dist(xi + s*eta, lattice).
double flat_sigma_min(cplx xi, cplx eta, const Lattice& lat);

struct ScanTolerances {
    double kernel_tol{-1.0};    // < 0: use 1e-6 * operator norm scale
    double frame_tol{-1.0};     // < 0: use 10 * kernel_tol
    double delta{0.1};          // puncture exclusion radius
    double branch_margin{0.05}; // keep-away distance from branch data
};

double default_kernel_tol(const Lattice& lat, int N = 8);

CurveCloud scan_instanton_curve(const CurveModel& model, const std::vector<cplx>& xi_grid,
                                const std::vector<cplx>& w_grid, const ScanTolerances& tol);

// xi-grid over the unit cell, cell-centered, omitting delta-disks at +-xi0.
std::vector<cplx> make_xi_grid(int n, const Lattice& lat, cplx xi0, double delta);

// Square w-grid of side 2L centered at the origin.
std::vector<cplx> make_w_grid(int m, double L);

// Kernel line of the fiber operator at a spectral-curve point: for flat data a
// single Fourier mode of one summand.
struct LineFrame {
    cplx xi{};
    cplx w{};
    int N{0};
    int summand{0};  // 0: L_{+eta}, 1: L_{-eta}, relative to the stored eta choice
    int m{0}, n{0};
    // The member of the unordered pair {eta, -eta} that actually resonates,
    // reduced to the fundamental cell.  This is the sign-choice-free label of
    // the kernel line; frames at nearby curve points correlate exactly when
    // their resonant branch values are close on the torus.
    cplx eta_res{};
    double residual{0.0};
    double second_singular{0.0};
};

LineFrame line_frame(const CurveModel& model, const CurvePoint& point, int N,
                     const ScanTolerances& tol);

cplx gamma_holonomy(const CurveModel& model, const std::vector<CurvePoint>& loop, int N,
                    const ScanTolerances& tol);

} // namespace nahmlab
