#pragma once

#include <vector>

#include <Eigen/Dense>

#include "nahmlab/cloud.hpp"
#include "nahmlab/nahm.hpp"

namespace nahmlab {

// The eigenvalue curve reuses the shared curve-point container.  For Higgs
// points, sigma_min holds the smallest singular value of Phi - w*Id at the
// node and cond the eigenvector condition number of the eigenvalue.
using HiggsCurveCloud = CurveCloud;

// Unit left-null vector of Phi[xi] - w*Id at a point of the eigenvalue curve.
// The phase is fixed so the largest-modulus entry is real and positive.
struct CokernelFrame {
    cplx xi{};
    cplx w{};
    Eigen::VectorXcd u;
    double residual{};         // ||(Phi - w Id)^H u||
    double second_singular{};  // isolation of the cokernel line (infinity for k = 1)
};

// Pole structure of Phi at a puncture, estimated from a radial node probe.
struct PoleReport {
    double order{};            // growth exponent of ||Phi|| toward the puncture
    int residue_rank{};
    bool semisimple{};
    double sigma_ratio{};      // sigma_2/sigma_1 of the residue (0 for k = 1)
    Eigen::MatrixXcd residue;  // limit of dist * Phi along the probe
};

// All k eigenvalues of Phi at every certified node.  Sheets are tracked by
// nearest-neighbour continuation across the node graph; nodes where the
// assignment margin degenerates (near branch points) keep sheet = -1 but the
// eigenvalues are still emitted.
HiggsCurveCloud eigen_curve(const HiggsSample& sample);

// Cokernel line at a curve point whose xi lies on the sample grid.  Requires
// the eigenvalue to be simple: the second-smallest singular value of
// Phi - w*Id must clear 2*tol at the sample scale.
CokernelFrame coker_frame(const HiggsSample& sample, const CurvePoint& point,
                          double tol = 1e-6);

// Discrete transport of the cokernel line around a closed loop of curve
// points: parallel-transport each frame with the sampled connection over one
// edge, project onto the next cokernel line, and accumulate the phase.
// Returns a unit complex number.
cplx lambda_holonomy(const HiggsSample& sample, const std::vector<CurvePoint>& loop);

// Same transport with caller-supplied frames (one per loop point); the result
// is invariant under node-wise re-phasing of the frames.
cplx lambda_holonomy(const HiggsSample& sample, const std::vector<CurvePoint>& loop,
                     const std::vector<Eigen::VectorXcd>& frames);

// Pole order, residue and residue rank of Phi at one of the two punctures,
// from nodes along a direction-coherent radial probe.
PoleReport pole_analysis(const HiggsSample& sample, cplx puncture);

// Branch points of the eigenvalue cover over the dual torus: nodes where the
// discriminant of the characteristic polynomial dips to a certified local
// zero, refined by a complex-linear fit.  For k = 1 the discriminant is
// replaced by the fitted derivative dw/dxi, whose zeros mark the branch
// points of the degree-two map onto the w-line.
std::vector<CurvePoint> higgs_branch_points(const HiggsSample& sample);

} // namespace nahmlab
