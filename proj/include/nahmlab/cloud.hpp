#pragma once

#include <utility>
#include <vector>

#include "nahmlab/lattice.hpp"

namespace nahmlab {

// A sampled point of a spectral curve in T^ x P^1.  sigma_min carries the
// detection quality on the instanton side; cond carries the eigenvector
// condition number on the Higgs side.  sheet < 0 means unassigned.
struct CurvePoint {
    cplx xi{};
    cplx w{};
    int sheet{-1};
    double sigma_min{0.0};
    double cond{0.0};
};

struct CurveCloud {
    std::vector<CurvePoint> points;
};

// Chordal distance on P^1, extending continuously to infinity.
inline double chordal(cplx a, cplx b) {
    return std::abs(a - b) / std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

// Distance from a finite point to the point at infinity.
inline double chordal_to_infinity(cplx a) { return 1.0 / std::sqrt(1.0 + std::norm(a)); }

// Product metric on T^ x P^1: flat torus distance plus chordal distance.
inline double product_metric(const CurvePoint& p, const CurvePoint& q, const Lattice& lat) {
    return torus_distance(p.xi, q.xi, lat) + chordal(p.w, q.w);
}

std::pair<double, double> hausdorff(const CurveCloud& a, const CurveCloud& b, const Lattice& lat);

inline double hausdorff_symmetric(const CurveCloud& a, const CurveCloud& b, const Lattice& lat) {
    auto [ab, ba] = hausdorff(a, b, lat);
    return std::max(ab, ba);
}

} // namespace nahmlab
