#pragma once

#include <memory>

#include "nahmlab/elliptic.hpp"

namespace nahmlab {

// Basis of the n-dimensional space of quasi-periodic functions representing
// sections of a degree-n line bundle: elements are
//   u_j(z) = exp(-n eta1 z^2) * [exp(i pi z) if n odd] * sigma(z)^n * g_j(z)
// with g_j running through 1, wp, wp', wp^2, wp*wp', wp^3, ...  The exponential
// prefactor makes every element exactly 1-periodic; the tau-direction automorphy
// factor is shared by all elements.
class ThetaBasis {
public:
    ThetaBasis(int degree, const Lattice& lat);

    int degree() const { return degree_; }
    const Lattice& lat() const { return ell_->lat(); }
    const Elliptic& elliptic() const { return *ell_; }

    cplx eval(int j, cplx z) const;

    // e(z) in f(z + tau) = e(z) f(z); independent of j.
    cplx automorphy_factor(cplx z) const;

    // Argument-principle zero count of element j over a fundamental domain.
    int zero_count(int j, int boundary_samples = 1024) const;

private:
    // wp-power and wp'-power of g_j.
    std::pair<int, int> powers(int j) const;

    int degree_;
    std::shared_ptr<const Elliptic> ell_;
};

inline ThetaBasis theta_basis(int n, const Lattice& lat) { return ThetaBasis(n, lat); }

// Winding number of f along a closed polyline given by sampled values.
int winding_count(const std::vector<cplx>& values);

} // namespace nahmlab
