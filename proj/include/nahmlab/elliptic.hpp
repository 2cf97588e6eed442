#pragma once

#include <array>
#include <mutex>
#include <tuple>
#include <vector>

#include "nahmlab/lattice.hpp"

namespace nahmlab {

// Weierstrass / theta layer for a fixed lattice.  All values are computed from
// the theta1 q-series with a fixed truncation; doubling the truncation moves
// results by far less than 1e-12 on the working domain (see tests).
class Elliptic {
public:
    explicit Elliptic(const Lattice& lat);

    const Lattice& lat() const { return lat_; }

    // theta1(v) and v-derivatives up to order 3, q = exp(i pi tau).
    cplx theta1(cplx v, int deriv = 0, int nterms = kTerms) const;

    cplx eta1() const { return eta1_; }
    cplx eta3() const { return eta3_; }

    cplx zeta(cplx z) const;
    cplx wp(cplx z) const;
    cplx wp_prime(cplx z) const;
    cplx wp_second(cplx z) const;
    cplx sigma(cplx z) const;

    // Half periods and the critical values e_i = wp(half period).
    std::array<cplx, 3> half_periods() const;
    std::array<cplx, 3> critical_values() const { return crit_; }
    cplx g2() const { return g2_; }

    // A solution of wp(eta) = P; the full preimage is {eta, -eta} + lattice.
    // Robust near critical values via local square-root seeds.
    cplx wp_inverse(cplx P) const;

    static constexpr int kTerms = 16;

private:
    cplx reduce_centered(cplx z, long& m, long& n) const;
    void ensure_table() const;

    Lattice lat_;
    cplx theta1p0_;   // theta1'(0)
    cplx eta1_, eta3_;
    std::array<cplx, 3> crit_;
    cplx g2_;
    std::array<cplx, 3> crit_second_;  // wp'' at the half periods

    mutable std::once_flag table_once_;
    mutable std::vector<cplx> table_z_, table_v_;
};

// Convenience wrapper matching the one-shot call signature.
std::tuple<cplx, cplx, cplx> weierstrass(cplx z, const Lattice& lat);

} // namespace nahmlab
