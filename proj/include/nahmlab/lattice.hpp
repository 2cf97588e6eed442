#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "nahmlab/errors.hpp"

namespace nahmlab {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// Torus T = C / (Z + tau Z).  The dual torus is modeled with the same modulus;
// see pairing() below for the duality normalization.
struct Lattice {
    cplx tau{0.0, 1.0};

    explicit Lattice(cplx t = cplx{0.0, 1.0}) : tau(t) {
        if (!(tau.imag() > 0.0)) throw ConfigError("Lattice: Im(tau) must be positive");
    }

    // Lattice coordinates: z = x + tau*y.
    std::pair<double, double> coords(cplx z) const {
        double y = z.imag() / tau.imag();
        double x = z.real() - y * tau.real();
        return {x, y};
    }

    cplx from_coords(double x, double y) const { return cplx(x, 0.0) + tau * y; }
};

// Integer part such that the fractional remainder lies in [0,1).
inline double floor_frac(double v, long& n) {
    double f = std::floor(v);
    n = static_cast<long>(f);
    double r = v - f;
    if (r >= 1.0) { r -= 1.0; ++n; }  // guards against rounding at the seam
    if (r < 0.0) { r += 1.0; --n; }
    return r;
}

// Reduce z into the half-open fundamental parallelogram {x + tau y : x,y in [0,1)}.
// Also reports the integer translation used: z = result + m + n*tau.
inline cplx reduce_with_counts(cplx z, const Lattice& lat, long& m, long& n) {
    auto [x, y] = lat.coords(z);
    double xr = floor_frac(x, m);
    double yr = floor_frac(y, n);
    // Snap coordinates that are numerically indistinguishable from the far edge.
    if (xr > 1.0 - 1e-13) { xr = 0.0; ++m; }
    if (yr > 1.0 - 1e-13) { yr = 0.0; ++n; }
    return lat.from_coords(xr, yr);
}

inline cplx reduce(cplx z, const Lattice& lat) {
    long m, n;
    return reduce_with_counts(z, lat, m, n);
}

// A point of the dual torus: the constant flat connection parameter xi.
struct DualPoint {
    cplx xi{};

    DualPoint() = default;
    explicit DualPoint(cplx v) : xi(v) {}
    DualPoint negate() const { return DualPoint{-xi}; }
};

// Flat distance on the torus: minimum over nearby lattice translates.
inline double torus_distance(cplx a, cplx b, const Lattice& lat) {
    cplx d = reduce(a - b, lat);
    double best = std::abs(d);
    for (int i = -1; i <= 1; ++i)
        for (int j = -1; j <= 1; ++j) {
            double v = std::abs(d - (cplx(double(i), 0.0) + lat.tau * double(j)));
            best = std::min(best, v);
        }
    return best;
}

inline double lattice_distance(cplx z, const Lattice& lat) { return torus_distance(z, cplx{0.0}, lat); }

// Nearest lattice vector to z and the remaining distance.
inline cplx nearest_lattice_vector(cplx z, const Lattice& lat) {
    auto [x, y] = lat.coords(z);
    cplx best{};
    double bestd = std::abs(z);
    for (long i = std::lround(x) - 1; i <= std::lround(x) + 1; ++i)
        for (long j = std::lround(y) - 1; j <= std::lround(y) + 1; ++j) {
            cplx v = cplx(double(i), 0.0) + lat.tau * double(j);
            double d = std::abs(z - v);
            if (d < bestd) { bestd = d; best = v; }
        }
    return best;
}

inline bool is_lattice_point(cplx z, const Lattice& lat, double tol = 1e-9) {
    return lattice_distance(z, lat) < tol;
}

inline bool is_order_two(const DualPoint& p, const Lattice& lat, double tol = 1e-9) {
    return is_lattice_point(2.0 * p.xi, lat, tol);
}

// Duality pairing between T and T^: chi_xi(z) = exp(2*pi*i * Im(conj(xi) z) / Im tau).
// Equivalently the connection form is omega_xi = i * pairing_constant * Im(conj(xi) dz)
// with pairing_constant = 2*pi / Im(tau): xi -> L_xi hits every flat line bundle
// exactly once per fundamental domain, and xi = m + n*tau pairs trivially with the lattice.
inline double pairing_constant(const Lattice& lat) { return 2.0 * kPi / lat.tau.imag(); }

inline cplx pairing(cplx xi, cplx z, const Lattice& lat) {
    double phase = pairing_constant(lat) * std::imag(std::conj(xi) * z);
    return std::polar(1.0, phase);
}

// Shared metric constant of the twisted Dirac spectrum: the mode (m,n) of the
// operator twisted by nu has singular value kappa_scale * |m*tau - n - nu|.
inline double kappa_scale(const Lattice& lat) { return kPi / lat.tau.imag(); }

// Lattice vectors m + n*tau with |m|,|n| <= win.
inline std::vector<cplx> lattice_window(const Lattice& lat, int win) {
    std::vector<cplx> out;
    out.reserve((2 * win + 1) * (2 * win + 1));
    for (int m = -win; m <= win; ++m)
        for (int n = -win; n <= win; ++n) out.push_back(cplx(double(m), 0.0) + lat.tau * double(n));
    return out;
}

} // namespace nahmlab
