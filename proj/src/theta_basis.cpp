#include "nahmlab/theta_basis.hpp"

#include <cmath>
#include <stdexcept>

#include "nahmlab/errors.hpp"

namespace nahmlab {

namespace {

// Centered lattice reduction: z minus the nearest lattice point.
cplx center(const Lattice& lat, cplx z) {
    auto [x, y] = lat.coords(z);
    return lat.from_coords(x - std::round(x), y - std::round(y));
}

} // namespace

ThetaBasis::ThetaBasis(int degree, const Lattice& lat)
    : degree_(degree), ell_(std::make_shared<Elliptic>(lat)) {
    if (degree < 1) throw ConfigError("theta basis degree must be positive");
}

std::pair<int, int> ThetaBasis::powers(int j) const {
    if (j < 0 || j >= degree_) throw ConfigError("theta basis index out of range");
    if (j == 0) return {0, 0};
    // Pole orders 2,3,4,5,... realized as wp^a * wp'^b with b in {0,1}.
    int order = j + 1;
    int b = order % 2 ? 1 : 0;
    int a = (order - 3 * b) / 2;
    return {a, b};
}

cplx ThetaBasis::eval(int j, cplx z) const {
    auto [a, b] = powers(j);
    const int n = degree_;
    cplx pref = std::exp(-double(n) * ell_->eta1() * z * z);
    if (n % 2) pref *= std::exp(cplx(0, kPi) * z);

    cplx t = center(ell_->lat(), z);
    if (std::abs(t) < 1e-5) {
        // Laurent limit: sigma^n wp^a wp'^b ~ (-2)^b t^(n-2a-3b).
        int expo = n - 2 * a - 3 * b;
        cplx lead = std::pow(cplx(-2.0), b);
        cplx tp = 1.0;
        for (int i = 0; i < expo; ++i) tp *= t;
        return pref * lead * tp;
    }

    cplx val = pref;
    cplx s = ell_->sigma(z);
    for (int i = 0; i < n; ++i) val *= s;
    if (a > 0) {
        cplx p = ell_->wp(z);
        for (int i = 0; i < a; ++i) val *= p;
    }
    if (b > 0) val *= ell_->wp_prime(z);
    return val;
}

cplx ThetaBasis::automorphy_factor(cplx z) const {
    const int n = degree_;
    cplx tau = ell_->lat().tau;
    cplx e = std::exp(cplx(0, -kPi) * double(n) * (2.0 * z + tau));
    if (n % 2) e *= -std::exp(cplx(0, kPi) * tau);
    return e;
}

int ThetaBasis::zero_count(int j, int boundary_samples) const {
    cplx tau = ell_->lat().tau;
    cplx base = 0.06189 + 0.05713 * tau;
    std::vector<cplx> corners = {base, base + 1.0, base + 1.0 + tau, base + tau};
    int per_edge = std::max(boundary_samples / 4, 16);
    std::vector<cplx> vals;
    vals.reserve(4 * per_edge);
    for (int e = 0; e < 4; ++e) {
        cplx p = corners[e], q = corners[(e + 1) % 4];
        for (int i = 0; i < per_edge; ++i) {
            double s = double(i) / per_edge;
            vals.push_back(eval(j, p + s * (q - p)));
        }
    }
    return winding_count(vals);
}

int winding_count(const std::vector<cplx>& values) {
    if (values.size() < 8) throw ConfigError("winding count needs a sampled loop");
    double total = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        cplx cur = values[i];
        cplx nxt = values[(i + 1) % values.size()];
        if (std::abs(cur) == 0.0 || std::abs(nxt) == 0.0)
            throw NumericalError("winding count hit a zero value on the loop");
        double d = std::arg(nxt / cur);
        if (std::abs(d) > 2.5) throw NumericalError("winding count phase step too large; refine sampling");
        total += d;
    }
    return int(std::lround(total / (2 * kPi)));
}

} // namespace nahmlab
