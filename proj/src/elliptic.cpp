#include "nahmlab/elliptic.hpp"

#include <cmath>

namespace nahmlab {

namespace {
constexpr double kPoleTol = 1e-10;
}

Elliptic::Elliptic(const Lattice& lat) : lat_(lat) {
    theta1p0_ = theta1(cplx{0.0}, 1);
    cplx theta1ppp0 = theta1(cplx{0.0}, 3);
    eta1_ = -kPi * kPi * theta1ppp0 / (6.0 * theta1p0_);
    eta3_ = eta1_ * lat_.tau - cplx{0.0, kPi};
    auto hp = half_periods();
    for (int i = 0; i < 3; ++i) crit_[i] = wp(hp[i]);
    g2_ = 2.0 * (crit_[0] * crit_[0] + crit_[1] * crit_[1] + crit_[2] * crit_[2]);
    for (int i = 0; i < 3; ++i) crit_second_[i] = 6.0 * crit_[i] * crit_[i] - g2_ / 2.0;
}

cplx Elliptic::theta1(cplx v, int deriv, int nterms) const {
    cplx q = std::exp(cplx{0.0, kPi} * lat_.tau);
    cplx sum{};
    for (int n = 0; n < nterms; ++n) {
        double a = 2.0 * n + 1.0;
        cplx qpow = std::pow(q, (n + 0.5) * (n + 0.5));
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        cplx trig;
        switch (deriv) {
            case 0: trig = std::sin(a * v); break;
            case 1: trig = a * std::cos(a * v); break;
            case 2: trig = -a * a * std::sin(a * v); break;
            case 3: trig = -a * a * a * std::cos(a * v); break;
            default: throw ConfigError("theta1: derivative order must be 0..3");
        }
        sum += sign * qpow * trig;
    }
    return 2.0 * sum;
}

cplx Elliptic::reduce_centered(cplx z, long& m, long& n) const {
    auto [x, y] = lat_.coords(z);
    m = std::lround(x);
    n = std::lround(y);
    return lat_.from_coords(x - double(m), y - double(n));
}

cplx Elliptic::zeta(cplx z) const {
    long m, n;
    cplx zr = reduce_centered(z, m, n);
    if (std::abs(zr) < kPoleTol) throw PoleAtLattice("zeta: z is a lattice point");
    cplx v = kPi * zr;
    cplx core = 2.0 * eta1_ * zr + kPi * theta1(v, 1) / theta1(v, 0);
    return core + 2.0 * double(m) * eta1_ + 2.0 * double(n) * eta3_;
}

cplx Elliptic::wp(cplx z) const {
    long m, n;
    cplx zr = reduce_centered(z, m, n);
    if (std::abs(zr) < kPoleTol) throw PoleAtLattice("wp: z is a lattice point");
    cplx v = kPi * zr;
    cplx t0 = theta1(v, 0), t1 = theta1(v, 1), t2 = theta1(v, 2);
    cplx r1 = t1 / t0;
    return -2.0 * eta1_ - kPi * kPi * (t2 / t0 - r1 * r1);
}

cplx Elliptic::wp_prime(cplx z) const {
    long m, n;
    cplx zr = reduce_centered(z, m, n);
    if (std::abs(zr) < kPoleTol) throw PoleAtLattice("wp_prime: z is a lattice point");
    cplx v = kPi * zr;
    cplx t0 = theta1(v, 0), t1 = theta1(v, 1), t2 = theta1(v, 2), t3 = theta1(v, 3);
    cplx r1 = t1 / t0;
    return -kPi * kPi * kPi * (t3 / t0 - 3.0 * t2 * t1 / (t0 * t0) + 2.0 * r1 * r1 * r1);
}

cplx Elliptic::wp_second(cplx z) const {
    cplx p = wp(z);
    return 6.0 * p * p - g2_ / 2.0;
}

cplx Elliptic::sigma(cplx z) const {
    long m, n;
    cplx zr = reduce_centered(z, m, n);
    cplx core = std::exp(eta1_ * zr * zr) * theta1(kPi * zr, 0) / (kPi * theta1p0_);
    if (m == 0 && n == 0) return core;
    cplx lambda = cplx(double(m), 0.0) + lat_.tau * double(n);
    cplx eta_lambda = 2.0 * double(m) * eta1_ + 2.0 * double(n) * eta3_;
    double sign = ((m + n + m * n) % 2 == 0) ? 1.0 : -1.0;
    return sign * std::exp(eta_lambda * (zr + lambda / 2.0)) * core;
}

std::array<cplx, 3> Elliptic::half_periods() const {
    return {cplx{0.5, 0.0}, 0.5 * lat_.tau, 0.5 + 0.5 * lat_.tau};
}

void Elliptic::ensure_table() const {
    std::call_once(table_once_, [this] {
        const int n = 47;
        table_z_.reserve(n * n);
        table_v_.reserve(n * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double x = 0.04 + 0.92 * i / (n - 1.0);
                double y = 0.04 + 0.92 * j / (n - 1.0);
                cplx z = lat_.from_coords(x, y);
                table_z_.push_back(z);
                table_v_.push_back(wp(z));
            }
    });
}

cplx Elliptic::wp_inverse(cplx P) const {
    ensure_table();
    std::vector<cplx> seeds;
    if (std::abs(P) > 40.0) {
        seeds.push_back(1.0 / std::sqrt(P));
    } else {
        auto hp = half_periods();
        for (int i = 0; i < 3; ++i)
            if (std::abs(P - crit_[i]) < 2.0)
                seeds.push_back(hp[i] + std::sqrt(2.0 * (P - crit_[i]) / crit_second_[i]));
        std::size_t best = 0;
        double bestd = std::abs(table_v_[0] - P);
        for (std::size_t i = 1; i < table_v_.size(); ++i) {
            double d = std::abs(table_v_[i] - P);
            if (d < bestd) { bestd = d; best = i; }
        }
        seeds.push_back(table_z_[best]);
    }
    double scale = std::max(1.0, std::abs(P));
    for (cplx e0 : seeds) {
        cplx e = e0;
        for (int it = 0; it < 60; ++it) {
            cplx d = wp(e) - P;
            if (std::abs(d) < 1e-10 * scale) return e;
            cplx dp = wp_prime(e);
            if (std::abs(dp) < 1e-13) break;
            cplx step = d / dp;
            double sl = std::abs(step);
            if (sl > 0.2) step *= 0.2 / sl;
            e -= step;
        }
    }
    throw RootFindFailure("wp_inverse: Newton failed for P = (" + std::to_string(P.real()) + "," +
                          std::to_string(P.imag()) + ")");
}

std::tuple<cplx, cplx, cplx> weierstrass(cplx z, const Lattice& lat) {
    Elliptic ell(lat);
    return {ell.wp(z), ell.wp_prime(z), ell.zeta(z)};
}

} // namespace nahmlab
