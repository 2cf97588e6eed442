#include "nahmlab/curve_model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nahmlab/errors.hpp"

namespace nahmlab {

namespace {

bool lex_less(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

} // namespace

void validate_model(const CurveModel& m) {
    if (m.k < 1) throw ConfigError("curve model: charge k must be >= 1");
    if (m.coeffs.size() != std::size_t(m.k) + 1)
        throw ConfigError("curve model: expected k+1 coefficient rows");
    if (is_lattice_point(m.xi0, m.lat) || is_lattice_point(2.0 * m.xi0, m.lat))
        throw ConfigError("curve model: xi0 must avoid lattice and 2-torsion points");
    double top = std::abs(m.coeffs.back()[0]) + std::abs(m.coeffs.back()[1]);
    if (top < 1e-12) throw ConfigError("curve model: leading coefficient row is zero");
    Elliptic ell(m.lat);
    cplx p0 = ell.wp(m.xi0);
    cplx punct = m.coeffs.back()[0] + p0 * m.coeffs.back()[1];
    if (std::abs(punct) > 1e-8 * (top + 1.0))
        throw ConfigError("curve model: leading row must vanish at the puncture point xi0");
}

CurveModel builtin_k1_model(const BuiltinK1& p) {
    Elliptic ell(p.lat);
    cplx p0 = ell.wp(p.xi0);
    cplx pp0 = ell.wp_prime(p.xi0);
    cplx z0 = ell.zeta(p.xi0);
    cplx s = 2.0 * p.a * z0 - p.b;
    CurveModel m;
    m.k = 1;
    m.lat = p.lat;
    m.xi0 = p.xi0;
    m.coeffs = {{s * (-p0) - p.a * pp0, s}, {-p0, cplx{1.0}}};
    validate_model(m);
    return m;
}

cplx builtin_k1_phi(const BuiltinK1& p, cplx xi) {
    Elliptic ell(p.lat);
    cplx denom = ell.wp(xi) - ell.wp(p.xi0);
    if (std::abs(denom) < 1e-12) throw NearPuncture("builtin_k1_phi: xi at the puncture");
    return p.a * (ell.wp_prime(p.xi0) / denom - 2.0 * ell.zeta(p.xi0)) + p.b;
}

CurveOps::CurveOps(const CurveModel& m) : model_(m), basis_(2, m.lat) {
    validate_model(m);
    acoef_.resize(m.k + 1);
    bcoef_.resize(m.k + 1);
    coeff_scale_ = 0.0;
    for (int j = 0; j <= m.k; ++j) {
        acoef_[j] = m.coeffs[j][0];
        bcoef_[j] = m.coeffs[j][1];
        coeff_scale_ = std::max({coeff_scale_, std::abs(acoef_[j]), std::abs(bcoef_[j])});
    }
}

cplx CurveOps::horner(const std::vector<cplx>& c, cplx w) {
    cplx v{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * w + *it;
    return v;
}

cplx CurveOps::horner_prime(const std::vector<cplx>& c, cplx w) {
    cplx v{};
    for (int j = int(c.size()) - 1; j >= 1; --j) v = v * w + double(j) * c[j];
    return v;
}

cplx CurveOps::theta_coeff(int j, cplx xi) const {
    return model_.coeffs[j][0] * basis_.eval(0, xi) + model_.coeffs[j][1] * basis_.eval(1, xi);
}

cplx CurveOps::eval_F(cplx xi, cplx w) const {
    cplx u0 = basis_.eval(0, xi);
    cplx u1 = basis_.eval(1, xi);
    cplx v{};
    for (int j = model_.k; j >= 0; --j) v = v * w + (model_.coeffs[j][0] * u0 + model_.coeffs[j][1] * u1);
    return v;
}

std::vector<cplx> CurveOps::poly_roots(const std::vector<cplx>& c, const char* what) const {
    int deg = int(c.size()) - 1;
    double scale = 0.0;
    for (auto& v : c) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw DegenerateLeadingCoefficient(std::string(what) + ": zero polynomial");
    if (std::abs(c.back()) < 1e-10 * scale)
        throw DegenerateLeadingCoefficient(std::string(what) + ": leading coefficient degenerates");
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) throw RootFindFailure(std::string(what) + ": eigen solve failed");
    std::vector<cplx> roots(deg);
    for (int i = 0; i < deg; ++i) {
        cplx r = es.eigenvalues()(i);
        for (int it = 0; it < 4; ++it) {
            cplx d = horner_prime(c, r);
            if (std::abs(d) < 1e-14 * scale) break;
            r -= horner(c, r) / d;
        }
        roots[i] = r;
    }
    std::sort(roots.begin(), roots.end(), lex_less);
    return roots;
}

std::vector<cplx> CurveOps::sheets_over_xi(cplx xi) const {
    std::vector<cplx> theta(model_.k + 1);
    double scale = 0.0;
    for (int j = 0; j <= model_.k; ++j) {
        theta[j] = theta_coeff(j, xi);
        scale = std::max(scale, std::abs(theta[j]));
    }
    if (std::abs(theta.back()) < 1e-8 * scale) {
        double d = std::min(torus_distance(xi, model_.xi0, model_.lat),
                            torus_distance(xi, -model_.xi0, model_.lat));
        if (d < 0.2) throw NearPuncture("sheets_over_xi: xi lies at a puncture of the sheet map");
        throw DegenerateLeadingCoefficient("sheets_over_xi: leading theta coefficient vanishes");
    }
    return poly_roots(theta, "sheets_over_xi");
}

std::pair<cplx, cplx> CurveOps::sheets_over_w(cplx w) const {
    double bscale = 0.0;
    double wp_ = 1.0;
    for (std::size_t j = 0; j < bcoef_.size(); ++j) {
        bscale = std::max(bscale, std::abs(bcoef_[j]) * wp_);
        wp_ *= std::max(std::abs(w), 1.0);
    }
    cplx bv = B(w);
    if (std::abs(bv) < 1e-12 * std::max(bscale, 1e-300)) {
        // The sigma^2 prefactor supplies a double xi-zero at the origin.
        return {cplx{}, cplx{}};
    }
    cplx target = -A(w) / bv;
    cplx eta = ell().wp_inverse(target);
    // Polish on G(xi) = A + wp(xi) B at fixed w.
    for (int it = 0; it < 3; ++it) {
        cplx g = A(w) + ell().wp(eta) * bv;
        cplx gp = ell().wp_prime(eta) * bv;
        if (std::abs(gp) < 1e-10 * (std::abs(g) + 1.0)) break;
        cplx step = g / gp;
        if (std::abs(step) > 0.1) step *= 0.1 / std::abs(step);
        eta -= step;
    }
    cplx resid = A(w) + ell().wp(eta) * bv;
    double rscale = std::abs(A(w)) + std::abs(target) * std::abs(bv) + coeff_scale_;
    if (std::abs(resid) > 1e-6 * rscale)
        throw RootFindFailure("sheets_over_w: residual too large after refinement");
    return {reduce(eta, model_.lat), reduce(-eta, model_.lat)};
}

std::vector<BranchPoint> CurveOps::branch_points() const {
    auto hp = ell().half_periods();
    auto ev = ell().critical_values();
    std::vector<BranchPoint> out;
    for (int t = 0; t < 4; ++t) {
        std::vector<cplx> d(model_.k + 1);
        cplx xi_t = (t < 3) ? hp[t] : cplx{};
        for (int j = 0; j <= model_.k; ++j)
            d[j] = (t < 3) ? acoef_[j] + ev[t] * bcoef_[j] : bcoef_[j];
        auto roots = poly_roots(d, "branch_points");
        for (cplx r : roots) {
            // Winding certificate: exactly one zero inside a small circle.
            double rad = 1e-3 * std::max(1.0, std::abs(r));
            std::vector<cplx> loop(64);
            for (int i = 0; i < 64; ++i)
                loop[i] = horner(d, r + std::polar(rad, 2 * kPi * i / 64.0));
            if (winding_count(loop) != 1)
                throw CountMismatch("branch_points: base point is not a certified simple zero");
            out.push_back({r, xi_t, t, std::abs(horner_prime(d, r))});
        }
    }
    if (out.size() != std::size_t(4 * model_.k))
        throw CountMismatch("branch_points: expected 4k base points");
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            if (std::abs(out[i].w - out[j].w) < 1e-6 * std::max(1.0, std::abs(out[i].w)))
                throw CountMismatch("branch_points: base points collide");
    std::sort(out.begin(), out.end(), [](const BranchPoint& a, const BranchPoint& b) {
        if (a.torsion_index != b.torsion_index) return a.torsion_index < b.torsion_index;
        return lex_less(a.w, b.w);
    });
    return out;
}

int CurveOps::genus_estimate() const {
    return int(branch_points().size()) / 2 - 1;
}

bool CurveOps::is_smooth() const {
    try {
        auto bp = branch_points();
        for (auto& b : bp)
            if (!(b.derivative_margin > 1e-10 * (coeff_scale_ + 1.0))) return false;
    } catch (const NumericalError&) {
        return false;
    }
    return true;
}

} // namespace nahmlab
