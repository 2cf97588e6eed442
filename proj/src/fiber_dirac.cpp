#include "nahmlab/fiber_dirac.hpp"

#include <algorithm>
#include <cmath>

#include "nahmlab/errors.hpp"

namespace nahmlab {

namespace {

// Golden-section minimization of f over [lo, hi].
template <typename F>
double golden_min(F&& f, double lo, double hi, int iters = 60) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && (b - a) > 1e-13 * std::max(1.0, std::abs(a)); ++i) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - r * (b - a); f1 = f(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + r * (b - a); f2 = f(x2);
        }
    }
    return f1 < f2 ? x1 : x2;
}

} // namespace

double FiberOperator::op_norm() const {
    if (flat) {
        double m = 0.0;
        for (cplx d : diag_plus) m = std::max(m, std::abs(d));
        for (cplx d : diag_minus) m = std::max(m, std::abs(d));
        return m;
    }
    return dense.operatorNorm();
}

Eigen::MatrixXcd FiberOperator::materialize() const {
    if (!flat) return dense;
    int nm = modes();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * nm, 2 * nm);
    for (int i = 0; i < nm; ++i) {
        out(i, i) = diag_plus[i];
        out(nm + i, nm + i) = diag_minus[i];
    }
    return out;
}

FiberOperator assemble_fiber(const FiberData& data, DualPoint xi, int N) {
    if (N < 1) throw ConfigError("assemble_fiber: cutoff N must be >= 1");
    FiberOperator op;
    op.N = N;
    op.xi = xi.xi;
    op.lat = data.lat;
    op.flat = data.plain_flat();
    const double ks = kappa_scale(data.lat);
    const int nm = op.modes();
    cplx nu_p = xi.xi + data.eta;
    cplx nu_m = xi.xi - data.eta;
    auto dval = [&](int m, int n, cplx nu) {
        return ks * (cplx(double(m)) * data.lat.tau - cplx(double(n)) - nu);
    };
    if (op.flat) {
        op.diag_plus.resize(nm);
        op.diag_minus.resize(nm);
        for (int m = -N; m <= N; ++m)
            for (int n = -N; n <= N; ++n) {
                int idx = op.mode_index(m, n);
                op.diag_plus[idx] = dval(m, n, nu_p);
                op.diag_minus[idx] = dval(m, n, nu_m);
            }
        return op;
    }
    op.dense = Eigen::MatrixXcd::Zero(2 * nm, 2 * nm);
    const Mat2& U = data.gauge;
    for (int m = -N; m <= N; ++m)
        for (int n = -N; n <= N; ++n) {
            int idx = op.mode_index(m, n);
            Mat2 block = U * Eigen::DiagonalMatrix<cplx, 2>(dval(m, n, nu_p), dval(m, n, nu_m)) * U.adjoint();
            for (int s = 0; s < 2; ++s)
                for (int t = 0; t < 2; ++t) op.dense(s * nm + idx, t * nm + idx) = block(s, t);
        }
    for (const auto& term : data.terms) {
        Mat2 C = U * term.coeff * U.adjoint();
        for (int m = -N; m <= N; ++m)
            for (int n = -N; n <= N; ++n) {
                int m2 = m + term.p, n2 = n + term.q;
                if (m2 < -N || m2 > N || n2 < -N || n2 > N) continue;
                int from = op.mode_index(m, n), to = op.mode_index(m2, n2);
                for (int s = 0; s < 2; ++s)
                    for (int t = 0; t < 2; ++t) op.dense(s * nm + to, t * nm + from) += C(s, t);
            }
    }
    return op;
}

std::vector<double> min_singulars(const FiberOperator& op, int count) {
    if (count < 1) throw ConfigError("min_singulars: count must be >= 1");
    count = std::min(count, op.dim());
    std::vector<double> all;
    if (op.flat) {
        all.reserve(op.dim());
        for (cplx d : op.diag_plus) all.push_back(std::abs(d));
        for (cplx d : op.diag_minus) all.push_back(std::abs(d));
    } else {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(op.dense);
        if (svd.info() != Eigen::Success)
            throw ConvergenceFailure("min_singulars: SVD did not converge");
        auto sv = svd.singularValues();
        all.assign(sv.data(), sv.data() + sv.size());
    }
    std::sort(all.begin(), all.end());
    all.resize(count);
    return all;
}

double flat_sigma_min(cplx xi, cplx eta, const Lattice& lat) {
    double dp = lattice_distance(xi + eta, lat);
    double dm = lattice_distance(xi - eta, lat);
    return kappa_scale(lat) * std::min(dp, dm);
}

double default_kernel_tol(const Lattice& lat, int N) {
    return 1e-6 * kappa_scale(lat) * double(N) * (1.0 + std::abs(lat.tau));
}

std::vector<cplx> make_xi_grid(int n, const Lattice& lat, cplx xi0, double delta) {
    if (n < 2) throw ConfigError("make_xi_grid: need n >= 2");
    std::vector<cplx> out;
    out.reserve(std::size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cplx xi = lat.from_coords((i + 0.5) / n, (j + 0.5) / n);
            if (torus_distance(xi, xi0, lat) < delta) continue;
            if (torus_distance(xi, -xi0, lat) < delta) continue;
            out.push_back(xi);
        }
    return out;
}

std::vector<cplx> make_w_grid(int m, double L) {
    if (m < 2) throw ConfigError("make_w_grid: need m >= 2");
    std::vector<cplx> out;
    out.reserve(std::size_t(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            out.push_back(cplx(-L + 2.0 * L * i / (m - 1), -L + 2.0 * L * j / (m - 1)));
    return out;
}

CurveCloud scan_instanton_curve(const CurveModel& model, const std::vector<cplx>& xi_grid,
                                const std::vector<cplx>& w_grid, const ScanTolerances& tol) {
    CurveOps ops(model);
    const Lattice& lat = model.lat;
    double kernel_tol = tol.kernel_tol > 0 ? tol.kernel_tol : default_kernel_tol(lat);

    // The w-grid is expected rectangular; recover its shape and step.
    int m = int(std::lround(std::sqrt(double(w_grid.size()))));
    if (m * m != int(w_grid.size()) || m < 3)
        throw ConfigError("scan_instanton_curve: w_grid must be a square grid with >= 3 nodes per side");
    double hx = std::abs(w_grid[m].real() - w_grid[0].real());
    double hy = std::abs(w_grid[1].imag() - w_grid[0].imag());

    std::vector<cplx> eta_w(w_grid.size());
    for (std::size_t i = 0; i < w_grid.size(); ++i) eta_w[i] = ops.sheets_over_w(w_grid[i]).first;

    auto sigma_at = [&](cplx xi, cplx w) { return flat_sigma_min(xi, ops.sheets_over_w(w).first, lat); };

    CurveCloud cloud;
    for (cplx xi : xi_grid) {
        if (torus_distance(xi, model.xi0, lat) < tol.delta ||
            torus_distance(xi, -model.xi0, lat) < tol.delta)
            continue;
        std::vector<double> sg(w_grid.size());
        for (std::size_t i = 0; i < w_grid.size(); ++i) sg[i] = flat_sigma_min(xi, eta_w[i], lat);
        std::vector<cplx> hits;
        std::vector<double> hit_sigma;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double v = sg[i * m + j];
                bool is_min = true;
                for (int di = -1; di <= 1 && is_min; ++di)
                    for (int dj = -1; dj <= 1; ++dj) {
                        int i2 = i + di, j2 = j + dj;
                        if ((di == 0 && dj == 0) || i2 < 0 || i2 >= m || j2 < 0 || j2 >= m) continue;
                        if (sg[i2 * m + j2] < v) { is_min = false; break; }
                    }
                if (!is_min) continue;
                // Coordinate-descent golden refinement around the coarse node.
                cplx w = w_grid[i * m + j];
                for (int round = 0; round < 3; ++round) {
                    double x = golden_min([&](double t) { return sigma_at(xi, cplx(t, w.imag())); },
                                          w.real() - hx, w.real() + hx);
                    w = cplx(x, w.imag());
                    double y = golden_min([&](double t) { return sigma_at(xi, cplx(w.real(), t)); },
                                          w.imag() - hy, w.imag() + hy);
                    w = cplx(w.real(), y);
                }
                double s = sigma_at(xi, w);
                if (s < kernel_tol) {
                    bool dup = false;
                    for (std::size_t u = 0; u < hits.size(); ++u)
                        if (std::abs(hits[u] - w) < 1e-6 * (1.0 + std::abs(w))) {
                            dup = true;
                            if (s < hit_sigma[u]) { hits[u] = w; hit_sigma[u] = s; }
                            break;
                        }
                    if (!dup) { hits.push_back(w); hit_sigma.push_back(s); }
                }
            }
        std::vector<std::size_t> order(hits.size());
        for (std::size_t u = 0; u < order.size(); ++u) order[u] = u;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (hits[a].real() != hits[b].real()) return hits[a].real() < hits[b].real();
            return hits[a].imag() < hits[b].imag();
        });
        for (std::size_t rank = 0; rank < order.size(); ++rank) {
            CurvePoint p;
            p.xi = xi;
            p.w = hits[order[rank]];
            p.sheet = int(rank);
            p.sigma_min = hit_sigma[order[rank]];
            cloud.points.push_back(p);
        }
    }
    return cloud;
}

LineFrame line_frame(const CurveModel& model, const CurvePoint& point, int N,
                     const ScanTolerances& tol) {
    CurveOps ops(model);
    const Lattice& lat = model.lat;
    double kernel_tol = tol.kernel_tol > 0 ? tol.kernel_tol : default_kernel_tol(lat, N);
    double frame_tol = tol.frame_tol > 0 ? tol.frame_tol : 10.0 * kernel_tol;

    FiberData data;
    data.lat = lat;
    data.eta = ops.sheets_over_w(point.w).first;
    FiberOperator op = assemble_fiber(data, DualPoint{point.xi}, N);

    LineFrame fr;
    fr.xi = point.xi;
    fr.w = point.w;
    fr.N = N;
    double best = std::numeric_limits<double>::infinity();
    double second = best;
    for (int s = 0; s < 2; ++s) {
        const auto& diag = s == 0 ? op.diag_plus : op.diag_minus;
        for (int m = -N; m <= N; ++m)
            for (int n = -N; n <= N; ++n) {
                double v = std::abs(diag[op.mode_index(m, n)]);
                if (v < best) {
                    second = best;
                    best = v;
                    fr.summand = s;
                    fr.m = m;
                    fr.n = n;
                } else if (v < second) {
                    second = v;
                }
            }
    }
    fr.residual = best;
    fr.second_singular = second;
    fr.eta_res = reduce(fr.summand == 0 ? data.eta : -data.eta, lat);
    if (second < 2.0 * kernel_tol)
        throw RankAmbiguity("line_frame: kernel line is not isolated at this fiber");
    if (best > frame_tol)
        throw NumericalError("line_frame: point is not on the spectral curve within tolerance");
    return fr;
}

cplx gamma_holonomy(const CurveModel& model, const std::vector<CurvePoint>& loop, int N,
                    const ScanTolerances& tol) {
    if (loop.size() < 2) throw ConfigError("gamma_holonomy: loop needs at least two points");
    CurveOps ops(model);
    auto bps = ops.branch_points();
    for (const auto& p : loop)
        for (const auto& b : bps)
            if (chordal(p.w, b.w) < tol.branch_margin)
                throw BranchTooClose("gamma_holonomy: loop point too close to a branch value");
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const auto& p = loop[i];
        const auto& q = loop[(i + 1) % loop.size()];
        if (torus_distance(p.xi, q.xi, model.lat) > 0.25)
            throw FrameCorrelationLoss("gamma_holonomy: consecutive loop points too far apart");
    }
    std::vector<LineFrame> frames;
    frames.reserve(loop.size());
    for (const auto& p : loop) frames.push_back(line_frame(model, p, N, tol));
    cplx prod{1.0};
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const auto& a = frames[i];
        const auto& b = frames[(i + 1) % frames.size()];
        // Frames are single Fourier modes in the twisted trivialization; the
        // overlap is 1 when both points resonate on the same continuous branch
        // of the sheet pair and 0 otherwise.
        cplx ov = torus_distance(a.eta_res, b.eta_res, model.lat) < 0.2 ? cplx{1.0} : cplx{0.0};
        if (std::abs(ov) < 0.5)
            throw FrameCorrelationLoss("gamma_holonomy: consecutive kernel modes decorrelate");
        prod *= ov;
    }
    return prod / std::abs(prod);
}

} // namespace nahmlab
