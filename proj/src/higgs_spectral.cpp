#include "nahmlab/higgs_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "nahmlab/errors.hpp"

namespace nahmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

cplx shortest_rep(cplx z, const Lattice& lat) { return z - nearest_lattice_vector(z, lat); }

// Eigenvalues of Phi at a node together with eigenvector condition numbers
// and the smallest singular value of Phi - w*Id per eigenvalue.
struct NodeSpectrum {
    std::vector<cplx> w;
    std::vector<double> cond;
    std::vector<double> smin;
};

NodeSpectrum node_spectrum(const HiggsNode& node, int k) {
    NodeSpectrum out;
    if (k == 1) {
        out.w = {node.phi(0, 0)};
        out.cond = {1.0};
        out.smin = {0.0};
        return out;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(node.phi);
    if (es.info() != Eigen::Success)
        throw NumericalError("node_spectrum: eigenvalue solve failed");
    Eigen::MatrixXcd V = es.eigenvectors();
    Eigen::MatrixXcd Vi = V.inverse();
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(k, k);
    for (int i = 0; i < k; ++i) {
        cplx w = es.eigenvalues()(i);
        out.w.push_back(w);
        out.cond.push_back(Vi.row(i).norm() * V.col(i).norm());
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(node.phi - w * id);
        out.smin.push_back(svd.singularValues()(k - 1));
    }
    return out;
}

std::vector<int> certified_nodes(const HiggsSample& sample) {
    std::vector<int> idx;
    for (int i = 0; i < static_cast<int>(sample.nodes.size()); ++i) {
        const auto& nd = sample.nodes[i];
        if (nd.certified_k == sample.k && nd.phi.rows() == sample.k) idx.push_back(i);
    }
    return idx;
}

void fix_phase(Eigen::VectorXcd& u) {
    int imax = 0;
    for (int i = 1; i < u.size(); ++i)
        if (std::abs(u(i)) > std::abs(u(imax))) imax = i;
    cplx a = u(imax);
    if (std::abs(a) > 0.0) u *= std::conj(a) / std::abs(a);
}

double min_eig_separation(const NodeSpectrum& sp) {
    double sep = kInf;
    for (std::size_t a = 0; a + 1 < sp.w.size(); ++a)
        for (std::size_t b = a + 1; b < sp.w.size(); ++b)
            sep = std::min(sep, chordal(sp.w[a], sp.w[b]));
    return sep;
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double xm = std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
    double ym = std::accumulate(y.begin(), y.end(), 0.0) / double(y.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - xm) * (y[i] - ym);
        den += (x[i] - xm) * (x[i] - xm);
    }
    return den > 0.0 ? num / den : 0.0;
}

} // namespace

HiggsCurveCloud eigen_curve(const HiggsSample& sample) {
    const int k = sample.k;
    if (k < 1) throw ConfigError("eigen_curve: sample charge must be positive");
    auto idx = certified_nodes(sample);
    if (idx.empty()) throw EmptyCloud("eigen_curve: sample has no certified nodes");
    const int n = static_cast<int>(idx.size());

    std::vector<NodeSpectrum> spec(n);
    for (int i = 0; i < n; ++i) spec[i] = node_spectrum(sample.nodes[idx[i]], k);

    // Sheet labels per eigenvalue; label[i][e] is always filled during the
    // traversal so continuation never loses its reference, while flag[i][e]
    // marks assignments whose margin was too small to certify.
    std::vector<std::vector<int>> label(n, std::vector<int>(k, -1));
    std::vector<std::vector<char>> flag(n, std::vector<char>(k, 0));

    // Seed: lexicographic eigenvalue order at the first certified node.
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        cplx wa = spec[0].w[a], wb = spec[0].w[b];
        if (wa.real() != wb.real()) return wa.real() < wb.real();
        return wa.imag() < wb.imag();
    });
    for (int s = 0; s < k; ++s) label[0][order[s]] = s;

    // Nearest-neighbour continuation over the node graph (lazy Prim sweep).
    std::vector<char> assigned(n, 0);
    std::vector<double> dist(n, kInf);
    std::vector<int> src(n, -1);
    assigned[0] = 1;
    int last = 0;
    for (int step = 1; step < n; ++step) {
        for (int u = 0; u < n; ++u) {
            if (assigned[u]) continue;
            double d = torus_distance(sample.nodes[idx[u]].xi, sample.nodes[idx[last]].xi, sample.lat);
            if (d < dist[u]) { dist[u] = d; src[u] = last; }
        }
        int best = -1;
        for (int u = 0; u < n; ++u)
            if (!assigned[u] && (best < 0 || dist[u] < dist[best])) best = u;
        int r = src[best];
        std::vector<char> used(k, 0);
        std::vector<int> match(k, -1);
        std::vector<double> md(k, 0.0);
        for (int pick = 0; pick < k; ++pick) {
            double dmin = kInf;
            int bi = -1, bj = -1;
            for (int i = 0; i < k; ++i) {
                if (match[i] >= 0) continue;
                for (int j = 0; j < k; ++j) {
                    if (used[j]) continue;
                    double d = chordal(spec[best].w[i], spec[r].w[j]);
                    if (d < dmin) { dmin = d; bi = i; bj = j; }
                }
            }
            match[bi] = bj;
            md[bi] = dmin;
            used[bj] = 1;
        }
        for (int i = 0; i < k; ++i) {
            label[best][i] = label[r][match[i]];
            double alt = kInf;
            for (int j = 0; j < k; ++j)
                if (j != match[i]) alt = std::min(alt, chordal(spec[best].w[i], spec[r].w[j]));
            if (alt < 2.0 * md[i]) flag[best][i] = 1;
        }
        assigned[best] = 1;
        last = best;
    }

    HiggsCurveCloud cloud;
    cloud.points.reserve(std::size_t(n) * k);
    for (int i = 0; i < n; ++i)
        for (int e = 0; e < k; ++e) {
            CurvePoint p;
            p.xi = sample.nodes[idx[i]].xi;
            p.w = spec[i].w[e];
            p.sheet = flag[i][e] ? -1 : label[i][e];
            p.sigma_min = spec[i].smin[e];
            p.cond = spec[i].cond[e];
            cloud.points.push_back(p);
        }
    return cloud;
}

CokernelFrame coker_frame(const HiggsSample& sample, const CurvePoint& point, double tol) {
    if (!(tol > 0.0)) throw ConfigError("coker_frame: tolerance must be positive");
    int ni = sample.find_node(point.xi);
    if (ni < 0) throw ConfigError("coker_frame: xi is not a node of the sample grid");
    const HiggsNode& node = sample.nodes[ni];
    const int k = sample.k;
    if (node.certified_k != k || node.phi.rows() != k)
        throw NumericalError("coker_frame: sample node is not certified");

    Eigen::MatrixXcd A = node.phi - point.w * Eigen::MatrixXcd::Identity(k, k);
    double scale = std::max(node.phi.norm(), 1.0);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    double smin = sv(k - 1);
    if (smin > tol * scale)
        throw NumericalError("coker_frame: point is not on the eigenvalue curve within tolerance");
    if (k >= 2 && sv(k - 2) < 2.0 * tol * scale)
        throw EigenvalueNotSimple("coker_frame: eigenvalue is not numerically simple");

    CokernelFrame fr;
    fr.xi = point.xi;
    fr.w = point.w;
    fr.u = svd.matrixU().col(k - 1);
    fix_phase(fr.u);
    fr.residual = (A.adjoint() * fr.u).norm();
    fr.second_singular = k >= 2 ? sv(k - 2) : kInf;
    return fr;
}

cplx lambda_holonomy(const HiggsSample& sample, const std::vector<CurvePoint>& loop,
                     const std::vector<Eigen::VectorXcd>& frames) {
    if (loop.size() < 2) throw ConfigError("lambda_holonomy: loop needs at least two points");
    if (frames.size() != loop.size())
        throw DimensionMismatch("lambda_holonomy: one frame per loop point required");
    const int k = sample.k;
    const std::size_t n = loop.size();

    std::vector<int> nid(n);
    for (std::size_t i = 0; i < n; ++i) {
        nid[i] = sample.find_node(loop[i].xi);
        if (nid[i] < 0) throw ConfigError("lambda_holonomy: loop point off the sample grid");
        const HiggsNode& nd = sample.nodes[nid[i]];
        if (nd.certified_k != k) throw NumericalError("lambda_holonomy: loop node is not certified");
        if (!sample.full_mode && (nd.b_x.rows() != k || nd.b_y.rows() != k))
            throw NumericalError("lambda_holonomy: loop node carries no connection sample");
        if (k >= 2 && min_eig_separation(node_spectrum(nd, k)) < 0.05)
            throw BranchTooClose("lambda_holonomy: loop point too close to an eigenvalue collision");
    }
    for (std::size_t i = 0; i < n; ++i)
        if (torus_distance(loop[i].xi, loop[(i + 1) % n].xi, sample.lat) > 0.25)
            throw FrameCorrelationLoss("lambda_holonomy: consecutive loop points too far apart");

    cplx prod{1.0};
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = (i + 1) % n;
        const HiggsNode& a = sample.nodes[nid[i]];
        const HiggsNode& b = sample.nodes[nid[j]];
        cplx d = shortest_rep(loop[j].xi - loop[i].xi, sample.lat);
        Eigen::MatrixXcd X;
        if (sample.full_mode) {
            // Full samples store connection data on grid edges: each node
            // holds the overlap log toward its east and north neighbors, read
            // here from whichever endpoint is lower along the traversal axis.
            // The arbitrary kernel-basis gauge of the individual solves then
            // cancels exactly around the closed loop.
            bool xmove = std::abs(d.real()) > 1e-9;
            bool ymove = std::abs(d.imag()) > 1e-9;
            if (xmove == ymove)
                throw ConfigError("lambda_holonomy: full-mode loops must follow grid axes");
            double along = xmove ? d.real() : d.imag();
            const HiggsNode& lo = along > 0 ? a : b;
            const Eigen::MatrixXcd& eb = xmove ? lo.b_x : lo.b_y;
            if (eb.rows() != k)
                throw NumericalError("lambda_holonomy: loop edge carries no connection sample");
            X = eb * along;
        } else {
            // Trapezoidal connection sample over the edge; keeping only the
            // anti-Hermitian part makes the transport exactly unitary, so the
            // reversed loop yields the conjugate phase.
            X = 0.5 * (a.b_x + b.b_x) * d.real() + 0.5 * (a.b_y + b.b_y) * d.imag();
        }
        X = 0.5 * (X - X.adjoint().eval());
        Eigen::VectorXcd ut = (-X).exp() * frames[i];
        cplx z = frames[j].dot(ut);
        if (std::abs(z) < 0.5)
            throw FrameCorrelationLoss("lambda_holonomy: consecutive cokernel lines decorrelate");
        prod *= z;
    }
    return prod / std::abs(prod);
}

cplx lambda_holonomy(const HiggsSample& sample, const std::vector<CurvePoint>& loop) {
    std::vector<Eigen::VectorXcd> frames;
    frames.reserve(loop.size());
    for (const auto& p : loop) frames.push_back(coker_frame(sample, p).u);
    return lambda_holonomy(sample, loop, frames);
}

PoleReport pole_analysis(const HiggsSample& sample, cplx puncture) {
    const Lattice& lat = sample.lat;
    if (torus_distance(puncture, sample.xi0, lat) > 1e-6 &&
        torus_distance(puncture, -sample.xi0, lat) > 1e-6)
        throw ConfigError("pole_analysis: puncture must be one of the two model punctures");

    struct Probe {
        double t;
        cplx d;
        int node;
        double nrm;
    };
    std::vector<Probe> pts;
    for (int i : certified_nodes(sample)) {
        const HiggsNode& nd = sample.nodes[i];
        cplx d = shortest_rep(nd.xi - puncture, lat);
        pts.push_back({std::abs(d), d, i, std::max(nd.phi.norm(), 1e-30)});
    }
    if (pts.size() < 3) throw ProbeTooShort("pole_analysis: not enough certified nodes");
    std::sort(pts.begin(), pts.end(), [](const Probe& a, const Probe& b) { return a.t < b.t; });

    cplx dir0 = pts.front().d / pts.front().t;
    double tmin = pts.front().t;
    double tcap = std::min(0.45, 6.0 * tmin);
    std::vector<Probe> cone;
    for (const auto& p : pts)
        if (p.t <= tcap && std::abs(std::arg(p.d / (dir0 * p.t))) <= 0.2) cone.push_back(p);
    if (cone.size() < 3 || cone.back().t < 2.0 * cone.front().t)
        throw ProbeTooShort("pole_analysis: radial probe toward the puncture is too short");

    // Growth exponent: log-log slopes over two geometric bands, extrapolated
    // linearly in the band centre to distance zero.  This removes the leading
    // bias of the regular part of Phi at finite probe distance.
    double tsplit = std::sqrt(cone.front().t * cone.back().t);
    std::vector<double> xa, ya, xb, yb;
    for (const auto& p : cone) {
        (p.t <= tsplit ? xa : xb).push_back(std::log(p.t));
        (p.t <= tsplit ? ya : yb).push_back(std::log(p.nrm));
    }
    PoleReport rep;
    if (xa.size() >= 2 && xb.size() >= 2) {
        double sa = lsq_slope(xa, ya);
        double sb = lsq_slope(xb, yb);
        double ga = std::exp(std::accumulate(xa.begin(), xa.end(), 0.0) / double(xa.size()));
        double gb = std::exp(std::accumulate(xb.begin(), xb.end(), 0.0) / double(xb.size()));
        rep.order = gb - ga > 1e-12 ? -(sa + (sa - sb) * ga / (gb - ga)) : -sa;
    } else {
        std::vector<double> x, y;
        for (const auto& p : cone) {
            x.push_back(std::log(p.t));
            y.push_back(std::log(p.nrm));
        }
        rep.order = -lsq_slope(x, y);
    }

    // Residue along the tightest ray: Richardson step from the two closest
    // usable distances cancels the linear contribution of the regular part.
    std::vector<Probe> ray;
    for (const auto& p : cone)
        if (std::abs(std::arg(p.d / (dir0 * p.t))) <= 0.1) ray.push_back(p);
    const HiggsNode& n1 = sample.nodes[ray.front().node];
    Eigen::MatrixXcd R1 = ray.front().d * n1.phi;
    Eigen::MatrixXcd R = R1;
    for (const auto& p : ray) {
        if (p.t >= 1.3 * ray.front().t) {
            Eigen::MatrixXcd R2 = p.d * sample.nodes[p.node].phi;
            R = R1 + (R1 - R2) * (ray.front().t / (p.t - ray.front().t));
            break;
        }
    }
    rep.residue = R;

    double scale = cone[cone.size() / 2].nrm;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(R, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    if (sv(0) < 1e-6 * scale) {
        rep.residue_rank = 0;
        rep.semisimple = true;
        rep.sigma_ratio = 0.0;
        return rep;
    }
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-2 * sv(0)) ++rank;
    rep.residue_rank = rank;
    rep.sigma_ratio = sv.size() >= 2 ? sv(1) / sv(0) : 0.0;
    Eigen::MatrixXcd Ur = svd.matrixU().leftCols(rank);
    Eigen::JacobiSVD<Eigen::MatrixXcd> rsvd(Ur.adjoint() * R * Ur);
    rep.semisimple = rsvd.singularValues()(rank - 1) > 1e-3 * sv(0);
    return rep;
}

std::vector<CurvePoint> higgs_branch_points(const HiggsSample& sample) {
    const int k = sample.k;
    auto idx = certified_nodes(sample);
    const int n = static_cast<int>(idx.size());
    if (n < 8) throw EmptyCloud("higgs_branch_points: sample has too few certified nodes");
    const Lattice& lat = sample.lat;

    std::vector<cplx> xi(n);
    std::vector<NodeSpectrum> spec(n);
    for (int i = 0; i < n; ++i) {
        xi[i] = sample.nodes[idx[i]].xi;
        spec[i] = node_spectrum(sample.nodes[idx[i]], k);
    }

    // Median nearest-neighbour spacing sets every length scale below.
    std::vector<double> nn(n, kInf);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = torus_distance(xi[i], xi[j], lat);
            nn[i] = std::min(nn[i], d);
            nn[j] = std::min(nn[j], d);
        }
    std::vector<double> nns = nn;
    std::nth_element(nns.begin(), nns.begin() + n / 2, nns.end());
    double h = nns[n / 2];

    std::vector<std::vector<int>> ring(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i && torus_distance(xi[i], xi[j], lat) <= 2.2 * h) ring[i].push_back(j);

    // Detection field: characteristic-polynomial discriminant, or the fitted
    // derivative dw/dxi for k = 1 where the cover over the torus is trivial.
    std::vector<cplx> g(n);
    auto fit_w = [&](int i) {
        int m = static_cast<int>(ring[i].size());
        Eigen::MatrixXcd A(m + 1, 3);
        Eigen::VectorXcd rhs(m + 1);
        A(0, 0) = 1.0;
        A(0, 1) = 0.0;
        A(0, 2) = 0.0;
        rhs(0) = spec[i].w[0];
        for (int r = 0; r < m; ++r) {
            cplx d = shortest_rep(xi[ring[i][r]] - xi[i], lat);
            A(r + 1, 0) = 1.0;
            A(r + 1, 1) = d;
            A(r + 1, 2) = std::conj(d);
            rhs(r + 1) = spec[ring[i][r]].w[0];
        }
        return Eigen::VectorXcd(A.colPivHouseholderQr().solve(rhs));
    };
    for (int i = 0; i < n; ++i) {
        if (k == 1) {
            if (ring[i].size() < 4) {
                g[i] = cplx{kInf};
                continue;
            }
            g[i] = fit_w(i)(1);
        } else {
            cplx disc{1.0};
            for (int a = 0; a + 1 < k; ++a)
                for (int b = a + 1; b < k; ++b) {
                    cplx dw = spec[i].w[a] - spec[i].w[b];
                    disc *= dw * dw;
                }
            g[i] = disc;
        }
    }

    std::vector<double> mag(n);
    for (int i = 0; i < n; ++i) mag[i] = std::abs(g[i]);
    std::vector<double> mags = mag;
    std::nth_element(mags.begin(), mags.begin() + n / 2, mags.end());
    double med = mags[n / 2];

    std::vector<CurvePoint> found;
    for (int i = 0; i < n; ++i) {
        if (!(mag[i] < 0.5 * med) || ring[i].size() < 5) continue;
        bool localmin = true;
        for (int j : ring[i])
            if (mag[j] < mag[i]) { localmin = false; break; }
        if (!localmin) continue;

        // Argument-principle certificate: the field winds once around the
        // angle-sorted neighbour ring exactly when a simple zero is enclosed.
        std::vector<int> srt = ring[i];
        std::sort(srt.begin(), srt.end(), [&](int a, int b) {
            return std::arg(shortest_rep(xi[a] - xi[i], lat)) <
                   std::arg(shortest_rep(xi[b] - xi[i], lat));
        });
        double wind = 0.0;
        for (std::size_t r = 0; r < srt.size(); ++r) {
            cplx ga = g[srt[r]];
            cplx gb = g[srt[(r + 1) % srt.size()]];
            if (std::abs(ga) == 0.0 || std::abs(gb) == 0.0) { wind = 0.0; break; }
            wind += std::arg(gb / ga);
        }
        if (wind < 0.8 * 2.0 * kPi) continue;

        // Complex-linear refinement of the zero from the ring values.
        int m = static_cast<int>(ring[i].size());
        Eigen::MatrixXcd A(m + 1, 2);
        Eigen::VectorXcd rhs(m + 1);
        A(0, 0) = 1.0;
        A(0, 1) = 0.0;
        rhs(0) = g[i];
        for (int r = 0; r < m; ++r) {
            A(r + 1, 0) = 1.0;
            A(r + 1, 1) = shortest_rep(xi[ring[i][r]] - xi[i], lat);
            rhs(r + 1) = g[ring[i][r]];
        }
        Eigen::VectorXcd c = A.colPivHouseholderQr().solve(rhs);
        cplx step{0.0};
        if (std::abs(c(1)) > 0.0) step = -c(0) / c(1);
        if (std::abs(step) > 2.0 * h) step = 0.0;

        CurvePoint p;
        p.xi = reduce(xi[i] + step, lat);
        p.sheet = -1;
        p.sigma_min = mag[i];
        p.cond = wind / (2.0 * kPi);
        if (k == 1) {
            Eigen::VectorXcd wf = fit_w(i);
            p.w = wf(0) + wf(1) * step + wf(2) * std::conj(step);
        } else {
            double best = kInf;
            cplx wa{}, wb{};
            for (int a = 0; a + 1 < k; ++a)
                for (int b = a + 1; b < k; ++b) {
                    double d = chordal(spec[i].w[a], spec[i].w[b]);
                    if (d < best) {
                        best = d;
                        wa = spec[i].w[a];
                        wb = spec[i].w[b];
                    }
                }
            p.w = 0.5 * (wa + wb);
        }
        found.push_back(p);
    }

    // Collapse duplicate detections from adjacent grid nodes.
    std::vector<CurvePoint> out;
    for (const auto& p : found) {
        bool merged = false;
        for (auto& q : out)
            if (torus_distance(p.xi, q.xi, lat) < 3.0 * h) {
                if (p.sigma_min < q.sigma_min) q = p;
                merged = true;
                break;
            }
        if (!merged) out.push_back(p);
    }
    std::sort(out.begin(), out.end(), [&](const CurvePoint& a, const CurvePoint& b) {
        auto [ax, ay] = lat.coords(a.xi);
        auto [bx, by] = lat.coords(b.xi);
        if (ax != bx) return ax < bx;
        return ay < by;
    });
    return out;
}

} // namespace nahmlab
