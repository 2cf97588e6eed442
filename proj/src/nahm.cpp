#include "nahmlab/nahm.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <tuple>

#include "nahmlab/parallel.hpp"

namespace nahmlab {

namespace {

// ---------------------------------------------------------------------------
// planar geometry for the cut system

int orient(cplx a, cplx b, cplx c) {
    double v = (b.real() - a.real()) * (c.imag() - a.imag()) -
               (b.imag() - a.imag()) * (c.real() - a.real());
    if (v > 1e-14) return 1;
    if (v < -1e-14) return -1;
    return 0;
}

bool seg_cross(cplx p1, cplx p2, cplx q1, cplx q2) {
    int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    return o1 != o2 && o3 != o4 && o1 != 0 && o3 != 0;
}

bool crosses_cuts(cplx a, cplx b, const std::vector<CutPolyline>& cuts) {
    for (const auto& poly : cuts)
        for (std::size_t s = 0; s + 1 < poly.size(); ++s)
            if (seg_cross(a, b, poly[s], poly[s + 1])) return true;
    return false;
}

double point_segment_distance(cplx p, cplx a, cplx b) {
    cplx d = b - a;
    double len2 = std::norm(d);
    if (len2 < 1e-30) return std::abs(p - a);
    double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

double distance_to_cuts(cplx p, const std::vector<CutPolyline>& cuts) {
    double best = 1e300;
    for (const auto& poly : cuts)
        for (std::size_t s = 0; s + 1 < poly.size(); ++s)
            best = std::min(best, point_segment_distance(p, poly[s], poly[s + 1]));
    return best;
}

// Integer lattice coordinates of the nearest lattice vector to d.
struct LatticeShift {
    long mm{}, nn{};
    double resid{};
};

LatticeShift snap_lattice(cplx d, const Lattice& lat) {
    LatticeShift out;
    out.nn = std::lround(d.imag() / lat.tau.imag());
    out.mm = std::lround((d - double(out.nn) * lat.tau).real());
    out.resid = std::abs(d - (cplx(double(out.mm), 0.0) + double(out.nn) * lat.tau));
    return out;
}

cplx shift_value(long mm, long nn, const Lattice& lat) {
    return cplx(double(mm), 0.0) + double(nn) * lat.tau;
}

// State of the mode ladder: a layer of the cover plus an integer twist offset.
struct StateKey {
    int l{};
    long mm{}, nn{};
    bool operator<(const StateKey& o) const {
        return std::tie(l, mm, nn) < std::tie(o.l, o.mm, o.nn);
    }
};

// Corner offsets of one plaquette and the matching Wirtinger weights: the sum
// of coeff * f(corner) / (4h) approximates dbar f at the cell center.
constexpr std::array<std::pair<int, int>, 4> kCornerOffset = {
    {{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
const std::array<cplx, 4> kCornerCoeff = {cplx(-1, -1), cplx(1, -1), cplx(-1, 1), cplx(1, 1)};

// Matrix logarithm of the unitary polar factor of a small near-unitary matrix.
Eigen::MatrixXcd unitary_log(const Eigen::MatrixXcd& O) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(O, Eigen::ComputeFullU | Eigen::ComputeFullV);
    double smin = svd.singularValues().tail(1)(0);
    if (smin < 0.5)
        throw FrameCorrelationLoss("frame overlap degenerate: smallest singular value " +
                                   std::to_string(smin));
    Eigen::MatrixXcd U = svd.matrixU() * svd.matrixV().adjoint();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(U);
    if (es.info() != Eigen::Success) throw ConvergenceFailure("unitary log eigensolve failed");
    Eigen::VectorXcd lg = es.eigenvalues();
    for (int i = 0; i < lg.size(); ++i) lg(i) = std::log(lg(i));
    return es.eigenvectors() * lg.asDiagonal() * es.eigenvectors().inverse();
}

Eigen::MatrixXcd antihermitian_part(const Eigen::MatrixXcd& A) {
    return 0.5 * (A - A.adjoint());
}

void fix_phase(Eigen::VectorXcd& v) {
    int idx = 0;
    double best = 0.0;
    for (int i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > best) { best = std::abs(v(i)); idx = i; }
    if (best > 0.0) v *= std::conj(v(idx)) / best;
}

// One full 4D solve: the operator together with its certified kernel frames.
struct FullSolve {
    FullOperator op;
    KernelFrames kf;
};

FullSolve solve_full(const NahmContext& ctx, cplx xi) {
    FullSolve fs;
    fs.op = ctx.assemble_4d(xi);
    const int k = ctx.cfg().model.k;
    const int n = fs.op.rows();
    const int q = std::max(k + 3, 4);
    if (n < 4 * q) throw DimensionMismatch("operator too small for kernel extraction");

    Eigen::SparseMatrix<cplx> A = (fs.op.op.adjoint() * fs.op.op).pruned();
    A.makeCompressed();
    double scale = A.diagonal().real().mean();
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<cplx>> ldlt;
    ldlt.compute(A);
    if (ldlt.info() != Eigen::Success) {
        Eigen::SparseMatrix<cplx> I(n, n);
        I.setIdentity();
        A = A + (1e-12 * scale) * I;
        ldlt.compute(A);
        if (ldlt.info() != Eigen::Success)
            throw ConvergenceFailure("normal operator factorization failed");
    }

    // Shift-inverted subspace iteration with a deterministic seed.
    std::mt19937 rng(ctx.cfg().seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd X(n, q);
    for (int j = 0; j < q; ++j)
        for (int i = 0; i < n; ++i) X(i, j) = cplx(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr0(X);
    X = qr0.householderQ() * Eigen::MatrixXcd::Identity(n, q);

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(q), prev = theta;
    bool settled = false;
    for (int it = 0; it < 120 && !settled; ++it) {
        Eigen::MatrixXcd Y = ldlt.solve(X);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Y);
        Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, q);
        Eigen::MatrixXcd S = Q.adjoint() * (A * Q);
        S = 0.5 * (S + S.adjoint().eval());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
        if (es.info() != Eigen::Success) throw ConvergenceFailure("subspace Rayleigh-Ritz failed");
        X = Q * es.eigenvectors();
        prev = theta;
        theta = es.eigenvalues();
        if (it > 20) {
            // The kernel values must lock in; the runner-up lives in a dense
            // cluster, so only loose stability is demanded there.
            double rel_kernel = 0.0;
            for (int i = 0; i < k; ++i)
                rel_kernel = std::max(rel_kernel,
                                      std::abs(theta(i) - prev(i)) / std::max(theta(i), 1e-300));
            double rel_next = std::abs(theta(k) - prev(k)) / std::max(theta(k), 1e-300);
            settled = rel_kernel < 1e-10 && rel_next < 1e-4;
        }
    }
    if (!settled) throw ConvergenceFailure("kernel subspace iteration did not settle");

    // Residual-backed enclosures keep the gap certificate conservative.
    std::vector<double> resid(std::size_t(k) + 1, 0.0);
    for (int i = 0; i <= k; ++i)
        resid[i] = (A * X.col(i) - theta(i) * X.col(i)).norm();
    if (resid[k] > 0.5 * theta(k))
        throw ConvergenceFailure("runner-up singular value not resolved");

    fs.kf.k = k;
    for (int i = 0; i <= k && i < q; ++i)
        fs.kf.singulars.push_back(std::sqrt(std::max(theta(i), 0.0)));
    double lo_next = std::sqrt(std::max(theta(k) - resid[k], 0.0));
    double hi_kernel = std::sqrt(std::max(theta(k - 1) + resid[k - 1], 0.0));
    fs.kf.gap_ratio = lo_next / std::max(hi_kernel, 1e-300);
    if (!(fs.kf.gap_ratio > ctx.cfg().gap_factor))
        throw DimensionMismatch("kernel dimension not certified: gap ratio " +
                                std::to_string(fs.kf.gap_ratio));
    for (int i = 0; i < k; ++i) {
        Frame4D f;
        f.coeffs = X.col(i).normalized();
        fix_phase(f.coeffs);
        fs.kf.frames.push_back(std::move(f));
    }
    return fs;
}

// Overlap matrix between kernel frames of two solves on the shared grid,
// summed over grid points and matched mode states.
Eigen::MatrixXcd full_overlap(const FullSolve& a, const FullSolve& b) {
    if (a.op.n_nodes != b.op.n_nodes || a.op.n_cells != b.op.n_cells)
        throw DimensionMismatch("frame overlap requires a shared grid");
    const int k = a.kf.k;
    const int nsa = a.op.n_states, nsb = b.op.n_states;
    std::vector<int> match(nsa, -1);
    for (int s = 0; s < nsa; ++s)
        for (int t = 0; t < nsb; ++t)
            if (a.op.states[s].first == b.op.states[t].first &&
                std::abs(a.op.states[s].second - b.op.states[t].second) < 1e-9)
                match[s] = t;
    if (std::all_of(match.begin(), match.end(), [](int v) { return v < 0; }))
        throw FrameCorrelationLoss("no shared mode states between frames");

    Eigen::MatrixXcd O = Eigen::MatrixXcd::Zero(k, k);
    const int n_pts = a.op.n_nodes + a.op.n_cells;
    for (int s = 0; s < nsa; ++s) {
        int t = match[s];
        if (t < 0) continue;
        for (int p = 0; p < n_pts; ++p) {
            int ia = p * nsa + s, ib = p * nsb + t;
            for (int x = 0; x < k; ++x)
                for (int y = 0; y < k; ++y)
                    O(x, y) += std::conj(a.kf.frames[x].coeffs(ia)) * b.kf.frames[y].coeffs(ib);
        }
    }
    return O;
}

Eigen::MatrixXcd full_phi(const FullSolve& fs) {
    const int k = fs.kf.k;
    Eigen::MatrixXcd phi(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            cplx acc = 0.0;
            const auto& va = fs.kf.frames[a].coeffs;
            const auto& vb = fs.kf.frames[b].coeffs;
            for (int i = 0; i < va.size(); ++i)
                acc += std::conj(va(i)) * fs.op.w_of_col[i] * vb(i);
            phi(a, b) = acc;
        }
    return phi;
}

// Closed-form overlap of two normalized planar Gaussians carrying fixed fiber
// modes; the mode factor is 1 exactly when the resonant branch values agree.
Eigen::MatrixXcd localized_overlap(const KernelFrames& a, const KernelFrames& b,
                                   const Lattice& lat) {
    const int k = a.k;
    Eigen::MatrixXcd O = Eigen::MatrixXcd::Zero(k, k);
    for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y) {
            if (torus_distance(a.frames[x].eta_res, b.frames[y].eta_res, lat) > 0.2) continue;
            double s1 = a.frames[x].width, s2 = b.frames[y].width;
            double ss = s1 * s1 + s2 * s2;
            O(x, y) = (2.0 * s1 * s2 / ss) *
                      std::exp(-std::norm(a.frames[x].center - b.frames[y].center) / (2.0 * ss));
        }
    return O;
}

} // namespace

// ---------------------------------------------------------------------------
// default cut system

std::vector<CutPolyline> default_cuts(const CurveModel& model, double R) {
    CurveOps ops(model);
    auto bps = ops.branch_points();
    std::vector<cplx> ws;
    ws.reserve(bps.size());
    double far = 0.0;
    for (const auto& bp : bps) {
        ws.push_back(bp.w);
        far = std::max(far, std::abs(bp.w));
    }
    if (R < far + 1.0)
        throw ConfigError("truncation radius must clear the branch points by at least 1");

    std::vector<bool> used(ws.size(), false);
    std::vector<CutPolyline> cuts;
    for (std::size_t rounds = 0; rounds < ws.size() / 2; ++rounds) {
        // Globally closest unpaired pair; deterministic tie-break by index.
        std::size_t bi = 0, bj = 0;
        double bd = 1e300;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            if (used[i]) continue;
            for (std::size_t j = i + 1; j < ws.size(); ++j) {
                if (used[j]) continue;
                double d = std::abs(ws[i] - ws[j]);
                if (d < bd) { bd = d; bi = i; bj = j; }
            }
        }
        used[bi] = used[bj] = true;
        cplx outer = ws[bi], inner = ws[bj];
        if (std::abs(inner) > std::abs(outer)) std::swap(outer, inner);
        cplx dir = outer;
        if (std::abs(dir) < 1e-9) dir = (std::abs(inner) > 1e-9) ? inner : cplx(1.0, 0.0);
        // Twist the anchor ray off any symmetry axis of the branch set so the
        // outward segment cannot ride along a grid line.
        cplx anchor = dir / std::abs(dir) * std::polar(R + 0.5, 0.04);
        cuts.push_back({anchor, outer, inner});
    }
    return cuts;
}

// ---------------------------------------------------------------------------

NahmContext::NahmContext(const TransformConfig& cfg)
    : cfg_(cfg), curve_(std::make_shared<CurveOps>(cfg.model)) {
    validate_model(cfg_.model);
    if (cfg_.M < 4) throw ConfigError("grid size M must be at least 4");
    if (!(cfg_.R > 0.0)) throw ConfigError("truncation radius must be positive");
    if (cfg_.gap_factor <= 1.0) throw ConfigError("gap factor must exceed 1");
    if (cfg_.conjugate_control && std::abs(cfg_.model.lat.tau.real()) > 1e-12)
        throw ConfigError("conjugate control requires a rectangular lattice");
    if (!(cfg_.sheet_noise >= 0.0)) throw ConfigError("sheet noise amplitude must be nonnegative");
    std::mt19937 rng(cfg_.seed ^ 0x6e6f6973u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& c : noise_c_) c = cplx(gauss(rng), gauss(rng));
}

// Smooth anti-holomorphic polynomial with seeded coefficients; the degree-0
// term is omitted so a constant (harmlessly holomorphic) shift never occurs.
cplx NahmContext::sheet_noise_at(cplx w) const {
    if (cfg_.sheet_noise == 0.0) return 0.0;
    cplx u = std::conj(w) / cfg_.R;
    return cfg_.sheet_noise * (noise_c_[0] * u + noise_c_[1] * u * u + noise_c_[2] * u * u * u);
}

const CoverGrid& NahmContext::grid() const {
    std::lock_guard<std::mutex> lock(grid_mu_);
    if (grid_) return *grid_;

    const Lattice& lat = cfg_.model.lat;
    auto gp = std::make_shared<CoverGrid>();
    CoverGrid& g = *gp;
    g.M = cfg_.M;
    g.R = cfg_.R;
    g.h = 2.0 * cfg_.R / cfg_.M;

    std::vector<cplx> branch_ws;
    for (const auto& bp : curve_->branch_points()) branch_ws.push_back(bp.w);

    g.cuts = cfg_.cuts.empty() ? default_cuts(cfg_.model, cfg_.R) : cfg_.cuts;
    for (const auto& poly : g.cuts) {
        if (poly.size() < 2) throw CutConfigInvalid("cut polyline needs at least two vertices");
        if (std::abs(poly.front()) < cfg_.R)
            throw CutConfigInvalid("cut polyline must start outside the truncation disc");
    }
    for (std::size_t i = 0; i < g.cuts.size(); ++i)
        for (std::size_t j = i + 1; j < g.cuts.size(); ++j)
            for (std::size_t s = 0; s + 1 < g.cuts[i].size(); ++s)
                for (std::size_t t = 0; t + 1 < g.cuts[j].size(); ++t)
                    if (seg_cross(g.cuts[i][s], g.cuts[i][s + 1], g.cuts[j][t], g.cuts[j][t + 1]))
                        throw CutConfigInvalid("cut polylines intersect each other");

    // Nodes on the (M+1)^2 lattice, then cell centers, all inside the disc.
    const double h = g.h, R = g.R;
    const int M = g.M;
    std::map<std::pair<int, int>, int> node_id, cell_id;
    for (int i = 0; i <= M; ++i)
        for (int j = 0; j <= M; ++j) {
            cplx w(-R + i * h, -R + j * h);
            if (std::abs(w) < R - 1e-9) {
                node_id[{i, j}] = int(g.pts.size());
                g.pts.push_back(w);
            }
        }
    g.n_nodes = int(g.pts.size());
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
            cplx w(-R + (i + 0.5) * h, -R + (j + 0.5) * h);
            if (std::abs(w) < R - 1e-9) {
                cell_id[{i, j}] = int(g.pts.size());
                g.pts.push_back(w);
            }
        }
    g.n_cells = int(g.pts.size()) - g.n_nodes;
    const int npts = int(g.pts.size());

    for (const cplx& p : g.pts)
        if (distance_to_cuts(p, g.cuts) < 1e-9)
            throw CutConfigInvalid("cut polyline passes through a grid point");

    // Raw two-valued fiber abscissae; continuation fixes the representatives.
    std::vector<cplx> eta_raw(npts);
    parallel_for(std::size_t(npts), [&](std::size_t p) {
        eta_raw[p] = curve_->sheets_over_w(g.pts[p]).first;
    });

    // Adjacency: axis node-node edges plus node to cell-center diagonals.
    std::vector<std::vector<int>> nbr(npts);
    auto connect = [&](int a, int b) {
        nbr[a].push_back(b);
        nbr[b].push_back(a);
    };
    for (const auto& [ij, p] : node_id) {
        auto [i, j] = ij;
        if (auto it = node_id.find({i + 1, j}); it != node_id.end()) connect(p, it->second);
        if (auto it = node_id.find({i, j + 1}); it != node_id.end()) connect(p, it->second);
        for (auto [ci, cj] : {std::pair{i, j}, {i - 1, j}, {i, j - 1}, {i - 1, j - 1}})
            if (auto it = cell_id.find({ci, cj}); it != cell_id.end()) connect(p, it->second);
    }

    // Maximum-margin spanning continuation: prefer edges far from the branch
    // points and attach cut-crossing edges only when nothing else remains.
    auto edge_weight = [&](int p, int q) -> double {
        if (crosses_cuts(g.pts[p], g.pts[q], g.cuts)) return -1e6;
        if (branch_ws.empty()) return 1e9;
        cplx mid = 0.5 * (g.pts[p] + g.pts[q]);
        double d = 1e300;
        for (cplx b : branch_ws) d = std::min(d, std::abs(mid - b));
        return d;
    };

    g.eta.assign(npts, {cplx{}, cplx{}});
    std::vector<bool> seen(npts, false);
    int base = 0;
    for (int p = 1; p < npts; ++p)
        if (g.pts[p].real() > g.pts[base].real()) base = p;
    g.eta[base] = {eta_raw[base], -eta_raw[base]};
    seen[base] = true;

    using HeapEdge = std::tuple<double, int, int>;  // (weight, from, to)
    std::priority_queue<HeapEdge> heap;
    for (int q : nbr[base]) heap.push({edge_weight(base, q), base, q});
    g.margin = 1e300;
    auto window = lattice_window(lat, 1);
    int visited = 1;
    while (!heap.empty()) {
        auto [wgt, p, q] = heap.top();
        heap.pop();
        (void)wgt;
        if (seen[q]) continue;
        for (int l = 0; l < 2; ++l) {
            cplx target = g.eta[p][l];
            double d1 = 1e300, d2 = 1e300;
            cplx best{};
            for (double sgn : {1.0, -1.0}) {
                cplx basev = sgn * eta_raw[q];
                cplx center = nearest_lattice_vector(target - basev, lat);
                for (cplx win : window) {
                    cplx cand = basev + center + win;
                    double d = std::abs(cand - target);
                    if (d < d1) {
                        d2 = d1;
                        d1 = d;
                        best = cand;
                    } else if (d < d2) {
                        d2 = d;
                    }
                }
            }
            g.eta[q][l] = best;
            g.margin = std::min(g.margin, d2 - d1);
        }
        seen[q] = true;
        ++visited;
        for (int r : nbr[q])
            if (!seen[r]) heap.push({edge_weight(q, r), q, r});
    }
    if (visited != npts) throw NumericalError("cover continuation did not reach every grid point");
    if (!(g.margin > 1e-6))
        throw NumericalError("branched continuation ambiguous: margin " + std::to_string(g.margin));

    if (cfg_.conjugate_control)
        for (auto& pair : g.eta) pair = {std::conj(pair[0]), std::conj(pair[1])};

    // Stencil transition labels: value matching across every cell-corner edge.
    std::set<std::array<long, 3>> trans;
    double stencil_margin = 1e300;
    cplx worst_cell{};
    for (const auto& [ij, pc] : cell_id) {
        auto [i, j] = ij;
        CoverGrid::CellStencil st;
        st.cell_pt = pc;
        for (int c = 0; c < 4; ++c) {
            auto it = node_id.find({i + kCornerOffset[c].first, j + kCornerOffset[c].second});
            st.node_pt[c] = (it == node_id.end()) ? -1 : it->second;
            if (st.node_pt[c] < 0) continue;
            int pn = st.node_pt[c];
            for (int l = 0; l < 2; ++l) {
                double best = 1e300, second = 1e300;
                int bl2 = 0;
                LatticeShift bs{};
                for (int l2 = 0; l2 < 2; ++l2) {
                    LatticeShift sh = snap_lattice(g.eta[pn][l2] - g.eta[pc][l], lat);
                    if (sh.resid < best) {
                        second = best;
                        best = sh.resid;
                        bl2 = l2;
                        bs = sh;
                    } else if (sh.resid < second) {
                        second = sh.resid;
                    }
                }
                // An edge passing next to a branch point has genuinely merging
                // layers; its label is best-effort and exempt from the guard.
                double bdist = 1e300;
                for (cplx bw : branch_ws)
                    bdist = std::min(bdist, point_segment_distance(bw, g.pts[pc], g.pts[pn]));
                if (bdist > h && second - best < stencil_margin) {
                    stencil_margin = second - best;
                    worst_cell = g.pts[pc];
                }
                st.rel[c].l2[l] = bl2;
                st.rel[c].mm[l] = bs.mm;
                st.rel[c].nn[l] = bs.nn;
                if (bl2 != l || bs.mm != 0 || bs.nn != 0)
                    trans.insert({long(bl2 - l), bs.mm, bs.nn});
            }
        }
        g.cells.push_back(st);
    }
    g.margin = std::min(g.margin, stencil_margin);
    if (!(stencil_margin > 1e-6))
        throw NumericalError("stencil transition labels ambiguous: margin " +
                             std::to_string(stencil_margin) + " near w = (" +
                             std::to_string(worst_cell.real()) + ", " +
                             std::to_string(worst_cell.imag()) + ")");
    g.transitions.assign(trans.begin(), trans.end());

    // The perturbation goes in after continuation and labeling, so the cover
    // structure stays exact while holomorphy of the values is broken.
    if (cfg_.sheet_noise != 0.0)
        for (int p = 0; p < npts; ++p) {
            cplx nz = sheet_noise_at(g.pts[p]);
            g.eta[p][0] += nz;
            g.eta[p][1] += nz;
        }

    grid_ = gp;
    return *grid_;
}

// ---------------------------------------------------------------------------
// 4D operator assembly over the orbit of coupled mode states

FullOperator NahmContext::assemble_4d(cplx xi) const {
    const CoverGrid& g = grid();
    const Lattice& lat = cfg_.model.lat;
    const double half_c = 0.5 * pairing_constant(lat);

    // One resonant seed state per sheet fiber.  Under the conjugate control the
    // sheet field is conjugated, which moves the resonances to conj(xi).
    cplx seed_xi = cfg_.conjugate_control ? std::conj(xi) : xi;
    std::vector<cplx> sheet_ws = curve_->sheets_over_xi(seed_xi);
    std::vector<StateKey> states;
    std::map<StateKey, int> state_of;
    auto add_state = [&](const StateKey& key) {
        if (state_of.emplace(key, int(states.size())).second) states.push_back(key);
    };
    for (cplx wa : sheet_ws) {
        if (std::abs(wa) > g.R - 2.0 * g.h)
            throw NumericalError("sheet fiber outside the truncation disc");
        int pa = 0;
        double bd = 1e300;
        for (int p = 0; p < int(g.pts.size()); ++p) {
            double d = std::abs(g.pts[p] - wa);
            if (d < bd) { bd = d; pa = p; }
        }
        StateKey seed{};
        double best = 1e300;
        for (int l = 0; l < 2; ++l) {
            LatticeShift s = snap_lattice(xi + g.eta[pa][l], lat);
            if (s.resid < best) {
                best = s.resid;
                seed = {l, s.mm, s.nn};
            }
        }
        add_state(seed);
    }
    // Breadth-first closure over the transition classes.  Couplings that leave
    // the kept orbit are dropped, so every extra ring pushes that truncation
    // one exponential tail further from the kernel mass.
    std::size_t ring_begin = 0;
    for (int d = 0; d < std::max(1, cfg_.orbit_depth); ++d) {
        std::size_t ring_end = states.size();
        for (std::size_t i = ring_begin; i < ring_end; ++i) {
            StateKey s = states[i];
            for (const auto& t : g.transitions)
                add_state({int((s.l + t[0] + 2) % 2), s.mm + t[1], s.nn + t[2]});
        }
        ring_begin = ring_end;
    }

    const int ns = int(states.size());
    const int nv = g.n_nodes, nc = g.n_cells;
    FullOperator out;
    out.n_nodes = nv;
    out.n_cells = nc;
    out.n_states = ns;
    for (const StateKey& s : states) out.states.push_back({s.l, shift_value(s.mm, s.nn, lat)});

    // kappa(p, s) = -(c/2) (xi + eta(p, layer) - lambda).
    auto kappa = [&](int p, const StateKey& s) {
        return -half_c * (xi + g.eta[p][s.l] - shift_value(s.mm, s.nn, lat));
    };

    const int n_n = nv * ns, n_c = nc * ns;
    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(std::size_t(n_n) + std::size_t(n_c) * 9);
    for (int p = 0; p < nv; ++p)
        for (int s = 0; s < ns; ++s)
            trip.emplace_back(p * ns + s, p * ns + s, std::conj(kappa(p, states[s])));
    int cid = 0;
    for (const auto& st : g.cells) {
        for (int s = 0; s < ns; ++s)
            trip.emplace_back(n_n + cid * ns + s, n_n + cid * ns + s,
                              -kappa(st.cell_pt, states[s]));
        for (int c = 0; c < 4; ++c) {
            if (st.node_pt[c] < 0) continue;
            cplx val = kCornerCoeff[c] / (4.0 * g.h);
            for (int s = 0; s < ns; ++s) {
                const StateKey& sk = states[s];
                StateKey tgt{st.rel[c].l2[sk.l], sk.mm + st.rel[c].mm[sk.l],
                             sk.nn + st.rel[c].nn[sk.l]};
                auto it = state_of.find(tgt);
                if (it == state_of.end()) continue;  // outside the kept orbit
                int row = n_n + cid * ns + s;
                int col = st.node_pt[c] * ns + it->second;
                trip.emplace_back(row, col, val);
                trip.emplace_back(col, row, std::conj(val));
            }
        }
        ++cid;
    }
    out.op.resize(n_n + n_c, n_n + n_c);
    out.op.setFromTriplets(trip.begin(), trip.end());
    out.op.makeCompressed();

    out.w_of_col.reserve(n_n + n_c);
    for (int p = 0; p < nv; ++p)
        for (int s = 0; s < ns; ++s) out.w_of_col.push_back(g.pts[p]);
    for (const auto& st : g.cells)
        for (int s = 0; s < ns; ++s) out.w_of_col.push_back(g.pts[st.cell_pt]);
    out.w_of_row = out.w_of_col;
    return out;
}

// ---------------------------------------------------------------------------
// kernel frames

KernelFrames NahmContext::full_frames(cplx xi) const { return solve_full(*this, xi).kf; }

KernelFrames NahmContext::localized_frames(cplx xi) const {
    const Lattice& lat = cfg_.model.lat;
    const int k = cfg_.model.k;
    const double half_c = 0.5 * pairing_constant(lat);
    std::vector<cplx> ws = curve_->sheets_over_xi(xi);

    KernelFrames kf;
    kf.k = k;
    std::vector<double> on_curve, runner_up;
    for (cplx wa : ws) {
        auto pr = curve_->sheets_over_w(wa);
        double dp = lattice_distance(xi + pr.first, lat);
        double dm = lattice_distance(xi + pr.second, lat);
        cplx eta_res = (dp <= dm) ? pr.first : pr.second;

        // Flat fiber spectrum at the sheet: resonant mode plus the runner-up
        // over both summands and neighboring lattice offsets.
        double d2 = std::max(dp, dm);
        for (cplx branch : {pr.first, pr.second}) {
            cplx resid = xi + branch - nearest_lattice_vector(xi + branch, lat);
            for (cplx v : lattice_window(lat, 1))
                if (std::abs(v) > 1e-12) d2 = std::min(d2, std::abs(resid - v));
        }
        on_curve.push_back(kappa_scale(lat) * std::min(dp, dm));
        runner_up.push_back(kappa_scale(lat) * d2);

        const double e = 1e-5;
        cplx etap = continued_eta(wa + e, eta_res);
        cplx etam = continued_eta(wa - e, eta_res);
        double alpha = half_c * std::abs((etap - etam) / (2.0 * e));

        Frame4D f;
        f.center = wa;
        f.width = cfg_.profile_width > 0.0 ? cfg_.profile_width
                                           : 1.0 / std::sqrt(std::max(alpha, 1e-8));
        f.eta_res = reduce(eta_res, lat);
        kf.frames.push_back(std::move(f));
    }
    std::sort(on_curve.begin(), on_curve.end());
    kf.singulars = on_curve;
    kf.singulars.push_back(*std::min_element(runner_up.begin(), runner_up.end()));
    kf.gap_ratio = kf.singulars[k] / std::max(kf.singulars[k - 1], 1e-300);
    if (!(kf.gap_ratio > cfg_.gap_factor))
        throw DimensionMismatch("kernel dimension not certified: gap ratio " +
                                std::to_string(kf.gap_ratio));
    return kf;
}

KernelFrames NahmContext::kernel_frames(cplx xi) const {
    return cfg_.mode == TransformConfig::Mode::FULL ? full_frames(xi) : localized_frames(xi);
}

// ---------------------------------------------------------------------------
// transformed Higgs field and connection data

Eigen::MatrixXcd NahmContext::higgs_matrix(cplx xi) const {
    const int k = cfg_.model.k;
    if (cfg_.mode == TransformConfig::Mode::LOCALIZED) {
        KernelFrames kf = localized_frames(xi);
        Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(k, k);
        for (int i = 0; i < k; ++i) phi(i, i) = kf.frames[i].center;
        return phi;
    }
    return full_phi(solve_full(*this, xi));
}

Eigen::MatrixXcd NahmContext::berry_connection(cplx xi, cplx direction, double step) const {
    if (std::abs(direction) < 1e-15) throw ConfigError("berry direction must be nonzero");
    cplx dir = direction / std::abs(direction);
    double h = step > 0.0 ? step : 0.02;

    Eigen::MatrixXcd O;
    if (cfg_.mode == TransformConfig::Mode::LOCALIZED) {
        O = localized_overlap(localized_frames(xi), localized_frames(xi + h * dir),
                              cfg_.model.lat);
    } else {
        FullSolve a = solve_full(*this, xi);
        FullSolve b = solve_full(*this, xi + h * dir);
        O = full_overlap(a, b);
    }
    return antihermitian_part(unitary_log(O) / h);
}

double NahmContext::hitchin_residual(const XiPatch& patch) const {
    const double s = patch.step;
    if (!(s > 0.0)) throw ConfigError("patch step must be positive");
    std::array<cplx, 4> zs = {patch.corner, patch.corner + s, patch.corner + s + cplx(0, s),
                              patch.corner + cplx(0, s)};
    Eigen::MatrixXcd hol, phi;
    if (cfg_.mode == TransformConfig::Mode::LOCALIZED) {
        std::array<KernelFrames, 4> kf;
        for (int i = 0; i < 4; ++i) kf[i] = localized_frames(zs[i]);
        hol = localized_overlap(kf[0], kf[1], cfg_.model.lat);
        for (int i = 1; i < 4; ++i)
            hol = hol * localized_overlap(kf[i], kf[(i + 1) % 4], cfg_.model.lat);
        phi = higgs_matrix(zs[0]);
    } else {
        std::array<FullSolve, 4> fs;
        for (int i = 0; i < 4; ++i) fs[i] = solve_full(*this, zs[i]);
        hol = full_overlap(fs[0], fs[1]);
        for (int i = 1; i < 4; ++i) hol = hol * full_overlap(fs[i], fs[(i + 1) % 4]);
        phi = full_phi(fs[0]);
    }
    double area = s * s;
    Eigen::MatrixXcd F = antihermitian_part(unitary_log(hol) / area);
    Eigen::MatrixXcd comm = phi * phi.adjoint() - phi.adjoint() * phi;
    return (F + comm).norm();
}

// ---------------------------------------------------------------------------
// holomorphy diagnostics on the sheet field

cplx NahmContext::continued_eta(cplx w, cplx near_value) const {
    const Lattice& lat = cfg_.model.lat;
    auto pr = curve_->sheets_over_w(w);
    double d1 = 1e300, d2 = 1e300;
    cplx best{};
    for (cplx basev : {pr.first, pr.second}) {
        cplx center = nearest_lattice_vector(near_value - basev, lat);
        for (cplx win : lattice_window(lat, 1)) {
            cplx cand = basev + center + win;
            double d = std::abs(cand - near_value);
            if (d < d1) {
                d2 = d1;
                d1 = d;
                best = cand;
            } else if (d < d2) {
                d2 = d;
            }
        }
    }
    if (!(d2 - d1 > 1e-4))
        throw BranchTooClose("sheet continuation ambiguous near w = " +
                             std::to_string(w.real()) + "+" + std::to_string(w.imag()) + "i");
    // Polish to machine precision; the ring derivative stencils feed on
    // differences far below the generic root tolerance.
    const Elliptic& ell = curve_->ell();
    for (int it = 0; it < 12; ++it) {
        cplx P = ell.wp(best);
        cplx G = curve_->A(w) + P * curve_->B(w);
        double rscale = std::abs(curve_->A(w)) + std::abs(P * curve_->B(w)) + 1.0;
        if (std::abs(G) < 1e-14 * rscale) break;
        cplx dG = ell.wp_prime(best) * curve_->B(w);
        if (std::abs(dG) < 1e-300) break;
        cplx stepv = G / dG;
        if (std::abs(stepv) > 0.1) stepv *= 0.1 / std::abs(stepv);
        best -= stepv;
    }
    return best + sheet_noise_at(w);
}

double NahmContext::asd_defect(const WRegion& region) const {
    if (!(region.radius > 0.0) || region.samples < 2)
        throw ConfigError("defect region needs positive radius and at least 2 samples");
    const double ring = std::min(0.05, 0.2 * region.radius);

    for (const auto& bp : curve_->branch_points())
        if (std::abs(region.center - bp.w) < region.radius + ring + 0.1)
            throw BranchTooClose("defect region touches a branch point");

    cplx base = curve_->sheets_over_w(region.center).first;
    const int S = region.samples;
    const double span = region.radius / std::sqrt(2.0);
    const bool cc = cfg_.conjugate_control;

    auto value_at = [&](cplx w) {
        cplx v = continued_eta(w, base);
        return cc ? std::conj(v) : v;
    };

    double max_dbar = 0.0, max_d = 0.0;
    for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j) {
            cplx off(-span + 2.0 * span * i / (S - 1), -span + 2.0 * span * j / (S - 1));
            cplx p = region.center + off;
            cplx d_r{}, db_r{}, d_h{}, db_h{};
            for (int pass = 0; pass < 2; ++pass) {
                double r = pass == 0 ? ring : 0.5 * ring;
                cplx acc_d{}, acc_db{};
                const int n_ang = 16;
                for (int t = 0; t < n_ang; ++t) {
                    double th = 2.0 * kPi * t / n_ang;
                    cplx e = std::polar(1.0, th);
                    cplx f = value_at(p + r * e);
                    acc_d += f * std::conj(e);
                    acc_db += f * e;
                }
                acc_d /= double(n_ang) * r;
                acc_db /= double(n_ang) * r;
                if (pass == 0) {
                    d_r = acc_d;
                    db_r = acc_db;
                } else {
                    d_h = acc_d;
                    db_h = acc_db;
                }
            }
            max_d = std::max(max_d, std::abs((4.0 * d_h - d_r) / 3.0));
            max_dbar = std::max(max_dbar, std::abs((4.0 * db_h - db_r) / 3.0));
        }
    return max_dbar / std::max(1.0, max_d);
}

// ---------------------------------------------------------------------------
// energy by sheet counting over the base torus

std::vector<double> NahmContext::energy(const std::vector<double>& R_list) const {
    if (R_list.empty()) throw ConfigError("energy needs at least one radius");
    for (std::size_t i = 0; i < R_list.size(); ++i) {
        if (!(R_list[i] > 0.0)) throw ConfigError("energy radii must be positive");
        if (i > 0 && !(R_list[i] > R_list[i - 1]))
            throw ConfigError("energy radii must be strictly increasing");
    }
    const Lattice& lat = cfg_.model.lat;

    auto radii_at = [&](double x, double y) {
        std::vector<double> out;
        try {
            for (cplx w : curve_->sheets_over_xi(lat.from_coords(x, y)))
                out.push_back(std::abs(w));
        } catch (const NearPuncture&) {
            // All sheets escape past any finite radius here.
        }
        return out;
    };

    // A constant sheet configuration carries no curvature.
    {
        auto s0 = curve_->sheets_over_xi(lat.from_coords(0.31, 0.17));
        auto s1 = curve_->sheets_over_xi(lat.from_coords(0.63, 0.49));
        double dmax = 0.0;
        for (std::size_t i = 0; i < s0.size(); ++i)
            dmax = std::max(dmax, std::abs(s0[i] - s1[i]));
        if (dmax < 1e-10) return std::vector<double>(R_list.size(), 0.0);
    }

    const int G = 96;
    std::vector<std::vector<double>> mags(std::size_t(G) * G);
    parallel_for(mags.size(), [&](std::size_t idx) {
        int i = int(idx) / G, j = int(idx) % G;
        mags[idx] = radii_at((i + 0.5) / G, (j + 0.5) / G);
    });

    auto count_in = [](const std::vector<double>& m, double R) {
        return int(std::count_if(m.begin(), m.end(), [R](double v) { return v <= R; }));
    };

    std::vector<double> out;
    for (double R : R_list) {
        std::vector<double> contrib(mags.size());
        parallel_for(mags.size(), [&](std::size_t idx) {
            int i = int(idx) / G, j = int(idx) % G;
            int c = count_in(mags[idx], R);
            bool boundary = false;
            for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
                int ii = (i + di + G) % G, jj = (j + dj + G) % G;
                if (count_in(mags[std::size_t(ii) * G + jj], R) != c) boundary = true;
            }
            if (!boundary) {
                contrib[idx] = c;
                return;
            }
            // Refine cells straddling the |w| = R level set.
            const int sub = 6;
            double acc = 0.0;
            for (int a = 0; a < sub; ++a)
                for (int b = 0; b < sub; ++b)
                    acc += count_in(radii_at((i + (a + 0.5) / sub) / G, (j + (b + 0.5) / sub) / G), R);
            contrib[idx] = acc / (sub * sub);
        });
        double mean = 0.0;
        for (double v : contrib) mean += v;
        mean /= double(contrib.size());
        out.push_back(8.0 * kPi * kPi * mean);
    }
    return out;
}

// ---------------------------------------------------------------------------
// vanishing bound proxy for the function block

double NahmContext::vanishing_proxy(cplx xi) const {
    const Lattice& lat = cfg_.model.lat;
    if (torus_distance(xi, cfg_.model.xi0, lat) < cfg_.delta ||
        torus_distance(xi, -cfg_.model.xi0, lat) < cfg_.delta)
        throw NearPuncture("vanishing proxy undefined inside the puncture disks");

    const CoverGrid& g = grid();
    const double half_c = 0.5 * pairing_constant(lat);

    // Best resonant seed over sheets and layers.
    cplx seed_xi = cfg_.conjugate_control ? std::conj(xi) : xi;
    StateKey seed{};
    double best = 1e300;
    for (cplx wa : curve_->sheets_over_xi(seed_xi)) {
        int pa = 0;
        double bd = 1e300;
        for (int p = 0; p < int(g.pts.size()); ++p) {
            double d = std::abs(g.pts[p] - wa);
            if (d < bd) { bd = d; pa = p; }
        }
        for (int l = 0; l < 2; ++l) {
            LatticeShift s = snap_lattice(xi + g.eta[pa][l], lat);
            if (s.resid < best) {
                best = s.resid;
                seed = {l, s.mm, s.nn};
            }
        }
    }
    cplx lam = shift_value(seed.mm, seed.nn, lat);

    const int nv = g.n_nodes;
    std::vector<Eigen::Triplet<cplx>> trip;
    for (int p = 0; p < nv; ++p) {
        cplx kap = -half_c * (xi + g.eta[p][seed.l] - lam);
        trip.emplace_back(p, p, cplx(std::norm(kap), 0.0));
    }
    // The derivative block keeps only couplings that stay in the seed state.
    for (const auto& st : g.cells) {
        std::vector<std::pair<int, cplx>> row;
        for (int c = 0; c < 4; ++c) {
            if (st.node_pt[c] < 0) continue;
            if (st.rel[c].l2[seed.l] != seed.l || st.rel[c].mm[seed.l] != 0 ||
                st.rel[c].nn[seed.l] != 0)
                continue;
            row.push_back({st.node_pt[c], kCornerCoeff[c] / (4.0 * g.h)});
        }
        for (const auto& [i, vi] : row)
            for (const auto& [j, vj] : row) trip.emplace_back(i, j, std::conj(vi) * vj);
    }

    Eigen::SparseMatrix<cplx> A(nv, nv);
    A.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<cplx>> ldlt;
    ldlt.compute(A);
    if (ldlt.info() != Eigen::Success)
        throw ConvergenceFailure("vanishing proxy factorization failed");

    std::mt19937 rng(cfg_.seed + 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd v(nv);
    for (int i = 0; i < nv; ++i) v(i) = cplx(gauss(rng), gauss(rng));
    v.normalize();
    double lam_min = 0.0;
    for (int it = 0; it < 50; ++it) {
        v = ldlt.solve(v).eval();
        v.normalize();
        lam_min = (v.adjoint() * (A * v))(0).real();
    }
    return std::sqrt(std::max(lam_min, 0.0));
}

// ---------------------------------------------------------------------------
// sampled Higgs data over a dual-torus grid

HiggsSample NahmContext::make_sample(const std::vector<cplx>& xi_grid, int workers) const {
    HiggsSample out;
    out.k = cfg_.model.k;
    out.lat = cfg_.model.lat;
    out.xi0 = cfg_.model.xi0;
    out.grid_n = int(std::lround(std::sqrt(double(xi_grid.size()))));
    out.delta = cfg_.delta;
    out.full_mode = cfg_.mode == TransformConfig::Mode::FULL;
    out.nodes.resize(xi_grid.size());
    if (out.full_mode) {
        // One solve per node. Connection samples live on grid edges: the
        // anti-Hermitian log of the frame overlap with the nearest east and
        // north neighbors in the supplied list. Each solve carries its own
        // arbitrary kernel-basis gauge, and only closed chains of such edge
        // overlaps are gauge independent; a probe-step finite difference
        // against a throwaway second solve is not, so no per-node probe is
        // attempted here.
        grid();  // build the shared cover before going parallel
        std::vector<std::unique_ptr<FullSolve>> solves(xi_grid.size());
        parallel_for(xi_grid.size(), [&](std::size_t i) {
            HiggsNode& node = out.nodes[i];
            node.xi = xi_grid[i];
            try {
                auto fs = std::make_unique<FullSolve>(solve_full(*this, node.xi));
                fs->op.op.resize(0, 0);  // frames and labels stay, the matrix goes
                node.certified_k = fs->kf.k;
                node.frame_residual = fs->kf.singulars[fs->kf.k - 1];
                node.phi = full_phi(*fs);
                solves[i] = std::move(fs);
            } catch (const NumericalError&) {
                node.certified_k = 0;
                node.phi = node.b_x = node.b_y = Eigen::MatrixXcd();
            }
        }, workers);
        auto neighbor = [&](std::size_t i, bool east) {
            double best = 0.2501;  // up to the frame correlation scale
            int bj = -1;
            for (std::size_t j = 0; j < xi_grid.size(); ++j) {
                if (j == i) continue;
                cplx d = xi_grid[j] - xi_grid[i];
                double along = east ? d.real() : d.imag();
                double cross = east ? d.imag() : d.real();
                if (std::abs(cross) > 1e-9 || along <= 1e-9) continue;
                if (along < best) {
                    best = along;
                    bj = int(j);
                }
            }
            return bj;
        };
        for (std::size_t i = 0; i < xi_grid.size(); ++i) {
            if (!solves[i]) continue;
            for (bool east : {true, false}) {
                int j = neighbor(i, east);
                if (j < 0 || !solves[j]) continue;
                cplx d = xi_grid[j] - xi_grid[i];
                double h = east ? d.real() : d.imag();
                try {
                    Eigen::MatrixXcd b = antihermitian_part(
                        unitary_log(full_overlap(*solves[i], *solves[j])) / h);
                    (east ? out.nodes[i].b_x : out.nodes[i].b_y) = std::move(b);
                } catch (const NumericalError&) {
                    // edge stays empty; the loop transport will refuse it
                }
            }
        }
        return out;
    }
    const double step = 0.01;
    parallel_for(xi_grid.size(), [&](std::size_t i) {
        HiggsNode& node = out.nodes[i];
        node.xi = xi_grid[i];
        try {
            KernelFrames kf = localized_frames(node.xi);
            node.certified_k = kf.k;
            node.frame_residual = kf.singulars[kf.k - 1];
            node.phi = higgs_matrix(node.xi);
            // Near a sheet collision the frame overlap degenerates and no
            // connection sample exists, but the certified eigenvalue data
            // is still good; such nodes carry empty connection matrices.
            try {
                node.b_x = berry_connection(node.xi, cplx(1.0, 0.0), step);
                node.b_y = berry_connection(node.xi, cplx(0.0, 1.0), step);
            } catch (const NumericalError&) {
                node.b_x = node.b_y = Eigen::MatrixXcd();
            }
        } catch (const NumericalError&) {
            node.certified_k = 0;
            node.phi = node.b_x = node.b_y = Eigen::MatrixXcd();
        }
    }, workers);
    return out;
}

int HiggsSample::find_node(cplx xi, double tol) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (torus_distance(nodes[i].xi, xi, lat) < tol) return int(i);
    return -1;
}

// ---------------------------------------------------------------------------
// free wrappers

FullOperator assemble_4d(const TransformConfig& cfg, cplx xi) {
    return NahmContext(cfg).assemble_4d(xi);
}
KernelFrames kernel_frames(const TransformConfig& cfg, cplx xi) {
    return NahmContext(cfg).kernel_frames(xi);
}
Eigen::MatrixXcd higgs_matrix(const TransformConfig& cfg, cplx xi) {
    return NahmContext(cfg).higgs_matrix(xi);
}
Eigen::MatrixXcd berry_connection(const TransformConfig& cfg, cplx xi, cplx direction) {
    return NahmContext(cfg).berry_connection(xi, direction);
}
double hitchin_residual(const TransformConfig& cfg, const XiPatch& patch) {
    return NahmContext(cfg).hitchin_residual(patch);
}
double asd_defect(const TransformConfig& cfg, const WRegion& region) {
    return NahmContext(cfg).asd_defect(region);
}
std::vector<double> energy(const TransformConfig& cfg, const std::vector<double>& R_list) {
    return NahmContext(cfg).energy(R_list);
}
HiggsSample make_higgs_sample(const TransformConfig& cfg, const std::vector<cplx>& xi_grid,
                              int workers) {
    return NahmContext(cfg).make_sample(xi_grid, workers);
}

} // namespace nahmlab
