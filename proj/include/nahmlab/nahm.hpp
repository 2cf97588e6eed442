#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "nahmlab/fiber_dirac.hpp"

namespace nahmlab {

using CutPolyline = std::vector<cplx>;  // open polyline; first vertex outside the disc

// Truncated realization of the 4D transform domain T x D_R.
struct TransformConfig {
    CurveModel model;
    double R{8.0};
    int M{48};                  // planar grid size
    int N{8};                   // lattice window for fiber mode states
    enum class Mode { LOCALIZED, FULL };
    Mode mode{Mode::LOCALIZED};
    double profile_width{0.0};  // LOCALIZED; 0 selects the adiabatic width
    std::vector<CutPolyline> cuts;  // empty: derived from the branch points
    double delta{0.1};
    double gap_factor{5.0};     // kernel certificate: sigma_{k+1} / sigma_k must exceed this
    unsigned seed{12345};
    // Rings of lattice-shift states kept around the resonant seeds; curvature
    // measurements want 2, the cheaper spectral readouts are fine with 1.
    int orbit_depth{1};
    // Testing knob: feed the complex-conjugated sheet field to the assembly,
    // breaking holomorphy (used by the negative controls).
    bool conjugate_control{false};
    // Testing knob: amplitude of a seeded smooth anti-holomorphic perturbation
    // added to the continued sheet field.  Unlike the conjugated field, which
    // inherits the mirror symmetry of the model and stays curvature-free, this
    // breaks self-duality generically; 0 disables it.
    double sheet_noise{0.0};
};

struct XiPatch {
    cplx corner{};
    double step{0.02};
};

struct WRegion {
    cplx center{};
    double radius{0.5};
    int samples{5};  // samples x samples inner grid
};

// Two-layer branched cover of the truncated plane: continued sheet values plus
// the transition labels (layer swap, lattice shift) across every stencil edge.
struct CoverGrid {
    struct EdgeRel {
        int l2[2];   // target layer as seen from layer 0 / layer 1
        long mm[2];  // lattice shift integer coordinates per source layer
        long nn[2];
    };
    struct CellStencil {
        int cell_pt;
        std::array<int, 4> node_pt;  // -1 when the corner is outside the disc
        std::array<EdgeRel, 4> rel;
    };

    double h{};
    int M{};
    double R{};
    int n_nodes{}, n_cells{};
    std::vector<cplx> pts;  // nodes first, then cell centers
    std::vector<std::array<cplx, 2>> eta;
    std::vector<CellStencil> cells;
    std::vector<std::array<long, 3>> transitions;  // (dl, mm, nn) classes on cuts
    double margin{};  // smallest continuation separation witnessed
    std::vector<CutPolyline> cuts;
};

// Sparse 4D Dirac operator at one twist, over the orbit of coupled states.
struct FullOperator {
    Eigen::SparseMatrix<cplx> op;
    int n_nodes{}, n_cells{}, n_states{};
    std::vector<std::pair<int, cplx>> states;  // (layer, lattice point)
    std::vector<cplx> w_of_col, w_of_row;
    int rows() const { return int(op.rows()); }
    int cols() const { return int(op.cols()); }
};

// One transformed frame: discrete 4D coefficients (FULL) or an analytic
// sheet-localized profile (LOCALIZED).
struct Frame4D {
    Eigen::VectorXcd coeffs;  // FULL: stacked (node block, cell block) x states
    cplx center{};            // LOCALIZED: sheet fiber position
    double width{0.0};
    cplx eta_res{};           // resonant branch value at the sheet fiber
};

struct KernelFrames {
    int k{};
    std::vector<Frame4D> frames;
    std::vector<double> singulars;  // k+1 smallest, ascending
    double gap_ratio{};             // singulars[k] / singulars[k-1]
};

struct HiggsNode {
    cplx xi{};
    Eigen::MatrixXcd phi, b_x, b_y;
    double frame_residual{};
    int certified_k{};
};

struct HiggsSample {
    int k{};
    Lattice lat{};
    cplx xi0{};
    int grid_n{};
    double delta{};
    bool full_mode{};
    std::vector<HiggsNode> nodes;

    int find_node(cplx xi, double tol = 1e-9) const;
};

// Cached per-config machinery; the cover grid is built once and shared.
class NahmContext {
public:
    explicit NahmContext(const TransformConfig& cfg);

    const TransformConfig& cfg() const { return cfg_; }
    const CurveOps& curve() const { return *curve_; }
    const CoverGrid& grid() const;  // FULL-mode lazily built cover

    FullOperator assemble_4d(cplx xi) const;
    KernelFrames kernel_frames(cplx xi) const;
    Eigen::MatrixXcd higgs_matrix(cplx xi) const;
    Eigen::MatrixXcd berry_connection(cplx xi, cplx direction, double step = 0.0) const;
    double hitchin_residual(const XiPatch& patch) const;
    double asd_defect(const WRegion& region) const;
    std::vector<double> energy(const std::vector<double>& R_list) const;
    double vanishing_proxy(cplx xi) const;
    HiggsSample make_sample(const std::vector<cplx>& xi_grid, int workers = 0) const;

private:
    KernelFrames localized_frames(cplx xi) const;
    KernelFrames full_frames(cplx xi) const;
    cplx continued_eta(cplx w, cplx near_value) const;
    cplx sheet_noise_at(cplx w) const;

    TransformConfig cfg_;
    std::array<cplx, 3> noise_c_{};
    std::shared_ptr<CurveOps> curve_;
    mutable std::shared_ptr<CoverGrid> grid_;
    mutable std::mutex grid_mu_;
};

// Free wrappers matching the operation surface.
FullOperator assemble_4d(const TransformConfig& cfg, cplx xi);
KernelFrames kernel_frames(const TransformConfig& cfg, cplx xi);
Eigen::MatrixXcd higgs_matrix(const TransformConfig& cfg, cplx xi);
Eigen::MatrixXcd berry_connection(const TransformConfig& cfg, cplx xi, cplx direction);
double hitchin_residual(const TransformConfig& cfg, const XiPatch& patch);
double asd_defect(const TransformConfig& cfg, const WRegion& region);
std::vector<double> energy(const TransformConfig& cfg, const std::vector<double>& R_list);
HiggsSample make_higgs_sample(const TransformConfig& cfg, const std::vector<cplx>& xi_grid,
                              int workers = 0);

// Default boundary-anchored cut polylines pairing the branch points.
std::vector<CutPolyline> default_cuts(const CurveModel& model, double R);

} // namespace nahmlab
