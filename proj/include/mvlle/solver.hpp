#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "mvlle/dataset.hpp"
#include "mvlle/graphs.hpp"

namespace mvlle {

/// Configuration for the alternating multi-view fit. `dims` gives the
/// embedding dimensionality per view and must satisfy
/// dims[v] + (skip_trivial ? 1 : 0) <= N - 1. `lambda_r` is validated and
/// recorded but does not enter the objective: the row-orthonormality
/// constraint fixes the embedding scale, so the smooth regularizer is a
/// constant. `seed` is carried for provenance only; the fit itself is
/// deterministic.
struct FitConfig {
    enum class Preprocess { none, zscore };

    int k = 8;
    std::vector<int> dims;
    double lambda_c = 0.5;
    double lambda_r = 0.0;
    KernelSpec kernel = KernelSpec::gaussian_median();
    ConsensusVariant variant;
    double tol = 1e-6;
    int max_sweeps = 50;
    bool skip_trivial = true;
    double eps_reg = 1e-3;
    Preprocess preprocess = Preprocess::zscore;
    std::uint64_t seed = 0;
};

/// Per-view working set. U holds the current d_v x N embedding with
/// orthonormal rows; C is the locally-linear embedding cost; K and L are
/// the kernel and consensus matrices other views regularize against. K is
/// empty under the reconstruction variant, whose consensus comes from
/// reconstruction weights instead of a kernel.
struct ViewState {
    WeightMatrix S;
    Eigen::MatrixXd C;
    Eigen::MatrixXd K;
    Eigen::MatrixXd L;
    Eigen::MatrixXd U;
};

struct FitResult {
    std::vector<Eigen::MatrixXd> embeddings;
    std::vector<double> objective_trace;  // entry 0 is the post-init value
    int sweeps = 0;
    bool converged = false;
    std::vector<double> wallclock_per_sweep;  // seconds, one per sweep
};

struct EigPair {
    Eigen::VectorXd values;   // d eigenvalues, ascending
    Eigen::MatrixXd vectors;  // d x N, rows are the eigenvectors
};

/// Smallest-d eigenpairs of a symmetric matrix (full dense decomposition,
/// eigenvalues ascending). With skip_trivial set, the constant direction
/// -- the spurious null vector of an LLE cost matrix -- is deflated
/// exactly: the problem is solved in the orthogonal complement of 1, so
/// every returned eigenvector satisfies u . 1 = 0. Every returned
/// eigenvector's sign is fixed so its largest-magnitude coordinate
/// (lowest index on ties) is positive.
EigPair symmetric_eig_smallest(const Eigen::MatrixXd& matrix, int d, bool skip_trivial);

/// Row-orthonormal U minimizing tr(U C U^T): the smallest-d eigenvectors
/// of the embedding cost, optionally skipping the trivial direction.
Eigen::MatrixXd init_view(const Eigen::MatrixXd& cost, int d, bool skip_trivial);

/// M_v = C_v + lambda_c * sum of the other views' consensus matrices,
/// symmetrized.
Eigen::MatrixXd subproblem_matrix(const Eigen::MatrixXd& cost,
                                  const std::vector<const Eigen::MatrixXd*>& others,
                                  double lambda_c);

/// Exact minimizer of the frozen-consensus subproblem for one view: the
/// smallest-d_v eigenvectors of subproblem_matrix (Rayleigh-Ritz). d_v is
/// taken from the current embedding's row count.
Eigen::MatrixXd update_view(const ViewState& state,
                            const std::vector<const ViewState*>& others,
                            const FitConfig& config);

/// Joint objective: sum_v tr(U^v C^v U^v^T)
///                + lambda_c * sum over ordered pairs v != w of tr(U^v L^w U^v^T).
double objective(const std::vector<ViewState>& states, double lambda_c);

/// Rebuilds a view's consensus matrix from its current embedding: kernel
/// over embedding columns for the Laplacian/HSIC variants, fresh
/// reconstruction weights on embedding columns for the reconstruction
/// variant. A no-op under source = input, where L was computed once from
/// the input features and stays constant.
void refresh_consensus(ViewState& state, const FitConfig& config);

/// Z-scores each column (subtract mean, divide by population standard
/// deviation); near-constant columns are centered but not scaled.
Eigen::MatrixXd zscore_columns(const Eigen::MatrixXd& features);

/// The full alternating fit: per-view graph construction and spectral
/// initialization, then sweeps that refresh every consensus matrix and
/// re-solve every view against the frozen set (Jacobi-style simultaneous
/// updates). Stops when the relative objective change drops below
/// config.tol or after max_sweeps.
FitResult fit(const MultiViewDataset& dataset, const FitConfig& config);

}  // namespace mvlle
