#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <vector>

namespace mvlle {

/// Exact k-nearest-neighbor lists under the Euclidean metric. Each list
/// holds k distinct indices (self excluded), sorted by (distance, index);
/// distance ties break toward the lower sample index.
struct NeighborGraph {
    std::vector<std::vector<int>> neighbors;
    int k = 0;
    int n_samples() const { return static_cast<int>(neighbors.size()); }
};

/// Sparse row-stochastic reconstruction weights: row i is supported on the
/// neighbors of sample i, sums to 1 within 1e-10, and has a zero diagonal.
class WeightMatrix {
public:
    explicit WeightMatrix(Eigen::SparseMatrix<double, Eigen::RowMajor> entries);

    int size() const { return static_cast<int>(entries_.rows()); }
    const Eigen::SparseMatrix<double, Eigen::RowMajor>& sparse() const { return entries_; }
    Eigen::MatrixXd dense() const { return Eigen::MatrixXd(entries_); }

private:
    Eigen::SparseMatrix<double, Eigen::RowMajor> entries_;
};

/// Similarity kernel selector. A gaussian spec without an explicit
/// bandwidth uses the median heuristic: the bandwidth resolves to the
/// median of all pairwise Euclidean distances at evaluation time.
struct KernelSpec {
    enum class Kind { linear, polynomial, gaussian };

    Kind kind = Kind::gaussian;
    int degree = 2;                    // polynomial only, >= 1
    double offset = 1.0;               // polynomial only, >= 0
    std::optional<double> bandwidth;   // gaussian only; nullopt = median heuristic

    static KernelSpec linear() { return {Kind::linear, 1, 0.0, std::nullopt}; }
    static KernelSpec polynomial(int degree, double offset) {
        return {Kind::polynomial, degree, offset, std::nullopt};
    }
    static KernelSpec gaussian(double bandwidth) {
        return {Kind::gaussian, 1, 0.0, bandwidth};
    }
    static KernelSpec gaussian_median() { return {Kind::gaussian, 1, 0.0, std::nullopt}; }
};

/// Selector among the consensus operators that reduce a similarity or
/// reconstruction graph A to the matrix L of the unified regularizer
/// tr(U L U^T):
///   unnormalized_le   L = D - A,            D_ii = sum_j A_ij
///   normalized_le     L = I - D^{-1/2} A D^{-1/2}
///   reconstruction    L = (I - A)(I - A)^T
///   hsic_centered     L = H A H,            H = I - (1/N) 1 1^T
/// `source` says whether A is rebuilt from the current embedding each
/// sweep or computed once from the input features.
struct ConsensusVariant {
    enum class Kind { normalized_le, unnormalized_le, reconstruction, hsic_centered };
    enum class Source { embedding, input };

    Kind kind = Kind::normalized_le;
    Source source = Source::embedding;
};

/// Brute-force exact k-NN rows of X (N x D). Requires 1 <= k <= N-1.
NeighborGraph knn(const Eigen::MatrixXd& points, int k);

/// Locally-linear reconstruction weights. For each sample the local Gram
/// matrix G_ab = (x_i - x_a) . (x_i - x_b) over neighbors a, b is ridge-
/// regularized by eps_reg * trace(G)/k on the diagonal (eps_reg alone when
/// the trace is zero), G w = 1 is solved, and w is normalized to sum 1 --
/// the closed form of the sum-to-one constrained least squares.
WeightMatrix lle_weights(const Eigen::MatrixXd& points, const NeighborGraph& graph,
                         double eps_reg = 1e-3);

/// C = (I - S)^T (I - S), explicitly symmetrized. Positive semidefinite,
/// and C 1 = 0 because rows of S sum to one.
Eigen::MatrixXd embedding_cost(const WeightMatrix& weights);

/// Median of the N(N-1)/2 pairwise Euclidean distances between columns of
/// Z (lower median for even counts).
double median_pairwise_distance(const Eigen::MatrixXd& points_as_columns);

/// Dense symmetric kernel matrix over the columns of Z.
///   linear       K = Z^T Z
///   polynomial   K_ij = (z_i . z_j + offset)^degree
///   gaussian     K_ij = exp(-|z_i - z_j|^2 / (2 sigma^2))
/// A gaussian median bandwidth falls back to 1.0 when the median distance
/// is zero; a resolved bandwidth <= 0 is rejected.
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& points_as_columns,
                              const KernelSpec& spec);

/// Builds the consensus matrix L for the chosen variant (see
/// ConsensusVariant). A must be square, and symmetric for every kind
/// except reconstruction; normalized_le additionally needs strictly
/// positive row sums. The result is explicitly symmetrized.
Eigen::MatrixXd consensus_matrix(const ConsensusVariant& variant,
                                 const Eigen::MatrixXd& graph);

/// tr(U L U^T), accumulated row by row so the d x N product with L is
/// never materialized as an N x N intermediate.
double quadratic_form(const Eigen::MatrixXd& embedding, const Eigen::MatrixXd& laplacian);

}  // namespace mvlle
