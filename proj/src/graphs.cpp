#include "mvlle/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mvlle {

namespace {

void require_square(const Eigen::MatrixXd& m, const char* what) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square, got " +
                                    std::to_string(m.rows()) + "x" +
                                    std::to_string(m.cols()));
    }
}

void require_symmetric(const Eigen::MatrixXd& m, const char* what) {
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw std::invalid_argument(std::string(what) + ": matrix is not symmetric");
    }
}

Eigen::MatrixXd symmetrized(Eigen::MatrixXd m) {
    m = 0.5 * (m + m.transpose()).eval();
    return m;
}

}  // namespace

WeightMatrix::WeightMatrix(Eigen::SparseMatrix<double, Eigen::RowMajor> entries)
    : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw std::invalid_argument("weight matrix must be square");
    }
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
        double row_sum = 0.0;
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(entries_, i);
             it; ++it) {
            if (it.col() == i && it.value() != 0.0) {
                throw std::invalid_argument("weight matrix row " + std::to_string(i) +
                                            " has a nonzero diagonal entry");
            }
            row_sum += it.value();
        }
        if (std::abs(row_sum - 1.0) > 1e-10) {
            throw std::invalid_argument("weight matrix row " + std::to_string(i) +
                                        " sums to " + std::to_string(row_sum) +
                                        ", expected 1");
        }
    }
}

NeighborGraph knn(const Eigen::MatrixXd& points, int k) {
    const Eigen::Index n = points.rows();
    if (k < 1 || k > n - 1) {
        throw std::invalid_argument("knn: k must lie in [1, N-1], got k=" +
                                    std::to_string(k) + " for N=" + std::to_string(n));
    }
    if (!points.allFinite()) {
        throw std::invalid_argument("knn: input contains NaN or Inf");
    }

    NeighborGraph graph;
    graph.k = k;
    graph.neighbors.resize(static_cast<std::size_t>(n));
    std::vector<std::pair<double, int>> order;
    for (Eigen::Index i = 0; i < n; ++i) {
        order.clear();
        order.reserve(static_cast<std::size_t>(n - 1));
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            // Squared distances preserve the (distance, index) order.
            order.emplace_back((points.row(i) - points.row(j)).squaredNorm(),
                               static_cast<int>(j));
        }
        std::partial_sort(order.begin(), order.begin() + k, order.end());
        std::vector<int>& row = graph.neighbors[static_cast<std::size_t>(i)];
        row.reserve(static_cast<std::size_t>(k));
        for (int a = 0; a < k; ++a) row.push_back(order[static_cast<std::size_t>(a)].second);
    }
    return graph;
}

WeightMatrix lle_weights(const Eigen::MatrixXd& points, const NeighborGraph& graph,
                         double eps_reg) {
    const Eigen::Index n = points.rows();
    if (graph.n_samples() != n) {
        throw std::invalid_argument("lle_weights: graph size does not match point count");
    }
    if (eps_reg < 0.0) {
        throw std::invalid_argument("lle_weights: eps_reg must be >= 0");
    }
    const int k = graph.k;

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
    Eigen::MatrixXd diffs(k, points.cols());
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k);
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::vector<int>& nbrs = graph.neighbors[static_cast<std::size_t>(i)];
        for (int a = 0; a < k; ++a) {
            diffs.row(a) = points.row(i) - points.row(nbrs[static_cast<std::size_t>(a)]);
        }
        Eigen::MatrixXd gram = diffs * diffs.transpose();
        const double trace = gram.trace();
        const double ridge = trace > 0.0 ? eps_reg * trace / k : eps_reg;
        gram.diagonal().array() += ridge;

        Eigen::VectorXd w = gram.ldlt().solve(ones);
        const double sum = w.sum();
        w /= sum;
        if (!w.allFinite()) {
            throw std::invalid_argument("lle_weights: non-finite weights for sample " +
                                        std::to_string(i));
        }
        for (int a = 0; a < k; ++a) {
            triplets.emplace_back(static_cast<int>(i), nbrs[static_cast<std::size_t>(a)],
                                  w(a));
        }
    }

    Eigen::SparseMatrix<double, Eigen::RowMajor> entries(n, n);
    entries.setFromTriplets(triplets.begin(), triplets.end());
    return WeightMatrix(std::move(entries));
}

Eigen::MatrixXd embedding_cost(const WeightMatrix& weights) {
    const Eigen::Index n = weights.size();
    Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n, n) - weights.dense();
    return symmetrized(residual.transpose() * residual);
}

double median_pairwise_distance(const Eigen::MatrixXd& points_as_columns) {
    const Eigen::Index n = points_as_columns.cols();
    if (n < 2) {
        throw std::invalid_argument("median_pairwise_distance: need at least 2 points");
    }
    std::vector<double> distances;
    distances.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            distances.push_back(
                (points_as_columns.col(i) - points_as_columns.col(j)).norm());
        }
    }
    // Lower median: element (m-1)/2 of the ascending order.
    const std::size_t mid = (distances.size() - 1) / 2;
    std::nth_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(mid),
                     distances.end());
    return distances[mid];
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& points_as_columns,
                              const KernelSpec& spec) {
    const Eigen::MatrixXd& z = points_as_columns;
    const Eigen::Index n = z.cols();
    if (n < 1) {
        throw std::invalid_argument("kernel_matrix: no points");
    }
    if (!z.allFinite()) {
        throw std::invalid_argument("kernel_matrix: input contains NaN or Inf");
    }

    switch (spec.kind) {
        case KernelSpec::Kind::linear:
            return symmetrized(z.transpose() * z);
        case KernelSpec::Kind::polynomial: {
            if (spec.degree < 1) {
                throw std::invalid_argument("kernel_matrix: polynomial degree must be >= 1");
            }
            if (spec.offset < 0.0) {
                throw std::invalid_argument("kernel_matrix: polynomial offset must be >= 0");
            }
            Eigen::MatrixXd gram = z.transpose() * z;
            gram = (gram.array() + spec.offset)
                       .pow(static_cast<double>(spec.degree))
                       .matrix();
            return symmetrized(std::move(gram));
        }
        case KernelSpec::Kind::gaussian: {
            double sigma;
            if (spec.bandwidth.has_value()) {
                sigma = *spec.bandwidth;
            } else {
                sigma = median_pairwise_distance(z);
                if (sigma == 0.0) sigma = 1.0;
            }
            if (!(sigma > 0.0)) {
                throw std::invalid_argument("kernel_matrix: resolved bandwidth must be > 0");
            }
            const double denom = 2.0 * sigma * sigma;
            Eigen::MatrixXd kernel(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                kernel(i, i) = 1.0;
                for (Eigen::Index j = i + 1; j < n; ++j) {
                    const double d2 = (z.col(i) - z.col(j)).squaredNorm();
                    const double value = std::exp(-d2 / denom);
                    kernel(i, j) = value;
                    kernel(j, i) = value;
                }
            }
            return kernel;
        }
    }
    throw std::invalid_argument("kernel_matrix: unknown kernel kind");
}

Eigen::MatrixXd consensus_matrix(const ConsensusVariant& variant,
                                 const Eigen::MatrixXd& graph) {
    require_square(graph, "consensus_matrix");
    const Eigen::Index n = graph.rows();

    switch (variant.kind) {
        case ConsensusVariant::Kind::unnormalized_le: {
            require_symmetric(graph, "consensus_matrix(unnormalized_le)");
            Eigen::MatrixXd laplacian = -graph;
            laplacian.diagonal() += graph.rowwise().sum();
            return symmetrized(std::move(laplacian));
        }
        case ConsensusVariant::Kind::normalized_le: {
            require_symmetric(graph, "consensus_matrix(normalized_le)");
            const Eigen::VectorXd degree = graph.rowwise().sum();
            for (Eigen::Index i = 0; i < n; ++i) {
                if (!(degree(i) > 0.0)) {
                    throw std::invalid_argument(
                        "consensus_matrix(normalized_le): row " + std::to_string(i) +
                        " has non-positive sum " + std::to_string(degree(i)));
                }
            }
            const Eigen::VectorXd inv_sqrt = degree.array().rsqrt();
            Eigen::MatrixXd laplacian =
                -(inv_sqrt.asDiagonal() * graph * inv_sqrt.asDiagonal());
            laplacian.diagonal().array() += 1.0;
            return symmetrized(std::move(laplacian));
        }
        case ConsensusVariant::Kind::reconstruction: {
            Eigen::MatrixXd residual = Eigen::MatrixXd::Identity(n, n) - graph;
            return symmetrized(residual * residual.transpose());
        }
        case ConsensusVariant::Kind::hsic_centered: {
            require_symmetric(graph, "consensus_matrix(hsic_centered)");
            // H A H with H = I - (1/N) 1 1^T, expanded to avoid forming H.
            const Eigen::VectorXd row_mean = graph.rowwise().mean();
            const double total_mean = row_mean.mean();
            Eigen::MatrixXd centered = graph;
            centered.colwise() -= row_mean;
            centered.rowwise() -= row_mean.transpose();
            centered.array() += total_mean;
            return symmetrized(std::move(centered));
        }
    }
    throw std::invalid_argument("consensus_matrix: unknown variant");
}

double quadratic_form(const Eigen::MatrixXd& embedding, const Eigen::MatrixXd& laplacian) {
    require_square(laplacian, "quadratic_form");
    if (embedding.cols() != laplacian.rows()) {
        throw std::invalid_argument("quadratic_form: embedding has " +
                                    std::to_string(embedding.cols()) +
                                    " columns but laplacian is " +
                                    std::to_string(laplacian.rows()) + "x" +
                                    std::to_string(laplacian.cols()));
    }
    double total = 0.0;
    for (Eigen::Index a = 0; a < embedding.rows(); ++a) {
        total += embedding.row(a) * laplacian * embedding.row(a).transpose();
    }
    return total;
}

}  // namespace mvlle
