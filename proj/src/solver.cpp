#include "mvlle/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mvlle {

namespace {

void fix_sign(Eigen::VectorXd& v) {
    // Largest-magnitude coordinate, lowest index on ties, made positive.
    Eigen::Index best = 0;
    double best_mag = std::abs(v(0));
    for (Eigen::Index i = 1; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > best_mag) {
            best_mag = mag;
            best = i;
        }
    }
    if (v(best) < 0.0) v = -v;
}

void validate_config(const MultiViewDataset& dataset, const FitConfig& config) {
    const int n = dataset.n_samples();
    const int m = dataset.n_views();
    if (config.dims.size() != static_cast<std::size_t>(m)) {
        throw std::invalid_argument("fit: dims must list one dimensionality per view");
    }
    const int budget = n - (config.skip_trivial ? 1 : 0) - 1;
    for (int v = 0; v < m; ++v) {
        const int d = config.dims[static_cast<std::size_t>(v)];
        if (d < 1 || d > budget) {
            throw std::invalid_argument("fit: dims[" + std::to_string(v) + "]=" +
                                        std::to_string(d) + " outside [1, " +
                                        std::to_string(budget) + "]");
        }
    }
    if (config.k < 1 || config.k > n - 1) {
        throw std::invalid_argument("fit: k must lie in [1, N-1]");
    }
    if (!(config.tol > 0.0)) {
        throw std::invalid_argument("fit: tol must be > 0");
    }
    if (config.max_sweeps < 1) {
        throw std::invalid_argument("fit: max_sweeps must be >= 1");
    }
    if (config.lambda_c < 0.0) {
        throw std::invalid_argument("fit: lambda_c must be >= 0");
    }
    if (config.lambda_r < 0.0) {
        throw std::invalid_argument("fit: lambda_r must be >= 0");
    }
    if (config.eps_reg < 0.0) {
        throw std::invalid_argument("fit: eps_reg must be >= 0");
    }
}

}  // namespace

EigPair symmetric_eig_smallest(const Eigen::MatrixXd& matrix, int d, bool skip_trivial) {
    const Eigen::Index n = matrix.rows();
    if (matrix.cols() != n) {
        throw std::invalid_argument("symmetric_eig_smallest: matrix must be square");
    }
    if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument(
            "symmetric_eig_smallest: matrix is asymmetric beyond 1e-10");
    }
    const int skip_budget = skip_trivial ? 1 : 0;
    if (d < 1 || d + skip_budget > n) {
        throw std::invalid_argument("symmetric_eig_smallest: d=" + std::to_string(d) +
                                    " out of range for N=" + std::to_string(n) +
                                    (skip_trivial ? " with trivial-vector skip" : ""));
    }
    const Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());

    EigPair out;
    if (!skip_trivial) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("symmetric_eig_smallest: eigendecomposition failed");
        }
        out.values = solver.eigenvalues().head(d);
        out.vectors.resize(d, n);
        for (int a = 0; a < d; ++a) {
            Eigen::VectorXd vec = solver.eigenvectors().col(a);
            fix_sign(vec);
            out.vectors.row(a) = vec.transpose();
        }
        return out;
    }

    // Trivial-direction skip by exact deflation: solve in the orthogonal
    // complement of the constant vector, so every returned eigenvector
    // satisfies u . 1 = 0 exactly. An eigenvector-inspection skip would
    // fail whenever the near-null space of the matrix is degenerate (LLE
    // costs with k >= D+1 interpolate exactly) and the constant direction
    // is smeared across several eigenvectors; the fixed complement also
    // keeps the feasible set identical across solver sweeps, which is what
    // makes the alternating objective provably non-increasing.
    //
    // Basis of 1-perp: columns 1..N-1 of the Householder reflector H
    // swapping e_0 and 1/sqrt(N); the restricted operator is (H M H)[1:,1:].
    Eigen::VectorXd reflector =
        Eigen::VectorXd::Constant(n, -1.0 / std::sqrt(static_cast<double>(n)));
    reflector(0) += 1.0;
    reflector.normalize();
    const Eigen::VectorXd image = sym * reflector;
    const double quad = reflector.dot(image);
    Eigen::MatrixXd reflected = sym;
    reflected.noalias() -= 2.0 * image * reflector.transpose();
    reflected.noalias() -= 2.0 * reflector * image.transpose();
    reflected.noalias() += (4.0 * quad) * reflector * reflector.transpose();
    Eigen::MatrixXd restricted = reflected.bottomRightCorner(n - 1, n - 1);
    restricted = 0.5 * (restricted + restricted.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(restricted);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symmetric_eig_smallest: eigendecomposition failed");
    }
    out.values = solver.eigenvalues().head(d);
    out.vectors.resize(d, n);
    Eigen::VectorXd lifted(n);
    for (int a = 0; a < d; ++a) {
        lifted(0) = 0.0;
        lifted.tail(n - 1) = solver.eigenvectors().col(a);
        lifted -= (2.0 * reflector.dot(lifted)) * reflector;
        fix_sign(lifted);
        out.vectors.row(a) = lifted.transpose();
    }
    return out;
}

Eigen::MatrixXd init_view(const Eigen::MatrixXd& cost, int d, bool skip_trivial) {
    return symmetric_eig_smallest(cost, d, skip_trivial).vectors;
}

Eigen::MatrixXd subproblem_matrix(const Eigen::MatrixXd& cost,
                                  const std::vector<const Eigen::MatrixXd*>& others,
                                  double lambda_c) {
    const Eigen::Index n = cost.rows();
    if (cost.cols() != n) {
        throw std::invalid_argument("subproblem_matrix: cost must be square");
    }
    Eigen::MatrixXd combined = cost;
    for (const Eigen::MatrixXd* other : others) {
        if (other->rows() != n || other->cols() != n) {
            throw std::invalid_argument(
                "subproblem_matrix: consensus matrix shape mismatch");
        }
        combined += lambda_c * (*other);
    }
    combined = 0.5 * (combined + combined.transpose()).eval();
    return combined;
}

Eigen::MatrixXd update_view(const ViewState& state,
                            const std::vector<const ViewState*>& others,
                            const FitConfig& config) {
    std::vector<const Eigen::MatrixXd*> laplacians;
    laplacians.reserve(others.size());
    for (const ViewState* other : others) laplacians.push_back(&other->L);
    const Eigen::MatrixXd combined =
        subproblem_matrix(state.C, laplacians, config.lambda_c);
    return symmetric_eig_smallest(combined, static_cast<int>(state.U.rows()),
                                  config.skip_trivial)
        .vectors;
}

double objective(const std::vector<ViewState>& states, double lambda_c) {
    double total = 0.0;
    for (const ViewState& state : states) {
        total += quadratic_form(state.U, state.C);
    }
    for (std::size_t v = 0; v < states.size(); ++v) {
        for (std::size_t w = 0; w < states.size(); ++w) {
            if (w == v) continue;
            total += lambda_c * quadratic_form(states[v].U, states[w].L);
        }
    }
    return total;
}

void refresh_consensus(ViewState& state, const FitConfig& config) {
    if (config.variant.source == ConsensusVariant::Source::input) {
        return;  // constant consensus, computed once at initialization
    }
    if (config.variant.kind == ConsensusVariant::Kind::reconstruction) {
        const Eigen::MatrixXd samples = state.U.transpose();  // N x d
        const WeightMatrix weights =
            lle_weights(samples, knn(samples, config.k), config.eps_reg);
        state.K.resize(0, 0);
        state.L = consensus_matrix(config.variant, weights.dense());
    } else {
        state.K = kernel_matrix(state.U, config.kernel);
        state.L = consensus_matrix(config.variant, state.K);
    }
}

Eigen::MatrixXd zscore_columns(const Eigen::MatrixXd& features) {
    const double n = static_cast<double>(features.rows());
    Eigen::MatrixXd out = features;
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        const double mean = out.col(c).mean();
        out.col(c).array() -= mean;
        const double sd = std::sqrt(out.col(c).squaredNorm() / n);
        if (sd > 1e-12 * std::max(1.0, std::abs(mean))) {
            out.col(c) /= sd;
        }
    }
    return out;
}

FitResult fit(const MultiViewDataset& dataset, const FitConfig& config) {
    validate_config(dataset, config);
    const int m = dataset.n_views();

    std::vector<ViewState> states;
    states.reserve(static_cast<std::size_t>(m));
    for (int v = 0; v < m; ++v) {
        Eigen::MatrixXd x = config.preprocess == FitConfig::Preprocess::zscore
                                ? zscore_columns(dataset.view(v))
                                : dataset.view(v);
        WeightMatrix weights = lle_weights(x, knn(x, config.k), config.eps_reg);
        Eigen::MatrixXd cost = embedding_cost(weights);
        Eigen::MatrixXd embedding =
            init_view(cost, config.dims[static_cast<std::size_t>(v)], config.skip_trivial);

        ViewState state{std::move(weights), std::move(cost), Eigen::MatrixXd(),
                        Eigen::MatrixXd(), std::move(embedding)};
        if (config.variant.source == ConsensusVariant::Source::input) {
            if (config.variant.kind == ConsensusVariant::Kind::reconstruction) {
                state.L = consensus_matrix(config.variant, state.S.dense());
            } else {
                state.K = kernel_matrix(x.transpose(), config.kernel);
                state.L = consensus_matrix(config.variant, state.K);
            }
        } else {
            refresh_consensus(state, config);
        }
        states.push_back(std::move(state));
    }

    FitResult result;
    result.objective_trace.push_back(objective(states, config.lambda_c));
    if (!std::isfinite(result.objective_trace[0])) {
        throw std::runtime_error("fit: non-finite objective at sweep 0");
    }

    std::vector<const ViewState*> others;
    others.reserve(static_cast<std::size_t>(m - 1));
    for (int t = 1; t <= config.max_sweeps; ++t) {
        const auto sweep_start = std::chrono::steady_clock::now();

        for (ViewState& state : states) {
            refresh_consensus(state, config);
        }
        // Simultaneous (Jacobi) update: each solve reads only its own cost
        // and the consensus matrices frozen above, never another view's
        // fresh embedding, so in-place assignment is order-independent.
        for (int v = 0; v < m; ++v) {
            others.clear();
            for (int w = 0; w < m; ++w) {
                if (w != v) others.push_back(&states[static_cast<std::size_t>(w)]);
            }
            states[static_cast<std::size_t>(v)].U =
                update_view(states[static_cast<std::size_t>(v)], others, config);
        }

        const double value = objective(states, config.lambda_c);
        if (!std::isfinite(value)) {
            throw std::runtime_error("fit: non-finite objective at sweep " +
                                     std::to_string(t));
        }
        result.objective_trace.push_back(value);
        result.wallclock_per_sweep.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - sweep_start)
                .count());
        result.sweeps = t;

        const double scale = std::max(std::abs(result.objective_trace[1]), 1e-12);
        const double previous = result.objective_trace[static_cast<std::size_t>(t - 1)];
        if (std::abs(value - previous) / scale < config.tol) {
            result.converged = true;
            break;
        }
    }

    result.embeddings.reserve(static_cast<std::size_t>(m));
    for (ViewState& state : states) {
        result.embeddings.push_back(std::move(state.U));
    }
    return result;
}

}  // namespace mvlle
