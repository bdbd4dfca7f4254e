#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "mvlle/dataset.hpp"
#include "mvlle/graphs.hpp"
#include "mvlle/solver.hpp"

namespace mvlle {

enum class Metric { l1, l2 };

/// Mean retrieval quality at a fixed cutoff. Both F1 conventions are
/// reported: f1_standard = 2PR/(P+R), f1_paper = PR/(P+R), each 0 when
/// P + R is 0.
struct RetrievalReport {
    double precision = 0.0;
    double recall = 0.0;
    double map = 0.0;
    double f1_standard = 0.0;
    double f1_paper = 0.0;
    int top_k = 0;
};

struct ClassificationReport {
    double mean_accuracy = 0.0;
    double max_accuracy = 0.0;
    std::vector<double> per_repeat;
    int repeats = 0;
};

double f1_standard(double precision, double recall);
double f1_paper(double precision, double recall);

/// Labels each query column with the label of its nearest reference
/// column under the metric; distance ties break toward the lower
/// reference index.
std::vector<std::string> one_nn(const Eigen::MatrixXd& reference_columns,
                                const std::vector<std::string>& reference_labels,
                                const Eigen::MatrixXd& query_columns, Metric metric);

double accuracy(const std::vector<std::string>& predicted,
                const std::vector<std::string>& truth);

/// Mean precision/recall at top_k over queries, truncated mean average
/// precision (per query: (1/|relevant|) * sum over ranks r <= top_k of
/// P(r) * rel(r)), and both F1 forms computed from the mean precision and
/// mean recall.
RetrievalReport retrieval_metrics(const std::vector<std::vector<int>>& rankings,
                                  const std::vector<std::vector<int>>& relevance,
                                  int top_k);

/// Stacks per-view embeddings row-wise in view order into one
/// (sum of d_v) x N matrix.
Eigen::MatrixXd concat_embeddings(const std::vector<Eigen::MatrixXd>& embeddings);

/// Single-view locally-linear-embedding baseline: the lambda_c = 0
/// pipeline on one view matrix (N x D rows are samples).
Eigen::MatrixXd baseline_lle(const Eigen::MatrixXd& view, int k, int d,
                             double eps_reg = 1e-3, bool skip_trivial = true);

/// Single-view Laplacian-eigenmaps baseline: normalized Laplacian of the
/// kernel over sample columns, smallest-d non-trivial eigenvectors.
Eigen::MatrixXd baseline_le(const Eigen::MatrixXd& view, const KernelSpec& kernel, int d,
                            bool skip_trivial = true);

/// Repeated-split 1NN evaluation of an already-computed embedding
/// (columns are samples): repeat r splits with seed + r, classifies test
/// columns from train columns, and aggregates mean/max accuracy.
ClassificationReport classify_embeddings(const Eigen::MatrixXd& embedding,
                                         const std::vector<std::string>& labels,
                                         double train_ratio, int repeats,
                                         std::uint64_t seed, Metric metric = Metric::l2);

/// The full transductive protocol: fit once on the whole dataset,
/// concatenate the per-view embeddings, then classify_embeddings.
ClassificationReport classify_protocol(const MultiViewDataset& dataset,
                                       const FitConfig& config, double train_ratio,
                                       int repeats, std::uint64_t seed);

/// Leave-one-out retrieval over embedding columns: each sample queries
/// the remaining ones ranked by the metric (ties toward the lower index),
/// relevance is sharing the query's label, and quality is summarized at
/// top_k.
RetrievalReport retrieval_protocol(const Eigen::MatrixXd& embedding,
                                   const std::vector<std::string>& labels, int top_k,
                                   Metric metric = Metric::l1);

}  // namespace mvlle
