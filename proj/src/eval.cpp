#include "mvlle/eval.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace mvlle {

namespace {

double column_distance(const Eigen::MatrixXd& a, Eigen::Index i, const Eigen::MatrixXd& b,
                       Eigen::Index j, Metric metric) {
    if (metric == Metric::l1) {
        return (a.col(i) - b.col(j)).lpNorm<1>();
    }
    // Squared Euclidean orders identically to Euclidean.
    return (a.col(i) - b.col(j)).squaredNorm();
}

}  // namespace

double f1_standard(double precision, double recall) {
    const double denom = precision + recall;
    return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

double f1_paper(double precision, double recall) {
    const double denom = precision + recall;
    return denom > 0.0 ? precision * recall / denom : 0.0;
}

std::vector<std::string> one_nn(const Eigen::MatrixXd& reference_columns,
                                const std::vector<std::string>& reference_labels,
                                const Eigen::MatrixXd& query_columns, Metric metric) {
    const Eigen::Index n_ref = reference_columns.cols();
    if (n_ref == 0) {
        throw std::invalid_argument("one_nn: reference set is empty");
    }
    if (reference_labels.size() != static_cast<std::size_t>(n_ref)) {
        throw std::invalid_argument("one_nn: label count does not match reference count");
    }
    if (query_columns.rows() != reference_columns.rows()) {
        throw std::invalid_argument("one_nn: query dimension " +
                                    std::to_string(query_columns.rows()) +
                                    " does not match reference dimension " +
                                    std::to_string(reference_columns.rows()));
    }

    std::vector<std::string> predicted;
    predicted.reserve(static_cast<std::size_t>(query_columns.cols()));
    for (Eigen::Index q = 0; q < query_columns.cols(); ++q) {
        Eigen::Index best = 0;
        double best_dist = column_distance(reference_columns, 0, query_columns, q, metric);
        for (Eigen::Index r = 1; r < n_ref; ++r) {
            const double dist =
                column_distance(reference_columns, r, query_columns, q, metric);
            if (dist < best_dist) {  // strict: ties keep the lower index
                best_dist = dist;
                best = r;
            }
        }
        predicted.push_back(reference_labels[static_cast<std::size_t>(best)]);
    }
    return predicted;
}

double accuracy(const std::vector<std::string>& predicted,
                const std::vector<std::string>& truth) {
    if (predicted.size() != truth.size()) {
        throw std::invalid_argument("accuracy: length mismatch");
    }
    if (predicted.empty()) {
        throw std::invalid_argument("accuracy: empty input");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == truth[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

RetrievalReport retrieval_metrics(const std::vector<std::vector<int>>& rankings,
                                  const std::vector<std::vector<int>>& relevance,
                                  int top_k) {
    if (rankings.empty() || rankings.size() != relevance.size()) {
        throw std::invalid_argument("retrieval_metrics: need matching non-empty "
                                    "rankings and relevance lists");
    }
    if (top_k < 1) {
        throw std::invalid_argument("retrieval_metrics: top_k must be >= 1");
    }

    double precision_sum = 0.0;
    double recall_sum = 0.0;
    double ap_sum = 0.0;
    for (std::size_t q = 0; q < rankings.size(); ++q) {
        const std::vector<int>& ranking = rankings[q];
        if (ranking.size() < static_cast<std::size_t>(top_k)) {
            throw std::invalid_argument("retrieval_metrics: ranking for query " +
                                        std::to_string(q) + " has fewer than top_k=" +
                                        std::to_string(top_k) + " entries");
        }
        if (relevance[q].empty()) {
            throw std::invalid_argument("retrieval_metrics: query " + std::to_string(q) +
                                        " has an empty relevant set");
        }
        const std::unordered_set<int> relevant(relevance[q].begin(), relevance[q].end());

        int hits = 0;
        double ap = 0.0;
        for (int r = 0; r < top_k; ++r) {
            if (relevant.count(ranking[static_cast<std::size_t>(r)]) > 0) {
                ++hits;
                ap += static_cast<double>(hits) / static_cast<double>(r + 1);
            }
        }
        precision_sum += static_cast<double>(hits) / static_cast<double>(top_k);
        recall_sum += static_cast<double>(hits) / static_cast<double>(relevant.size());
        ap_sum += ap / static_cast<double>(relevant.size());
    }

    RetrievalReport report;
    const double n_queries = static_cast<double>(rankings.size());
    report.precision = precision_sum / n_queries;
    report.recall = recall_sum / n_queries;
    report.map = ap_sum / n_queries;
    report.f1_standard = f1_standard(report.precision, report.recall);
    report.f1_paper = f1_paper(report.precision, report.recall);
    report.top_k = top_k;
    return report;
}

Eigen::MatrixXd concat_embeddings(const std::vector<Eigen::MatrixXd>& embeddings) {
    if (embeddings.empty()) {
        throw std::invalid_argument("concat_embeddings: no embeddings");
    }
    const Eigen::Index n = embeddings[0].cols();
    Eigen::Index total_rows = 0;
    for (std::size_t v = 0; v < embeddings.size(); ++v) {
        if (embeddings[v].cols() != n) {
            throw std::invalid_argument("concat_embeddings: view " + std::to_string(v) +
                                        " has " + std::to_string(embeddings[v].cols()) +
                                        " columns, expected " + std::to_string(n));
        }
        total_rows += embeddings[v].rows();
    }
    Eigen::MatrixXd stacked(total_rows, n);
    Eigen::Index row = 0;
    for (const Eigen::MatrixXd& embedding : embeddings) {
        stacked.middleRows(row, embedding.rows()) = embedding;
        row += embedding.rows();
    }
    return stacked;
}

Eigen::MatrixXd baseline_lle(const Eigen::MatrixXd& view, int k, int d, double eps_reg,
                             bool skip_trivial) {
    const WeightMatrix weights = lle_weights(view, knn(view, k), eps_reg);
    return init_view(embedding_cost(weights), d, skip_trivial);
}

Eigen::MatrixXd baseline_le(const Eigen::MatrixXd& view, const KernelSpec& kernel, int d,
                            bool skip_trivial) {
    const Eigen::MatrixXd gram = kernel_matrix(view.transpose(), kernel);
    ConsensusVariant variant;
    variant.kind = ConsensusVariant::Kind::normalized_le;
    return symmetric_eig_smallest(consensus_matrix(variant, gram), d, skip_trivial)
        .vectors;
}

ClassificationReport classify_embeddings(const Eigen::MatrixXd& embedding,
                                         const std::vector<std::string>& labels,
                                         double train_ratio, int repeats,
                                         std::uint64_t seed, Metric metric) {
    const Eigen::Index n = embedding.cols();
    if (labels.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("classify_embeddings: label count does not match "
                                    "sample count");
    }
    if (repeats < 1) {
        throw std::invalid_argument("classify_embeddings: repeats must be >= 1");
    }

    ClassificationReport report;
    report.repeats = repeats;
    report.per_repeat.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
        const SplitIndices indices = split_indices(static_cast<int>(n), labels,
                                                   train_ratio, seed + static_cast<std::uint64_t>(r));
        Eigen::MatrixXd references(embedding.rows(),
                                   static_cast<Eigen::Index>(indices.train.size()));
        std::vector<std::string> reference_labels;
        reference_labels.reserve(indices.train.size());
        for (std::size_t i = 0; i < indices.train.size(); ++i) {
            references.col(static_cast<Eigen::Index>(i)) =
                embedding.col(indices.train[i]);
            reference_labels.push_back(labels[static_cast<std::size_t>(indices.train[i])]);
        }
        Eigen::MatrixXd queries(embedding.rows(),
                                static_cast<Eigen::Index>(indices.test.size()));
        std::vector<std::string> truth;
        truth.reserve(indices.test.size());
        for (std::size_t i = 0; i < indices.test.size(); ++i) {
            queries.col(static_cast<Eigen::Index>(i)) = embedding.col(indices.test[i]);
            truth.push_back(labels[static_cast<std::size_t>(indices.test[i])]);
        }
        const std::vector<std::string> predicted =
            one_nn(references, reference_labels, queries, metric);
        report.per_repeat.push_back(accuracy(predicted, truth));
    }

    report.mean_accuracy = 0.0;
    report.max_accuracy = report.per_repeat[0];
    for (double value : report.per_repeat) {
        report.mean_accuracy += value;
        report.max_accuracy = std::max(report.max_accuracy, value);
    }
    report.mean_accuracy /= static_cast<double>(repeats);
    return report;
}

ClassificationReport classify_protocol(const MultiViewDataset& dataset,
                                       const FitConfig& config, double train_ratio,
                                       int repeats, std::uint64_t seed) {
    if (!dataset.has_labels()) {
        throw std::invalid_argument("classify_protocol: dataset has no labels");
    }
    const FitResult result = fit(dataset, config);
    return classify_embeddings(concat_embeddings(result.embeddings), dataset.labels(),
                               train_ratio, repeats, seed);
}

RetrievalReport retrieval_protocol(const Eigen::MatrixXd& embedding,
                                   const std::vector<std::string>& labels, int top_k,
                                   Metric metric) {
    const Eigen::Index n = embedding.cols();
    if (labels.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("retrieval_protocol: label count does not match "
                                    "sample count");
    }
    if (top_k < 1 || top_k > n - 1) {
        throw std::invalid_argument("retrieval_protocol: top_k must lie in [1, N-1]");
    }

    std::vector<std::vector<int>> rankings(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> relevance(static_cast<std::size_t>(n));
    std::vector<std::pair<double, int>> order;
    for (Eigen::Index q = 0; q < n; ++q) {
        order.clear();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == q) continue;  // the query never retrieves itself
            order.emplace_back(column_distance(embedding, j, embedding, q, metric),
                               static_cast<int>(j));
            if (labels[static_cast<std::size_t>(j)] == labels[static_cast<std::size_t>(q)]) {
                relevance[static_cast<std::size_t>(q)].push_back(static_cast<int>(j));
            }
        }
        if (relevance[static_cast<std::size_t>(q)].empty()) {
            throw std::invalid_argument(
                "retrieval_protocol: sample " + std::to_string(q) +
                " is the only one with label '" + labels[static_cast<std::size_t>(q)] +
                "'");
        }
        std::sort(order.begin(), order.end());
        rankings[static_cast<std::size_t>(q)].reserve(order.size());
        for (const auto& [dist, index] : order) {
            rankings[static_cast<std::size_t>(q)].push_back(index);
        }
    }
    return retrieval_metrics(rankings, relevance, top_k);
}

}  // namespace mvlle
