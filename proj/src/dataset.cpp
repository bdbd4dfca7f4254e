#include "mvlle/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "mvlle/csv.hpp"
#include "mvlle/rng.hpp"

namespace mvlle {

MultiViewDataset::MultiViewDataset(std::vector<Eigen::MatrixXd> views,
                                   std::vector<std::string> labels,
                                   std::vector<std::string> view_names)
    : views_(std::move(views)), labels_(std::move(labels)),
      view_names_(std::move(view_names)) {
    if (views_.empty()) {
        throw std::invalid_argument("dataset needs at least one view");
    }
    const Eigen::Index n = views_[0].rows();
    if (n < 2) {
        throw std::invalid_argument("dataset needs at least 2 samples, got " +
                                    std::to_string(n));
    }
    for (std::size_t v = 0; v < views_.size(); ++v) {
        if (views_[v].rows() != n) {
            throw std::invalid_argument(
                "view " + std::to_string(v) + " has " + std::to_string(views_[v].rows()) +
                " rows, expected " + std::to_string(n));
        }
        if (views_[v].cols() < 1) {
            throw std::invalid_argument("view " + std::to_string(v) + " has no features");
        }
        if (!views_[v].allFinite()) {
            throw std::invalid_argument("view " + std::to_string(v) +
                                        " contains NaN or Inf entries");
        }
    }
    if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("label count " + std::to_string(labels_.size()) +
                                    " does not match sample count " + std::to_string(n));
    }
    if (view_names_.empty()) {
        for (std::size_t v = 0; v < views_.size(); ++v) {
            view_names_.push_back("view_" + std::to_string(v));
        }
    } else if (view_names_.size() != views_.size()) {
        throw std::invalid_argument("view_names count does not match view count");
    }
}

MultiViewDataset load_views(const std::vector<std::string>& paths,
                            const std::string& labels_path, bool has_header) {
    if (paths.empty()) {
        throw std::invalid_argument("load_views: no view files given");
    }
    std::vector<Eigen::MatrixXd> views;
    std::vector<std::string> names;
    views.reserve(paths.size());
    for (const std::string& path : paths) {
        views.push_back(read_csv_matrix(path, has_header));
        names.push_back(path);
    }
    for (std::size_t v = 1; v < views.size(); ++v) {
        if (views[v].rows() != views[0].rows()) {
            throw std::invalid_argument(
                "row-count mismatch: " + paths[0] + " has " +
                std::to_string(views[0].rows()) + " rows but " + paths[v] + " has " +
                std::to_string(views[v].rows()));
        }
    }
    std::vector<std::string> labels;
    if (!labels_path.empty()) {
        labels = read_label_lines(labels_path);
        if (labels.size() != static_cast<std::size_t>(views[0].rows())) {
            throw std::invalid_argument(
                labels_path + " has " + std::to_string(labels.size()) +
                " labels but views have " + std::to_string(views[0].rows()) + " rows");
        }
    }
    return MultiViewDataset(std::move(views), std::move(labels), std::move(names));
}

void write_views(const MultiViewDataset& dataset, const std::vector<std::string>& paths,
                 const std::string& labels_path) {
    if (paths.size() != static_cast<std::size_t>(dataset.n_views())) {
        throw std::invalid_argument("write_views: path count does not match view count");
    }
    for (std::size_t v = 0; v < paths.size(); ++v) {
        write_file_atomic(paths[v], format_csv_matrix(dataset.view(static_cast<int>(v))));
    }
    if (!labels_path.empty()) {
        if (!dataset.has_labels()) {
            throw std::invalid_argument("write_views: dataset has no labels to write");
        }
        write_file_atomic(labels_path, format_label_lines(dataset.labels()));
    }
}

SplitIndices split(const MultiViewDataset& dataset, double train_ratio,
                   std::uint64_t seed) {
    return split_indices(dataset.n_samples(), dataset.labels(), train_ratio, seed);
}

SplitIndices split_indices(int n, const std::vector<std::string>& labels,
                           double train_ratio, std::uint64_t seed) {
    if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
        throw std::invalid_argument("train_ratio must lie in (0,1), got " +
                                    std::to_string(train_ratio));
    }
    if (!labels.empty() && labels.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("split: label count does not match sample count");
    }
    Rng rng(seed);
    SplitIndices out;

    if (!labels.empty()) {
        // Classes in order of first appearance; members keep ascending order
        // before the shuffle so the draw sequence is reproducible.
        std::vector<std::vector<int>> groups;
        std::unordered_map<std::string, std::size_t> group_of;
        for (int i = 0; i < n; ++i) {
            const std::string& label = labels[static_cast<std::size_t>(i)];
            auto it = group_of.find(label);
            if (it == group_of.end()) {
                group_of.emplace(label, groups.size());
                groups.push_back({i});
            } else {
                groups[it->second].push_back(i);
            }
        }
        for (std::vector<int>& members : groups) {
            if (members.size() < 2) {
                throw std::invalid_argument(
                    "class '" + labels[static_cast<std::size_t>(members[0])] +
                    "' has a single sample; stratified split needs at least 2");
            }
            rng.shuffle(members);
            const auto take = static_cast<std::size_t>(
                std::lround(train_ratio * static_cast<double>(members.size())));
            for (std::size_t i = 0; i < members.size(); ++i) {
                (i < take ? out.train : out.test).push_back(members[i]);
            }
        }
    } else {
        std::vector<int> order(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
        rng.shuffle(order);
        const auto take =
            static_cast<std::size_t>(std::lround(train_ratio * static_cast<double>(n)));
        for (std::size_t i = 0; i < order.size(); ++i) {
            (i < take ? out.train : out.test).push_back(order[i]);
        }
    }

    if (out.train.empty() || out.test.empty()) {
        throw std::invalid_argument("split leaves train or test empty at ratio " +
                                    std::to_string(train_ratio));
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

MultiViewDataset synth_multiview(int n, int m_views, int classes, int latent_dim,
                                 const std::vector<int>& view_dims, double noise_sigma,
                                 std::uint64_t seed) {
    if (classes < 1 || n < 2 * classes) {
        throw std::invalid_argument("synth_multiview needs n >= 2*classes");
    }
    if (latent_dim < 1) {
        throw std::invalid_argument("latent_dim must be >= 1");
    }
    if (m_views < 1 || view_dims.size() != static_cast<std::size_t>(m_views)) {
        throw std::invalid_argument("view_dims length must equal m_views");
    }
    for (int d : view_dims) {
        if (d < 1) throw std::invalid_argument("view dimensions must be >= 1");
    }
    if (noise_sigma < 0.0) {
        throw std::invalid_argument("noise_sigma must be >= 0");
    }

    Rng rng(seed);
    Eigen::MatrixXd centers(classes, latent_dim);
    for (int c = 0; c < classes; ++c) {
        for (int j = 0; j < latent_dim; ++j) centers(c, j) = 4.0 * rng.normal();
    }

    Eigen::MatrixXd latent(n, latent_dim);
    std::vector<std::string> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int c = i % classes;
        labels[static_cast<std::size_t>(i)] = "c" + std::to_string(c);
        for (int j = 0; j < latent_dim; ++j) {
            latent(i, j) = centers(c, j) + rng.normal();
        }
    }

    std::vector<Eigen::MatrixXd> views;
    views.reserve(static_cast<std::size_t>(m_views));
    for (int v = 0; v < m_views; ++v) {
        const int d = view_dims[static_cast<std::size_t>(v)];
        Eigen::MatrixXd map(latent_dim, d);
        for (int r = 0; r < latent_dim; ++r) {
            for (int c = 0; c < d; ++c) map(r, c) = rng.normal();
        }
        Eigen::MatrixXd x = latent * map;
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < d; ++c) x(r, c) += noise_sigma * rng.normal();
        }
        views.push_back(std::move(x));
    }
    return MultiViewDataset(std::move(views), std::move(labels));
}

}  // namespace mvlle
