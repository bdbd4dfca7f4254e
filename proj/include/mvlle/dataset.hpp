#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace mvlle {

/// N aligned samples observed under M feature views, plus optional labels.
///
/// Every view is an N x D_v matrix (rows are samples, columns are
/// features), all views share the same N, and no entry may be NaN/Inf.
/// Labels, when present, are opaque strings compared by equality, one per
/// sample. Instances are immutable after construction and safe to share
/// across threads.
class MultiViewDataset {
public:
    MultiViewDataset(std::vector<Eigen::MatrixXd> views,
                     std::vector<std::string> labels = {},
                     std::vector<std::string> view_names = {});

    int n_samples() const { return static_cast<int>(views_[0].rows()); }
    int n_views() const { return static_cast<int>(views_.size()); }
    bool has_labels() const { return !labels_.empty(); }

    const std::vector<Eigen::MatrixXd>& views() const { return views_; }
    const Eigen::MatrixXd& view(int v) const { return views_.at(static_cast<std::size_t>(v)); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<std::string>& view_names() const { return view_names_; }

private:
    std::vector<Eigen::MatrixXd> views_;
    std::vector<std::string> labels_;
    std::vector<std::string> view_names_;
};

/// Disjoint train/test partition of {0, ..., N-1}; both sides non-empty,
/// each sorted ascending.
struct SplitIndices {
    std::vector<int> train;
    std::vector<int> test;
};

/// Reads one CSV file per view (rows are samples) and, when labels_path is
/// non-empty, one label token per line. Views must agree on the row count.
MultiViewDataset load_views(const std::vector<std::string>& paths,
                            const std::string& labels_path = "",
                            bool has_header = false);

/// Inverse of load_views: one CSV per view at 17 significant digits, plus
/// the label file when the dataset carries labels.
void write_views(const MultiViewDataset& dataset,
                 const std::vector<std::string>& paths,
                 const std::string& labels_path = "");

/// Deterministic train/test split. With labels the split is stratified:
/// each class contributes round(train_ratio * class_size) train samples
/// (classes processed in order of first appearance, members shuffled by a
/// seeded generator); without labels it is a uniform shuffle split with
/// round(train_ratio * N) train samples. Rejects ratios outside (0,1),
/// classes of size 1, and splits that would leave either side empty.
SplitIndices split(const MultiViewDataset& dataset, double train_ratio,
                   std::uint64_t seed);

/// Label-level form of split, shared with embedding evaluation; pass an
/// empty label list for the unlabeled uniform split.
SplitIndices split_indices(int n, const std::vector<std::string>& labels,
                           double train_ratio, std::uint64_t seed);

/// Seeded synthetic multi-view generator. Draws `classes` centers in a
/// latent space (standard normal scaled by 4), assigns samples to classes
/// round-robin, places each sample at its center plus standard normal
/// noise, then maps the latent points into each view through a random
/// linear map latent_dim -> view_dims[v] and adds isotropic Gaussian view
/// noise with the given sigma. Labels "c0", "c1", ... are attached.
/// Draw order is fixed (centers, latent points, then per view map and
/// noise), so the result is bit-identical for a given seed on any platform.
MultiViewDataset synth_multiview(int n, int m_views, int classes, int latent_dim,
                                 const std::vector<int>& view_dims,
                                 double noise_sigma, std::uint64_t seed);

}  // namespace mvlle
