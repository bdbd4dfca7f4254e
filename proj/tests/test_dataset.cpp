#include "mvlle/dataset.hpp"

#include <algorithm>
#include <set>

#include "doctest.h"
#include "mvlle/csv.hpp"
#include "mvlle/eval.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mvlle;

TEST_CASE("random source emits the frozen reference stream") {
    // Guards the documented cross-platform stream: mt19937_64 plus the
    // in-tree uniform/Box-Muller/bounded transforms. Any change here
    // breaks every recorded seed.
    Rng engine(42);
    CHECK(engine.next_u64() == 13930160852258120406ULL);
    CHECK(engine.next_u64() == 11788048577503494824ULL);

    Rng uniforms(42);
    CHECK(uniforms.uniform() == 0.75515553295453897);
    CHECK(uniforms.uniform() == 0.63903139385469743);

    Rng normals(42);
    CHECK(normals.normal() == -0.48121769980184492);
    CHECK(normals.normal() == -0.57453687389830566);
    CHECK(normals.normal() == 0.49458385623521345);

    Rng bounded(42);
    const std::vector<std::size_t> expected{6, 4, 0, 2, 1, 8};
    for (std::size_t value : expected) CHECK(bounded.below(10) == value);
}

TEST_CASE("dataset construction enforces invariants") {
    Eigen::MatrixXd a(3, 2), b(3, 4);
    a.setRandom();
    b.setRandom();
    CHECK_NOTHROW(MultiViewDataset({a, b}));
    CHECK_THROWS_AS(MultiViewDataset({}), std::invalid_argument);

    Eigen::MatrixXd short_view(2, 2);
    short_view.setRandom();
    CHECK_THROWS_AS(MultiViewDataset({a, short_view}), std::invalid_argument);

    Eigen::MatrixXd with_nan = a;
    with_nan(1, 1) = std::nan("");
    CHECK_THROWS_AS(MultiViewDataset({with_nan}), std::invalid_argument);

    CHECK_THROWS_AS(MultiViewDataset({a}, {"x", "y"}), std::invalid_argument);
    const MultiViewDataset labeled({a}, {"x", "y", "x"});
    CHECK(labeled.has_labels());
    CHECK(labeled.n_samples() == 3);
}

TEST_CASE("load_views parses files in path order") {
    testutil::TempDir dir;
    testutil::write_text(dir.file("a.csv"), "1,2\n3,4\n5.5e-1,-6\n");
    testutil::write_text(dir.file("b.csv"), "0.5\n1.5\n2.5\n");

    const MultiViewDataset ds = load_views({dir.file("a.csv"), dir.file("b.csv")});
    CHECK(ds.n_samples() == 3);
    CHECK(ds.n_views() == 2);
    CHECK(ds.view(0)(2, 0) == doctest::Approx(0.55));
    CHECK(ds.view(1)(1, 0) == 1.5);
}

TEST_CASE("load_views rejects row-count mismatch naming both files") {
    testutil::TempDir dir;
    testutil::write_text(dir.file("a.csv"), "1,2\n3,4\n5,6\n");
    testutil::write_text(dir.file("b.csv"), "1\n2\n3\n4\n");
    try {
        load_views({dir.file("a.csv"), dir.file("b.csv")});
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        const std::string message = e.what();
        CHECK(message.find("a.csv") != std::string::npos);
        CHECK(message.find("b.csv") != std::string::npos);
        CHECK(message.find('3') != std::string::npos);
        CHECK(message.find('4') != std::string::npos);
    }
}

TEST_CASE("load_views locates unparsable cells and skips headers") {
    testutil::TempDir dir;
    testutil::write_text(dir.file("bad.csv"), "1,2\n3,oops\n");
    try {
        load_views({dir.file("bad.csv")});
        FAIL("expected rejection");
    } catch (const std::invalid_argument& e) {
        const std::string message = e.what();
        CHECK(message.find("row 1") != std::string::npos);
        CHECK(message.find("column 1") != std::string::npos);
    }

    testutil::write_text(dir.file("hdr.csv"), "f1,f2\n1,2\n3,4\n5,6\n");
    const MultiViewDataset ds = load_views({dir.file("hdr.csv")}, "", true);
    CHECK(ds.n_samples() == 3);

    testutil::write_text(dir.file("v.csv"), "1\n2\n3\n");
    testutil::write_text(dir.file("labels.csv"), "a\nb\n");
    CHECK_THROWS_AS(load_views({dir.file("v.csv")}, dir.file("labels.csv")),
                    std::invalid_argument);
}

TEST_CASE("load_views rejects non-finite values") {
    testutil::TempDir dir;
    testutil::write_text(dir.file("nan.csv"), "1,2\nnan,4\n");
    CHECK_THROWS_AS(load_views({dir.file("nan.csv")}), std::invalid_argument);
    testutil::write_text(dir.file("inf.csv"), "1,2\n3,inf\n");
    CHECK_THROWS_AS(load_views({dir.file("inf.csv")}), std::invalid_argument);
}

TEST_CASE("write_views then load_views is the identity") {
    testutil::TempDir dir;
    Rng rng(5);
    Eigen::MatrixXd a = oracle::random_matrix(7, 3, rng) * 1e3;
    Eigen::MatrixXd b = oracle::random_matrix(7, 2, rng) * 1e-7;
    const MultiViewDataset ds({a, b}, {"p", "q", "p", "q", "p", "q", "p"});

    write_views(ds, {dir.file("a.csv"), dir.file("b.csv")}, dir.file("labels.csv"));
    const MultiViewDataset back =
        load_views({dir.file("a.csv"), dir.file("b.csv")}, dir.file("labels.csv"));

    CHECK((back.view(0) - a).cwiseAbs().maxCoeff() == 0.0);  // 17 digits round-trip
    CHECK((back.view(1) - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.labels() == ds.labels());
}

TEST_CASE("split halves a single class exactly and is deterministic") {
    Eigen::MatrixXd x(10, 2);
    x.setRandom();
    const MultiViewDataset ds({x}, std::vector<std::string>(10, "only"));

    const SplitIndices s = split(ds, 0.5, 1);
    CHECK(s.train.size() == 5);
    CHECK(s.test.size() == 5);
    std::set<int> all(s.train.begin(), s.train.end());
    all.insert(s.test.begin(), s.test.end());
    CHECK(all.size() == 10);

    const SplitIndices again = split(ds, 0.5, 7);
    const SplitIndices again2 = split(ds, 0.5, 7);
    CHECK(again.train == again2.train);
    CHECK(again.test == again2.test);
}

TEST_CASE("split stratifies by class counts") {
    Eigen::MatrixXd x(10, 1);
    x.setRandom();
    std::vector<std::string> labels;
    for (int i = 0; i < 6; ++i) labels.push_back("A");
    for (int i = 0; i < 4; ++i) labels.push_back("B");
    const MultiViewDataset ds({x}, labels);

    const SplitIndices s = split(ds, 0.5, 2);
    int train_a = 0, train_b = 0;
    for (int i : s.train) (i < 6 ? train_a : train_b)++;
    CHECK(train_a == 3);
    CHECK(train_b == 2);
}

TEST_CASE("split is a partition for any seed") {
    Eigen::MatrixXd x(23, 2);
    x.setRandom();
    std::vector<std::string> labels;
    for (int i = 0; i < 23; ++i) labels.push_back("c" + std::to_string(i % 3));
    const MultiViewDataset ds({x}, labels);

    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const SplitIndices s = split(ds, 0.4, seed);
        std::vector<int> merged = s.train;
        merged.insert(merged.end(), s.test.begin(), s.test.end());
        std::sort(merged.begin(), merged.end());
        for (int i = 0; i < 23; ++i) CHECK(merged[static_cast<std::size_t>(i)] == i);
    }
}

TEST_CASE("split rejects bad ratios and singleton classes") {
    Eigen::MatrixXd x(4, 1);
    x.setRandom();
    const MultiViewDataset unlabeled({x});
    CHECK_THROWS_AS(split(unlabeled, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(split(unlabeled, 1.0, 0), std::invalid_argument);

    const MultiViewDataset labeled({x}, {"a", "a", "a", "b"});
    CHECK_THROWS_AS(split(labeled, 0.5, 0), std::invalid_argument);
}

TEST_CASE("synth_multiview honors the shape contract and the seed") {
    const MultiViewDataset ds = synth_multiview(100, 3, 4, 2, {5, 8, 13}, 0.2, 9);
    CHECK(ds.n_views() == 3);
    CHECK(ds.view(0).rows() == 100);
    CHECK(ds.view(0).cols() == 5);
    CHECK(ds.view(1).cols() == 8);
    CHECK(ds.view(2).cols() == 13);
    CHECK(ds.labels().size() == 100);

    const MultiViewDataset same = synth_multiview(100, 3, 4, 2, {5, 8, 13}, 0.2, 9);
    for (int v = 0; v < 3; ++v) {
        CHECK((ds.view(v) - same.view(v)).cwiseAbs().maxCoeff() == 0.0);
    }
    const MultiViewDataset other = synth_multiview(100, 3, 4, 2, {5, 8, 13}, 0.2, 10);
    CHECK((ds.view(0) - other.view(0)).cwiseAbs().maxCoeff() > 0.0);

    CHECK_THROWS_AS(synth_multiview(5, 1, 3, 2, {4}, 0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(synth_multiview(20, 2, 3, 2, {4}, 0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(synth_multiview(20, 1, 3, 0, {4}, 0.1, 0), std::invalid_argument);
}

TEST_CASE("zero-noise synthetic classes are separable by raw-view 1NN") {
    // Centers are random draws, so separation at sigma=0 is seed-dependent;
    // seed 22 was verified perfect against the 1NN oracle.
    const MultiViewDataset ds = synth_multiview(80, 2, 4, 3, {6, 9}, 0.0, 22);
    const SplitIndices s = split(ds, 0.5, 3);

    for (int v = 0; v < ds.n_views(); ++v) {
        const Eigen::MatrixXd columns = ds.view(v).transpose();
        Eigen::MatrixXd train(columns.rows(), static_cast<Eigen::Index>(s.train.size()));
        Eigen::MatrixXd test(columns.rows(), static_cast<Eigen::Index>(s.test.size()));
        std::vector<std::string> train_labels, test_labels;
        for (std::size_t i = 0; i < s.train.size(); ++i) {
            train.col(static_cast<Eigen::Index>(i)) = columns.col(s.train[i]);
            train_labels.push_back(ds.labels()[static_cast<std::size_t>(s.train[i])]);
        }
        for (std::size_t i = 0; i < s.test.size(); ++i) {
            test.col(static_cast<Eigen::Index>(i)) = columns.col(s.test[i]);
            test_labels.push_back(ds.labels()[static_cast<std::size_t>(s.test[i])]);
        }
        const double acc =
            accuracy(one_nn(train, train_labels, test, Metric::l2), test_labels);
        CHECK(acc == 1.0);
    }
}
