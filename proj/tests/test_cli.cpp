// End-to-end tests that drive the built `mvlle` binary.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "mvlle/csv.hpp"
#include "test_util.hpp"

namespace {

int run_cli(const std::string& arguments, const std::string& log = "/dev/null") {
    const std::string command =
        std::string(MVLLE_CLI_PATH) + " " + arguments + " >" + log + " 2>&1";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("synth writes views, labels, and a manifest") {
    testutil::TempDir dir;
    const std::string out = dir.file("data");
    REQUIRE(run_cli("synth --n 60 --views 2 --classes 3 --latent-dim 2 "
                    "--view-dims 4,6 --noise 0.2 --seed 5 --out " +
                    out) == 0);

    const Eigen::MatrixXd v0 = mvlle::read_csv_matrix(out + "/view_0.csv");
    const Eigen::MatrixXd v1 = mvlle::read_csv_matrix(out + "/view_1.csv");
    CHECK(v0.rows() == 60);
    CHECK(v0.cols() == 4);
    CHECK(v1.rows() == 60);
    CHECK(v1.cols() == 6);
    CHECK(mvlle::read_label_lines(out + "/labels.csv").size() == 60);

    const auto manifest =
        nlohmann::json::parse(testutil::read_text(out + "/manifest.json"));
    CHECK(manifest["command"] == "synth");
    CHECK(manifest["config"]["n"] == 60);
}

TEST_CASE("fit emits embeddings, convergence trace, summary, and manifest") {
    testutil::TempDir dir;
    const std::string data = dir.file("data");
    REQUIRE(run_cli("synth --n 50 --views 2 --classes 3 --latent-dim 2 "
                    "--view-dims 4,6 --noise 0.3 --seed 7 --out " +
                    data) == 0);

    const std::string out = dir.file("run");
    REQUIRE(run_cli("fit --views " + data + "/view_0.csv," + data +
                    "/view_1.csv --k 6 --dims 5,5 --lambda-c 0.5 "
                    "--kernel gaussian --bandwidth median --variant normalized_le "
                    "--source embedding --tol 1e-6 --max-sweeps 50 --out " +
                    out) == 0);

    const Eigen::MatrixXd e0 = mvlle::read_csv_matrix(out + "/embedding_0.csv");
    CHECK(e0.rows() == 5);
    CHECK(e0.cols() == 50);
    const std::string convergence = testutil::read_text(out + "/convergence.csv");
    CHECK(convergence.rfind("sweep,objective\n0,", 0) == 0);

    const auto summary =
        nlohmann::json::parse(testutil::read_text(out + "/summary.json"));
    CHECK(summary.contains("converged"));
    CHECK(summary.contains("sweeps"));
    CHECK(summary.contains("objective_final"));
    const auto manifest =
        nlohmann::json::parse(testutil::read_text(out + "/manifest.json"));
    CHECK(manifest["config"]["k"] == 6);
    CHECK(manifest["inputs"].size() == 2);
}

TEST_CASE("identical fit invocations produce bit-identical outputs") {
    testutil::TempDir dir;
    const std::string data = dir.file("data");
    REQUIRE(run_cli("synth --n 40 --views 2 --classes 2 --latent-dim 2 "
                    "--view-dims 3,5 --noise 0.4 --seed 9 --out " +
                    data) == 0);

    const std::string fit_flags = "fit --views " + data + "/view_0.csv," + data +
                                  "/view_1.csv --k 5 --dims 3,3 --out ";
    REQUIRE(run_cli(fit_flags + dir.file("a")) == 0);
    REQUIRE(run_cli(fit_flags + dir.file("b")) == 0);

    for (const char* name : {"embedding_0.csv", "embedding_1.csv", "convergence.csv"}) {
        CHECK(mvlle::file_digest(dir.file("a") + "/" + name) ==
              mvlle::file_digest(dir.file("b") + "/" + name));
        CHECK(testutil::read_text(dir.file("a") + "/" + name) ==
              testutil::read_text(dir.file("b") + "/" + name));
    }
}

TEST_CASE("eval scores stored embeddings for both tasks") {
    testutil::TempDir dir;
    const std::string data = dir.file("data");
    REQUIRE(run_cli("synth --n 48 --views 2 --classes 3 --latent-dim 2 "
                    "--view-dims 4,5 --noise 0.2 --seed 13 --out " +
                    data) == 0);
    const std::string run = dir.file("run");
    REQUIRE(run_cli("fit --views " + data + "/view_0.csv," + data +
                    "/view_1.csv --k 6 --dims 4 --out " + run) == 0);

    const std::string cls = dir.file("cls");
    REQUIRE(run_cli("eval --embeddings " + run + "/embedding_0.csv," + run +
                    "/embedding_1.csv --labels " + data +
                    "/labels.csv --task classify --train-ratio 0.5 --repeats 5 "
                    "--seed 3 --out " +
                    cls) == 0);
    const auto classify_report =
        nlohmann::json::parse(testutil::read_text(cls + "/report.json"));
    CHECK(classify_report.contains("mean_accuracy"));
    CHECK(classify_report.contains("max_accuracy"));
    CHECK(classify_report["mean_accuracy"].get<double>() >= 0.0);
    CHECK(classify_report["mean_accuracy"].get<double>() <= 1.0);

    const std::string ret = dir.file("ret");
    REQUIRE(run_cli("eval --embeddings " + run + "/embedding_0.csv," + run +
                    "/embedding_1.csv --labels " + data +
                    "/labels.csv --task retrieve --top-k 2 --metric l1 --out " +
                    ret) == 0);
    const auto retrieve_report =
        nlohmann::json::parse(testutil::read_text(ret + "/report.json"));
    for (const char* key : {"precision", "recall", "map", "f1_standard", "f1_paper"}) {
        CHECK(retrieve_report.contains(key));
    }
}

TEST_CASE("usage errors exit with status 2, runtime failures with 1") {
    testutil::TempDir dir;
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("synth --n 10") == 2);
    CHECK(run_cli("fit --views a.csv --dims 2 --kernel bogus --out " + dir.file("x")) ==
          2);
    // Missing input file is a runtime failure, not a usage error.
    CHECK(run_cli("fit --views " + dir.file("absent.csv") + " --dims 2 --out " +
                  dir.file("y")) == 1);
}

TEST_CASE("help lists every flag with its default") {
    testutil::TempDir dir;
    const std::string log = dir.file("help.txt");
    CHECK(run_cli("fit --help", log) == 0);
    const std::string help = testutil::read_text(log);
    for (const char* flag :
         {"--views", "--header", "--k", "--dims", "--lambda-c", "--lambda-r", "--kernel",
          "--degree", "--offset", "--bandwidth", "--variant", "--source", "--tol",
          "--max-sweeps", "--skip-trivial", "--eps-reg", "--preprocess", "--seed",
          "--out", "--config"}) {
        CHECK_MESSAGE(help.find(flag) != std::string::npos, flag);
    }
    CHECK(help.find("gaussian") != std::string::npos);  // kernel default
    CHECK(help.find("median") != std::string::npos);    // bandwidth default
}

TEST_CASE("config files supply values that flags override") {
    testutil::TempDir dir;
    const std::string data = dir.file("data");
    REQUIRE(run_cli("synth --n 30 --views 2 --classes 2 --latent-dim 2 "
                    "--view-dims 3,4 --noise 0.2 --seed 17 --out " +
                    data) == 0);

    testutil::write_text(dir.file("run.cfg"), "k=5\ndims=3,3\nmax-sweeps=7\n");
    const std::string out = dir.file("cfg_run");
    REQUIRE(run_cli("fit --views " + data + "/view_0.csv," + data +
                    "/view_1.csv --config " + dir.file("run.cfg") + " --k 4 --out " +
                    out) == 0);
    const auto manifest =
        nlohmann::json::parse(testutil::read_text(out + "/manifest.json"));
    CHECK(manifest["config"]["k"] == 4);           // flag wins
    CHECK(manifest["config"]["max_sweeps"] == 7);  // file value applies
    CHECK(manifest["config"]["dims"][0] == 3);

    // Unknown keys and invalid values in the config are usage errors.
    testutil::write_text(dir.file("bad_key.cfg"), "dims=3,3\nfrobnicate=1\n");
    CHECK(run_cli("fit --views " + data + "/view_0.csv," + data +
                  "/view_1.csv --config " + dir.file("bad_key.cfg") + " --out " +
                  dir.file("x1")) == 2);
    testutil::write_text(dir.file("bad_value.cfg"), "dims=3,3\nkernel=bogus\n");
    CHECK(run_cli("fit --views " + data + "/view_0.csv," + data +
                  "/view_1.csv --config " + dir.file("bad_value.cfg") + " --out " +
                  dir.file("x2")) == 2);
    // A config file may satisfy a required flag entirely.
    testutil::write_text(dir.file("full.cfg"), "dims=3,3\nk=5\nmax-sweeps=5\n");
    CHECK(run_cli("fit --views " + data + "/view_0.csv," + data +
                  "/view_1.csv --config " + dir.file("full.cfg") + " --out " +
                  dir.file("x3")) == 0);
}
