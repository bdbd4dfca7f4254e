// mvlle command-line front end: `synth` generates datasets, `fit` runs the
// multi-view embedding solver, `eval` scores stored embeddings. Every run
// writes a manifest (resolved config + input digests) before any result
// file; result files are written atomically. Diagnostics go to stderr,
// data only to files. Exit codes: 0 success, 2 usage error, 1 runtime
// failure.
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mvlle/csv.hpp"
#include "mvlle/dataset.hpp"
#include "mvlle/eval.hpp"
#include "mvlle/graphs.hpp"
#include "mvlle/solver.hpp"
#include "mvlle/version.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Missing or inconsistent command-line input; reported as exit status 2.
class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trimmed(const std::string& s) {
    const std::size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const std::size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Flat key=value config file; '#' starts a comment line. Values are fed
// through the matching option's own parser, and only for options the
// command line did not set, so flags always win.
void apply_config(CLI::App* command, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::string line;
    while (std::getline(in, line)) {
        const std::string entry = trimmed(line);
        if (entry.empty() || entry[0] == '#') continue;
        const std::size_t equals = entry.find('=');
        if (equals == std::string::npos) {
            throw UsageError("config: expected key=value, got '" + entry + "'");
        }
        const std::string key = trimmed(entry.substr(0, equals));
        const std::string value = trimmed(entry.substr(equals + 1));
        CLI::Option* option = command->get_option_no_throw("--" + key);
        if (option == nullptr || key == "config") {
            throw UsageError("config: unknown key '" + key + "'");
        }
        if (option->count() > 0) continue;
        try {
            option->add_result(value);
            option->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("config: invalid value for '" + key + "': " + e.what());
        }
    }
}

void require_flag(bool present, const char* flag) {
    if (!present) {
        throw UsageError(std::string(flag) + " is required (flag or config file)");
    }
}

std::string iso_utc_now() {
    const std::time_t now = std::time(nullptr);
    char buffer[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buffer;
}

struct SynthArgs {
    std::string config;
    int n = 0;
    int views = 0;
    int classes = 0;
    int latent_dim = 0;
    std::vector<int> view_dims;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

struct FitArgs {
    std::string config;
    std::vector<std::string> views;
    bool header = false;
    int k = 8;
    std::vector<int> dims;
    double lambda_c = 0.5;
    double lambda_r = 0.0;
    std::string kernel = "gaussian";
    int degree = 2;
    double offset = 1.0;
    std::string bandwidth = "median";
    std::string variant = "normalized_le";
    std::string source = "embedding";
    double tol = 1e-6;
    int max_sweeps = 50;
    bool skip_trivial = true;
    double eps_reg = 1e-3;
    std::string preprocess = "zscore";
    std::uint64_t seed = 0;
    std::string out;
};

struct EvalArgs {
    std::string config;
    std::vector<std::string> embeddings;
    std::string labels;
    std::string task;
    double train_ratio = 0.5;
    int repeats = 30;
    std::uint64_t seed = 0;
    std::string metric;  // empty = task default (classify: l2, retrieve: l1)
    int top_k = 2;
    std::string out;
};

mvlle::KernelSpec make_kernel(const FitArgs& args) {
    if (args.kernel == "linear") return mvlle::KernelSpec::linear();
    if (args.kernel == "polynomial") {
        return mvlle::KernelSpec::polynomial(args.degree, args.offset);
    }
    if (args.bandwidth == "median") return mvlle::KernelSpec::gaussian_median();
    return mvlle::KernelSpec::gaussian(std::stod(args.bandwidth));
}

mvlle::ConsensusVariant make_variant(const FitArgs& args) {
    mvlle::ConsensusVariant variant;
    if (args.variant == "normalized_le") {
        variant.kind = mvlle::ConsensusVariant::Kind::normalized_le;
    } else if (args.variant == "unnormalized_le") {
        variant.kind = mvlle::ConsensusVariant::Kind::unnormalized_le;
    } else if (args.variant == "reconstruction") {
        variant.kind = mvlle::ConsensusVariant::Kind::reconstruction;
    } else {
        variant.kind = mvlle::ConsensusVariant::Kind::hsic_centered;
    }
    variant.source = args.source == "input" ? mvlle::ConsensusVariant::Source::input
                                            : mvlle::ConsensusVariant::Source::embedding;
    return variant;
}

mvlle::FitConfig make_fit_config(const FitArgs& args, int n_views) {
    mvlle::FitConfig config;
    config.k = args.k;
    config.dims = args.dims;
    config.lambda_c = args.lambda_c;
    config.lambda_r = args.lambda_r;
    config.kernel = make_kernel(args);
    config.variant = make_variant(args);
    config.tol = args.tol;
    config.max_sweeps = args.max_sweeps;
    config.skip_trivial = args.skip_trivial;
    config.eps_reg = args.eps_reg;
    config.preprocess = args.preprocess == "none" ? mvlle::FitConfig::Preprocess::none
                                                  : mvlle::FitConfig::Preprocess::zscore;
    config.seed = args.seed;
    if (config.dims.size() == 1 && n_views > 1) {
        // One value broadcast to all views.
        config.dims.assign(static_cast<std::size_t>(n_views), config.dims[0]);
    }
    return config;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const json& config, const std::vector<std::string>& input_paths,
                    std::uint64_t seed) {
    json inputs = json::object();
    for (const std::string& path : input_paths) {
        inputs[path] = mvlle::file_digest(path);
    }
    const json manifest = {
        {"tool", "mvlle"},
        {"version", mvlle::kVersion},
        {"command", command},
        {"seed", seed},
        {"created_utc", iso_utc_now()},
        {"config", config},
        {"inputs", inputs},
    };
    mvlle::write_file_atomic((fs::path(out_dir) / "manifest.json").string(),
                             manifest.dump(2) + "\n");
}

int run_synth(const SynthArgs& args) {
    require_flag(args.n > 0, "--n");
    require_flag(args.views > 0, "--views");
    require_flag(args.classes > 0, "--classes");
    require_flag(args.latent_dim > 0, "--latent-dim");
    require_flag(!args.view_dims.empty(), "--view-dims");
    require_flag(!args.out.empty(), "--out");
    fs::create_directories(args.out);
    const json config = {
        {"n", args.n},
        {"views", args.views},
        {"classes", args.classes},
        {"latent_dim", args.latent_dim},
        {"view_dims", args.view_dims},
        {"noise", args.noise},
        {"seed", args.seed},
    };
    write_manifest(args.out, "synth", config, {}, args.seed);

    const mvlle::MultiViewDataset dataset = mvlle::synth_multiview(
        args.n, args.views, args.classes, args.latent_dim, args.view_dims, args.noise,
        args.seed);
    std::vector<std::string> paths;
    for (int v = 0; v < args.views; ++v) {
        paths.push_back(
            (fs::path(args.out) / ("view_" + std::to_string(v) + ".csv")).string());
    }
    mvlle::write_views(dataset, paths, (fs::path(args.out) / "labels.csv").string());
    std::cerr << "synth: wrote " << args.views << " views with " << args.n
              << " samples to " << args.out << "\n";
    return 0;
}

json fit_config_json(const FitArgs& args, const mvlle::FitConfig& config) {
    json out = {
        {"views", args.views},
        {"header", args.header},
        {"k", config.k},
        {"dims", config.dims},
        {"lambda_c", config.lambda_c},
        {"lambda_r", config.lambda_r},
        {"kernel", args.kernel},
        {"variant", args.variant},
        {"source", args.source},
        {"tol", config.tol},
        {"max_sweeps", config.max_sweeps},
        {"skip_trivial", config.skip_trivial},
        {"eps_reg", config.eps_reg},
        {"preprocess", args.preprocess},
        {"seed", config.seed},
    };
    if (args.kernel == "polynomial") {
        out["degree"] = config.kernel.degree;
        out["offset"] = config.kernel.offset;
    }
    if (args.kernel == "gaussian") {
        out["bandwidth"] = args.bandwidth;
    }
    return out;
}

int run_fit(const FitArgs& args) {
    require_flag(!args.views.empty(), "--views");
    require_flag(!args.dims.empty(), "--dims");
    require_flag(!args.out.empty(), "--out");
    const mvlle::MultiViewDataset dataset =
        mvlle::load_views(args.views, "", args.header);
    const mvlle::FitConfig config = make_fit_config(args, dataset.n_views());

    fs::create_directories(args.out);
    write_manifest(args.out, "fit", fit_config_json(args, config), args.views,
                   config.seed);

    const mvlle::FitResult result = mvlle::fit(dataset, config);

    for (std::size_t v = 0; v < result.embeddings.size(); ++v) {
        const Eigen::MatrixXd& u = result.embeddings[v];
        const std::string comment = "embedding view " + std::to_string(v) + ": " +
                                    std::to_string(u.rows()) + " dims x " +
                                    std::to_string(u.cols()) +
                                    " samples (rows are dims)";
        mvlle::write_file_atomic(
            (fs::path(args.out) / ("embedding_" + std::to_string(v) + ".csv")).string(),
            mvlle::format_csv_matrix(u, comment));
    }

    std::string convergence = "sweep,objective\n";
    char line[64];
    for (std::size_t t = 0; t < result.objective_trace.size(); ++t) {
        std::snprintf(line, sizeof(line), "%zu,%.17g\n", t, result.objective_trace[t]);
        convergence += line;
    }
    mvlle::write_file_atomic((fs::path(args.out) / "convergence.csv").string(),
                             convergence);

    const json summary = {
        {"converged", result.converged},
        {"sweeps", result.sweeps},
        {"objective_final", result.objective_trace.back()},
    };
    mvlle::write_file_atomic((fs::path(args.out) / "summary.json").string(),
                             summary.dump(2) + "\n");
    std::cerr << "fit: " << (result.converged ? "converged" : "stopped") << " after "
              << result.sweeps << " sweeps, objective " << result.objective_trace.back()
              << "\n";
    return 0;
}

int run_eval(const EvalArgs& args) {
    require_flag(!args.embeddings.empty(), "--embeddings");
    require_flag(!args.labels.empty(), "--labels");
    require_flag(!args.task.empty(), "--task");
    require_flag(!args.out.empty(), "--out");
    std::vector<Eigen::MatrixXd> embeddings;
    for (const std::string& path : args.embeddings) {
        embeddings.push_back(mvlle::read_csv_matrix(path));
    }
    const Eigen::MatrixXd stacked = mvlle::concat_embeddings(embeddings);
    const std::vector<std::string> labels = mvlle::read_label_lines(args.labels);

    const json config = {
        {"embeddings", args.embeddings},
        {"labels", args.labels},
        {"task", args.task},
        {"train_ratio", args.train_ratio},
        {"repeats", args.repeats},
        {"seed", args.seed},
        {"metric", args.metric},
        {"top_k", args.top_k},
    };
    fs::create_directories(args.out);
    std::vector<std::string> inputs = args.embeddings;
    inputs.push_back(args.labels);
    write_manifest(args.out, "eval", config, inputs, args.seed);

    json report;
    if (args.task == "classify") {
        const mvlle::Metric metric =
            args.metric == "l1" ? mvlle::Metric::l1 : mvlle::Metric::l2;
        const mvlle::ClassificationReport scores = mvlle::classify_embeddings(
            stacked, labels, args.train_ratio, args.repeats, args.seed, metric);
        report = {
            {"mean_accuracy", scores.mean_accuracy},
            {"max_accuracy", scores.max_accuracy},
        };
        std::cerr << "eval classify: mean " << scores.mean_accuracy << ", max "
                  << scores.max_accuracy << " over " << scores.repeats << " repeats\n";
    } else {
        const mvlle::Metric metric =
            args.metric == "l2" ? mvlle::Metric::l2 : mvlle::Metric::l1;
        const mvlle::RetrievalReport scores =
            mvlle::retrieval_protocol(stacked, labels, args.top_k, metric);
        report = {
            {"precision", scores.precision},
            {"recall", scores.recall},
            {"map", scores.map},
            {"f1_standard", scores.f1_standard},
            {"f1_paper", scores.f1_paper},
        };
        std::cerr << "eval retrieve: precision " << scores.precision << ", recall "
                  << scores.recall << ", map " << scores.map << " at top " << scores.top_k
                  << "\n";
    }
    mvlle::write_file_atomic((fs::path(args.out) / "report.json").string(),
                             report.dump(2) + "\n");
    return 0;
}

std::string positive_or_median(const std::string& value) {
    if (value == "median") return "";
    try {
        if (std::stod(value) > 0.0) return "";
    } catch (...) {
    }
    return "bandwidth must be 'median' or a positive number";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-view locally-linear graph embedding"};
    app.require_subcommand(1);

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
    synth_cmd->add_option("--config", synth.config, "key=value config file");
    synth_cmd->add_option("--n", synth.n, "Sample count (required)");
    synth_cmd->add_option("--views", synth.views, "View count (required)");
    synth_cmd->add_option("--classes", synth.classes, "Class count (required)");
    synth_cmd->add_option("--latent-dim", synth.latent_dim,
                          "Latent dimensionality (required)");
    synth_cmd->add_option("--view-dims", synth.view_dims,
                          "Feature count per view (required)")
        ->delimiter(',');
    synth_cmd->add_option("--noise", synth.noise, "View noise sigma")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
    synth_cmd->add_option("--out", synth.out, "Output directory (required)");

    FitArgs fit_args;
    CLI::App* fit_cmd = app.add_subcommand("fit", "Fit the multi-view embedding");
    fit_cmd->add_option("--config", fit_args.config, "key=value config file");
    fit_cmd->add_option("--views", fit_args.views, "View CSV files (required)")
        ->delimiter(',');
    fit_cmd->add_flag("--header", fit_args.header, "View files carry a header row")
        ->capture_default_str();
    fit_cmd->add_option("--k", fit_args.k, "Neighbor count")->capture_default_str();
    fit_cmd
        ->add_option("--dims", fit_args.dims,
                     "Embedding dims per view, one value broadcast (required)")
        ->delimiter(',');
    fit_cmd->add_option("--lambda-c", fit_args.lambda_c, "Consensus weight")
        ->capture_default_str();
    fit_cmd
        ->add_option("--lambda-r", fit_args.lambda_r,
                     "Smoothness weight (kept for configs; unused by the objective)")
        ->capture_default_str();
    fit_cmd->add_option("--kernel", fit_args.kernel, "Kernel kind")
        ->check(CLI::IsMember({"linear", "polynomial", "gaussian"}))
        ->capture_default_str();
    fit_cmd->add_option("--degree", fit_args.degree, "Polynomial kernel degree")
        ->capture_default_str();
    fit_cmd->add_option("--offset", fit_args.offset, "Polynomial kernel offset")
        ->capture_default_str();
    fit_cmd
        ->add_option("--bandwidth", fit_args.bandwidth, "Gaussian bandwidth or 'median'")
        ->check(positive_or_median)
        ->capture_default_str();
    fit_cmd->add_option("--variant", fit_args.variant, "Consensus operator")
        ->check(CLI::IsMember(
            {"normalized_le", "unnormalized_le", "reconstruction", "hsic_centered"}))
        ->capture_default_str();
    fit_cmd->add_option("--source", fit_args.source, "Consensus graph source")
        ->check(CLI::IsMember({"embedding", "input"}))
        ->capture_default_str();
    fit_cmd->add_option("--tol", fit_args.tol, "Relative convergence tolerance")
        ->capture_default_str();
    fit_cmd->add_option("--max-sweeps", fit_args.max_sweeps, "Sweep limit")
        ->capture_default_str();
    fit_cmd
        ->add_flag("--skip-trivial,!--no-skip-trivial", fit_args.skip_trivial,
                   "Skip the trivial constant eigenvector")
        ->capture_default_str();
    fit_cmd->add_option("--eps-reg", fit_args.eps_reg, "LLE Gram regularization")
        ->capture_default_str();
    fit_cmd->add_option("--preprocess", fit_args.preprocess, "Per-view preprocessing")
        ->check(CLI::IsMember({"none", "zscore"}))
        ->capture_default_str();
    fit_cmd->add_option("--seed", fit_args.seed, "Recorded run seed")
        ->capture_default_str();
    fit_cmd->add_option("--out", fit_args.out, "Output directory (required)");

    EvalArgs eval_args;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate stored embeddings");
    eval_cmd->add_option("--config", eval_args.config, "key=value config file");
    eval_cmd->add_option("--embeddings", eval_args.embeddings,
                         "Embedding CSV files (required)")
        ->delimiter(',');
    eval_cmd->add_option("--labels", eval_args.labels, "Label file (required)");
    eval_cmd->add_option("--task", eval_args.task, "Evaluation task (required)")
        ->check(CLI::IsMember({"classify", "retrieve"}));
    eval_cmd->add_option("--train-ratio", eval_args.train_ratio, "Train fraction")
        ->capture_default_str();
    eval_cmd->add_option("--repeats", eval_args.repeats, "Split repeats")
        ->capture_default_str();
    eval_cmd->add_option("--seed", eval_args.seed, "Base split seed")
        ->capture_default_str();
    eval_cmd
        ->add_option("--metric", eval_args.metric,
                     "Distance metric (default: l2 for classify, l1 for retrieve)")
        ->check(CLI::IsMember({"l1", "l2"}));
    eval_cmd->add_option("--top-k", eval_args.top_k, "Retrieval cutoff")
        ->capture_default_str();
    eval_cmd->add_option("--out", eval_args.out, "Output directory (required)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(synth_cmd)) {
            if (!synth.config.empty()) apply_config(synth_cmd, synth.config);
            return run_synth(synth);
        }
        if (app.got_subcommand(fit_cmd)) {
            if (!fit_args.config.empty()) apply_config(fit_cmd, fit_args.config);
            return run_fit(fit_args);
        }
        if (!eval_args.config.empty()) apply_config(eval_cmd, eval_args.config);
        return run_eval(eval_args);
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\nRun with --help for more information.\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
