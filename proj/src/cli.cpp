#include "pswm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pswm/corpus.hpp"
#include "pswm/errors.hpp"
#include "pswm/gradcheck.hpp"
#include "pswm/neural.hpp"
#include "pswm/query.hpp"
#include "pswm/ranker.hpp"
#include "pswm/scoring.hpp"
#include "pswm/training.hpp"

namespace pswm::cli {

namespace {

struct Config {
    std::string corpus_path;
    std::string index_path;
    std::string model_path;
    std::string judgments_path;
    std::string query;
    std::size_t epochs = 5000;
    double learning_rate = 0.5;
    std::int64_t seed = 42;
    std::size_t hidden = 4;
    double cutoff = kDefaultCutoff;
    std::optional<std::size_t> top_k;
    RenderMode mode = RenderMode::text;
    double corrupt = 0.0;
};

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

int cmd_ingest(const Config& cfg, std::ostream& out) {
    const auto docs = parse_corpus_file(cfg.corpus_path);
    const auto index = build_index(docs);
    save_index(index, cfg.index_path);
    out << index.doc_count << " documents, " << index.postings.size() << " distinct tokens -> " << cfg.index_path
        << '\n';
    return kSuccess;
}

int cmd_train(const Config& cfg, std::ostream& out) {
    const auto index = load_index(cfg.index_path);
    const auto judgments = parse_judgments_file(cfg.judgments_path);
    const auto examples = judgments_to_examples(judgments, index);

    const std::size_t sizes[] = {2, cfg.hidden, 1};
    const auto seed = static_cast<std::uint64_t>(cfg.seed);
    Network net = init_weights(sizes, seed);
    if (!judgments.empty()) out << "initial mean error: " << fmt_double(evaluate(net, judgments, index).mean_error) << '\n';
    if (cfg.epochs > 0 && examples.empty()) throw DataError("no judgments to train on");

    auto result = train(std::move(net), examples, cfg.epochs, cfg.learning_rate, seed);
    save_model(result.net, cfg.model_path);
    if (!judgments.empty()) {
        const auto report = evaluate(result.net, judgments, index);
        out << "final mean error: " << fmt_double(report.mean_error) << '\n';
        out << "accuracy@0.5: " << fmt_double(report.accuracy) << '\n';
    }
    out << "trained " << cfg.epochs << " epochs on " << examples.size() << " examples -> " << cfg.model_path << '\n';
    return kSuccess;
}

int cmd_search(const Config& cfg, std::ostream& out) {
    // Parse the query first so an empty query is a usage error even when files are missing.
    const auto tree = build_syntax_tree(cfg.query);
    const auto index = load_index(cfg.index_path);
    const auto net = load_model(cfg.model_path);
    const auto page = format_results(attach_probabilities(analyze(tree, index), net), cfg.cutoff, cfg.top_k, cfg.query);
    out << render(page, cfg.mode);
    return kSuccess;
}

int cmd_eval(const Config& cfg, std::ostream& out) {
    const auto index = load_index(cfg.index_path);
    const auto net = load_model(cfg.model_path);
    const auto judgments = parse_judgments_file(cfg.judgments_path);
    if (judgments.empty()) throw DataError("judgments file contains no judgments");
    const auto report = evaluate(net, judgments, index);
    out << "count: " << report.count << '\n'
        << "mean error: " << fmt_double(report.mean_error) << '\n'
        << "accuracy@0.5: " << fmt_double(report.accuracy) << '\n';
    return kSuccess;
}

int cmd_gradcheck(const Config& cfg, std::ostream& out) {
    GradCheckOptions options;
    options.corrupt_analytic = cfg.corrupt;
    const auto report = run_gradient_check(static_cast<std::uint64_t>(cfg.seed), options);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", report.max_relative_error);
    out << "networks: " << report.networks << ", weights: " << report.weights_checked
        << ", max relative error: " << buf << '\n';
    const bool ok = std::isfinite(report.max_relative_error) && report.max_relative_error <= kGradCheckTolerance;
    out << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? kSuccess : kCheckFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"pswm: probabilistic semantic search with a neural relevance analyzer"};
    app.require_subcommand(1);

    auto* ingest = app.add_subcommand("ingest", "Parse a corpus file and write an inverted index");
    ingest->add_option("--corpus", cfg.corpus_path, "Line-delimited JSON corpus")->required();
    ingest->add_option("--index", cfg.index_path, "Output index file")->required();

    auto* train_cmd = app.add_subcommand("train", "Train the relevance network from judgments");
    train_cmd->add_option("--index", cfg.index_path, "Index file")->required();
    train_cmd->add_option("--judgments", cfg.judgments_path, "query<TAB>doc_id<TAB>label file")->required();
    train_cmd->add_option("--model", cfg.model_path, "Output model file")->required();
    train_cmd->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
    train_cmd->add_option("--lr", cfg.learning_rate, "Learning rate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->add_option("--seed", cfg.seed, "Seed for init and shuffling")->capture_default_str();
    train_cmd->add_option("--hidden", cfg.hidden, "Hidden layer size")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20))
        ->capture_default_str();

    auto* search = app.add_subcommand("search", "Rank documents for a query");
    search->add_option("query", cfg.query, "Query string")->required();
    search->add_option("--index", cfg.index_path, "Index file")->required();
    search->add_option("--model", cfg.model_path, "Model file")->required();
    search->add_option("--cutoff", cfg.cutoff, "Minimum probability")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    search->add_option("--top-k", cfg.top_k, "Maximum number of results")->check(CLI::PositiveNumber);
    const std::map<std::string, RenderMode> modes{{"text", RenderMode::text}, {"machine", RenderMode::machine}};
    search->add_option("--format", cfg.mode, "Output format: text or machine")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));

    auto* eval = app.add_subcommand("eval", "Report error and accuracy of a model on judgments");
    eval->add_option("--index", cfg.index_path, "Index file")->required();
    eval->add_option("--model", cfg.model_path, "Model file")->required();
    eval->add_option("--judgments", cfg.judgments_path, "query<TAB>doc_id<TAB>label file")->required();

    auto* gradcheck = app.add_subcommand("gradcheck", "Compare back-propagated gradients with finite differences");
    gradcheck->add_option("--seed", cfg.seed, "Seed for the random networks")->capture_default_str();
    gradcheck->add_option("--corrupt", cfg.corrupt, "Perturb one analytic gradient (self-test)")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kUsage;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(cfg, out);
        if (train_cmd->parsed()) return cmd_train(cfg, out);
        if (search->parsed()) return cmd_search(cfg, out);
        if (eval->parsed()) return cmd_eval(cfg, out);
        if (gradcheck->parsed()) return cmd_gradcheck(cfg, out);
    } catch (const EmptyQueryError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kData;
    }
    return kUsage;
}

}  // namespace pswm::cli
