#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "textprune/errors.hpp"
#include "textprune/pipeline.hpp"

namespace {

using textprune::ConfigError;
using textprune::RunConfig;

// Raw CLI state. Flags explicitly passed on the command line override
// config-file values, which override defaults.
struct CliValues {
    std::string config_path;
    std::string input;
    std::string format = "jsonl";
    std::vector<std::string> fields;
    std::string label_field;
    double rate = 0.5;
    std::string strategy = "adaptive";
    std::uint32_t strata = 100;
    std::size_t threshold = 1500;
    double epsilon = 1e-5;
    int max_iterations = 1000;
    std::uint64_t seed = 0;
    bool no_normalize = false;
    std::string out_dir = ".";
    int threads = 0;
    int min_token_length = 1;
    bool emit_scores = false;
    bool emit_strata = false;
    bool emit_projection = false;
    bool emit_embeddings = false;
    bool trace = false;
};

void add_pipeline_options(CLI::App* cmd, CliValues& v, bool needs_rate) {
    cmd->add_option("--config", v.config_path, "JSON config file");
    cmd->add_option("--input", v.input, "input corpus file");
    cmd->add_option("--format", v.format, "input format: jsonl or csv")
        ->check(CLI::IsMember({"jsonl", "csv"}));
    cmd->add_option("--fields", v.fields, "text fields to concatenate, in order")
        ->delimiter(',');
    cmd->add_option("--label-field", v.label_field, "optional label field name");
    auto* rate = cmd->add_option("--rate", v.rate, "pruning rate r in (0,1)");
    if (needs_rate) rate->required(false);  // may come from the config file
    cmd->add_option("--strategy", v.strategy, "adaptive|stratified|furthest|closest|random")
        ->check(CLI::IsMember({"adaptive", "stratified", "furthest", "closest", "random"}));
    cmd->add_option("--strata", v.strata, "number of strata k");
    cmd->add_option("--threshold", v.threshold, "adaptive dispatch size threshold");
    cmd->add_option("--epsilon", v.epsilon, "geometric median accuracy epsilon");
    cmd->add_option("--max-iterations", v.max_iterations, "geometric median iteration cap");
    cmd->add_option("--seed", v.seed, "run seed; stage seeds derive from it");
    cmd->add_flag("--no-normalize", v.no_normalize, "skip L2 row normalization");
    cmd->add_option("--out-dir", v.out_dir, "output directory");
    cmd->add_option("--threads", v.threads, "worker threads (0 = all cores)");
    cmd->add_option("--min-token-length", v.min_token_length, "minimum token length");
    cmd->add_flag("--emit-scores", v.emit_scores, "write scores.csv");
    cmd->add_flag("--emit-strata", v.emit_strata, "write strata.csv (stratified runs)");
    cmd->add_flag("--emit-projection", v.emit_projection, "write projection.csv");
    cmd->add_flag("--emit-embeddings", v.emit_embeddings, "debug-dump the embedding matrix");
    cmd->add_flag("--trace", v.trace, "log median solver iterations to stderr");
}

template <typename T>
void from_config(const nlohmann::json& cfg, const char* key, T& out) {
    if (auto it = cfg.find(key); it != cfg.end()) out = it->get<T>();
}

RunConfig build_config(const CLI::App* cmd, CliValues& v, bool default_emit_scores = false) {
    RunConfig cfg;
    cfg.emit_scores = default_emit_scores;

    if (cmd->count("--config") > 0) {
        std::ifstream in(v.config_path);
        if (!in) throw ConfigError("cannot open config file: " + v.config_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("malformed config file: " + std::string(e.what()));
        }
        from_config(j, "input", cfg.input);
        if (j.contains("format")) cfg.format = textprune::parse_format(j["format"].get<std::string>());
        from_config(j, "fields", cfg.fields);
        if (j.contains("label_field")) cfg.label_field = j["label_field"].get<std::string>();
        from_config(j, "normalize", cfg.normalize);
        from_config(j, "min_token_length", cfg.min_token_length);
        from_config(j, "epsilon", cfg.solver.epsilon);
        from_config(j, "max_iterations", cfg.solver.max_iterations);
        from_config(j, "rate", cfg.prune.rate);
        if (j.contains("strategy"))
            cfg.prune.strategy = textprune::parse_strategy(j["strategy"].get<std::string>());
        from_config(j, "strata", cfg.prune.strata);
        from_config(j, "threshold", cfg.prune.size_threshold);
        from_config(j, "seed", cfg.seed);
        from_config(j, "threads", cfg.threads);
        if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
        from_config(j, "emit_scores", cfg.emit_scores);
        from_config(j, "emit_strata", cfg.emit_strata);
        from_config(j, "emit_projection", cfg.emit_projection);
        from_config(j, "emit_embeddings", cfg.emit_embeddings);
    }

    auto passed = [&](const char* name) { return cmd->count(name) > 0; };
    if (passed("--input")) cfg.input = v.input;
    if (passed("--format")) cfg.format = textprune::parse_format(v.format);
    if (passed("--fields")) cfg.fields = v.fields;
    if (passed("--label-field")) cfg.label_field = v.label_field;
    if (passed("--rate")) cfg.prune.rate = v.rate;
    if (passed("--strategy")) cfg.prune.strategy = textprune::parse_strategy(v.strategy);
    if (passed("--strata")) cfg.prune.strata = v.strata;
    if (passed("--threshold")) cfg.prune.size_threshold = v.threshold;
    if (passed("--epsilon")) cfg.solver.epsilon = v.epsilon;
    if (passed("--max-iterations")) cfg.solver.max_iterations = v.max_iterations;
    if (passed("--seed")) cfg.seed = v.seed;
    if (passed("--no-normalize")) cfg.normalize = false;
    if (passed("--out-dir")) cfg.out_dir = v.out_dir;
    if (passed("--threads")) cfg.threads = v.threads;
    if (passed("--min-token-length")) cfg.min_token_length = v.min_token_length;
    if (passed("--emit-scores")) cfg.emit_scores = true;
    if (passed("--emit-strata")) cfg.emit_strata = true;
    if (passed("--emit-projection")) cfg.emit_projection = true;
    if (passed("--emit-embeddings")) cfg.emit_embeddings = true;
    if (v.trace) cfg.solver.trace = &std::cerr;

    if (!(cfg.prune.rate > 0.0 && cfg.prune.rate < 1.0))
        throw ConfigError("pruning rate must satisfy 0 < r < 1, got " +
                          std::to_string(cfg.prune.rate));
    return cfg;
}

int finish(const textprune::RunReport& report) {
    textprune::print_report(std::cout, report);
    if (!report.median_converged) {
        std::cerr << "warning: median solver hit the iteration cap without converging\n";
        return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Model-free text dataset pruning: TF-IDF embeddings scored by distance to the "
                 "corpus geometric median, with size-adaptive coreset selection"};
    app.require_subcommand(1);

    CliValues v;
    auto* score = app.add_subcommand("score", "compute per-sample scores");
    add_pipeline_options(score, v, false);
    auto* prune = app.add_subcommand("prune", "select a coreset");
    add_pipeline_options(prune, v, true);
    auto* project = app.add_subcommand("project", "emit 2-D PCA coordinates of the selection");
    add_pipeline_options(project, v, true);

    auto* stats = app.add_subcommand("stats", "summarize a scores.csv file");
    std::string stats_input;
    stats->add_option("--input", stats_input, "scores.csv path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (stats->parsed()) {
            textprune::run_stats(stats_input, std::cout);
            return 0;
        }
        if (score->parsed()) {
            RunConfig cfg = build_config(score, v, /*default_emit_scores=*/true);
            return finish(textprune::run_score(cfg).report);
        }
        if (prune->parsed()) {
            RunConfig cfg = build_config(prune, v);
            return finish(textprune::run_prune(cfg).score.report);
        }
        if (project->parsed()) {
            RunConfig cfg = build_config(project, v);
            cfg.emit_projection = true;
            return finish(textprune::run_prune(cfg).score.report);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const textprune::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
