#include "textprune/pipeline.hpp"

#include <chrono>
#include <ostream>

#include "textprune/errors.hpp"
#include "textprune/parallel.hpp"
#include "textprune/rng.hpp"

namespace textprune {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Runs one pipeline stage, records its wall time, and tags data errors
// with the stage name.
template <typename Fn>
auto stage(RunReport& report, const char* name, Fn&& fn) {
    const auto start = Clock::now();
    try {
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            report.stages.push_back({name, ms_since(start)});
        } else {
            auto result = fn();
            report.stages.push_back({name, ms_since(start)});
            return result;
        }
    } catch (const DataError& e) {
        throw DataError(std::string(name) + ": " + e.what());
    }
}

void validate(const RunConfig& cfg) {
    if (cfg.input.empty()) throw ConfigError("no input file given");
    if (cfg.fields.empty()) throw ConfigError("no fields configured");
    if (cfg.min_token_length < 1) throw ConfigError("min token length must be >= 1");
    if (cfg.solver.epsilon <= 0.0) throw ConfigError("epsilon must be > 0");
    if (cfg.solver.max_iterations < 1) throw ConfigError("max iterations must be >= 1");
}

ScoreRun score_impl(const RunConfig& cfg, bool emit) {
    validate(cfg);
    const auto start = Clock::now();
    const int threads = resolve_threads(cfg.threads);

    ScoreRun run;
    RunReport& report = run.report;

    run.corpus = stage(report, "load", [&] {
        return load_corpus(cfg.input, LoadSpec{cfg.format, cfg.fields, cfg.label_field});
    });
    report.corpus_size = run.corpus.size();

    const auto tokens = stage(report, "tokenize", [&] {
        return tokenize_corpus(run.corpus, cfg.min_token_length, threads);
    });

    const auto vocab =
        stage(report, "vocab", [&] { return build_vocabulary(tokens, threads); });
    report.vocab_size = vocab.size();

    run.embeddings =
        stage(report, "embed", [&] { return embed(tokens, vocab, cfg.normalize, threads); });

    const MedianResult median = stage(report, "median", [&] {
        return geometric_median(run.embeddings, cfg.solver, threads);
    });
    report.median_iterations = median.iterations;
    report.median_objective = median.objective;
    report.median_converged = median.converged;

    run.scores =
        stage(report, "score", [&] { return fd_scores(run.embeddings, median, threads); });
    report.fd_min = run.scores.min;
    report.fd_mean = run.scores.mean;
    report.fd_max = run.scores.max;

    if (emit && (cfg.emit_scores || cfg.emit_embeddings)) {
        stage(report, "write", [&] {
            std::filesystem::create_directories(cfg.out_dir);
            if (cfg.emit_scores)
                atomic_write_file(cfg.out_dir / "scores.csv", render_scores_csv(run.scores));
            if (cfg.emit_embeddings)
                atomic_write_file(cfg.out_dir / "embeddings.txt",
                                  render_embedding_dump(run.embeddings));
        });
    }
    report.total_ms = ms_since(start);
    return run;
}

}  // namespace

ScoreRun run_score(const RunConfig& cfg) { return score_impl(cfg, /*emit=*/true); }

PruneRun run_prune(const RunConfig& cfg) {
    const auto start = Clock::now();
    PruneRun run;
    run.score = score_impl(cfg, /*emit=*/false);
    RunReport& report = run.score.report;
    const int threads = resolve_threads(cfg.threads);

    PruneConfig prune_cfg = cfg.prune;
    prune_cfg.seed = cfg.seed;
    run.selection = stage(report, "prune", [&] { return prune(run.score.scores, prune_cfg); });
    report.strategy = strategy_name(run.selection.strategy_used);
    report.kept = run.selection.kept.size();

    if (run.selection.strategy_used == PruneStrategy::stratified)
        run.strata = build_strata(run.score.scores, prune_cfg.strata);

    std::optional<ProjectionResult> projection;
    if (cfg.emit_projection) {
        projection = stage(report, "project", [&] {
            return project_top2(run.score.embeddings, cfg.seed, threads);
        });
    }

    stage(report, "write", [&] {
        std::filesystem::create_directories(cfg.out_dir);
        if (cfg.emit_scores)
            atomic_write_file(cfg.out_dir / "scores.csv", render_scores_csv(run.score.scores));
        if (cfg.emit_embeddings)
            atomic_write_file(cfg.out_dir / "embeddings.txt",
                              render_embedding_dump(run.score.embeddings));
        atomic_write_file(cfg.out_dir / "coreset.txt", render_coreset(run.selection));
        if (cfg.emit_strata && !run.strata.empty())
            atomic_write_file(cfg.out_dir / "strata.csv",
                              render_strata_csv(run.strata, run.selection));
        if (projection) {
            std::vector<std::uint8_t> kept(run.score.corpus.size(), 0);
            for (auto id : run.selection.kept) kept[id] = 1;
            atomic_write_file(cfg.out_dir / "projection.csv",
                              render_projection_csv(*projection, kept));
        }
    });

    report.total_ms = ms_since(start);
    return run;
}

void print_report(std::ostream& out, const RunReport& report) {
    out << "corpus: N=" << report.corpus_size << " vocab=" << report.vocab_size << '\n';
    out << "median: iterations=" << report.median_iterations
        << " objective=" << report.median_objective
        << " converged=" << (report.median_converged ? "yes" : "no") << '\n';
    out << "fd: min=" << report.fd_min << " mean=" << report.fd_mean << " max=" << report.fd_max
        << '\n';
    if (!report.strategy.empty())
        out << "prune: strategy=" << report.strategy << " kept=" << report.kept << '\n';
    out << "timing:";
    for (const auto& s : report.stages) out << ' ' << s.stage << '=' << s.ms << "ms";
    out << " total=" << report.total_ms << "ms\n";
}

StatsSummary run_stats(const std::filesystem::path& scores_path, std::ostream& out) {
    const auto rows = read_scores_csv(scores_path);
    std::vector<double> fd;
    fd.reserve(rows.size());
    for (const auto& [_, v] : rows) fd.push_back(v);
    const StatsSummary s = summarize_scores(std::move(fd));
    out << "N=" << s.count << '\n';
    out << "min=" << s.min << " max=" << s.max << " mean=" << s.mean << '\n';
    out << "P1=" << s.p1 << " P25=" << s.p25 << " P50=" << s.p50 << " P75=" << s.p75
        << " P99=" << s.p99 << '\n';
    return s;
}

}  // namespace textprune
