#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "textprune/artifacts.hpp"
#include "textprune/corpus.hpp"
#include "textprune/geomedian.hpp"
#include "textprune/pca.hpp"
#include "textprune/pruner.hpp"
#include "textprune/scoring.hpp"
#include "textprune/vectorizer.hpp"

namespace textprune {

struct RunConfig {
    std::string input;
    CorpusFormat format = CorpusFormat::jsonl;
    std::vector<std::string> fields;
    std::optional<std::string> label_field;
    int min_token_length = 1;
    bool normalize = true;
    SolverConfig solver;
    PruneConfig prune;
    std::filesystem::path out_dir = ".";
    bool emit_scores = false;
    bool emit_strata = false;
    bool emit_projection = false;
    bool emit_embeddings = false;  // debug dump, embeddings.txt
    int threads = 0;  // 0 = all available cores
    std::uint64_t seed = 0;
};

struct StageTime {
    std::string stage;
    double ms = 0.0;
};

struct RunReport {
    std::size_t corpus_size = 0;
    std::uint32_t vocab_size = 0;
    int median_iterations = 0;
    double median_objective = 0.0;
    bool median_converged = false;
    double fd_min = 0.0;
    double fd_mean = 0.0;
    double fd_max = 0.0;
    std::string strategy;  // empty for score-only runs
    std::size_t kept = 0;
    std::vector<StageTime> stages;
    double total_ms = 0.0;
};

struct ScoreRun {
    Corpus corpus;
    EmbeddingMatrix embeddings;
    ScoreSet scores;
    RunReport report;
};

struct PruneRun {
    ScoreRun score;
    CoresetSelection selection;
    std::vector<Stratum> strata;  // populated for stratified runs
};

// corpus -> vectorizer -> geomedian -> scoring. Writes scores.csv to
// out_dir when emit_scores is set. Stage errors carry the stage name.
ScoreRun run_score(const RunConfig& cfg);

// run_score plus pruning. Writes coreset.txt, plus strata.csv (stratified
// runs with emit_strata) and projection.csv (emit_projection).
PruneRun run_prune(const RunConfig& cfg);

void print_report(std::ostream& out, const RunReport& report);

// stats entry point: reads a scores.csv and prints the summary table.
StatsSummary run_stats(const std::filesystem::path& scores_path, std::ostream& out);

}  // namespace textprune
