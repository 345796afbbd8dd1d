#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "textprune/pca.hpp"
#include "textprune/pruner.hpp"
#include "textprune/scoring.hpp"

namespace textprune {

// Writes content to a temp file in the target directory, then renames it
// into place. Every rendered artifact ends with a newline.
void atomic_write_file(const std::filesystem::path& path, std::string_view content);

std::string render_scores_csv(const ScoreSet& scores);

// Debug dump of the embedding matrix: one "row col value" line per stored
// entry, for comparison against dense recomputations.
std::string render_embedding_dump(const EmbeddingMatrix& matrix);
std::string render_coreset(const CoresetSelection& selection);
std::string render_strata_csv(const std::vector<Stratum>& strata,
                              const CoresetSelection& selection);
std::string render_projection_csv(const ProjectionResult& projection,
                                  const std::vector<std::uint8_t>& kept);

// scores.csv reader for the stats command.
std::vector<std::pair<std::uint32_t, double>> read_scores_csv(const std::filesystem::path& path);

struct StatsSummary {
    std::size_t count = 0;
    double min = 0, max = 0, mean = 0;
    double p1 = 0, p25 = 0, p50 = 0, p75 = 0, p99 = 0;
};

// Percentiles by linear interpolation between order statistics.
StatsSummary summarize_scores(std::vector<double> fd);

}  // namespace textprune
