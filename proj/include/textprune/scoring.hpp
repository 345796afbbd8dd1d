#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "textprune/geomedian.hpp"
#include "textprune/vectorizer.hpp"

namespace textprune {

// Distance-to-median scores: fd_i = ||t_i - g_eps||_2 for every sample,
// in document order, with summary statistics and a sorted copy for
// percentile queries.
struct ScoreSet {
    std::vector<std::pair<std::uint32_t, double>> scores;  // (doc_id, fd)
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    MedianResult median_point;
    std::vector<double> sorted_fd;

    std::size_t size() const { return scores.size(); }
};

ScoreSet fd_scores(const EmbeddingMatrix& points, const MedianResult& median, int threads = 1);

// Builds a ScoreSet from raw (doc_id, fd) pairs; used by the stats command
// and by tests that need synthetic score sets.
ScoreSet make_score_set(std::vector<std::pair<std::uint32_t, double>> scores);

// Fraction of samples with strictly smaller fd, times 100. Ties share the
// lower rank.
double percentile_rank(const ScoreSet& scores, std::uint32_t doc_id);

}  // namespace textprune
