#include "textprune/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "textprune/errors.hpp"
#include "textprune/parallel.hpp"

namespace textprune {
namespace {

void finalize(ScoreSet& set) {
    set.sorted_fd.clear();
    set.sorted_fd.reserve(set.scores.size());
    for (const auto& [_, fd] : set.scores) {
        if (!(fd >= 0.0) || !std::isfinite(fd))
            throw DataError("score must be finite and non-negative, got " + std::to_string(fd));
        set.sorted_fd.push_back(fd);
    }
    std::sort(set.sorted_fd.begin(), set.sorted_fd.end());
    set.min = set.sorted_fd.front();
    set.max = set.sorted_fd.back();
    set.mean = pairwise_sum(set.sorted_fd) / static_cast<double>(set.sorted_fd.size());
}

}  // namespace

ScoreSet fd_scores(const EmbeddingMatrix& points, const MedianResult& median, int threads) {
    const std::vector<double> d = point_distances(points, median.point, threads);
    ScoreSet set;
    set.median_point = median;
    set.scores.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        set.scores.emplace_back(static_cast<std::uint32_t>(i), d[i]);
    finalize(set);
    return set;
}

ScoreSet make_score_set(std::vector<std::pair<std::uint32_t, double>> scores) {
    if (scores.empty()) throw std::invalid_argument("score set must be non-empty");
    ScoreSet set;
    set.scores = std::move(scores);
    finalize(set);
    return set;
}

double percentile_rank(const ScoreSet& scores, std::uint32_t doc_id) {
    const std::pair<std::uint32_t, double>* found = nullptr;
    // Documents produced by the pipeline have id == position; fall back to
    // a scan for score sets with arbitrary ids.
    if (doc_id < scores.scores.size() && scores.scores[doc_id].first == doc_id) {
        found = &scores.scores[doc_id];
    } else {
        for (const auto& s : scores.scores)
            if (s.first == doc_id) {
                found = &s;
                break;
            }
    }
    if (!found) throw std::invalid_argument("unknown doc_id " + std::to_string(doc_id));
    const auto smaller = std::lower_bound(scores.sorted_fd.begin(), scores.sorted_fd.end(),
                                          found->second) -
                         scores.sorted_fd.begin();
    return 100.0 * static_cast<double>(smaller) / static_cast<double>(scores.sorted_fd.size());
}

}  // namespace textprune
