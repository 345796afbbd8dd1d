#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "textprune/scoring.hpp"

using namespace textprune;

TEST_CASE("fd_scores: sample at the median scores zero, sum matches objective") {
    const oracles::DenseMatrix pts = {{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    const auto matrix = oracles::matrix_from_dense(pts);
    const auto median = geometric_median(matrix);
    const auto scores = fd_scores(matrix, median);

    REQUIRE(scores.size() == pts.size());
    CHECK(scores.scores[0].second == 0.0);  // row equal to g_eps
    const double sum = scores.mean * static_cast<double>(scores.size());
    CHECK(std::abs(sum - median.objective) <= 1e-6 * median.objective);
    CHECK(scores.min <= scores.mean);
    CHECK(scores.mean <= scores.max);
}

TEST_CASE("fd_scores: five-point toy matrix matches direct recomputation") {
    const auto pts = oracles::random_points(21, 5, 4);
    const auto matrix = oracles::matrix_from_dense(pts);
    const auto median = geometric_median(matrix);
    const auto scores = fd_scores(matrix, median);

    for (std::size_t i = 0; i < pts.size(); ++i) {
        double sq = 0.0;
        for (std::size_t j = 0; j < pts[i].size(); ++j) {
            const double d = pts[i][j] - median.point[j];
            sq += d * d;
        }
        CHECK(scores.scores[i].second == doctest::Approx(std::sqrt(sq)).epsilon(1e-12));
    }
}

TEST_CASE("fd_scores: dimension mismatch") {
    const auto matrix = oracles::matrix_from_dense({{1.0, 2.0}});
    MedianResult median;
    median.point = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(fd_scores(matrix, median), std::invalid_argument);
}

TEST_CASE("percentile_rank: strict-smaller fraction, ties share the lower rank") {
    const auto set = make_score_set({{0, 0.3}, {1, 0.1}, {2, 0.3}, {3, 0.9}});
    CHECK(percentile_rank(set, 1) == 0.0);                // unique minimum
    CHECK(percentile_rank(set, 0) == 25.0);               // one strictly smaller
    CHECK(percentile_rank(set, 2) == 25.0);               // tie shares the rank
    CHECK(percentile_rank(set, 3) == 75.0);               // (N-1)/N * 100
    CHECK_THROWS_AS(percentile_rank(set, 99), std::invalid_argument);
}

TEST_CASE("percentile_rank: unique maximum approaches 100 for large N") {
    std::vector<std::pair<std::uint32_t, double>> scores;
    const std::size_t n = 105000;
    for (std::size_t i = 0; i < n; ++i)
        scores.emplace_back(static_cast<std::uint32_t>(i),
                            i + 1 == n ? 1.009 : 0.9 + 0.05 * static_cast<double>(i) /
                                                           static_cast<double>(n));
    const auto set = make_score_set(std::move(scores));
    const double rank = percentile_rank(set, static_cast<std::uint32_t>(n - 1));
    CHECK(rank == 100.0 * static_cast<double>(n - 1) / static_cast<double>(n));
    CHECK(rank > 99.99);
    CHECK(rank < 100.0);
}

TEST_CASE("percentile_rank: all scores equal") {
    const auto set = make_score_set({{0, 0.5}, {1, 0.5}, {2, 0.5}});
    for (std::uint32_t id = 0; id < 3; ++id) CHECK(percentile_rank(set, id) == 0.0);
}

TEST_CASE("scores are invariant under document reordering") {
    const auto a = make_score_set({{0, 0.4}, {1, 0.2}, {2, 0.8}});
    const auto b = make_score_set({{2, 0.8}, {0, 0.4}, {1, 0.2}});
    for (std::uint32_t id = 0; id < 3; ++id)
        CHECK(percentile_rank(a, id) == percentile_rank(b, id));
}

TEST_CASE("scaling all embeddings scales fd and preserves the ranking") {
    const auto pts = oracles::random_points(31, 40, 5);
    oracles::DenseMatrix scaled = pts;
    const double c = 2.5;
    for (auto& p : scaled)
        for (auto& v : p) v *= c;

    SolverConfig cfg;
    cfg.epsilon = 1e-9;
    const auto m1 = oracles::matrix_from_dense(pts);
    const auto m2 = oracles::matrix_from_dense(scaled);
    const auto s1 = fd_scores(m1, geometric_median(m1, cfg));
    const auto s2 = fd_scores(m2, geometric_median(m2, cfg));

    auto ranking = [](const ScoreSet& s) {
        std::vector<std::uint32_t> ids(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) ids[i] = s.scores[i].first;
        std::stable_sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
            return s.scores[a].second < s.scores[b].second;
        });
        return ids;
    };
    CHECK(ranking(s1) == ranking(s2));
    for (std::size_t i = 0; i < s1.size(); ++i)
        CHECK(s2.scores[i].second == doctest::Approx(c * s1.scores[i].second).epsilon(1e-6));
}

TEST_CASE("make_score_set rejects empty and non-finite input") {
    CHECK_THROWS_AS(make_score_set({}), std::invalid_argument);
    CHECK_THROWS(make_score_set({{0, -1.0}}));
}
