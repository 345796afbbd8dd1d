#include "textprune/geomedian.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "textprune/parallel.hpp"

namespace textprune {
namespace {

constexpr std::size_t kBlock = 2048;
constexpr double kTerminationSafety = 1.0 / 16.0;

std::vector<double> row_squared_norms(const EmbeddingMatrix& points, int threads) {
    std::vector<double> sq(points.size());
    parallel_for(points.size(), kBlock, threads,
                 [&](std::size_t i) { sq[i] = points.rows[i].squared_norm(); });
    return sq;
}

void check_dim(const EmbeddingMatrix& points, const DenseVector& g) {
    if (g.size() != points.dim)
        throw std::invalid_argument("dimension mismatch: point dim " + std::to_string(points.dim) +
                                    " vs vector dim " + std::to_string(g.size()));
}

// Per-iteration statistics at the iterate y. Per-block partials keep the
// reduction order fixed regardless of thread count.
struct IterationStats {
    double f = 0.0;            // sum of distances over all points
    DenseVector weighted_sum;  // sum of t_i / d_i over non-coincident points
    double inv_dist_sum = 0.0; // sum of 1 / d_i over non-coincident points
    std::size_t coincident = 0;
};

class StatsAccumulator {
public:
    StatsAccumulator(const EmbeddingMatrix& points, std::vector<double> sqnorms, int threads)
        : points_(points),
          sqnorms_(std::move(sqnorms)),
          threads_(threads),
          num_blocks_((points.size() + kBlock - 1) / kBlock),
          distances_(points.size()),
          partial_sums_(num_blocks_, DenseVector(points.dim, 0.0)),
          partial_inv_(num_blocks_),
          partial_coincident_(num_blocks_) {}

    IterationStats compute(const DenseVector& y, double coincidence_tolerance) {
        const double y_sqnorm = dense_squared_norm(y);
        parallel_blocks(points_.size(), kBlock, threads_,
                        [&](std::size_t b, std::size_t lo, std::size_t hi) {
                            DenseVector& num = partial_sums_[b];
                            std::fill(num.begin(), num.end(), 0.0);
                            double inv = 0.0;
                            std::size_t eta = 0;
                            for (std::size_t i = lo; i < hi; ++i) {
                                const SparseVector& t = points_.rows[i];
                                const double d =
                                    sparse_dense_distance(t, sqnorms_[i], y, y_sqnorm);
                                distances_[i] = d;
                                if (d <= coincidence_tolerance) {
                                    ++eta;
                                } else {
                                    const double w = 1.0 / d;
                                    inv += w;
                                    t.add_scaled_into(num, w);
                                }
                            }
                            partial_inv_[b] = inv;
                            partial_coincident_[b] = eta;
                        });

        IterationStats stats;
        stats.weighted_sum.assign(points_.dim, 0.0);
        for (std::size_t b = 0; b < num_blocks_; ++b) {
            for (std::size_t j = 0; j < points_.dim; ++j)
                stats.weighted_sum[j] += partial_sums_[b][j];
            stats.inv_dist_sum += partial_inv_[b];
            stats.coincident += partial_coincident_[b];
        }
        stats.f = pairwise_sum(distances_);
        return stats;
    }

    const std::vector<double>& sqnorms() const { return sqnorms_; }

private:
    const EmbeddingMatrix& points_;
    std::vector<double> sqnorms_;
    int threads_;
    std::size_t num_blocks_;
    std::vector<double> distances_;
    std::vector<DenseVector> partial_sums_;
    std::vector<double> partial_inv_;
    std::vector<std::size_t> partial_coincident_;
};

DenseVector coordinate_mean(const EmbeddingMatrix& points, int threads) {
    const std::size_t num_blocks = (points.size() + kBlock - 1) / kBlock;
    std::vector<DenseVector> partials(num_blocks, DenseVector(points.dim, 0.0));
    parallel_blocks(points.size(), kBlock, threads,
                    [&](std::size_t b, std::size_t lo, std::size_t hi) {
                        for (std::size_t i = lo; i < hi; ++i)
                            points.rows[i].add_scaled_into(partials[b], 1.0);
                    });
    DenseVector mean(points.dim, 0.0);
    for (const auto& partial : partials)
        for (std::size_t j = 0; j < points.dim; ++j) mean[j] += partial[j];
    const double n = static_cast<double>(points.size());
    for (auto& v : mean) v /= n;
    return mean;
}

}  // namespace

std::vector<double> point_distances(const EmbeddingMatrix& points, const DenseVector& g,
                                    int threads) {
    check_dim(points, g);
    const double g_sqnorm = dense_squared_norm(g);
    std::vector<double> d(points.size());
    parallel_for(points.size(), kBlock, threads, [&](std::size_t i) {
        d[i] = sparse_dense_distance(points.rows[i], points.rows[i].squared_norm(), g, g_sqnorm);
    });
    return d;
}

double objective(const EmbeddingMatrix& points, const DenseVector& g, int threads) {
    const std::vector<double> d = point_distances(points, g, threads);
    return pairwise_sum(d);
}

MedianResult geometric_median(const EmbeddingMatrix& points, const SolverConfig& cfg,
                              int threads) {
    if (points.size() == 0) throw std::invalid_argument("geometric_median: empty point set");

    StatsAccumulator acc(points, row_squared_norms(points, threads), threads);

    MedianResult result;
    result.epsilon = cfg.epsilon;
    result.point = coordinate_mean(points, threads);

    IterationStats stats = acc.compute(result.point, cfg.coincidence_tolerance);
    double f_prev = stats.f;

    for (int k = 1; k <= cfg.max_iterations; ++k) {
        result.iterations = k;

        // Next iterate from the Vardi-Zhang map.
        DenseVector next(points.dim, 0.0);
        const std::size_t n = points.size();
        const std::size_t eta = stats.coincident;
        if (eta == n || stats.inv_dist_sum == 0.0) {
            next = result.point;  // every point coincides with y: y is the median
        } else {
            // Weiszfeld map over non-coincident points.
            for (std::size_t j = 0; j < points.dim; ++j)
                next[j] = stats.weighted_sum[j] / stats.inv_dist_sum;
            if (eta > 0) {
                // R(y) = sum of unit vectors toward y from non-coincident
                // points = weighted_sum - inv_dist_sum * y.
                double r_sq = 0.0;
                for (std::size_t j = 0; j < points.dim; ++j) {
                    const double rj = stats.weighted_sum[j] - stats.inv_dist_sum * result.point[j];
                    r_sq += rj * rj;
                }
                const double r_norm = std::sqrt(r_sq);
                const double eta_d = static_cast<double>(eta);
                if (r_norm <= eta_d) {
                    next = result.point;  // optimality condition at a data point
                } else {
                    const double pull = eta_d / r_norm;
                    for (std::size_t j = 0; j < points.dim; ++j)
                        next[j] = (1.0 - pull) * next[j] + pull * result.point[j];
                }
            }
        }

        double step_sq = 0.0;
        for (std::size_t j = 0; j < points.dim; ++j) {
            const double dj = next[j] - result.point[j];
            step_sq += dj * dj;
        }
        const double step_norm = std::sqrt(step_sq);

        result.point = std::move(next);
        stats = acc.compute(result.point, cfg.coincidence_tolerance);
        const double f_next = stats.f;

        if (f_next > f_prev * (1.0 + 1e-12)) result.monotone = false;
        if (cfg.trace)
            (*cfg.trace) << k << ' ' << f_next << ' ' << step_norm << '\n';

        // Safety factor: stopping exactly at a relative change of epsilon
        // leaves a remaining gap of roughly delta_f * rho / (1 - rho) for
        // linear rate rho, which can exceed epsilon * f(g*). The factor
        // keeps the attained accuracy within epsilon for rho up to ~0.94.
        const double threshold = cfg.epsilon * kTerminationSafety;
        const bool objective_settled = std::abs(f_prev - f_next) <= threshold * f_next;
        const bool step_settled = step_norm <= threshold;
        f_prev = f_next;
        if (objective_settled || step_settled) {
            result.converged = true;
            break;
        }
    }

    result.objective = f_prev;
    return result;
}

}  // namespace textprune
