#include "textprune/pca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "textprune/parallel.hpp"
#include "textprune/rng.hpp"

namespace textprune {
namespace {

constexpr std::size_t kBlock = 2048;

// Applies the sample covariance of the centered rows to v:
//   C v = (1/(N-1)) * sum_i (x_i - mu) ((x_i - mu) . v)
class CovarianceOp {
public:
    CovarianceOp(const EmbeddingMatrix& points, DenseVector mean, int threads)
        : points_(points),
          mean_(std::move(mean)),
          threads_(threads),
          num_blocks_((points.size() + kBlock - 1) / kBlock),
          partial_acc_(num_blocks_, DenseVector(points.dim, 0.0)),
          partial_coeff_(num_blocks_) {}

    DenseVector apply(const DenseVector& v) {
        const double mean_dot = dense_dot(mean_, v);
        parallel_blocks(points_.size(), kBlock, threads_,
                        [&](std::size_t b, std::size_t lo, std::size_t hi) {
                            DenseVector& acc = partial_acc_[b];
                            std::fill(acc.begin(), acc.end(), 0.0);
                            double coeff_sum = 0.0;
                            for (std::size_t i = lo; i < hi; ++i) {
                                const double c = points_.rows[i].dot(v) - mean_dot;
                                points_.rows[i].add_scaled_into(acc, c);
                                coeff_sum += c;
                            }
                            partial_coeff_[b] = coeff_sum;
                        });
        DenseVector out(points_.dim, 0.0);
        double coeff_total = 0.0;
        for (std::size_t b = 0; b < num_blocks_; ++b) {
            for (std::size_t j = 0; j < points_.dim; ++j) out[j] += partial_acc_[b][j];
            coeff_total += partial_coeff_[b];
        }
        const double scale = 1.0 / static_cast<double>(points_.size() - 1);
        for (std::size_t j = 0; j < points_.dim; ++j)
            out[j] = (out[j] - coeff_total * mean_[j]) * scale;
        return out;
    }

    const DenseVector& mean() const { return mean_; }

private:
    const EmbeddingMatrix& points_;
    DenseVector mean_;
    int threads_;
    std::size_t num_blocks_;
    std::vector<DenseVector> partial_acc_;
    std::vector<double> partial_coeff_;
};

DenseVector compute_mean(const EmbeddingMatrix& points, int threads) {
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
    for (auto& v : mean) v /= static_cast<double>(points.size());
    return mean;
}

// Portable deterministic start vector from raw generator words.
DenseVector random_unit(rng::Generator& gen, std::size_t dim) {
    DenseVector v(dim);
    for (auto& x : v) {
        const double u = static_cast<double>(gen() >> 11) * (1.0 / 9007199254740992.0);
        x = 2.0 * u - 1.0;
    }
    const double norm = dense_norm(v);
    if (norm > 0.0)
        for (auto& x : v) x /= norm;
    else
        v[0] = 1.0;
    return v;
}

void sign_normalize(DenseVector& axis) {
    std::size_t arg = 0;
    for (std::size_t j = 1; j < axis.size(); ++j)
        if (std::abs(axis[j]) > std::abs(axis[arg])) arg = j;
    if (axis[arg] < 0.0)
        for (auto& x : axis) x = -x;
}

// Power iteration for the dominant eigenpair of op, optionally deflated by
// (prev_axis, prev_eigenvalue).
std::pair<DenseVector, double> dominant_eigenpair(CovarianceOp& op, std::size_t dim,
                                                  rng::Generator& gen, int max_iterations,
                                                  double tolerance, const DenseVector* prev_axis,
                                                  double prev_eigenvalue) {
    DenseVector v = random_unit(gen, dim);
    double eigenvalue = 0.0;
    for (int k = 0; k < max_iterations; ++k) {
        DenseVector w = op.apply(v);
        if (prev_axis) {
            const double along = dense_dot(*prev_axis, v);
            for (std::size_t j = 0; j < dim; ++j) w[j] -= prev_eigenvalue * along * (*prev_axis)[j];
        }
        eigenvalue = dense_dot(v, w);
        const double norm = dense_norm(w);
        if (norm == 0.0) {
            // v is in the null space: the (deflated) covariance has no
            // remaining variance along any direction reachable from v.
            eigenvalue = 0.0;
            break;
        }
        double delta_sq = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double next = w[j] / norm;
            const double d = next - v[j];
            delta_sq += d * d;
            v[j] = next;
        }
        if (std::sqrt(delta_sq) <= tolerance) break;
    }
    return {std::move(v), eigenvalue};
}

}  // namespace

ProjectionResult project_top2(const EmbeddingMatrix& points, std::uint64_t seed, int threads,
                              int max_iterations, double tolerance) {
    if (points.size() < 2)
        throw std::invalid_argument("projection requires at least 2 documents");

    CovarianceOp op(points, compute_mean(points, threads), threads);
    rng::Generator gen(rng::derive_seed(seed, "pca"));

    ProjectionResult result;
    auto [v1, l1] = dominant_eigenpair(op, points.dim, gen, max_iterations, tolerance, nullptr, 0.0);
    auto [v2, l2] = dominant_eigenpair(op, points.dim, gen, max_iterations, tolerance, &v1, l1);
    sign_normalize(v1);
    sign_normalize(v2);
    result.component1 = std::move(v1);
    result.component2 = std::move(v2);
    result.eigenvalue1 = l1;
    result.eigenvalue2 = l2;

    const DenseVector& mean = op.mean();
    const double m1 = dense_dot(mean, result.component1);
    const double m2 = dense_dot(mean, result.component2);
    result.pc1.resize(points.size());
    result.pc2.resize(points.size());
    parallel_for(points.size(), kBlock, threads, [&](std::size_t i) {
        result.pc1[i] = points.rows[i].dot(result.component1) - m1;
        result.pc2[i] = points.rows[i].dot(result.component2) - m2;
    });
    return result;
}

}  // namespace textprune
