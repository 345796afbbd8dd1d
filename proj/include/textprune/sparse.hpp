#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace textprune {

using DenseVector = std::vector<double>;

struct SparseEntry {
    std::uint32_t index;
    double value;
};

// Sparse vector over a fixed dimension: entries sorted by strictly
// increasing index, values finite and non-zero.
class SparseVector {
public:
    SparseVector() = default;
    SparseVector(std::uint32_t dim, std::vector<SparseEntry> entries);

    std::uint32_t dim() const { return dim_; }
    const std::vector<SparseEntry>& entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    double squared_norm() const;
    double norm() const;
    double dot(const DenseVector& y) const;

    // acc[j] += scale * v_j for every stored entry.
    void add_scaled_into(DenseVector& acc, double scale) const;

    // In-place multiply by a non-zero scalar.
    void scale(double s);

private:
    std::uint32_t dim_ = 0;
    std::vector<SparseEntry> entries_;
};

double dense_dot(const DenseVector& a, const DenseVector& b);
double dense_squared_norm(const DenseVector& a);
double dense_norm(const DenseVector& a);

// Euclidean distance between a sparse point and a dense point. Uses the
// expansion ||x||^2 - 2<x,y> + ||y||^2 over the sparse support; distances
// small enough for the expansion's cancellation error to matter are
// recomputed by direct subtraction over all coordinates.
double sparse_dense_distance(const SparseVector& x, double x_sqnorm, const DenseVector& y,
                             double y_sqnorm);

double sparse_dense_distance_exact(const SparseVector& x, const DenseVector& y);

}  // namespace textprune
