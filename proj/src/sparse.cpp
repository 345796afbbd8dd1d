#include "textprune/sparse.hpp"

#include <cmath>
#include <stdexcept>

namespace textprune {

SparseVector::SparseVector(std::uint32_t dim, std::vector<SparseEntry> entries)
    : dim_(dim), entries_(std::move(entries)) {
    std::uint32_t prev = 0;
    bool first = true;
    for (const auto& e : entries_) {
        if (e.index >= dim_) throw std::invalid_argument("sparse entry index out of range");
        if (!first && e.index <= prev) throw std::invalid_argument("sparse entries not strictly increasing");
        if (e.value == 0.0 || !std::isfinite(e.value))
            throw std::invalid_argument("sparse entry value must be finite and non-zero");
        prev = e.index;
        first = false;
    }
}

double SparseVector::squared_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.value * e.value;
    return s;
}

double SparseVector::norm() const { return std::sqrt(squared_norm()); }

double SparseVector::dot(const DenseVector& y) const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.value * y[e.index];
    return s;
}

void SparseVector::add_scaled_into(DenseVector& acc, double scale) const {
    for (const auto& e : entries_) acc[e.index] += scale * e.value;
}

void SparseVector::scale(double s) {
    for (auto& e : entries_) e.value *= s;
}

double dense_dot(const DenseVector& a, const DenseVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double dense_squared_norm(const DenseVector& a) { return dense_dot(a, a); }

double dense_norm(const DenseVector& a) { return std::sqrt(dense_squared_norm(a)); }

double sparse_dense_distance_exact(const SparseVector& x, const DenseVector& y) {
    double s = 0.0;
    auto it = x.entries().begin();
    const auto end = x.entries().end();
    for (std::uint32_t j = 0; j < y.size(); ++j) {
        double v = -y[j];
        if (it != end && it->index == j) {
            v += it->value;
            ++it;
        }
        s += v * v;
    }
    return std::sqrt(s);
}

double sparse_dense_distance(const SparseVector& x, double x_sqnorm, const DenseVector& y,
                             double y_sqnorm) {
    double d2 = x_sqnorm + y_sqnorm - 2.0 * x.dot(y);
    // Cancellation guard: the expansion's absolute error on d^2 is of order
    // eps * (||x||^2 + ||y||^2), so tiny results are unreliable.
    const double unreliable = 1e-12 * (x_sqnorm + y_sqnorm);
    if (d2 <= unreliable) return sparse_dense_distance_exact(x, y);
    return std::sqrt(d2);
}

}  // namespace textprune
