#pragma once

#include <cstdint>
#include <vector>

#include "textprune/sparse.hpp"
#include "textprune/vectorizer.hpp"

namespace textprune {

struct ProjectionResult {
    DenseVector component1;    // unit axis, largest-magnitude loading positive
    DenseVector component2;
    double eigenvalue1 = 0.0;  // of the sample covariance (1/(N-1) scaling)
    double eigenvalue2 = 0.0;
    std::vector<double> pc1;   // mean-centered coordinates per document
    std::vector<double> pc2;
};

// Top-2 principal components of the mean-centered embedding rows by power
// iteration with deflation. The covariance is never materialized; its
// action streams over the sparse rows.
ProjectionResult project_top2(const EmbeddingMatrix& points, std::uint64_t seed, int threads = 1,
                              int max_iterations = 50, double tolerance = 1e-7);

}  // namespace textprune
