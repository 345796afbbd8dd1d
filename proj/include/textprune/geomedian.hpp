#pragma once

#include <iosfwd>
#include <vector>

#include "textprune/sparse.hpp"
#include "textprune/vectorizer.hpp"

namespace textprune {

struct SolverConfig {
    double epsilon = 1e-5;
    int max_iterations = 1000;
    double coincidence_tolerance = 1e-12;
    std::ostream* trace = nullptr;  // one line per iteration: k, f(y_k), step norm
};

struct MedianResult {
    DenseVector point;        // g_eps
    double objective = 0.0;   // f(g_eps) = sum of L2 distances
    int iterations = 0;
    bool converged = false;
    double epsilon = 0.0;
    bool monotone = true;  // f never increased across accepted steps
};

// L2 distance from every row to g, in row order.
std::vector<double> point_distances(const EmbeddingMatrix& points, const DenseVector& g,
                                    int threads = 1);

// f(g) = sum_i ||g - t_i||_2, accumulated by pairwise summation.
double objective(const EmbeddingMatrix& points, const DenseVector& g, int threads = 1);

// Epsilon-accurate geometric median via the Vardi-Zhang modified Weiszfeld
// iteration, started at the coordinate-wise mean. Iterates coinciding with
// data points of multiplicity eta take the damped step
//   y' = max(0, 1 - eta/||R||) * T(y) + min(1, eta/||R||) * y
// where T is the Weiszfeld map over non-coincident points and R the sum of
// unit vectors from y to them. Terminates when the relative objective
// change or the step norm falls below epsilon (an internal safety factor
// keeps the attained accuracy within epsilon), or at max_iterations.
MedianResult geometric_median(const EmbeddingMatrix& points, const SolverConfig& cfg = {},
                              int threads = 1);

}  // namespace textprune
