#pragma once

#include <cstdint>

#include "irlbfgs/problems.hpp"

namespace irlbfgs {

// Sparse binary-classification data: a planted weight vector labels points,
// then a fraction of labels is flipped so the problem stays attainable
// (separable data would push the logistic minimizer to infinity).
struct LogisticSynthSpec {
  int n = 50;
  std::size_t N = 2000;
  int nnz = 10;              // nonzeros per example (capped at n)
  double feature_scale = 1.0;
  double flip_prob = 0.1;
  std::uint64_t seed = 1;
};

Dataset make_logistic_dataset(const LogisticSynthSpec& spec);

// Rank-deficient least squares: `copies` identical rows (scale, 0, ..., 0)
// with rhs scale*dist, so X* = { x : x_1 = dist } and dist(0, X*) = dist.
// Full-gradient Lipschitz constant is scale^2.
SyntheticLsq make_rank1_lsq(int n, double scale, double dist, int copies = 2);

// Dense random consistent system with the given row count; rank defaults to
// n-1 so the objective is never strongly convex.
SyntheticLsq make_random_lsq(int n, int rows, int rank, std::uint64_t seed);

}  // namespace irlbfgs
