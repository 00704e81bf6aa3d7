#include "irlbfgs/synthetic.hpp"

#include <algorithm>
#include <stdexcept>

namespace irlbfgs {

Dataset make_logistic_dataset(const LogisticSynthSpec& spec) {
  if (spec.n <= 0 || spec.N == 0) throw std::invalid_argument("make_logistic_dataset: empty spec");
  const int nnz = std::min(spec.nnz, spec.n);
  if (nnz <= 0) throw std::invalid_argument("make_logistic_dataset: nnz must be positive");

  RngState rng = RngState::seeded(spec.seed);
  Vec planted(spec.n);
  for (int j = 0; j < spec.n; ++j) planted[j] = rng.next_gaussian();

  Dataset ds;
  ds.dimension = spec.n;
  ds.examples.reserve(spec.N);
  std::vector<int> support(nnz);
  for (std::size_t i = 0; i < spec.N; ++i) {
    // distinct sorted indices by rejection; nnz << n in every use here
    int filled = 0;
    while (filled < nnz) {
      const int cand = static_cast<int>(sample_index(rng, static_cast<std::size_t>(spec.n)));
      bool dup = false;
      for (int t = 0; t < filled; ++t)
        if (support[t] == cand) { dup = true; break; }
      if (!dup) support[filled++] = cand;
    }
    std::sort(support.begin(), support.end());

    SparseExample ex;
    ex.features.reserve(nnz);
    double margin = 0.0;
    for (const int idx : support) {
      const double val = spec.feature_scale;
      ex.features.push_back({idx, val});
      margin += val * planted[idx];
    }
    int label = margin >= 0.0 ? 1 : -1;
    if (rng.next_unit() < spec.flip_prob) label = -label;
    ex.label = label;
    ds.examples.push_back(std::move(ex));
  }
  ds.lipschitz_bound = lipschitz_estimate(ds);
  return ds;
}

SyntheticLsq make_rank1_lsq(int n, double scale, double dist, int copies) {
  if (n < 1 || copies < 1) throw std::invalid_argument("make_rank1_lsq: bad shape");
  Mat A = Mat::Zero(copies, n);
  Vec b(copies);
  for (int i = 0; i < copies; ++i) {
    A(i, 0) = scale;
    b(i) = scale * dist;
  }
  return SyntheticLsq(std::move(A), std::move(b));
}

SyntheticLsq make_random_lsq(int n, int rows, int rank, std::uint64_t seed) {
  if (rank < 1 || rank > std::min(n, rows))
    throw std::invalid_argument("make_random_lsq: bad rank");
  RngState rng = RngState::seeded(seed);
  Mat basis(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) basis(i, j) = rng.next_gaussian();
  Mat coeff(rows, rank);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rank; ++j) coeff(i, j) = rng.next_gaussian();
  Mat A = coeff * basis.transpose();
  Vec x_target(n);
  for (int i = 0; i < n; ++i) x_target[i] = rng.next_gaussian();
  Vec b = A * x_target;  // consistent by construction
  return SyntheticLsq(std::move(A), std::move(b));
}

}  // namespace irlbfgs
