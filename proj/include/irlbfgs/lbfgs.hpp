#pragma once

#include <stdexcept>
#include <vector>

#include "irlbfgs/schedules.hpp"
#include "irlbfgs/vec.hpp"

namespace irlbfgs {

// x_k coincides with x_{k-1}; no displacement to build a pair from.
class DegeneratePairError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// s^T y <= 0: the oracle is not monotone on this segment, or the two
// gradients were taken under different samples.
class CurvatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One correction pair
//   s = x_k - x_{k-1},  y = (g_k - g_{k-1}) + tau mu_k^delta s.
// The perturbation keeps s^T y >= tau mu_k^delta ||s||^2 > 0 for merely
// monotone gradients, so the update never needs damping. The two inner
// products every consumer needs are cached at creation and must not be
// recomputed downstream.
struct CurvaturePair {
  Vec s;
  Vec y;
  long pair_index = 0;  // ceil(k/2) at creation
  double sy = 0.0;      // s^T y
  double yy = 0.0;      // y^T y
};

// Both gradients must be evaluated under the same sample. Throws
// DegeneratePairError when x_k == x_prev and CurvatureError when s^T y <= 0.
CurvaturePair make_pair(const Vec& x_k, const Vec& x_prev, const Vec& g_k, const Vec& g_prev,
                        double tau, double mu_k, double delta, long pair_index);

// FIFO memory of at most `capacity` pairs, oldest first. Pair indices of
// stored pairs are contiguous; pushing out-of-order throws.
class PairBuffer {
 public:
  explicit PairBuffer(int capacity);

  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  bool empty() const { return pairs_.empty(); }
  const CurvaturePair& operator[](int j) const { return pairs_[static_cast<std::size_t>(j)]; }
  const CurvaturePair& newest() const;

  void push(CurvaturePair p);
  void clear() { pairs_.clear(); }

  // 2 * size(): the O(mn) memory footprint claim, checked by tests.
  long stored_vector_count() const { return 2L * size(); }

 private:
  int capacity_;
  std::vector<CurvaturePair> pairs_;
};

// r = H q0 via the two-loop recursion, O(size * n), no matrix formed.
// H_0 = (s^T y / y^T y) I from the newest pair. Throws on an empty buffer.
Vec two_loop(const PairBuffer& buf, const Vec& q0);

// Dense reference construction of the inverse-Hessian approximation,
//   H_j = (I - y s^T / s^T y)^T H_{j-1} (I - y s^T / s^T y) + s s^T / s^T y
// applied oldest to newest from H_0 = (s^T y / y^T y) I of the newest pair.
// Test oracle only: O(m n^2) work, O(n^2) storage.
Mat explicit_inverse_hessian(const PairBuffer& buf);

// Dense direct-Hessian recursion
//   B_j = B_{j-1} - B_{j-1} s s^T B_{j-1} / (s^T B_{j-1} s) + y y^T / (y^T s)
// from B_0 = (y^T y / s^T y) I of the newest pair. Inverse of
// explicit_inverse_hessian by Sherman-Morrison-Woodbury duality.
Mat explicit_hessian(const PairBuffer& buf);

struct SpectralReport {
  bool lower_ok = false;
  bool upper_ok = false;
  double eig_min = 0.0;
  double eig_max = 0.0;
  double lower_bound = 0.0;      // lambda_min
  double upper_bound_log = 0.0;  // ln(lambda) + alpha ln(mu_k)

  bool pass() const { return lower_ok && upper_ok; }
};

// Extreme eigenvalues of symmetric H against lambda_min I <= H <= lambda
// mu_k^alpha I; the upper side is compared in log-space. Throws
// std::invalid_argument for non-symmetric input.
SpectralReport spectral_check(const Mat& H, double mu_k, const EigenConstants& ec);

// (n-1)! P / S^{n-1}: lower bound on the smallest of n positive reals with
// sum <= S and product >= P. Evaluated through lgamma so large n stays finite.
double sum_product_eig_bound(double S, double P, int n);

}  // namespace irlbfgs
