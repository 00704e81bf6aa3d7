#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "irlbfgs/rng.hpp"
#include "irlbfgs/vec.hpp"

namespace irlbfgs {

// ---------------------------------------------------------------------------
// Sparse training data
// ---------------------------------------------------------------------------

struct FeatureEntry {
  int index = 0;  // 0-based, < problem dimension
  double value = 0.0;
};

// One labeled example. Feature indices are strictly increasing.
struct SparseExample {
  std::vector<FeatureEntry> features;
  int label = 1;  // -1 or +1

  double squared_norm() const;
};

// Throws std::invalid_argument when indices are out of range, not strictly
// increasing, or the label is neither -1 nor +1.
void validate_example(const SparseExample& ex, int dim);

struct Dataset {
  std::vector<SparseExample> examples;
  int dimension = 0;
  double lipschitz_bound = 0.0;           // max_i ||u_i||^2 / 4
  std::optional<double> variance_bound;   // diagnostic only, never required

  std::size_t size() const { return examples.size(); }
};

// Checks every example against `dimension` and N >= 1.
void validate_dataset(const Dataset& ds);

// ---------------------------------------------------------------------------
// Logistic regression loss  ln(1 + exp(-v u^T x))
// ---------------------------------------------------------------------------

// Stable evaluation: max(0, -z) + log1p(exp(-|z|)) with z = v u^T x.
double logistic_value(const Vec& x, const SparseExample& ex);

// The gradient factors as coef * u with coef = -v * sigmoid(-v u^T x);
// consumers that exploit the sparse support use the scalar form.
double logistic_grad_coef(const Vec& x, const SparseExample& ex);
Vec logistic_grad(const Vec& x, const SparseExample& ex);

// Arithmetic mean of logistic_value over the dataset. Throws on empty data.
double full_objective(const Vec& x, const Dataset& ds);
Vec full_gradient(const Vec& x, const Dataset& ds);

// Per-sample curvature bound max_i ||u_i||^2 / 4; dominates both the
// per-sample and the averaged-objective Lipschitz constants.
double lipschitz_estimate(const Dataset& ds);

// g + mu * (x - x0). Dimensions must agree, mu >= 0.
Vec regularized_grad(const Vec& g, const Vec& x, const Vec& x0, double mu);

// ---------------------------------------------------------------------------
// Synthetic least squares with a known optimal set
// ---------------------------------------------------------------------------

// f(x) = (1/2N) ||A x - b||^2 over desk-scale rows. The solution set
// X* = argmin f is affine; distances to it are exact (SVD-based projector),
// which makes the run-time error recursions checkable against known values.
class SyntheticLsq {
 public:
  SyntheticLsq(Mat A, Vec b);

  int dim() const { return static_cast<int>(A_.cols()); }
  std::size_t rows() const { return static_cast<std::size_t>(A_.rows()); }
  const Mat& matrix() const { return A_; }
  const Vec& rhs() const { return b_; }

  double known_fstar() const { return fstar_; }
  // Lipschitz constant of the full gradient, lambda_max(A^T A) / N.
  double lipschitz_full() const { return lipschitz_full_; }
  // max_i ||a_i||^2, the per-component bound.
  double lipschitz_component_max() const { return lipschitz_component_max_; }

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;

  // Euclidean distance from x to X* and the projection realizing it.
  double dist_to_solution_set(const Vec& x) const;
  Vec project_to_solution_set(const Vec& x) const;

  // Minimizer of f(x) + (mu/2)||x - x0||^2 by direct solve of the
  // regularized normal equations (test oracle, O(n^3)).
  Vec regularized_minimizer(const Vec& x0, double mu) const;

 private:
  Mat A_;
  Vec b_;
  Vec least_norm_solution_;
  Mat row_space_basis_;  // orthonormal columns spanning range(A^T)
  double fstar_ = 0.0;
  double lipschitz_full_ = 0.0;
  double lipschitz_component_max_ = 0.0;
};

// (value, gradient) of (1/2N) sum (a_i^T x - b_i)^2. Throws on empty rows.
std::pair<double, Vec> lsq_value_grad(const Vec& x, const SyntheticLsq& p);

// ---------------------------------------------------------------------------
// Stochastic first-order oracles
// ---------------------------------------------------------------------------

// Finite-sum oracle: f(x) = (1/N) sum_i f_i(x). Immutable after construction
// and safe for concurrent reads; RNG state is owned by the run, not the
// oracle.
class StochasticOracle {
 public:
  virtual ~StochasticOracle() = default;

  virtual int dim() const = 0;
  virtual std::size_t component_count() const = 0;
  virtual double component_value(const Vec& x, std::size_t i) const = 0;
  virtual void component_grad(const Vec& x, std::size_t i, Vec& out) const = 0;
  virtual double full_value(const Vec& x) const = 0;
  virtual void full_grad(const Vec& x, Vec& out) const = 0;
  // Upper bound on sup_i of the component gradient Lipschitz constants.
  virtual double lipschitz_bound() const = 0;
};

// Components whose gradients factor as phi_i'(a_i^T x) * a_i for sparse rows
// a_i. SAGA stores one scalar per component through this interface.
class LinearModelOracle : public StochasticOracle {
 public:
  virtual std::span<const FeatureEntry> row(std::size_t i) const = 0;
  // d/dz of the component loss at z = a_i^T x.
  virtual double link_derivative(double z, std::size_t i) const = 0;

  double row_dot(const Vec& x, std::size_t i) const;
  double row_squared_norm(std::size_t i) const;
};

class LogisticOracle final : public LinearModelOracle {
 public:
  explicit LogisticOracle(std::shared_ptr<const Dataset> ds);

  int dim() const override;
  std::size_t component_count() const override;
  double component_value(const Vec& x, std::size_t i) const override;
  void component_grad(const Vec& x, std::size_t i, Vec& out) const override;
  double full_value(const Vec& x) const override;
  void full_grad(const Vec& x, Vec& out) const override;
  double lipschitz_bound() const override;

  std::span<const FeatureEntry> row(std::size_t i) const override;
  double link_derivative(double z, std::size_t i) const override;

  const Dataset& dataset() const { return *ds_; }

 private:
  std::shared_ptr<const Dataset> ds_;
};

class LsqOracle final : public LinearModelOracle {
 public:
  explicit LsqOracle(std::shared_ptr<const SyntheticLsq> p);

  int dim() const override;
  std::size_t component_count() const override;
  double component_value(const Vec& x, std::size_t i) const override;
  void component_grad(const Vec& x, std::size_t i, Vec& out) const override;
  double full_value(const Vec& x) const override;
  void full_grad(const Vec& x, Vec& out) const override;
  double lipschitz_bound() const override;

  std::span<const FeatureEntry> row(std::size_t i) const override;
  double link_derivative(double z, std::size_t i) const override;

  const SyntheticLsq& problem() const { return *p_; }

 private:
  std::shared_ptr<const SyntheticLsq> p_;
  // Rows materialized as sparse entries once, at construction.
  std::vector<std::vector<FeatureEntry>> rows_;
};

// inner f_i(x) + (eta/2)||x||^2 on every component. Used for the
// fixed-regularization baselines and their gap evaluations.
class TikhonovOracle final : public StochasticOracle {
 public:
  TikhonovOracle(const StochasticOracle& inner, double eta);

  int dim() const override;
  std::size_t component_count() const override;
  double component_value(const Vec& x, std::size_t i) const override;
  void component_grad(const Vec& x, std::size_t i, Vec& out) const override;
  double full_value(const Vec& x) const override;
  void full_grad(const Vec& x, Vec& out) const override;
  double lipschitz_bound() const override;

 private:
  const StochasticOracle* inner_;
  double eta_;
};

// Sample variance of the stochastic gradient at x0 over `draws` draws;
// diagnostic estimate of the noise bound nu^2.
double estimate_variance(const StochasticOracle& oracle, const Vec& x0, int draws, RngState& rng);

// Mean of component gradients over `batch` (written into out).
void batch_grad(const StochasticOracle& oracle, const Vec& x,
                std::span<const std::size_t> batch, Vec& out);

}  // namespace irlbfgs
