#include "irlbfgs/problems.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>
#include <string>

namespace irlbfgs {

namespace {

void check_dim(const Vec& x, int n, const char* where) {
  if (static_cast<int>(x.size()) != n)
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

double sparse_dot(const Vec& x, const std::vector<FeatureEntry>& features) {
  double z = 0.0;
  for (const auto& [idx, val] : features) z += x[idx] * val;
  return z;
}

// sigmoid(-z) = 1 / (1 + e^z), evaluated without overflow on either tail.
double sigmoid_neg(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(z));
}

}  // namespace

double SparseExample::squared_norm() const {
  double s = 0.0;
  for (const auto& [idx, val] : features) s += val * val;
  return s;
}

void validate_example(const SparseExample& ex, int dim) {
  if (ex.label != 1 && ex.label != -1)
    throw std::invalid_argument("example label must be -1 or +1");
  int prev = -1;
  for (const auto& [idx, val] : ex.features) {
    if (idx <= prev) throw std::invalid_argument("feature indices must be strictly increasing");
    if (idx < 0 || idx >= dim) throw std::invalid_argument("feature index out of range");
    prev = idx;
  }
}

void validate_dataset(const Dataset& ds) {
  if (ds.examples.empty()) throw std::invalid_argument("dataset is empty");
  if (ds.dimension <= 0) throw std::invalid_argument("dataset dimension must be positive");
  for (const auto& ex : ds.examples) validate_example(ex, ds.dimension);
}

double logistic_value(const Vec& x, const SparseExample& ex) {
  const double z = static_cast<double>(ex.label) * sparse_dot(x, ex.features);
  // ln(1 + e^{-z}) = max(0, -z) + log1p(e^{-|z|})
  return std::max(0.0, -z) + std::log1p(std::exp(-std::abs(z)));
}

double logistic_grad_coef(const Vec& x, const SparseExample& ex) {
  const double v = static_cast<double>(ex.label);
  const double z = v * sparse_dot(x, ex.features);
  return -v * sigmoid_neg(z);
}

Vec logistic_grad(const Vec& x, const SparseExample& ex) {
  Vec g = Vec::Zero(x.size());
  const double c = logistic_grad_coef(x, ex);
  for (const auto& [idx, val] : ex.features) g[idx] = c * val;
  return g;
}

double full_objective(const Vec& x, const Dataset& ds) {
  if (ds.examples.empty()) throw std::invalid_argument("full_objective: empty dataset");
  check_dim(x, ds.dimension, "full_objective");
  double sum = 0.0;
  for (const auto& ex : ds.examples) sum += logistic_value(x, ex);
  return sum / static_cast<double>(ds.examples.size());
}

Vec full_gradient(const Vec& x, const Dataset& ds) {
  if (ds.examples.empty()) throw std::invalid_argument("full_gradient: empty dataset");
  check_dim(x, ds.dimension, "full_gradient");
  Vec g = Vec::Zero(x.size());
  for (const auto& ex : ds.examples) {
    const double c = logistic_grad_coef(x, ex);
    for (const auto& [idx, val] : ex.features) g[idx] += c * val;
  }
  g /= static_cast<double>(ds.examples.size());
  return g;
}

double lipschitz_estimate(const Dataset& ds) {
  if (ds.examples.empty()) throw std::invalid_argument("lipschitz_estimate: empty dataset");
  double max_sq = 0.0;
  for (const auto& ex : ds.examples) max_sq = std::max(max_sq, ex.squared_norm());
  return max_sq / 4.0;
}

Vec regularized_grad(const Vec& g, const Vec& x, const Vec& x0, double mu) {
  if (g.size() != x.size() || x.size() != x0.size())
    throw std::invalid_argument("regularized_grad: dimension mismatch");
  if (mu < 0.0) throw std::invalid_argument("regularized_grad: mu must be nonnegative");
  return g + mu * (x - x0);
}

// ---------------------------------------------------------------------------
// SyntheticLsq
// ---------------------------------------------------------------------------

SyntheticLsq::SyntheticLsq(Mat A, Vec b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() == 0) throw std::invalid_argument("SyntheticLsq: empty rows");
  if (A_.rows() != b_.size()) throw std::invalid_argument("SyntheticLsq: row/rhs size mismatch");

  Eigen::JacobiSVD<Mat> svd(A_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double tol = 1e-12 * std::max(1.0, svd.singularValues().size() > 0
                                               ? svd.singularValues()(0)
                                               : 0.0);
  least_norm_solution_ = svd.solve(b_);

  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  row_space_basis_ = svd.matrixV().leftCols(rank);

  fstar_ = value(least_norm_solution_);

  const Mat gram = A_.transpose() * A_ / static_cast<double>(A_.rows());
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  lipschitz_full_ = eig.eigenvalues().maxCoeff();
  lipschitz_component_max_ = A_.rowwise().squaredNorm().maxCoeff();
}

double SyntheticLsq::value(const Vec& x) const {
  check_dim(x, dim(), "SyntheticLsq::value");
  return (A_ * x - b_).squaredNorm() / (2.0 * static_cast<double>(A_.rows()));
}

Vec SyntheticLsq::gradient(const Vec& x) const {
  check_dim(x, dim(), "SyntheticLsq::gradient");
  return A_.transpose() * (A_ * x - b_) / static_cast<double>(A_.rows());
}

double SyntheticLsq::dist_to_solution_set(const Vec& x) const {
  check_dim(x, dim(), "SyntheticLsq::dist_to_solution_set");
  // X* = least_norm_solution + null(A); the gap to it lives in range(A^T).
  return (row_space_basis_.transpose() * (x - least_norm_solution_)).norm();
}

Vec SyntheticLsq::project_to_solution_set(const Vec& x) const {
  const Vec d = x - least_norm_solution_;
  return x - row_space_basis_ * (row_space_basis_.transpose() * d);
}

Vec SyntheticLsq::regularized_minimizer(const Vec& x0, double mu) const {
  if (mu <= 0.0) throw std::invalid_argument("regularized_minimizer: mu must be positive");
  const double N = static_cast<double>(A_.rows());
  const Mat lhs = A_.transpose() * A_ / N + mu * Mat::Identity(dim(), dim());
  const Vec rhs = A_.transpose() * b_ / N + mu * x0;
  return lhs.ldlt().solve(rhs);
}

std::pair<double, Vec> lsq_value_grad(const Vec& x, const SyntheticLsq& p) {
  return {p.value(x), p.gradient(x)};
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

double LinearModelOracle::row_dot(const Vec& x, std::size_t i) const {
  double z = 0.0;
  for (const auto& [idx, val] : row(i)) z += x[idx] * val;
  return z;
}

double LinearModelOracle::row_squared_norm(std::size_t i) const {
  double s = 0.0;
  for (const auto& [idx, val] : row(i)) s += val * val;
  return s;
}

LogisticOracle::LogisticOracle(std::shared_ptr<const Dataset> ds) : ds_(std::move(ds)) {
  validate_dataset(*ds_);
}

int LogisticOracle::dim() const { return ds_->dimension; }
std::size_t LogisticOracle::component_count() const { return ds_->size(); }

double LogisticOracle::component_value(const Vec& x, std::size_t i) const {
  return logistic_value(x, ds_->examples[i]);
}

void LogisticOracle::component_grad(const Vec& x, std::size_t i, Vec& out) const {
  out.setZero();
  const auto& ex = ds_->examples[i];
  const double c = logistic_grad_coef(x, ex);
  for (const auto& [idx, val] : ex.features) out[idx] = c * val;
}

double LogisticOracle::full_value(const Vec& x) const { return full_objective(x, *ds_); }
void LogisticOracle::full_grad(const Vec& x, Vec& out) const { out = full_gradient(x, *ds_); }
double LogisticOracle::lipschitz_bound() const { return ds_->lipschitz_bound; }

std::span<const FeatureEntry> LogisticOracle::row(std::size_t i) const {
  return ds_->examples[i].features;
}

double LogisticOracle::link_derivative(double z, std::size_t i) const {
  const double v = static_cast<double>(ds_->examples[i].label);
  return -v * sigmoid_neg(v * z);
}

LsqOracle::LsqOracle(std::shared_ptr<const SyntheticLsq> p) : p_(std::move(p)) {
  rows_.resize(p_->rows());
  for (std::size_t i = 0; i < p_->rows(); ++i) {
    for (int j = 0; j < p_->dim(); ++j) {
      const double v = p_->matrix()(static_cast<Eigen::Index>(i), j);
      if (v != 0.0) rows_[i].push_back({j, v});
    }
  }
}

int LsqOracle::dim() const { return p_->dim(); }
std::size_t LsqOracle::component_count() const { return p_->rows(); }

double LsqOracle::component_value(const Vec& x, std::size_t i) const {
  const double r = row_dot(x, i) - p_->rhs()(static_cast<Eigen::Index>(i));
  return 0.5 * r * r;
}

void LsqOracle::component_grad(const Vec& x, std::size_t i, Vec& out) const {
  out.setZero();
  const double r = row_dot(x, i) - p_->rhs()(static_cast<Eigen::Index>(i));
  for (const auto& [idx, val] : rows_[i]) out[idx] = r * val;
}

double LsqOracle::full_value(const Vec& x) const { return p_->value(x); }
void LsqOracle::full_grad(const Vec& x, Vec& out) const { out = p_->gradient(x); }
double LsqOracle::lipschitz_bound() const { return p_->lipschitz_component_max(); }

std::span<const FeatureEntry> LsqOracle::row(std::size_t i) const { return rows_[i]; }

double LsqOracle::link_derivative(double z, std::size_t i) const {
  return z - p_->rhs()(static_cast<Eigen::Index>(i));
}

TikhonovOracle::TikhonovOracle(const StochasticOracle& inner, double eta)
    : inner_(&inner), eta_(eta) {
  if (eta < 0.0) throw std::invalid_argument("TikhonovOracle: eta must be nonnegative");
}

int TikhonovOracle::dim() const { return inner_->dim(); }
std::size_t TikhonovOracle::component_count() const { return inner_->component_count(); }

double TikhonovOracle::component_value(const Vec& x, std::size_t i) const {
  return inner_->component_value(x, i) + 0.5 * eta_ * x.squaredNorm();
}

void TikhonovOracle::component_grad(const Vec& x, std::size_t i, Vec& out) const {
  inner_->component_grad(x, i, out);
  out += eta_ * x;
}

double TikhonovOracle::full_value(const Vec& x) const {
  return inner_->full_value(x) + 0.5 * eta_ * x.squaredNorm();
}

void TikhonovOracle::full_grad(const Vec& x, Vec& out) const {
  inner_->full_grad(x, out);
  out += eta_ * x;
}

double TikhonovOracle::lipschitz_bound() const { return inner_->lipschitz_bound() + eta_; }

double estimate_variance(const StochasticOracle& oracle, const Vec& x0, int draws, RngState& rng) {
  if (draws <= 0) throw std::invalid_argument("estimate_variance: draws must be positive");
  Vec mean(x0.size()), g(x0.size());
  oracle.full_grad(x0, mean);
  double acc = 0.0;
  for (int t = 0; t < draws; ++t) {
    const std::size_t i = sample_index(rng, oracle.component_count());
    oracle.component_grad(x0, i, g);
    acc += (g - mean).squaredNorm();
  }
  return acc / static_cast<double>(draws);
}

void batch_grad(const StochasticOracle& oracle, const Vec& x,
                std::span<const std::size_t> batch, Vec& out) {
  if (batch.empty()) throw std::invalid_argument("batch_grad: empty batch");
  Vec g(x.size());
  out.setZero();
  for (const std::size_t i : batch) {
    oracle.component_grad(x, i, g);
    out += g;
  }
  out /= static_cast<double>(batch.size());
}

}  // namespace irlbfgs
