#include "irlbfgs/lbfgs.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace irlbfgs {

CurvaturePair make_pair(const Vec& x_k, const Vec& x_prev, const Vec& g_k, const Vec& g_prev,
                        double tau, double mu_k, double delta, long pair_index) {
  if (x_k.size() != x_prev.size() || g_k.size() != g_prev.size() || x_k.size() != g_k.size())
    throw std::invalid_argument("make_pair: dimension mismatch");
  if (!(tau > 0.0) || !(mu_k >= 0.0) || !(delta > 0.0))
    throw std::invalid_argument("make_pair: bad perturbation parameters");

  CurvaturePair p;
  p.s = x_k - x_prev;
  if (p.s.isZero(0.0)) throw DegeneratePairError("make_pair: x_k equals x_{k-1}");
  const double perturbation = tau * std::pow(mu_k, delta);
  p.y = (g_k - g_prev) + perturbation * p.s;
  p.pair_index = pair_index;
  p.sy = p.s.dot(p.y);
  p.yy = p.y.squaredNorm();
  if (!(p.sy > 0.0))
    throw CurvatureError(
        "make_pair: s^T y <= 0 (non-monotone oracle or mismatched samples)");
  return p;
}

PairBuffer::PairBuffer(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::invalid_argument("PairBuffer: capacity must be >= 1");
}

const CurvaturePair& PairBuffer::newest() const {
  if (pairs_.empty()) throw std::out_of_range("PairBuffer::newest: empty buffer");
  return pairs_.back();
}

void PairBuffer::push(CurvaturePair p) {
  if (!pairs_.empty() && p.pair_index != pairs_.back().pair_index + 1)
    throw std::invalid_argument("PairBuffer::push: pair index not contiguous");
  pairs_.push_back(std::move(p));
  if (static_cast<int>(pairs_.size()) > capacity_) pairs_.erase(pairs_.begin());
}

Vec two_loop(const PairBuffer& buf, const Vec& q0) {
  if (buf.empty()) throw std::invalid_argument("two_loop: empty buffer");
  const int m = buf.size();
  Vec q = q0;
  std::vector<double> alpha(static_cast<std::size_t>(m));
  for (int j = m - 1; j >= 0; --j) {
    const CurvaturePair& p = buf[j];
    alpha[static_cast<std::size_t>(j)] = p.s.dot(q) / p.sy;
    q -= alpha[static_cast<std::size_t>(j)] * p.y;
  }
  const CurvaturePair& newest = buf.newest();
  Vec r = (newest.sy / newest.yy) * q;
  for (int j = 0; j < m; ++j) {
    const CurvaturePair& p = buf[j];
    const double beta = p.y.dot(r) / p.sy;
    r += (alpha[static_cast<std::size_t>(j)] - beta) * p.s;
  }
  return r;
}

Mat explicit_inverse_hessian(const PairBuffer& buf) {
  if (buf.empty()) throw std::invalid_argument("explicit_inverse_hessian: empty buffer");
  const auto n = buf.newest().s.size();
  const CurvaturePair& newest = buf.newest();
  Mat H = (newest.sy / newest.yy) * Mat::Identity(n, n);
  for (int j = 0; j < buf.size(); ++j) {
    const CurvaturePair& p = buf[j];
    const Mat V = Mat::Identity(n, n) - (p.y * p.s.transpose()) / p.sy;
    H = V.transpose() * H * V + (p.s * p.s.transpose()) / p.sy;
  }
  return H;
}

Mat explicit_hessian(const PairBuffer& buf) {
  if (buf.empty()) throw std::invalid_argument("explicit_hessian: empty buffer");
  const auto n = buf.newest().s.size();
  const CurvaturePair& newest = buf.newest();
  Mat B = (newest.yy / newest.sy) * Mat::Identity(n, n);
  for (int j = 0; j < buf.size(); ++j) {
    const CurvaturePair& p = buf[j];
    const Vec Bs = B * p.s;
    const double sBs = p.s.dot(Bs);
    if (!(sBs > 0.0))
      throw std::runtime_error("explicit_hessian: s^T B s <= 0, B lost definiteness");
    B += -(Bs * Bs.transpose()) / sBs + (p.y * p.y.transpose()) / p.sy;
  }
  return B;
}

SpectralReport spectral_check(const Mat& H, double mu_k, const EigenConstants& ec) {
  if (H.rows() != H.cols()) throw std::invalid_argument("spectral_check: non-square input");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if (((H - H.transpose()).cwiseAbs().maxCoeff()) > 1e-10 * scale)
    throw std::invalid_argument("spectral_check: non-symmetric input");
  if (!(mu_k > 0.0)) throw std::invalid_argument("spectral_check: mu_k must be positive");

  Eigen::SelfAdjointEigenSolver<Mat> eig(H);
  SpectralReport rep;
  rep.eig_min = eig.eigenvalues().minCoeff();
  rep.eig_max = eig.eigenvalues().maxCoeff();
  rep.lower_bound = ec.lambda_min;
  rep.upper_bound_log = ec.lambda_log + ec.alpha * std::log(mu_k);
  rep.lower_ok = rep.eig_min >= rep.lower_bound;
  rep.upper_ok = rep.eig_max > 0.0 && std::log(rep.eig_max) <= rep.upper_bound_log;
  return rep;
}

double sum_product_eig_bound(double S, double P, int n) {
  if (!(S > 0.0) || !(P > 0.0)) throw std::invalid_argument("sum_product_eig_bound: S, P > 0");
  if (n < 1) throw std::invalid_argument("sum_product_eig_bound: n >= 1");
  // (n-1)! P / S^{n-1} via logs; n = 1 reduces to P (empty product).
  return std::exp(std::lgamma(static_cast<double>(n)) + std::log(P) -
                  static_cast<double>(n - 1) * std::log(S));
}

}  // namespace irlbfgs
