#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "irlbfgs/lbfgs.hpp"
#include "irlbfgs/problems.hpp"
#include "irlbfgs/rng.hpp"

namespace irlbfgs::testing {

// Finite sum of convex quadratics F(x, i) = 0.5 (x - c_i)^T Q_i (x - c_i)
// with Q_i = R_i D_i R_i^T built from known eigenvalues, so the Lipschitz
// bound is exact.
class QuadraticOracle final : public StochasticOracle {
 public:
  QuadraticOracle(std::vector<Mat> Q, std::vector<Vec> c, double lipschitz)
      : Q_(std::move(Q)), c_(std::move(c)), lipschitz_(lipschitz) {}

  // `rank_deficient` zeroes the smallest eigenvalue of every component, so no
  // component (and no average) is strongly convex.
  static QuadraticOracle random(int n, std::size_t N, RngState& rng, double eig_max = 2.0,
                                bool rank_deficient = false) {
    std::vector<Mat> Q;
    std::vector<Vec> c;
    double lip = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      Mat G(n, n);
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) G(r, s) = rng.next_gaussian();
      const Eigen::HouseholderQR<Mat> qr(G);
      const Mat R = qr.householderQ();
      Vec d(n);
      for (int r = 0; r < n; ++r) d[r] = 0.05 + (eig_max - 0.05) * rng.next_unit();
      if (rank_deficient && n > 1) d[0] = 0.0;
      Q.push_back(R * d.asDiagonal() * R.transpose());
      lip = std::max(lip, d.maxCoeff());
      Vec ci(n);
      for (int r = 0; r < n; ++r) ci[r] = rng.next_gaussian();
      c.push_back(ci);
    }
    return QuadraticOracle(std::move(Q), std::move(c), lip);
  }

  int dim() const override { return static_cast<int>(c_.front().size()); }
  std::size_t component_count() const override { return Q_.size(); }

  double component_value(const Vec& x, std::size_t i) const override {
    const Vec d = x - c_[i];
    return 0.5 * d.dot(Q_[i] * d);
  }

  void component_grad(const Vec& x, std::size_t i, Vec& out) const override {
    out = Q_[i] * (x - c_[i]);
  }

  double full_value(const Vec& x) const override {
    double acc = 0.0;
    for (std::size_t i = 0; i < Q_.size(); ++i) acc += component_value(x, i);
    return acc / static_cast<double>(Q_.size());
  }

  void full_grad(const Vec& x, Vec& out) const override {
    out.setZero();
    Vec g(x.size());
    for (std::size_t i = 0; i < Q_.size(); ++i) {
      component_grad(x, i, g);
      out += g;
    }
    out /= static_cast<double>(Q_.size());
  }

  double lipschitz_bound() const override { return lipschitz_; }

 private:
  std::vector<Mat> Q_;
  std::vector<Vec> c_;
  double lipschitz_;
};

// Gradient is a constant vector scaled by (i+1): evaluating both pair
// gradients under one sample makes their difference vanish exactly, so any
// mixed-sample pair is detectable from y alone.
class SampleTagOracle final : public StochasticOracle {
 public:
  SampleTagOracle(int n, std::size_t N) : n_(n), N_(N), tag_(Vec::Ones(n)) {}

  int dim() const override { return n_; }
  std::size_t component_count() const override { return N_; }
  double component_value(const Vec& x, std::size_t i) const override {
    return static_cast<double>(i + 1) * tag_.dot(x);
  }
  void component_grad(const Vec&, std::size_t i, Vec& out) const override {
    out = static_cast<double>(i + 1) * tag_;
  }
  double full_value(const Vec& x) const override {
    return 0.5 * static_cast<double>(N_ + 1) * tag_.dot(x);
  }
  void full_grad(const Vec&, Vec& out) const override {
    out = 0.5 * static_cast<double>(N_ + 1) * tag_;
  }
  double lipschitz_bound() const override { return 1.0; }

 private:
  int n_;
  std::size_t N_;
  Vec tag_;
};

// Every component gradient is identically zero; exercises the
// zero-direction resampling/stall path.
class ZeroOracle final : public StochasticOracle {
 public:
  explicit ZeroOracle(int n, std::size_t N = 3) : n_(n), N_(N) {}
  int dim() const override { return n_; }
  std::size_t component_count() const override { return N_; }
  double component_value(const Vec&, std::size_t) const override { return 1.0; }
  void component_grad(const Vec&, std::size_t, Vec& out) const override { out.setZero(); }
  double full_value(const Vec&) const override { return 1.0; }
  void full_grad(const Vec&, Vec& out) const override { out.setZero(); }
  double lipschitz_bound() const override { return 1.0; }

 private:
  int n_;
  std::size_t N_;
};

inline Vec random_vec(int n, RngState& rng, double scale = 1.0) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = scale * rng.next_gaussian();
  return v;
}

// Central finite difference of a scalar functional.
template <typename F>
Vec fd_gradient(const F& f, const Vec& x, double h = 1e-6) {
  Vec g(x.size());
  Vec p = x;
  for (int i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    p[i] = xi + h;
    const double up = f(p);
    p[i] = xi - h;
    const double dn = f(p);
    p[i] = xi;
    g[i] = (up - dn) / (2.0 * h);
  }
  return g;
}

// Buffer of `count` pairs from a trajectory of a random convex quadratic,
// optionally with the tau mu^delta perturbation folded into y.
inline PairBuffer random_quadratic_buffer(int n, int count, RngState& rng,
                                          double perturbation = 0.0) {
  Mat G(n, n);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) G(r, s) = rng.next_gaussian();
  Mat Q = G * G.transpose() / static_cast<double>(n);
  PairBuffer buf(count);
  Vec x = random_vec(n, rng);
  for (int j = 0; j < count; ++j) {
    Vec step = random_vec(n, rng, 0.5);
    while (step.isZero(0.0)) step = random_vec(n, rng, 0.5);
    const Vec x_next = x + step;
    CurvaturePair p = make_pair(x_next, x, Vec(Q * x_next), Vec(Q * x), 1.0,
                                perturbation > 0.0 ? perturbation : 1e-9, 1.0, j + 1);
    if (perturbation == 0.0) {
      // undo the tiny stabilizer: rebuild y as the pure gradient difference
      p.y = Q * step;
      p.sy = p.s.dot(p.y);
      p.yy = p.y.squaredNorm();
    }
    buf.push(std::move(p));
    x = x_next;
  }
  return buf;
}

}  // namespace irlbfgs::testing
