#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "irlbfgs/lbfgs.hpp"
#include "support/helpers.hpp"

using namespace irlbfgs;
using doctest::Approx;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

CurvaturePair pair_from(Vec s, Vec y, long index) {
  CurvaturePair p;
  p.s = std::move(s);
  p.y = std::move(y);
  p.pair_index = index;
  p.sy = p.s.dot(p.y);
  p.yy = p.y.squaredNorm();
  return p;
}

}  // namespace

TEST_CASE("perturbation alone saves the curvature condition") {
  // flat direction: the gradients agree, y = tau mu^delta s
  const Vec x_prev = v2(0, 0), x = v2(1, 0);
  const Vec g = v2(0.3, -0.2);
  const CurvaturePair p = make_pair(x, x_prev, g, g, 1.0, 0.25, 0.5, 1);  // mu^delta = 0.5
  CHECK(p.y[0] == Approx(0.5).epsilon(1e-15));
  CHECK(p.y[1] == 0.0);
  CHECK(p.sy == Approx(0.5).epsilon(1e-15));
}

TEST_CASE("pair formula, hand-evaluated") {
  const CurvaturePair p =
      make_pair(v2(1, 0), v2(0, 0), v2(0.5, 0), v2(0, 0), 1.0, 0.25, 1.0, 1);
  CHECK(p.y[0] == Approx(0.75).epsilon(1e-15));
  CHECK(p.sy == Approx(0.75).epsilon(1e-15));
}

TEST_CASE("zero perturbation reduces y to the gradient difference") {
  const CurvaturePair p =
      make_pair(v2(1, 0), v2(0, 0), v2(0.5, 0.1), v2(0.1, 0.1), 1.0, 0.0, 1.0, 1);
  CHECK(p.y[0] == Approx(0.4).epsilon(1e-15));
  CHECK(p.y[1] == 0.0);
}

TEST_CASE("pair construction errors") {
  const Vec x = v2(1, 2);
  CHECK_THROWS_AS(make_pair(x, x, v2(1, 0), v2(0, 0), 1.0, 0.1, 1.0, 1), DegeneratePairError);
  // opposing gradient difference overwhelms the perturbation
  CHECK_THROWS_AS(make_pair(v2(1, 0), v2(0, 0), v2(-2, 0), v2(0, 0), 1.0, 0.1, 1.0, 1),
                  CurvatureError);
}

TEST_CASE("cached products match recomputation") {
  RngState rng = RngState::seeded(5);
  for (int t = 0; t < 50; ++t) {
    const Vec x_prev = testing::random_vec(6, rng);
    const Vec x = x_prev + testing::random_vec(6, rng, 0.5);
    const Vec g_prev = testing::random_vec(6, rng, 0.2);
    const Vec g = g_prev + 0.1 * (x - x_prev);  // monotone segment
    const CurvaturePair p = make_pair(x, x_prev, g, g_prev, 1.0, 0.5, 1.0, 1);
    CHECK(std::abs(p.sy - p.s.dot(p.y)) <= 1e-14 * std::abs(p.sy));
    CHECK(std::abs(p.yy - p.y.squaredNorm()) <= 1e-14 * p.yy);
    CHECK(p.sy >= 1.0 * 0.5 * p.s.squaredNorm() * (1.0 - 1e-14));
  }
}

TEST_CASE("buffer keeps the newest m pairs") {
  PairBuffer buf(2);
  buf.push(pair_from(v2(1, 0), v2(1, 0), 1));
  CHECK(buf.size() == 1);
  buf.push(pair_from(v2(0, 1), v2(0, 1), 2));
  buf.push(pair_from(v2(1, 1), v2(1, 1), 3));
  CHECK(buf.size() == 2);
  CHECK(buf[0].pair_index == 2);
  CHECK(buf.newest().pair_index == 3);
  CHECK(buf.stored_vector_count() == 4);
}

TEST_CASE("buffer rejects out-of-order indices") {
  PairBuffer buf(3);
  buf.push(pair_from(v2(1, 0), v2(1, 0), 3));
  CHECK_THROWS_AS(buf.push(pair_from(v2(0, 1), v2(0, 1), 5)), std::invalid_argument);
  CHECK_THROWS_AS(buf.push(pair_from(v2(0, 1), v2(0, 1), 3)), std::invalid_argument);
}

TEST_CASE("two-loop on a single identity pair") {
  PairBuffer buf(1);
  buf.push(pair_from(v2(1, 0), v2(1, 0), 1));
  const Vec r = two_loop(buf, v2(0, 1));
  CHECK(r[0] == Approx(0.0));
  CHECK(r[1] == Approx(1.0));
}

TEST_CASE("two-loop matches the hand-evaluated 2I case") {
  PairBuffer buf(1);
  buf.push(pair_from(v2(2, 0), v2(1, 0), 1));
  const Vec r = two_loop(buf, v2(1, 1));
  CHECK(r[0] == Approx(2.0).epsilon(1e-15));
  CHECK(r[1] == Approx(2.0).epsilon(1e-15));

  const Mat H = explicit_inverse_hessian(buf);
  CHECK(H(0, 0) == Approx(2.0).epsilon(1e-14));
  CHECK(H(1, 1) == Approx(2.0).epsilon(1e-14));
  CHECK(H(0, 1) == Approx(0.0));

  const Mat B = explicit_hessian(buf);
  CHECK(B(0, 0) == Approx(0.5).epsilon(1e-14));
  CHECK(B(1, 1) == Approx(0.5).epsilon(1e-14));
}

TEST_CASE("two-loop is zero on zero input and rejects empty buffers") {
  PairBuffer buf(1);
  CHECK_THROWS_AS(two_loop(buf, v2(1, 0)), std::invalid_argument);
  CHECK_THROWS_AS(explicit_inverse_hessian(buf), std::invalid_argument);
  CHECK_THROWS_AS(explicit_hessian(buf), std::invalid_argument);
  buf.push(pair_from(v2(2, 0), v2(1, 0), 1));
  CHECK(two_loop(buf, Vec(Vec::Zero(2))).isZero(0.0));
}

TEST_CASE("explicit inverse of a single identity pair") {
  PairBuffer buf(1);
  buf.push(pair_from(v2(1, 0), v2(1, 0), 1));
  const Mat H = explicit_inverse_hessian(buf);
  CHECK((H - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
  const Mat B = explicit_hessian(buf);
  CHECK((B - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("two-loop equals the explicit matrix on random buffers") {
  RngState rng = RngState::seeded(17);
  for (int t = 0; t < 120; ++t) {
    const int n = 1 + static_cast<int>(sample_index(rng, 20));
    const int m = 1 + static_cast<int>(sample_index(rng, 5));
    const PairBuffer buf = testing::random_quadratic_buffer(n, m, rng, 0.3);
    const Mat H = explicit_inverse_hessian(buf);
    const Vec q = testing::random_vec(n, rng);
    const Vec via_two_loop = two_loop(buf, q);
    const Vec via_matrix = H * q;
    CHECK((via_two_loop - via_matrix).norm() <= 1e-10 * (1.0 + via_matrix.norm()));
  }
}

TEST_CASE("secant equation holds for the newest pair") {
  RngState rng = RngState::seeded(23);
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + static_cast<int>(sample_index(rng, 10));
    const int m = 1 + static_cast<int>(sample_index(rng, 5));
    const PairBuffer buf = testing::random_quadratic_buffer(n, m, rng, 0.2);
    const Mat H = explicit_inverse_hessian(buf);
    const CurvaturePair& newest = buf.newest();
    CHECK((H * newest.y - newest.s).norm() <= 1e-8 * newest.s.norm());
  }
}

TEST_CASE("direct and inverse recursions are mutual inverses") {
  RngState rng = RngState::seeded(29);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + static_cast<int>(sample_index(rng, 8));
    const int m = 1 + static_cast<int>(sample_index(rng, 4));
    const PairBuffer buf = testing::random_quadratic_buffer(n, m, rng, 0.5);
    const Mat H = explicit_inverse_hessian(buf);
    const Mat B = explicit_hessian(buf);
    CHECK(((B * H) - Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("two-loop is linear in its input") {
  RngState rng = RngState::seeded(37);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + static_cast<int>(sample_index(rng, 10));
    const PairBuffer buf = testing::random_quadratic_buffer(n, 3, rng, 0.4);
    const Vec q1 = testing::random_vec(n, rng);
    const Vec q2 = testing::random_vec(n, rng);
    const double al = rng.next_gaussian(), be = rng.next_gaussian();
    const Vec lhs = two_loop(buf, al * q1 + be * q2);
    const Vec rhs = al * two_loop(buf, q1) + be * two_loop(buf, q2);
    CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
  }
}

TEST_CASE("gradient-change curvature ratio sits between the spectral ends") {
  // tau mu^delta <= ||y||^2 / y^T s <= L + tau mu^delta for same-sample pairs
  RngState rng = RngState::seeded(41);
  const int n = 5;
  Mat G(n, n);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) G(r, s) = rng.next_gaussian();
  Mat Q = G * G.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> eig(Q);
  const double L = eig.eigenvalues().maxCoeff();
  const double perturbation = 0.35;  // tau mu^delta
  Vec x = testing::random_vec(n, rng);
  for (int t = 0; t < 50; ++t) {
    const Vec x_next = x + testing::random_vec(n, rng, 0.3);
    const CurvaturePair p =
        make_pair(x_next, x, Vec(Q * x_next), Vec(Q * x), 1.0, perturbation, 1.0, t + 1);
    const double ratio = p.yy / p.sy;
    CHECK(ratio >= perturbation * (1.0 - 1e-12));
    CHECK(ratio <= (L + perturbation) * (1.0 + 1e-12));
    x = x_next;
  }
}

TEST_CASE("spectral check passes the identity and reports violations") {
  EigenConstants ec;
  ec.lambda_min = 0.1;
  ec.lambda_log = std::log(100.0);
  ec.alpha = -0.5;

  SpectralReport rep = spectral_check(Mat::Identity(3, 3), 0.5, ec);
  CHECK(rep.pass());
  CHECK(rep.eig_min == Approx(1.0));
  CHECK(rep.eig_max == Approx(1.0));

  Mat H = Mat::Identity(3, 3);
  H(0, 0) = 0.05;
  rep = spectral_check(H, 0.5, ec);
  CHECK_FALSE(rep.pass());
  CHECK_FALSE(rep.lower_ok);
  CHECK(rep.eig_min == Approx(0.05));
}

TEST_CASE("upper spectral bound loosens as mu decreases") {
  EigenConstants ec;
  ec.lambda_min = 0.1;
  ec.lambda_log = std::log(5.0);
  ec.alpha = -1.0;
  const Mat H = 4.0 * Mat::Identity(2, 2);
  const SpectralReport at_mu = spectral_check(H, 0.5, ec);   // bound: 5 / 0.5 = 10
  const SpectralReport at_mu2 = spectral_check(H, 0.25, ec);  // bound: 20
  CHECK(at_mu.upper_ok);
  CHECK(at_mu2.upper_ok);
  CHECK(at_mu2.upper_bound_log > at_mu.upper_bound_log);
}

TEST_CASE("spectral check rejects non-symmetric input") {
  Mat H(2, 2);
  H << 1.0, 0.5, -0.5, 1.0;
  EigenConstants ec;
  ec.lambda_min = 0.1;
  ec.lambda_log = 1.0;
  ec.alpha = 0.0;
  CHECK_THROWS_AS(spectral_check(H, 1.0, ec), std::invalid_argument);
}

TEST_CASE("sum/product eigenvalue bound") {
  CHECK(sum_product_eig_bound(2.0, 1.0, 2) == Approx(0.5).epsilon(1e-12));
  CHECK(sum_product_eig_bound(5.0, 3.0, 1) == Approx(3.0).epsilon(1e-12));
  CHECK(sum_product_eig_bound(3.0, 1.0, 3) == Approx(2.0 / 9.0).epsilon(1e-12));
  CHECK_THROWS_AS(sum_product_eig_bound(0.0, 1.0, 2), std::invalid_argument);
}
