#include "irlbfgs/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace irlbfgs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ln(a + b) from ln(a), ln(b); tolerates -inf operands.
double log_add(double la, double lb) {
  if (la == -kInf) return lb;
  if (lb == -kInf) return la;
  const double hi = std::max(la, lb);
  const double lo = std::min(la, lb);
  return hi + std::log1p(std::exp(lo - hi));
}

Check make_check(std::string name, bool ok, double lhs, double rhs) {
  return Check{std::move(name), ok, lhs, rhs};
}

// Shared positivity gate; every regime assumes these.
void push_basic_checks(std::vector<Check>& checks, const SchedulePlan& p) {
  checks.push_back(make_check("gamma0 > 0", p.gamma0 > 0.0, p.gamma0, 0.0));
  checks.push_back(make_check("mu0 > 0", p.mu0 > 0.0, p.mu0, 0.0));
  checks.push_back(make_check("a > 0", p.a > 0.0, p.a, 0.0));
  checks.push_back(make_check("b > 0", p.b > 0.0, p.b, 0.0));
  checks.push_back(make_check("delta in (0, 1]", p.delta > 0.0 && p.delta <= 1.0, p.delta, 1.0));
  checks.push_back(make_check("tau > 0", p.tau > 0.0, p.tau, 0.0));
  checks.push_back(make_check("m >= 1", p.m >= 1, static_cast<double>(p.m), 1.0));
  checks.push_back(make_check("n >= 1", p.n >= 1, static_cast<double>(p.n), 1.0));
}

}  // namespace

double stepsize(long k, const SchedulePlan& plan) {
  if (k < 0) throw std::invalid_argument("stepsize: negative iteration");
  return plan.gamma0 / std::pow(static_cast<double>(k + 1), plan.a);
}

double regularization(long k, const SchedulePlan& plan) {
  if (k < 0) throw std::invalid_argument("regularization: negative iteration");
  const long denom = k + 1 + ((k + 1) % 2);
  return plan.mu0 * std::pow(2.0, plan.b) / std::pow(static_cast<double>(denom), plan.b);
}

Exponents algorithm1_exponents(double epsilon, double delta, int n, int m) {
  if (n < 1 || m < 1) throw std::invalid_argument("algorithm1_exponents: need n >= 1 and m >= 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("algorithm1_exponents: epsilon > 0 violated");
  if (!(epsilon < 1.0 / 3.0))
    throw std::invalid_argument("algorithm1_exponents: epsilon < 1/3 violated");
  const double delta_cap = 1.5 * epsilon / static_cast<double>(n + m);
  if (!(delta > 0.0)) throw std::invalid_argument("algorithm1_exponents: delta > 0 violated");
  if (!(delta < delta_cap))
    throw std::invalid_argument("algorithm1_exponents: delta < 1.5*epsilon/(n+m) violated");
  Exponents e;
  e.a = 2.0 / 3.0 - epsilon + 2.0 * delta * static_cast<double>(n + m) / 3.0;
  e.b = 1.0 / 3.0;
  return e;
}

EigenConstants eigen_constants(double L, double tau, double mu0, double delta, int n, int m) {
  if (!(L > 0.0) || !(tau > 0.0) || !(mu0 > 0.0) || !(delta > 0.0))
    throw std::invalid_argument("eigen_constants: inputs must be positive");
  if (n < 1 || m < 1) throw std::invalid_argument("eigen_constants: need n >= 1 and m >= 1");
  const double nm = static_cast<double>(n + m);
  const double base = nm * (L + tau * std::pow(mu0, delta));
  EigenConstants ec;
  ec.lambda_min = 1.0 / base;
  // ln lambda = (n+m-1) ln((m+n)(L + tau mu0^delta)) - ln((n-1)!) - (n+m) ln tau
  ec.lambda_log = (nm - 1.0) * std::log(base) - std::lgamma(static_cast<double>(n)) -
                  nm * std::log(tau);
  ec.alpha = -delta * nm;
  return ec;
}

bool ValidationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

std::vector<Check> ValidationReport::violations() const {
  std::vector<Check> out;
  for (const auto& c : checks)
    if (!c.ok) out.push_back(c);
  return out;
}

bool ValidationReport::violated(const std::string& needle) const {
  for (const auto& c : checks)
    if (!c.ok && c.name.find(needle) != std::string::npos) return true;
  return false;
}

ValidationReport validate_as_convergence(const SchedulePlan& p, double L) {
  ValidationReport r;
  push_basic_checks(r.checks, p);
  const double nm = static_cast<double>(p.n + p.m);
  const double ratio = p.a / p.b;
  r.checks.push_back(
      make_check("a/b > 1 + 2*delta*(n+m)", ratio > 1.0 + 2.0 * p.delta * nm, ratio,
                 1.0 + 2.0 * p.delta * nm));
  r.checks.push_back(make_check("a + b <= 1", p.a + p.b <= 1.0, p.a + p.b, 1.0));
  r.checks.push_back(make_check("a + 2b > 1", p.a + 2.0 * p.b > 1.0, p.a + 2.0 * p.b, 1.0));
  r.checks.push_back(make_check("a - delta*b*(m+n) > 1/2", p.a - p.delta * p.b * nm > 0.5,
                                p.a - p.delta * p.b * nm, 0.5));
  r.checks.push_back(make_check("gamma0*mu0 <= L*(m+n)", p.gamma0 * p.mu0 <= L * nm,
                                p.gamma0 * p.mu0, L * nm));
  return r;
}

ValidationReport validate_mean_convergence(const SchedulePlan& p, double /*L*/) {
  ValidationReport r;
  push_basic_checks(r.checks, p);
  const double nm = static_cast<double>(p.n + p.m);
  const double ratio = p.a / p.b;
  r.checks.push_back(
      make_check("a/b > 1 + 2*delta*(m+n)", ratio > 1.0 + 2.0 * p.delta * nm, ratio,
                 1.0 + 2.0 * p.delta * nm));
  r.checks.push_back(make_check("a + b < 1", p.a + p.b < 1.0, p.a + p.b, 1.0));
  r.checks.push_back(make_check("a/b <= 2*(1 + delta*(m+n))",
                                ratio <= 2.0 * (1.0 + p.delta * nm), ratio,
                                2.0 * (1.0 + p.delta * nm)));
  if (r.pass())
    r.rho = std::pow(p.mu0 * std::pow(2.0, p.b), 2.0 + 2.0 * p.delta * nm) / p.gamma0;
  return r;
}

ValidationReport validate_deterministic(const SchedulePlan& p, double L, DeterministicMode mode) {
  ValidationReport r;
  push_basic_checks(r.checks, p);
  const double nm = static_cast<double>(p.n + p.m);
  if (mode == DeterministicMode::convergence) {
    const double ratio = p.a / p.b;
    r.checks.push_back(make_check("a/b > 2*delta*(n+m)", ratio > 2.0 * p.delta * nm, ratio,
                                  2.0 * p.delta * nm));
    r.checks.push_back(make_check("a + b <= 1", p.a + p.b <= 1.0, p.a + p.b, 1.0));
    r.checks.push_back(make_check("a + 2b > 1", p.a + 2.0 * p.b > 1.0, p.a + 2.0 * p.b, 1.0));
  } else {
    r.checks.push_back(make_check("epsilon in (0, 1)", p.epsilon > 0.0 && p.epsilon < 1.0,
                                  p.epsilon, 1.0));
    r.checks.push_back(make_check("a = epsilon", p.a == p.epsilon, p.a, p.epsilon));
    r.checks.push_back(make_check("b = 1 - epsilon", p.b == 1.0 - p.epsilon, p.b,
                                  1.0 - p.epsilon));
    const double delta_cap = p.epsilon / (2.0 * nm * (1.0 - p.epsilon));
    r.checks.push_back(make_check("delta in (0, epsilon/(2*(n+m)*(1-epsilon)))",
                                  p.delta > 0.0 && p.delta < delta_cap, p.delta, delta_cap));
    const double rhs = nm * (L + p.tau * std::pow(p.mu0, p.delta));
    r.checks.push_back(make_check("gamma0*mu0 >= (n+m)*(L + tau*mu0^delta)",
                                  p.gamma0 * p.mu0 >= rhs, p.gamma0 * p.mu0, rhs));
  }
  return r;
}

std::optional<long> first_stepsize_feasible_index(const SchedulePlan& plan,
                                                  const EigenConstants& ec, double L,
                                                  long k_max) {
  const double threshold_log =
      std::log(ec.lambda_min) - 2.0 * ec.lambda_log - std::log(L + plan.mu0);
  for (long k = 0; k <= k_max; ++k) {
    double lhs = std::log(stepsize(k, plan));
    if (ec.alpha != 0.0) lhs += 2.0 * ec.alpha * std::log(regularization(k, plan));
    if (lhs <= threshold_log) return k;
  }
  return std::nullopt;
}

RateConstants compute_rate_constants(const RateEvidence& ev, const SchedulePlan& plan,
                                     const EigenConstants& ec, double L, double dist0, long K) {
  if (!(ev.beta > 0.0 && ev.beta < 1.0))
    throw std::invalid_argument("compute_rate_constants: beta must lie in (0,1)");
  const double contraction = ec.lambda_min * plan.gamma0 * plan.mu0;
  if (contraction <= plan.b)
    throw std::domain_error(
        "compute_rate_constants: lambda_min*gamma0*mu0 <= b, Gamma is undefined "
        "(initial stepsize/regularization product too small for the rate regime)");

  RateConstants out;
  const double head =
      std::pow(static_cast<double>(K + 1), 1.0 - plan.epsilon) * (ev.f_reg_at_K - ev.fstar);
  const double tail = ec.lambda_min * plan.gamma0 * plan.mu0 * plan.mu0 * dist0 * dist0 /
                      (std::pow(4.0, plan.a) * (contraction - plan.b));
  out.gamma_bound = std::max(head, tail);

  // theta, evaluated in log-space because lambda^2 is astronomically large for
  // all but tiny n+m.
  const double nm = static_cast<double>(plan.n + plan.m);
  const double rho_log = (2.0 + 2.0 * plan.delta * nm) *
                             std::log(plan.mu0 * std::pow(2.0, plan.b)) -
                         std::log(plan.gamma0);
  const double gamma_K = stepsize(K, plan);
  const double mu_K = regularization(K, plan);

  double arg1_log = -kInf;
  const double gap_next = ev.mean_f_reg_next - ev.fstar;
  if (gap_next > 0.0)
    arg1_log = std::log(gap_next) - std::log(gamma_K) - (2.0 * ec.alpha - 1.0) * std::log(mu_K);

  double noise_log = -kInf;
  if (ev.nu > 0.0)
    noise_log = std::log(L + plan.mu0) + 2.0 * ec.lambda_log + 2.0 * std::log(ev.nu);
  double dist_log = -kInf;
  if (dist0 > 0.0) dist_log = rho_log + std::log(ec.lambda_min) + 2.0 * std::log(dist0);
  const double arg2_log = log_add(dist_log, noise_log) -
                          std::log(2.0 * ec.lambda_min * (1.0 - ev.beta));

  const double theta_log = std::max(arg1_log, arg2_log);
  out.theta = theta_log == -kInf ? 0.0 : std::exp(theta_log);
  out.theta_is_estimate = true;
  return out;
}

}  // namespace irlbfgs
