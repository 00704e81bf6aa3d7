#pragma once

#include <optional>
#include <string>
#include <vector>

namespace irlbfgs {

// Every tuning scalar of one anchored run, plus the memory/dimension pair the
// derived constants refer to.
struct SchedulePlan {
  double gamma0 = 1.0;   // initial stepsize
  double mu0 = 1.0;      // initial regularization
  double a = 0.0;        // stepsize exponent
  double b = 0.0;        // regularization exponent
  double delta = 0.0;    // pair-perturbation exponent, in (0, 1]
  double tau = 1.0;      // pair-perturbation multiplier
  double epsilon = 0.0;  // rate parameter; meaningful for derived exponents
  int m = 1;             // memory (stored pair count)
  int n = 0;             // problem dimension
};

// Spectral constants of the limited-memory update,
//   lambda_min = 1 / ((m+n)(L + tau mu0^delta)),
//   lambda     = (m+n)^{n+m-1} (L + tau mu0^delta)^{n+m-1} / ((n-1)! tau^{n+m}),
//   alpha      = -delta (n+m).
// lambda is kept in log-space: the factorial and the power overflow binary64
// well before n ~ 200, and every consumer only ever compares against
// ln(lambda) + alpha ln(mu_k).
struct EigenConstants {
  double lambda_min = 0.0;
  double lambda_log = 0.0;  // ln(lambda)
  double alpha = 0.0;       // <= 0
};

// gamma_k = gamma0 / (k+1)^a
double stepsize(long k, const SchedulePlan& plan);

// mu_k = mu0 2^b / (k + 1 + mod(k+1, 2))^b; the denominator is (k+2)^b at
// even k and (k+1)^b at odd k, so mu freezes on odd iterations and drops on
// even ones.
double regularization(long k, const SchedulePlan& plan);

struct Exponents {
  double a = 0.0;
  double b = 0.0;
};

// a = 2/3 - epsilon + 2 delta (n+m) / 3, b = 1/3. Requires
// 0 < epsilon < 1/3 and 0 < delta < 1.5 epsilon / (n+m); throws
// std::invalid_argument naming the violated bound otherwise.
Exponents algorithm1_exponents(double epsilon, double delta, int n, int m);

EigenConstants eigen_constants(double L, double tau, double mu0, double delta, int n, int m);

// One named inequality outcome. The name is stable; callers match on it.
struct Check {
  std::string name;
  bool ok = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ValidationReport {
  std::vector<Check> checks;
  std::optional<double> rho;  // set by validate_mean_convergence on pass

  bool pass() const;
  std::vector<Check> violations() const;
  // True when some violated check's name contains `needle`.
  bool violated(const std::string& needle) const;
};

// Almost-sure convergence regime:
//   a/b > 1 + 2 delta (n+m),  a+b <= 1,  a+2b > 1,
//   a - delta b (m+n) > 1/2,  gamma0 mu0 <= L (m+n).
ValidationReport validate_as_convergence(const SchedulePlan& plan, double L);

// Convergence-in-mean regime:
//   a/b > 1 + 2 delta (m+n),  a+b < 1,  a/b <= 2 (1 + delta (m+n));
// on pass rho = gamma0^{-1} (mu0 2^b)^{2 + 2 delta (m+n)}.
ValidationReport validate_mean_convergence(const SchedulePlan& plan, double L);

enum class DeterministicMode { convergence, rate };

// convergence: a/b > 2 delta (n+m), a+b <= 1, a+2b > 1.
// rate:        a = epsilon, b = 1 - epsilon,
//              delta in (0, epsilon / (2 (n+m)(1-epsilon))),
//              gamma0 mu0 >= (n+m)(L + tau mu0^delta).
ValidationReport validate_deterministic(const SchedulePlan& plan, double L, DeterministicMode mode);

// First k in [0, k_max] with gamma_k mu_k^{2 alpha} <=
// lambda_min / (lambda^2 (L + mu0)), compared in log-space. nullopt when the
// condition never holds in range.
std::optional<long> first_stepsize_feasible_index(const SchedulePlan& plan,
                                                  const EigenConstants& ec, double L,
                                                  long k_max);

// Observed quantities feeding the rate constants.
struct RateEvidence {
  double f_reg_at_K = 0.0;       // f_K(x_K): exact in deterministic runs
  double mean_f_reg_next = 0.0;  // estimate of E[f_{K+1}(x_{K+1})]
  double fstar = 0.0;
  double nu = 0.0;    // gradient-noise bound; 0 in deterministic runs
  double beta = 0.5;  // free parameter in (0,1), enters theta only
};

struct RateConstants {
  double gamma_bound = 0.0;       // Gamma of the deterministic rate statement
  double theta = 0.0;             // +inf when the log-space value exceeds binary64
  bool theta_is_estimate = true;  // always an estimate unless nu = 0 and exact evidence
};

// Gamma = max{ (K+1)^{1-eps} (f_K(x_K) - f*),
//              lambda_min gamma0 mu0^2 dist0^2 / (4^a (lambda_min gamma0 mu0 - b)) }.
// theta = max{ (E[f_{K+1}(x_{K+1})] - f*) / (gamma_K mu_K^{2 alpha - 1}),
//              (rho lambda_min dist0^2 + (L + mu0) lambda^2 nu^2) / (2 lambda_min (1 - beta)) }.
// Throws std::domain_error when lambda_min gamma0 mu0 <= b.
RateConstants compute_rate_constants(const RateEvidence& ev, const SchedulePlan& plan,
                                     const EigenConstants& ec, double L, double dist0, long K);

}  // namespace irlbfgs
