#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irlbfgs/lbfgs.hpp"
#include "irlbfgs/problems.hpp"
#include "irlbfgs/records.hpp"
#include "irlbfgs/rng.hpp"
#include "irlbfgs/schedules.hpp"

namespace irlbfgs {

// Shared state of the anchored methods. x0 never changes over a run; k
// advances by exactly one per step. Extra memory beyond the iterate bookkeeping
// is the pair buffer: 2m vectors of length n.
struct OptimizerState {
  long k = 0;
  Vec x;
  Vec x0;
  Vec x_prev;
  std::vector<std::size_t> prev_batch;  // xi_{k-1}
  Vec prev_grad;                        // gradient at x_{k-1} under xi_{k-1}
  PairBuffer buffer;
  RngState rng;
  int batch = 1;
  long stalls = 0;
  bool pair_gap = false;   // a harvest was skipped; memory restarts on next pair
  bool converged = false;  // deterministic run hit a regularized stationary point

  static OptimizerState init(Vec x0, int m, RngState rng, int batch = 1);
};

// Zero-direction redraw cap; past it the step stalls with a zero move.
inline constexpr int kMaxResamples = 16;

// One iteration of the stochastic limited-memory scheme: at odd k a pair is
// harvested with both gradients under the retained sample xi_{k-1}, then a
// fresh sample drives the step. Plain regularized-gradient steps are taken
// until k = 2m-1, after which directions come from the two-loop recursion.
IterationRecord irs_lbfgs_step(OptimizerState& st, const StochasticOracle& oracle,
                               const SchedulePlan& plan);

// Deterministic variant: the full gradient replaces every sampled gradient.
// A zero regularized gradient sets st.converged and leaves the state in place.
IterationRecord ir_lbfgs_step(OptimizerState& st, const StochasticOracle& oracle,
                              const SchedulePlan& plan);

// H = I instance: x - gamma_k (grad F(x, xi) + mu_k (x - x0)).
IterationRecord ir_sgd_step(OptimizerState& st, const StochasticOracle& oracle,
                            const SchedulePlan& plan);

// ---------------------------------------------------------------------------
// Baselines
// ---------------------------------------------------------------------------

enum class SagaInit { exact, zero, perturbed };

// SAGA on f + (eta/2)||x||^2. The gradient table stores one scalar per
// component (the link derivative), exploiting the linear-model structure;
// the quadratic term is handled exactly outside the variance reduction.
struct SagaState {
  Vec x;
  std::vector<double> table;  // phi'_i at the table point
  Vec table_mean_grad;        // (1/N) sum_i table[i] * a_i
  RngState rng;
  bool average = false;
  Vec x_avg;
  long steps = 0;

  static SagaState init(const LinearModelOracle& oracle, const Vec& x0, RngState rng,
                        SagaInit mode, double sigma, bool average);

  std::size_t table_scalar_count() const { return table.size(); }
};

void saga_step(SagaState& st, const LinearModelOracle& oracle, double gamma, double eta);

enum class IagSweep { cyclic, random };

// Incremental aggregated gradient on f + (eta/2)||x||^2. Stores one dense
// gradient per component: O(N n) memory, the contrast to the O(m n) pair
// buffer of the limited-memory scheme.
struct IagState {
  Vec x;
  std::vector<Vec> table;
  Vec table_sum;
  std::size_t cursor = 0;
  IagSweep sweep = IagSweep::cyclic;
  RngState rng;

  static IagState init(const StochasticOracle& oracle, const Vec& x0, RngState rng,
                       IagSweep sweep, double eta);

  std::size_t stored_vector_count() const { return table.size(); }
};

void iag_step(IagState& st, const StochasticOracle& oracle, double gamma, double eta);

// Stochastic LBFGS on f + (eta/2)||x||^2 with gamma_k = gamma0/(k+1) and eta
// decayed by rho every epoch_len iterations. Pairs come from consecutive
// iterates with both regularized gradients under the current sample; pairs
// failing the curvature condition are skipped (eta is not coupled to the pair
// rule, so nothing guarantees them).
struct RsLbfgsState {
  long k = 0;
  Vec x;
  Vec x_prev;
  double eta = 0.0;
  PairBuffer buffer;
  long next_pair_index = 1;
  RngState rng;
  long skipped_pairs = 0;

  static RsLbfgsState init(Vec x0, int m, RngState rng, double eta0);
};

IterationRecord rs_lbfgs_step(RsLbfgsState& st, const StochasticOracle& oracle, double gamma0,
                              double rho, long epoch_len);

// ---------------------------------------------------------------------------
// Run driver
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string algorithm = "irs-lbfgs";  // irs-lbfgs | ir-lbfgs | ir-sgd | sgd |
                                        // saga | iag | rs-lbfgs
  SchedulePlan plan;
  long max_iters = 1000;
  long log_stride = 100;
  int batch = 1;

  double step_gamma = 0.1;  // saga/iag constant stepsize
  double eta = 0.1;         // fixed regularization (saga/iag), initial eta (rs-lbfgs)
  double rs_rho = 1.0;
  long rs_epoch_len = 400;
  SagaInit saga_init = SagaInit::exact;
  double saga_init_sigma = 0.0;
  bool saga_average = false;
  IagSweep iag_sweep = IagSweep::cyclic;

  Vec x0;  // empty means the origin

  KeyValues snapshot;  // embedded verbatim into the RunRecord
};

// Thrown when a step fails mid-run; carries everything logged so far.
class RunError : public std::runtime_error {
 public:
  RunError(const std::string& what, RunRecord partial)
      : std::runtime_error(what), partial_record(std::move(partial)) {}
  RunRecord partial_record;
};

// Executes max_iters steps, logging the exact full objective every log_stride
// iterations plus always at k = 0 and at the final iterate. Deterministic
// given (config, seed).
RunRecord run(const RunConfig& cfg, const StochasticOracle& oracle, std::uint64_t seed);

}  // namespace irlbfgs
