#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "irlbfgs/optimizers.hpp"
#include "irlbfgs/records.hpp"

namespace irlbfgs {

// Everything one experiment needs. Serializes to/from the flat key-value
// config format; the full effective snapshot (defaults included) is embedded
// into every run record so outputs stay self-describing.
struct ExperimentConfig {
  RunConfig run;

  std::string dataset;  // file path or synth:... spec
  int dim_override = 0;
  long subset_n = 0;
  std::uint64_t subset_seed = 1;

  std::vector<std::uint64_t> seeds = {1};
  std::string out_dir = ".";
  std::string prefix = "run";
  std::string fstar;  // "", a number, or "estimate"
  bool shared_stream = false;
  std::string det_mode = "convergence";  // validator mode for ir-lbfgs

  static ExperimentConfig from_kv(const KeyValues& kv);
  KeyValues to_kv() const;
};

// The problem an experiment runs on, plus whatever exact constants it offers.
struct BuiltProblem {
  std::unique_ptr<StochasticOracle> oracle;
  std::shared_ptr<const Dataset> dataset;      // logistic problems
  std::shared_ptr<const SyntheticLsq> lsq;     // least-squares problems
  double lipschitz = 0.0;                      // constant used for validation
  std::optional<double> fstar_known;
  std::optional<double> dist0;  // dist(x0, X*) from the origin, when exact
};

// Builds the oracle from a dataset path or a synth: spec, applying --dim and
// --subset. Recognized specs:
//   synth:logistic:n=..,N=..,nnz=..,scale=..,flip=..,seed=..
//   synth:lsq:n=..,scale=..,dist=..,rows=..
//   synth:lsq-random:n=..,rows=..,rank=..,seed=..
BuiltProblem build_problem(const ExperimentConfig& cfg);

// Fills plan.n from the problem and, when exponents were not given
// explicitly, derives (a, b): stochastic algorithms use the epsilon/delta
// rule, the deterministic rate regime uses a = epsilon, b = 1 - epsilon.
void finalize_plan(SchedulePlan& plan, int problem_dim, const std::string& algorithm,
                   const std::string& det_mode);

int cmd_validate(const ExperimentConfig& cfg, std::ostream& out);
int cmd_run(const ExperimentConfig& cfg, std::ostream& out);
int cmd_rate_fit(const std::vector<std::string>& csv_paths, const std::string& fstar_arg,
                 long k_min, double margin_rel, std::ostream& out);
int cmd_plot(const std::vector<std::string>& csv_paths, const std::string& out_svg,
             const std::string& title, bool log_y, std::ostream& out);
int cmd_bench(const ExperimentConfig& cfg, const std::vector<std::string>& algos,
              const std::vector<double>& gamma0_grid, std::ostream& out);

}  // namespace irlbfgs
