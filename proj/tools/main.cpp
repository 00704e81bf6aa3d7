// Experiment runner for the iteratively regularized (stochastic) limited-memory
// BFGS library: validate / run / rate-fit / plot / bench.

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "irlbfgs/cli.hpp"
#include "irlbfgs/dataio.hpp"

namespace {

using irlbfgs::ExperimentConfig;

struct CommonFlags {
  std::string config_path;
  std::string algo, dataset, seeds, fstar, out, prefix, det_mode;
  std::string saga_init, iag_sweep;
  int dim = -1, m = -1, batch = -1;
  long subset = -1, iters = -1, log_stride = -1, epoch_len = -1;
  double epsilon = -1, delta = -1, tau = -1, gamma0 = -1, mu0 = -1, a = -1, b = -1;
  double step_gamma = -1, eta = -1, rho = -1, saga_sigma = -1;
  int shared_stream = -1, saga_average = -1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "flat key-value config file");
  cmd->add_option("--algo", f.algo,
                  "irs-lbfgs|ir-lbfgs|ir-sgd|sgd|saga|iag|rs-lbfgs");
  cmd->add_option("--dataset", f.dataset, "libsvm file or synth:... spec");
  cmd->add_option("--dim", f.dim, "dimension override for sparse data");
  cmd->add_option("--subset", f.subset, "subsample the dataset to this many examples");
  cmd->add_option("--m", f.m, "pair memory");
  cmd->add_option("--epsilon", f.epsilon, "rate parameter");
  cmd->add_option("--delta", f.delta, "pair-perturbation exponent");
  cmd->add_option("--tau", f.tau, "pair-perturbation multiplier");
  cmd->add_option("--gamma0", f.gamma0, "initial stepsize");
  cmd->add_option("--mu0", f.mu0, "initial regularization");
  cmd->add_option("--a", f.a, "stepsize exponent (skips the epsilon/delta rule)");
  cmd->add_option("--b", f.b, "regularization exponent");
  cmd->add_option("--iters", f.iters, "iteration count");
  cmd->add_option("--log-stride", f.log_stride, "objective logging stride");
  cmd->add_option("--batch", f.batch, "mini-batch size");
  cmd->add_option("--seeds", f.seeds, "comma-separated seed list");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--prefix", f.prefix, "output file prefix");
  cmd->add_option("--fstar", f.fstar, "optimal value, or 'estimate'");
  cmd->add_option("--shared-stream", f.shared_stream,
                  "share the sample stream across algorithms in bench (0|1)");
  cmd->add_option("--det-mode", f.det_mode, "ir-lbfgs validator mode: convergence|rate");
  cmd->add_option("--step-gamma", f.step_gamma, "constant stepsize for saga/iag");
  cmd->add_option("--eta", f.eta, "fixed regularization (saga/iag/rs-lbfgs)");
  cmd->add_option("--rho", f.rho, "rs-lbfgs epoch decay factor");
  cmd->add_option("--epoch-len", f.epoch_len, "rs-lbfgs epoch length");
  cmd->add_option("--saga-init", f.saga_init, "saga table init: exact|zero|perturbed");
  cmd->add_option("--saga-sigma", f.saga_sigma, "saga perturbed-init noise scale");
  cmd->add_option("--saga-average", f.saga_average, "saga iterate averaging (0|1)");
  cmd->add_option("--iag-sweep", f.iag_sweep, "iag sweep order: cyclic|random");
}

ExperimentConfig resolve(const CommonFlags& f) {
  ExperimentConfig cfg;
  if (!f.config_path.empty())
    cfg = ExperimentConfig::from_kv(irlbfgs::read_kv(f.config_path));
  if (!f.algo.empty()) cfg.run.algorithm = f.algo;
  if (!f.dataset.empty()) cfg.dataset = f.dataset;
  if (f.dim >= 0) cfg.dim_override = f.dim;
  if (f.subset >= 0) cfg.subset_n = f.subset;
  if (f.m >= 0) cfg.run.plan.m = f.m;
  if (f.epsilon >= 0) cfg.run.plan.epsilon = f.epsilon;
  if (f.delta >= 0) cfg.run.plan.delta = f.delta;
  if (f.tau >= 0) cfg.run.plan.tau = f.tau;
  if (f.gamma0 >= 0) cfg.run.plan.gamma0 = f.gamma0;
  if (f.mu0 >= 0) cfg.run.plan.mu0 = f.mu0;
  if (f.a >= 0) cfg.run.plan.a = f.a;
  if (f.b >= 0) cfg.run.plan.b = f.b;
  if (f.iters >= 0) cfg.run.max_iters = f.iters;
  if (f.log_stride >= 0) cfg.run.log_stride = f.log_stride;
  if (f.batch >= 0) cfg.run.batch = f.batch;
  if (!f.seeds.empty()) {
    cfg.seeds.clear();
    std::string tok;
    for (char c : f.seeds + ",") {
      if (c == ',') {
        if (!tok.empty()) cfg.seeds.push_back(std::stoull(tok));
        tok.clear();
      } else {
        tok += c;
      }
    }
  }
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (!f.prefix.empty()) cfg.prefix = f.prefix;
  if (!f.fstar.empty()) cfg.fstar = f.fstar;
  if (f.shared_stream >= 0) cfg.shared_stream = f.shared_stream != 0;
  if (!f.det_mode.empty()) cfg.det_mode = f.det_mode;
  if (f.step_gamma >= 0) cfg.run.step_gamma = f.step_gamma;
  if (f.eta >= 0) cfg.run.eta = f.eta;
  if (f.rho >= 0) cfg.run.rs_rho = f.rho;
  if (f.epoch_len >= 0) cfg.run.rs_epoch_len = f.epoch_len;
  if (!f.saga_init.empty()) {
    if (f.saga_init == "exact") cfg.run.saga_init = irlbfgs::SagaInit::exact;
    else if (f.saga_init == "zero") cfg.run.saga_init = irlbfgs::SagaInit::zero;
    else cfg.run.saga_init = irlbfgs::SagaInit::perturbed;
  }
  if (f.saga_sigma >= 0) cfg.run.saga_init_sigma = f.saga_sigma;
  if (f.saga_average >= 0) cfg.run.saga_average = f.saga_average != 0;
  if (!f.iag_sweep.empty())
    cfg.run.iag_sweep = f.iag_sweep == "random" ? irlbfgs::IagSweep::random
                                                : irlbfgs::IagSweep::cyclic;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iteratively regularized (stochastic) limited-memory BFGS benchmark"};
  app.require_subcommand(1);

  CommonFlags vf, rf, bf;
  auto* validate = app.add_subcommand("validate", "check plan parameters against their regime");
  add_common(validate, vf);

  auto* runcmd = app.add_subcommand("run", "run one experiment over all seeds");
  add_common(runcmd, rf);

  auto* bench = app.add_subcommand("bench", "grid of algorithms x stepsizes on one problem");
  add_common(bench, bf);
  std::vector<std::string> bench_algos{"irs-lbfgs", "rs-lbfgs"};
  std::vector<double> bench_grid{10.0, 0.5, 0.1};
  bench->add_option("--algos", bench_algos, "algorithms to compare")->delimiter(',');
  bench->add_option("--gamma0-grid", bench_grid, "gamma0 values")->delimiter(',');

  auto* ratefit = app.add_subcommand("rate-fit", "log-log slope of the optimality gap");
  std::vector<std::string> fit_csvs;
  std::string fit_fstar = "estimate";
  long fit_kmin = 1;
  double fit_margin = 1e-3;
  ratefit->add_option("csvs", fit_csvs, "run CSV files")->required();
  ratefit->add_option("--fstar", fit_fstar, "optimal value, or 'estimate'");
  ratefit->add_option("--kmin", fit_kmin, "fit only points with k >= kmin");
  ratefit->add_option("--margin", fit_margin, "relative margin for the f* estimate");

  auto* plot = app.add_subcommand("plot", "emit a static SVG of objective curves");
  std::vector<std::string> plot_csvs;
  std::string plot_out = "plot.svg", plot_title;
  bool plot_linear = false;
  plot->add_option("csvs", plot_csvs, "run CSV files")->required();
  plot->add_option("--out", plot_out, "output SVG path");
  plot->add_option("--title", plot_title, "plot title");
  plot->add_flag("--linear-y", plot_linear, "linear y axis instead of log");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return irlbfgs::cmd_validate(resolve(vf), std::cout);
    if (runcmd->parsed()) return irlbfgs::cmd_run(resolve(rf), std::cout);
    if (bench->parsed()) return irlbfgs::cmd_bench(resolve(bf), bench_algos, bench_grid, std::cout);
    if (ratefit->parsed())
      return irlbfgs::cmd_rate_fit(fit_csvs, fit_fstar, fit_kmin, fit_margin, std::cout);
    if (plot->parsed())
      return irlbfgs::cmd_plot(plot_csvs, plot_out, plot_title, !plot_linear, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
