#include "irlbfgs/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "irlbfgs/analysis.hpp"
#include "irlbfgs/dataio.hpp"
#include "irlbfgs/plot.hpp"
#include "irlbfgs/synthetic.hpp"

namespace irlbfgs {

namespace {

double to_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for '" + key + "': " + s);
  }
}

long to_long(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " + s);
  }
}

bool to_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "': " + s);
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) seeds.push_back(std::stoull(tok));
  if (seeds.empty()) throw std::invalid_argument("config: empty seed list");
  return seeds;
}

std::string seeds_to_string(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(seeds[i]);
  }
  return out;
}

// key=value,key=value parameter lists inside synth: specs
std::vector<std::pair<std::string, std::string>> parse_params(const std::string& s) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("synth spec: expected key=value, got '" + tok + "'");
    out.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
  }
  return out;
}

SagaInit parse_saga_init(const std::string& s) {
  if (s == "exact") return SagaInit::exact;
  if (s == "zero") return SagaInit::zero;
  if (s == "perturbed") return SagaInit::perturbed;
  throw std::invalid_argument("config: saga_init must be exact|zero|perturbed");
}

std::string saga_init_name(SagaInit m) {
  switch (m) {
    case SagaInit::exact: return "exact";
    case SagaInit::zero: return "zero";
    default: return "perturbed";
  }
}

void print_report(const ValidationReport& rep, std::ostream& out) {
  for (const auto& c : rep.checks)
    out << "  [" << (c.ok ? "PASS" : "FAIL") << "] " << c.name << "  (lhs = " << c.lhs
        << ", rhs = " << c.rhs << ")\n";
  if (rep.rho) out << "  rho = " << *rep.rho << "\n";
}

// Per-algorithm validation; for the stochastic limited-memory scheme this is
// the exponent-derivation rule, the mean-convergence regime, and the input
// bound gamma0*mu0 <= L*(m+n).
ValidationReport validate_for(const ExperimentConfig& cfg, const SchedulePlan& plan, double L) {
  const std::string& algo = cfg.run.algorithm;
  if (algo == "irs-lbfgs") {
    ValidationReport rep;
    if (plan.epsilon > 0.0) {
      try {
        algorithm1_exponents(plan.epsilon, plan.delta, plan.n, plan.m);
        rep.checks.push_back({"epsilon/delta exponent rule", true, plan.epsilon, plan.delta});
      } catch (const std::invalid_argument& e) {
        rep.checks.push_back({std::string(e.what()), false, plan.epsilon, plan.delta});
      }
    }
    ValidationReport mean = validate_mean_convergence(plan, L);
    rep.checks.insert(rep.checks.end(), mean.checks.begin(), mean.checks.end());
    rep.rho = mean.rho;
    const double nm = static_cast<double>(plan.n + plan.m);
    rep.checks.push_back({"gamma0*mu0 <= L*(m+n)", plan.gamma0 * plan.mu0 <= L * nm,
                          plan.gamma0 * plan.mu0, L * nm});
    return rep;
  }
  if (algo == "ir-lbfgs") {
    const auto mode = cfg.det_mode == "rate" ? DeterministicMode::rate
                                             : DeterministicMode::convergence;
    return validate_deterministic(plan, L, mode);
  }
  if (algo == "ir-sgd") return validate_as_convergence(plan, L);
  ValidationReport rep;
  if (algo == "sgd") {
    rep.checks.push_back({"gamma0 > 0", plan.gamma0 > 0.0, plan.gamma0, 0.0});
    rep.checks.push_back({"a in (0, 1]", plan.a > 0.0 && plan.a <= 1.0, plan.a, 1.0});
    return rep;
  }
  if (algo == "saga" || algo == "iag") {
    rep.checks.push_back({"step_gamma > 0", cfg.run.step_gamma > 0.0, cfg.run.step_gamma, 0.0});
    rep.checks.push_back({"eta >= 0", cfg.run.eta >= 0.0, cfg.run.eta, 0.0});
    return rep;
  }
  if (algo == "rs-lbfgs") {
    rep.checks.push_back({"gamma0 > 0", plan.gamma0 > 0.0, plan.gamma0, 0.0});
    rep.checks.push_back({"rho in (0, 1]", cfg.run.rs_rho > 0.0 && cfg.run.rs_rho <= 1.0,
                          cfg.run.rs_rho, 1.0});
    rep.checks.push_back({"epoch_len >= 1", cfg.run.rs_epoch_len >= 1,
                          static_cast<double>(cfg.run.rs_epoch_len), 1.0});
    rep.checks.push_back({"eta >= 0", cfg.run.eta >= 0.0, cfg.run.eta, 0.0});
    return rep;
  }
  throw std::invalid_argument("unknown algorithm '" + algo + "'");
}

IterationRecord mean_record(std::span<const RunRecord> runs, std::size_t i) {
  IterationRecord rec = runs.front().records[i];
  double f = 0.0, dir = 0.0, freg = 0.0;
  bool all_reg = true;
  for (const auto& rr : runs) {
    f += rr.records[i].f;
    dir += rr.records[i].dir_norm;
    if (rr.records[i].f_reg)
      freg += *rr.records[i].f_reg;
    else
      all_reg = false;
  }
  const double n = static_cast<double>(runs.size());
  rec.f = f / n;
  rec.dir_norm = dir / n;
  if (all_reg)
    rec.f_reg = freg / n;
  else
    rec.f_reg.reset();
  return rec;
}

RunRecord averaged_record(std::span<const RunRecord> runs, const KeyValues& snapshot) {
  mean_objective_curve(runs);  // grid consistency check
  RunRecord mean;
  mean.algorithm = runs.front().algorithm;
  mean.config = snapshot;
  kv_set(mean.config, "averaged", "true");
  mean.seed = 0;
  mean.records.reserve(runs.front().records.size());
  for (std::size_t i = 0; i < runs.front().records.size(); ++i)
    mean.records.push_back(mean_record(runs, i));
  return mean;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_kv(const KeyValues& kv) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key == "algo") cfg.run.algorithm = value;
    else if (key == "dataset") cfg.dataset = value;
    else if (key == "dim") cfg.dim_override = static_cast<int>(to_long(value, key));
    else if (key == "subset") cfg.subset_n = to_long(value, key);
    else if (key == "subset_seed") cfg.subset_seed = static_cast<std::uint64_t>(to_long(value, key));
    else if (key == "m") cfg.run.plan.m = static_cast<int>(to_long(value, key));
    else if (key == "n") cfg.run.plan.n = static_cast<int>(to_long(value, key));
    else if (key == "epsilon") cfg.run.plan.epsilon = to_double(value, key);
    else if (key == "delta") cfg.run.plan.delta = to_double(value, key);
    else if (key == "tau") cfg.run.plan.tau = to_double(value, key);
    else if (key == "gamma0") cfg.run.plan.gamma0 = to_double(value, key);
    else if (key == "mu0") cfg.run.plan.mu0 = to_double(value, key);
    else if (key == "a") cfg.run.plan.a = to_double(value, key);
    else if (key == "b") cfg.run.plan.b = to_double(value, key);
    else if (key == "iters") cfg.run.max_iters = to_long(value, key);
    else if (key == "log_stride") cfg.run.log_stride = to_long(value, key);
    else if (key == "batch") cfg.run.batch = static_cast<int>(to_long(value, key));
    else if (key == "step_gamma") cfg.run.step_gamma = to_double(value, key);
    else if (key == "eta") cfg.run.eta = to_double(value, key);
    else if (key == "rho") cfg.run.rs_rho = to_double(value, key);
    else if (key == "epoch_len") cfg.run.rs_epoch_len = to_long(value, key);
    else if (key == "saga_init") cfg.run.saga_init = parse_saga_init(value);
    else if (key == "saga_sigma") cfg.run.saga_init_sigma = to_double(value, key);
    else if (key == "saga_average") cfg.run.saga_average = to_bool(value, key);
    else if (key == "iag_sweep")
      cfg.run.iag_sweep = value == "random" ? IagSweep::random : IagSweep::cyclic;
    else if (key == "seeds") cfg.seeds = parse_seeds(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "prefix") cfg.prefix = value;
    else if (key == "fstar") cfg.fstar = value;
    else if (key == "shared_stream") cfg.shared_stream = to_bool(value, key);
    else if (key == "det_mode") cfg.det_mode = value;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  return cfg;
}

KeyValues ExperimentConfig::to_kv() const {
  KeyValues kv;
  kv.emplace_back("algo", run.algorithm);
  kv.emplace_back("dataset", dataset);
  kv.emplace_back("dim", std::to_string(dim_override));
  kv.emplace_back("subset", std::to_string(subset_n));
  kv.emplace_back("subset_seed", std::to_string(subset_seed));
  kv.emplace_back("m", std::to_string(run.plan.m));
  kv.emplace_back("n", std::to_string(run.plan.n));
  kv.emplace_back("epsilon", format_real(run.plan.epsilon));
  kv.emplace_back("delta", format_real(run.plan.delta));
  kv.emplace_back("tau", format_real(run.plan.tau));
  kv.emplace_back("gamma0", format_real(run.plan.gamma0));
  kv.emplace_back("mu0", format_real(run.plan.mu0));
  kv.emplace_back("a", format_real(run.plan.a));
  kv.emplace_back("b", format_real(run.plan.b));
  kv.emplace_back("iters", std::to_string(run.max_iters));
  kv.emplace_back("log_stride", std::to_string(run.log_stride));
  kv.emplace_back("batch", std::to_string(run.batch));
  kv.emplace_back("step_gamma", format_real(run.step_gamma));
  kv.emplace_back("eta", format_real(run.eta));
  kv.emplace_back("rho", format_real(run.rs_rho));
  kv.emplace_back("epoch_len", std::to_string(run.rs_epoch_len));
  kv.emplace_back("saga_init", saga_init_name(run.saga_init));
  kv.emplace_back("saga_sigma", format_real(run.saga_init_sigma));
  kv.emplace_back("saga_average", run.saga_average ? "true" : "false");
  kv.emplace_back("iag_sweep", run.iag_sweep == IagSweep::random ? "random" : "cyclic");
  kv.emplace_back("seeds", seeds_to_string(seeds));
  kv.emplace_back("out", out_dir);
  kv.emplace_back("prefix", prefix);
  kv.emplace_back("fstar", fstar);
  kv.emplace_back("shared_stream", shared_stream ? "true" : "false");
  kv.emplace_back("det_mode", det_mode);
  return kv;
}

BuiltProblem build_problem(const ExperimentConfig& cfg) {
  if (cfg.dataset.empty()) throw std::invalid_argument("no dataset or synth spec given");
  BuiltProblem built;

  if (cfg.dataset.rfind("synth:", 0) == 0) {
    const std::string body = cfg.dataset.substr(6);
    const auto colon = body.find(':');
    const std::string kind = colon == std::string::npos ? body : body.substr(0, colon);
    const auto params =
        colon == std::string::npos ? std::vector<std::pair<std::string, std::string>>{}
                                   : parse_params(body.substr(colon + 1));
    auto param = [&](const std::string& key, double fallback) {
      for (const auto& [k, v] : params)
        if (k == key) return to_double(v, key);
      return fallback;
    };

    if (kind == "logistic") {
      LogisticSynthSpec spec;
      spec.n = static_cast<int>(param("n", 50));
      spec.N = static_cast<std::size_t>(param("N", 2000));
      spec.nnz = static_cast<int>(param("nnz", 10));
      spec.feature_scale = param("scale", 1.0);
      spec.flip_prob = param("flip", 0.1);
      spec.seed = static_cast<std::uint64_t>(param("seed", 1));
      auto ds = std::make_shared<Dataset>(make_logistic_dataset(spec));
      if (cfg.subset_n > 0)
        ds = std::make_shared<Dataset>(
            subset(*ds, static_cast<std::size_t>(cfg.subset_n), cfg.subset_seed));
      built.lipschitz = ds->lipschitz_bound;
      built.dataset = ds;
      built.oracle = std::make_unique<LogisticOracle>(ds);
      return built;
    }
    if (kind == "lsq") {
      auto lsq = std::make_shared<SyntheticLsq>(
          make_rank1_lsq(static_cast<int>(param("n", 2)), param("scale", 1.0), param("dist", 2.0),
                         static_cast<int>(param("rows", 2))));
      built.lipschitz = lsq->lipschitz_full();
      built.fstar_known = lsq->known_fstar();
      built.dist0 = lsq->dist_to_solution_set(Vec::Zero(lsq->dim()));
      built.lsq = lsq;
      built.oracle = std::make_unique<LsqOracle>(lsq);
      return built;
    }
    if (kind == "lsq-random") {
      const int n = static_cast<int>(param("n", 4));
      auto lsq = std::make_shared<SyntheticLsq>(
          make_random_lsq(n, static_cast<int>(param("rows", 8)),
                          static_cast<int>(param("rank", n - 1)),
                          static_cast<std::uint64_t>(param("seed", 1))));
      built.lipschitz = lsq->lipschitz_full();
      built.fstar_known = lsq->known_fstar();
      built.dist0 = lsq->dist_to_solution_set(Vec::Zero(lsq->dim()));
      built.lsq = lsq;
      built.oracle = std::make_unique<LsqOracle>(lsq);
      return built;
    }
    throw std::invalid_argument("unknown synth kind '" + kind + "'");
  }

  auto ds = std::make_shared<Dataset>(read_libsvm(cfg.dataset, cfg.dim_override));
  if (cfg.subset_n > 0)
    ds = std::make_shared<Dataset>(
        subset(*ds, static_cast<std::size_t>(cfg.subset_n), cfg.subset_seed));
  built.lipschitz = ds->lipschitz_bound;
  built.dataset = ds;
  built.oracle = std::make_unique<LogisticOracle>(ds);
  return built;
}

void finalize_plan(SchedulePlan& plan, int problem_dim, const std::string& algorithm,
                   const std::string& det_mode) {
  plan.n = problem_dim;
  if (!(plan.epsilon > 0.0) || plan.a != 0.0) return;
  if (algorithm == "ir-lbfgs" && det_mode == "rate") {
    plan.a = plan.epsilon;
    plan.b = 1.0 - plan.epsilon;
    return;
  }
  const Exponents e = algorithm1_exponents(plan.epsilon, plan.delta, plan.n, plan.m);
  plan.a = e.a;
  plan.b = e.b;
}

int cmd_validate(const ExperimentConfig& cfg, std::ostream& out) {
  ExperimentConfig local = cfg;
  BuiltProblem problem = build_problem(local);
  try {
    finalize_plan(local.run.plan, problem.oracle->dim(), local.run.algorithm, local.det_mode);
  } catch (const std::invalid_argument& e) {
    out << "  [FAIL] " << e.what() << "\n";
    out << "validate: FAIL\n";
    return 1;
  }
  const ValidationReport rep = validate_for(local, local.run.plan, problem.lipschitz);
  print_report(rep, out);

  // informational: first index where gamma_k mu_k^{2 alpha} clears the
  // lambda_min / (lambda^2 (L + mu0)) threshold (log-space scan)
  const SchedulePlan& plan = local.run.plan;
  const std::string& algo = local.run.algorithm;
  if ((algo == "irs-lbfgs" || algo == "ir-lbfgs") && plan.mu0 > 0.0 && plan.delta > 0.0 &&
      problem.lipschitz > 0.0) {
    const EigenConstants ec =
        eigen_constants(problem.lipschitz, plan.tau, plan.mu0, plan.delta, plan.n, plan.m);
    const auto idx = first_stepsize_feasible_index(plan, ec, problem.lipschitz, 1000000);
    if (idx)
      out << "  stepsize condition first holds at k = " << *idx << "\n";
    else
      out << "  stepsize condition not reached within 1e6 iterations\n";
  }

  out << "validate: " << (rep.pass() ? "PASS" : "FAIL") << "\n";
  return rep.pass() ? 0 : 1;
}

int cmd_run(const ExperimentConfig& cfg, std::ostream& out) {
  ExperimentConfig local = cfg;
  BuiltProblem problem = build_problem(local);
  try {
    finalize_plan(local.run.plan, problem.oracle->dim(), local.run.algorithm, local.det_mode);
  } catch (const std::invalid_argument& e) {
    out << "run: invalid plan: " << e.what() << "\n";
    return 2;
  }
  const ValidationReport rep = validate_for(local, local.run.plan, problem.lipschitz);
  if (!rep.pass()) {
    print_report(rep, out);
    out << "run: configuration failed validation\n";
    return 2;
  }

  std::filesystem::create_directories(local.out_dir);
  local.run.snapshot = local.to_kv();

  std::vector<std::uint64_t> seeds = local.seeds;
  std::sort(seeds.begin(), seeds.end());

  // Seeds run concurrently over the shared read-only oracle; each run owns
  // its RNG stream, so results do not depend on scheduling. Files are written
  // afterwards in seed order.
  std::vector<std::future<RunRecord>> pending;
  pending.reserve(seeds.size());
  for (const std::uint64_t seed : seeds)
    pending.push_back(std::async(std::launch::async, [&, seed] {
      return run(local.run, *problem.oracle, seed);
    }));

  std::vector<RunRecord> runs;
  runs.reserve(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    RunRecord rr = pending[i].get();
    const std::string path =
        local.out_dir + "/" + local.prefix + "_seed" + std::to_string(seeds[i]) + ".csv";
    write_run_csv(rr, path);
    out << "wrote " << path << " (" << rr.records.size() << " records, "
        << std::fixed << std::setprecision(3) << rr.wall_time_seconds << "s)\n";
    out.unsetf(std::ios::floatfield);
    runs.push_back(std::move(rr));
  }

  const RunRecord mean = averaged_record(runs, local.run.snapshot);
  const std::string mean_path = local.out_dir + "/" + local.prefix + "_mean.csv";
  write_run_csv(mean, mean_path);
  out << "wrote " << mean_path << "\n";

  const double final_mean_f = mean.records.back().f;
  std::optional<double> fstar;
  if (!local.fstar.empty() && local.fstar != "estimate")
    fstar = to_double(local.fstar, "fstar");
  else if (problem.fstar_known)
    fstar = *problem.fstar_known;
  if (fstar)
    out << "final mean gap = " << format_real(final_mean_f - *fstar) << " (f* = "
        << format_real(*fstar) << ")\n";
  else
    out << "final mean objective = " << format_real(final_mean_f) << "\n";

  // rate-constant diagnostic for the deterministic rate regime, anchored at
  // the first logged index where the contraction factor sits inside (0, 1)
  if (local.run.algorithm == "ir-lbfgs" && local.det_mode == "rate" && problem.lsq && fstar &&
      problem.dist0) {
    const SchedulePlan& plan = local.run.plan;
    const EigenConstants ec =
        eigen_constants(problem.lipschitz, plan.tau, plan.mu0, plan.delta, plan.n, plan.m);
    const IterationRecord* anchor = nullptr;
    for (const auto& rec : mean.records) {
      if (rec.k < 2L * plan.m - 1 || !rec.f_reg) continue;
      if (ec.lambda_min * rec.gamma * rec.mu < 1.0) {
        anchor = &rec;
        break;
      }
    }
    if (anchor != nullptr) {
      RateEvidence ev;
      ev.f_reg_at_K = *anchor->f_reg;
      ev.mean_f_reg_next = *anchor->f_reg;
      ev.fstar = *fstar;
      ev.nu = 0.0;
      try {
        const RateConstants rc =
            compute_rate_constants(ev, plan, ec, problem.lipschitz, *problem.dist0, anchor->k);
        out << "rate constants at K = " << anchor->k << ": Gamma = "
            << format_real(rc.gamma_bound) << ", theta = " << format_real(rc.theta)
            << " (estimate)\n";
      } catch (const std::domain_error& e) {
        out << "rate constants unavailable: " << e.what() << "\n";
      }
    }
  }
  return 0;
}

int cmd_rate_fit(const std::vector<std::string>& csv_paths, const std::string& fstar_arg,
                 long k_min, double margin_rel, std::ostream& out) {
  if (csv_paths.empty()) {
    out << "rate-fit: no input files\n";
    return 1;
  }
  std::vector<RunRecord> runs;
  runs.reserve(csv_paths.size());
  for (const auto& p : csv_paths) runs.push_back(read_run_csv(p));

  std::optional<double> fstar;
  if (!fstar_arg.empty() && fstar_arg != "estimate") fstar = to_double(fstar_arg, "fstar");

  try {
    const RateFit fit = rate_fit(runs, fstar, k_min, margin_rel);
    out << "rate-fit: slope = " << format_real(fit.slope) << ", intercept = "
        << format_real(fit.intercept) << ", points = " << fit.points << ", fstar = "
        << format_real(fit.fstar_used);
    if (fit.fstar_estimated) out << " (estimated, margin = " << format_real(fit.margin) << ")";
    out << "\n";
  } catch (const std::exception& e) {
    out << "rate-fit: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int cmd_plot(const std::vector<std::string>& csv_paths, const std::string& out_svg,
             const std::string& title, bool log_y, std::ostream& out) {
  if (csv_paths.empty()) {
    out << "plot: no input files\n";
    return 1;
  }
  std::vector<RunRecord> runs;
  runs.reserve(csv_paths.size());
  for (const auto& p : csv_paths) runs.push_back(read_run_csv(p));

  PlotOptions opts;
  opts.title = title.empty() ? "objective" : title;
  opts.log_y = log_y;
  std::string warning;
  const std::string svg = render_svg(runs, opts, &warning);
  if (!warning.empty()) out << "plot: warning: " << warning << "\n";

  std::ofstream f(out_svg);
  if (!f) {
    out << "plot: cannot open " << out_svg << "\n";
    return 1;
  }
  f << svg;
  out << "wrote " << out_svg << "\n";
  return 0;
}

int cmd_bench(const ExperimentConfig& cfg, const std::vector<std::string>& algos,
              const std::vector<double>& gamma0_grid, std::ostream& out) {
  if (algos.empty() || gamma0_grid.empty()) {
    out << "bench: need at least one algorithm and one gamma0\n";
    return 1;
  }
  BuiltProblem problem = build_problem(cfg);
  std::filesystem::create_directories(cfg.out_dir);

  out << "algorithm        gamma0      final mean f\n";
  for (std::size_t ai = 0; ai < algos.size(); ++ai) {
    for (const double g0 : gamma0_grid) {
      ExperimentConfig local = cfg;
      local.run.algorithm = algos[ai];
      local.run.plan.gamma0 = g0;
      try {
        finalize_plan(local.run.plan, problem.oracle->dim(), local.run.algorithm, local.det_mode);
      } catch (const std::invalid_argument& e) {
        out << algos[ai] << "  g0=" << g0 << "  SKIP (" << e.what() << ")\n";
        continue;
      }
      const ValidationReport rep = validate_for(local, local.run.plan, problem.lipschitz);
      if (!rep.pass()) {
        out << algos[ai] << "  g0=" << g0 << "  SKIP (failed validation)\n";
        continue;
      }
      local.run.snapshot = local.to_kv();
      kv_set(local.run.snapshot, "label", algos[ai] + " g0=" + format_real(g0));

      std::vector<std::uint64_t> seeds = local.seeds;
      std::sort(seeds.begin(), seeds.end());
      std::vector<RunRecord> runs;
      for (const std::uint64_t seed : seeds) {
        const std::uint64_t effective =
            local.shared_stream ? seed : RngState::derive(seed, ai).state;
        runs.push_back(run(local.run, *problem.oracle, effective));
      }
      const RunRecord mean = averaged_record(runs, local.run.snapshot);
      std::ostringstream name;
      name << cfg.out_dir << "/" << cfg.prefix << "_" << algos[ai] << "_g" << g0 << ".csv";
      write_run_csv(mean, name.str());
      out << std::left << std::setw(16) << algos[ai] << " " << std::setw(11) << g0 << " "
          << format_real(mean.records.back().f) << "\n";
    }
  }
  return 0;
}

}  // namespace irlbfgs
