#include "irlbfgs/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace irlbfgs {

namespace {

void draw_batch(RngState& rng, std::size_t N, int batch, std::vector<std::size_t>& out) {
  out.resize(static_cast<std::size_t>(batch));
  for (auto& i : out) i = sample_index(rng, N);
}

long pair_index_for(long k) { return (k + 1) / 2; }  // ceil(k/2) for odd k

// Harvest the pair at odd k, both gradients under the retained sample batch.
// A stalled previous step leaves x == x_prev: the harvest is skipped and the
// memory restarts at the next successful one, keeping indices contiguous.
void harvest_pair(OptimizerState& st, const Vec& g_pair, const SchedulePlan& plan, double mu_k) {
  if ((st.x - st.x_prev).isZero(0.0)) {
    st.pair_gap = true;
    return;
  }
  CurvaturePair p = make_pair(st.x, st.x_prev, g_pair, st.prev_grad, plan.tau, mu_k, plan.delta,
                              pair_index_for(st.k));
  if (st.pair_gap) {
    st.buffer.clear();
    st.pair_gap = false;
  }
  st.buffer.push(std::move(p));
}

}  // namespace

OptimizerState OptimizerState::init(Vec x0, int m, RngState rng, int batch) {
  if (batch < 1) throw std::invalid_argument("OptimizerState: batch must be >= 1");
  OptimizerState st{.k = 0,
                    .x = x0,
                    .x0 = x0,
                    .x_prev = x0,
                    .prev_batch = {},
                    .prev_grad = Vec::Zero(x0.size()),
                    .buffer = PairBuffer(m),
                    .rng = rng,
                    .batch = batch};
  return st;
}

IterationRecord irs_lbfgs_step(OptimizerState& st, const StochasticOracle& oracle,
                               const SchedulePlan& plan) {
  const long k = st.k;
  const double gamma = stepsize(k, plan);
  const double mu = regularization(k, plan);

  IterationRecord rec;
  rec.k = k;
  rec.gamma = gamma;
  rec.mu = mu;

  std::vector<std::size_t> batch;
  draw_batch(st.rng, oracle.component_count(), st.batch, batch);
  Vec g(st.x.size());
  batch_grad(oracle, st.x, batch, g);

  if (k % 2 == 1) {
    Vec g_pair(st.x.size());
    batch_grad(oracle, st.x, st.prev_batch, g_pair);
    harvest_pair(st, g_pair, plan, mu);
  }

  Vec q0 = g + mu * (st.x - st.x0);
  while (q0.isZero(0.0) && rec.resampled < kMaxResamples) {
    ++rec.resampled;
    draw_batch(st.rng, oracle.component_count(), st.batch, batch);
    batch_grad(oracle, st.x, batch, g);
    q0 = g + mu * (st.x - st.x0);
  }

  Vec direction;
  if (q0.isZero(0.0)) {
    ++st.stalls;
    direction = Vec::Zero(st.x.size());
  } else if (k < 2L * plan.m - 1) {
    direction = q0;
  } else {
    direction = two_loop(st.buffer, q0);
  }
  rec.dir_norm = direction.norm();

  st.x_prev = st.x;
  st.prev_batch = batch;
  st.prev_grad = g;
  st.x -= gamma * direction;
  ++st.k;
  return rec;
}

IterationRecord ir_lbfgs_step(OptimizerState& st, const StochasticOracle& oracle,
                              const SchedulePlan& plan) {
  const long k = st.k;
  const double gamma = stepsize(k, plan);
  const double mu = regularization(k, plan);

  IterationRecord rec;
  rec.k = k;
  rec.gamma = gamma;
  rec.mu = mu;

  Vec g(st.x.size());
  oracle.full_grad(st.x, g);

  if (k % 2 == 1) harvest_pair(st, g, plan, mu);

  const Vec q0 = g + mu * (st.x - st.x0);
  if (q0.isZero(0.0)) {
    st.converged = true;
    rec.dir_norm = 0.0;
    return rec;
  }

  const Vec direction = (k < 2L * plan.m - 1) ? q0 : two_loop(st.buffer, q0);
  rec.dir_norm = direction.norm();

  st.x_prev = st.x;
  st.prev_grad = g;
  st.x -= gamma * direction;
  ++st.k;
  return rec;
}

IterationRecord ir_sgd_step(OptimizerState& st, const StochasticOracle& oracle,
                            const SchedulePlan& plan) {
  const long k = st.k;
  const double gamma = stepsize(k, plan);
  const double mu = regularization(k, plan);

  IterationRecord rec;
  rec.k = k;
  rec.gamma = gamma;
  rec.mu = mu;

  std::vector<std::size_t> batch;
  draw_batch(st.rng, oracle.component_count(), st.batch, batch);
  Vec g(st.x.size());
  batch_grad(oracle, st.x, batch, g);

  Vec q0 = g + mu * (st.x - st.x0);
  while (q0.isZero(0.0) && rec.resampled < kMaxResamples) {
    ++rec.resampled;
    draw_batch(st.rng, oracle.component_count(), st.batch, batch);
    batch_grad(oracle, st.x, batch, g);
    q0 = g + mu * (st.x - st.x0);
  }
  if (q0.isZero(0.0)) ++st.stalls;

  rec.dir_norm = q0.norm();
  st.x_prev = st.x;
  st.prev_batch = batch;
  st.prev_grad = g;
  st.x -= gamma * q0;
  ++st.k;
  return rec;
}

// ---------------------------------------------------------------------------
// SAGA
// ---------------------------------------------------------------------------

SagaState SagaState::init(const LinearModelOracle& oracle, const Vec& x0, RngState rng,
                          SagaInit mode, double sigma, bool average) {
  const std::size_t N = oracle.component_count();
  if (N == 0) throw std::invalid_argument("SagaState: empty oracle");
  SagaState st;
  st.x = x0;
  st.rng = rng;
  st.average = average;
  st.x_avg = x0;
  st.table.assign(N, 0.0);
  if (mode != SagaInit::zero) {
    for (std::size_t i = 0; i < N; ++i) {
      double phi = oracle.link_derivative(oracle.row_dot(x0, i), i);
      if (mode == SagaInit::perturbed) phi += sigma * st.rng.next_gaussian();
      st.table[i] = phi;
    }
  }
  st.table_mean_grad = Vec::Zero(x0.size());
  for (std::size_t i = 0; i < N; ++i)
    for (const auto& [idx, val] : oracle.row(i)) st.table_mean_grad[idx] += st.table[i] * val;
  st.table_mean_grad /= static_cast<double>(N);
  return st;
}

void saga_step(SagaState& st, const LinearModelOracle& oracle, double gamma, double eta) {
  const std::size_t N = oracle.component_count();
  if (st.table.size() != N) throw std::invalid_argument("saga_step: table size mismatch");
  const std::size_t j = sample_index(st.rng, N);

  const double phi = oracle.link_derivative(oracle.row_dot(st.x, j), j);
  const double diff = phi - st.table[j];

  // direction = g_j(x) - table_j + mean(table) + eta x; the first two terms
  // share the sparse row a_j, the quadratic term is handled exactly.
  Vec direction = st.table_mean_grad + eta * st.x;
  for (const auto& [idx, val] : oracle.row(j)) direction[idx] += diff * val;

  st.x -= gamma * direction;

  const double scale = diff / static_cast<double>(N);
  for (const auto& [idx, val] : oracle.row(j)) st.table_mean_grad[idx] += scale * val;
  st.table[j] = phi;

  ++st.steps;
  if (st.average) {
    const double w = 1.0 / static_cast<double>(st.steps + 1);
    st.x_avg += w * (st.x - st.x_avg);
  }
}

// ---------------------------------------------------------------------------
// IAG
// ---------------------------------------------------------------------------

IagState IagState::init(const StochasticOracle& oracle, const Vec& x0, RngState rng,
                        IagSweep sweep, double eta) {
  const std::size_t N = oracle.component_count();
  if (N == 0) throw std::invalid_argument("IagState: empty oracle");
  IagState st;
  st.x = x0;
  st.rng = rng;
  st.sweep = sweep;
  st.table.resize(N);
  st.table_sum = Vec::Zero(x0.size());
  Vec g(x0.size());
  for (std::size_t i = 0; i < N; ++i) {
    oracle.component_grad(x0, i, g);
    g += eta * x0;
    st.table[i] = g;
    st.table_sum += g;
  }
  return st;
}

void iag_step(IagState& st, const StochasticOracle& oracle, double gamma, double eta) {
  const std::size_t N = st.table.size();
  if (N == 0) throw std::invalid_argument("iag_step: empty table");
  const Vec direction = st.table_sum / static_cast<double>(N);

  std::size_t j;
  if (st.sweep == IagSweep::cyclic) {
    j = st.cursor;
    st.cursor = (st.cursor + 1) % N;
  } else {
    j = sample_index(st.rng, N);
  }

  Vec g(st.x.size());
  oracle.component_grad(st.x, j, g);
  g += eta * st.x;
  st.table_sum += g - st.table[j];
  st.table[j] = g;

  st.x -= gamma * direction;
}

// ---------------------------------------------------------------------------
// RS-LBFGS
// ---------------------------------------------------------------------------

RsLbfgsState RsLbfgsState::init(Vec x0, int m, RngState rng, double eta0) {
  RsLbfgsState st{.k = 0,
                  .x = x0,
                  .x_prev = x0,
                  .eta = eta0,
                  .buffer = PairBuffer(m),
                  .next_pair_index = 1,
                  .rng = rng,
                  .skipped_pairs = 0};
  return st;
}

IterationRecord rs_lbfgs_step(RsLbfgsState& st, const StochasticOracle& oracle, double gamma0,
                              double rho, long epoch_len) {
  if (!(gamma0 > 0.0)) throw std::invalid_argument("rs_lbfgs_step: gamma0 must be positive");
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rs_lbfgs_step: rho in (0, 1]");

  const long k = st.k;
  if (epoch_len > 0 && k > 0 && k % epoch_len == 0) st.eta *= rho;
  const double gamma = gamma0 / static_cast<double>(k + 1);

  IterationRecord rec;
  rec.k = k;
  rec.gamma = gamma;
  rec.mu = st.eta;

  const std::size_t j = sample_index(st.rng, oracle.component_count());
  Vec g(st.x.size());
  oracle.component_grad(st.x, j, g);
  g += st.eta * st.x;

  // Pair from consecutive iterates, both gradients under the current sample.
  if (k >= 1 && !(st.x - st.x_prev).isZero(0.0)) {
    Vec g_prev(st.x.size());
    oracle.component_grad(st.x_prev, j, g_prev);
    g_prev += st.eta * st.x_prev;
    CurvaturePair p;
    p.s = st.x - st.x_prev;
    p.y = g - g_prev;
    p.sy = p.s.dot(p.y);
    p.yy = p.y.squaredNorm();
    p.pair_index = st.next_pair_index;
    if (p.sy > 0.0) {
      st.buffer.push(std::move(p));
      ++st.next_pair_index;
    } else {
      ++st.skipped_pairs;
    }
  }

  const Vec direction = st.buffer.empty() ? g : two_loop(st.buffer, g);
  rec.dir_norm = direction.norm();

  st.x_prev = st.x;
  st.x -= gamma * direction;
  ++st.k;
  return rec;
}

// ---------------------------------------------------------------------------
// Run driver
// ---------------------------------------------------------------------------

namespace {

enum class Algo { irs_lbfgs, ir_lbfgs, ir_sgd, sgd, saga, iag, rs_lbfgs };

Algo parse_algo(const std::string& name) {
  if (name == "irs-lbfgs") return Algo::irs_lbfgs;
  if (name == "ir-lbfgs") return Algo::ir_lbfgs;
  if (name == "ir-sgd") return Algo::ir_sgd;
  if (name == "sgd") return Algo::sgd;
  if (name == "saga") return Algo::saga;
  if (name == "iag") return Algo::iag;
  if (name == "rs-lbfgs") return Algo::rs_lbfgs;
  throw std::invalid_argument("run: unknown algorithm '" + name + "'");
}

const LinearModelOracle& require_linear_model(const StochasticOracle& oracle, const char* algo) {
  const auto* lm = dynamic_cast<const LinearModelOracle*>(&oracle);
  if (lm == nullptr)
    throw std::invalid_argument(std::string(algo) + " needs a linear-model oracle");
  return *lm;
}

}  // namespace

RunRecord run(const RunConfig& cfg, const StochasticOracle& oracle, std::uint64_t seed) {
  if (cfg.max_iters < 0) throw std::invalid_argument("run: negative max_iters");
  if (cfg.log_stride < 1) throw std::invalid_argument("run: log_stride must be >= 1");

  const Algo algo = parse_algo(cfg.algorithm);
  const auto t_start = std::chrono::steady_clock::now();
  const Vec x0 = cfg.x0.size() > 0 ? cfg.x0 : Vec(Vec::Zero(oracle.dim()));
  const RngState rng = RngState::seeded(seed);

  SchedulePlan plan = cfg.plan;
  if (algo == Algo::sgd) plan.mu0 = 0.0;  // classical stochastic approximation

  RunRecord out;
  out.config = cfg.snapshot;
  out.seed = seed;
  out.algorithm = cfg.algorithm;

  const bool anchored = algo == Algo::irs_lbfgs || algo == Algo::ir_lbfgs ||
                        algo == Algo::ir_sgd || algo == Algo::sgd;

  std::optional<OptimizerState> anchored_state;
  std::optional<SagaState> saga_state;
  std::optional<IagState> iag_state;
  std::optional<RsLbfgsState> rs_state;
  switch (algo) {
    case Algo::saga:
      saga_state = SagaState::init(require_linear_model(oracle, "saga"), x0, rng, cfg.saga_init,
                                   cfg.saga_init_sigma, cfg.saga_average);
      break;
    case Algo::iag:
      iag_state = IagState::init(oracle, x0, rng, cfg.iag_sweep, cfg.eta);
      break;
    case Algo::rs_lbfgs:
      rs_state = RsLbfgsState::init(x0, std::max(1, plan.m), rng, cfg.eta);
      break;
    default:
      anchored_state = OptimizerState::init(x0, std::max(1, plan.m), rng, cfg.batch);
      break;
  }

  auto current_x = [&]() -> const Vec& {
    switch (algo) {
      case Algo::saga:
        return cfg.saga_average ? saga_state->x_avg : saga_state->x;
      case Algo::iag:
        return iag_state->x;
      case Algo::rs_lbfgs:
        return rs_state->x;
      default:
        return anchored_state->x;
    }
  };

  auto reg_value = [&](long k, double f) -> double {
    if (anchored) {
      const double mu = regularization(k, plan);
      return f + 0.5 * mu * (current_x() - x0).squaredNorm();
    }
    const double eta = algo == Algo::rs_lbfgs ? rs_state->eta : cfg.eta;
    return f + 0.5 * eta * current_x().squaredNorm();
  };

  auto step_once = [&]() -> IterationRecord {
    switch (algo) {
      case Algo::irs_lbfgs:
        return irs_lbfgs_step(*anchored_state, oracle, plan);
      case Algo::ir_lbfgs:
        return ir_lbfgs_step(*anchored_state, oracle, plan);
      case Algo::ir_sgd:
      case Algo::sgd:
        return ir_sgd_step(*anchored_state, oracle, plan);
      case Algo::saga: {
        IterationRecord rec;
        rec.gamma = cfg.step_gamma;
        rec.mu = cfg.eta;
        saga_step(*saga_state, require_linear_model(oracle, "saga"), cfg.step_gamma, cfg.eta);
        return rec;
      }
      case Algo::iag: {
        IterationRecord rec;
        rec.gamma = cfg.step_gamma;
        rec.mu = cfg.eta;
        iag_step(*iag_state, oracle, cfg.step_gamma, cfg.eta);
        return rec;
      }
      case Algo::rs_lbfgs:
      default:
        return rs_lbfgs_step(*rs_state, oracle, plan.gamma0, cfg.rs_rho, cfg.rs_epoch_len);
    }
  };

  long k = 0;
  try {
    for (; k < cfg.max_iters; ++k) {
      const bool log_now = (k % cfg.log_stride == 0);
      double f = 0.0;
      if (log_now) f = oracle.full_value(current_x());
      IterationRecord rec = step_once();
      rec.k = k;
      if (log_now) {
        rec.f = f;
        rec.f_reg = reg_value(k, f);
        out.records.push_back(rec);
      }
      if (anchored && anchored_state->converged) break;
    }
  } catch (const RunError&) {
    throw;
  } catch (const std::exception& e) {
    out.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    throw RunError(e.what(), std::move(out));
  }

  IterationRecord fin;
  fin.k = k;
  if (anchored) {
    fin.gamma = stepsize(k, plan);
    fin.mu = regularization(k, plan);
  } else {
    fin.gamma = cfg.step_gamma;
    fin.mu = algo == Algo::rs_lbfgs ? rs_state->eta : cfg.eta;
  }
  fin.f = oracle.full_value(current_x());
  fin.f_reg = reg_value(k, fin.f);
  if (out.records.empty() || out.records.back().k != k) out.records.push_back(fin);

  out.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

}  // namespace irlbfgs
