#include "dwreg/chain.hpp"

#include <algorithm>
#include <cmath>

namespace dwreg {

namespace {

constexpr long kReanchorEvery = 10000;
constexpr double kReanchorAlarm = 1e-5;

double inclusion_log_odds(const Hyperparams& h, int column) {
  const int j = column_level(column, h.J0);
  const double p_inc = std::pow(h.alpha, j + 1);
  return std::log(p_inc) - std::log1p(-p_inc);
}

}  // namespace

StepOutcome mh_step(ModelState& st, const FitContext& ctx, std::mt19937_64& rng) {
  const Hyperparams& h = ctx.h;
  std::uniform_int_distribution<int> pick(h.num_scaling(), h.n() - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const int col = pick(rng);
  const int pos = st.position_of(col);

  StepOutcome outcome;
  double log_accept;
  MoveResult move;
  try {
    if (pos >= 0) {
      move = down_move(st, pos);
      log_accept = move.log_ratio - inclusion_log_odds(h, col);
    } else {
      move = up_move(st, col, ctx);
      log_accept = move.log_ratio + inclusion_log_odds(h, col);
    }
  } catch (const numerical_error&) {
    outcome.degenerate = true;
    return outcome;
  }

  const double u = unif(rng);
  if (log_accept >= 0.0 || u < std::exp(log_accept)) {
    st = std::move(move.state);
    outcome.accepted = true;
  }
  return outcome;
}

ChainOutput run_chain(const Dataset& ds, const DesignMatrix& design,
                      const SmoothPrior& sp, const Hyperparams& h,
                      const ChainConfig& cfg) {
  if (cfg.iterations < 1 || cfg.burn_in < 0 || cfg.burn_in >= cfg.iterations)
    throw std::invalid_argument("run_chain: need 0 <= burn_in < iterations");
  if (cfg.thin < 1) throw std::invalid_argument("run_chain: thin must be >= 1");

  const FitContext ctx = FitContext::build(ds, design, sp, h);
  ModelState st = init_state(ctx, scaling_gamma(h));
  std::mt19937_64 rng(cfg.seed);

  ChainOutput out;
  const long expected = (cfg.iterations - cfg.burn_in) / cfg.thin + 1;
  out.records.reserve(expected);
  if (cfg.store_theta) out.thetas.reserve(expected);

  for (long iter = 1; iter <= cfg.iterations; ++iter) {
    const StepOutcome step = mh_step(st, ctx, rng);
    ++out.proposals;
    out.accepted += step.accepted;
    out.degenerate_rejects += step.degenerate;

    if (iter % kReanchorEvery == 0) {
      const double fresh = candidate_logml(ctx, st);
      const double drift = std::abs(fresh - st.logml);
      out.reanchor_max_drift = std::max(out.reanchor_max_drift, drift);
      ++out.reanchor_count;
      out.reanchor_alarms += drift > kReanchorAlarm;
      st.logml = fresh;
    }

    if (iter > cfg.burn_in && (iter - cfg.burn_in) % cfg.thin == 0) {
      ChainRecord rec;
      rec.iter = iter;
      rec.gamma = st.gamma;
      std::sort(rec.gamma.begin(), rec.gamma.end());
      rec.log_post = st.logml + log_prior_gamma(h, st.gamma);
      out.records.push_back(std::move(rec));
      if (cfg.store_theta) out.thetas.push_back(sample_theta(st, sp.n, rng));
    }
  }

  out.acceptance_rate =
      out.proposals > 0 ? static_cast<double>(out.accepted) / out.proposals : 0.0;
  out.final_state = std::move(st);
  return out;
}

}  // namespace dwreg
