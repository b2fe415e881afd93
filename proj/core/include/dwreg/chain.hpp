#pragma once

#include <cstdint>

#include "dwreg/model_state.hpp"

namespace dwreg {

struct ChainConfig {
  long iterations = 20000;
  long burn_in = 5000;
  int thin = 10;
  std::uint64_t seed = 1;
  bool store_theta = true;
};

struct ChainRecord {
  long iter = 0;
  std::vector<int> gamma;  // sorted copy of the visited model
  double log_post = 0.0;   // log p(y | gamma) + log Pr(gamma)
};

struct StepOutcome {
  bool accepted = false;
  bool degenerate = false;  // proposal rejected by a numerical guard
};

struct ChainOutput {
  std::vector<ChainRecord> records;
  std::vector<Vector> thetas;  // full-length coefficient draws (if stored)
  long proposals = 0;
  long accepted = 0;
  long degenerate_rejects = 0;
  double acceptance_rate = 0.0;
  double reanchor_max_drift = 0.0;
  long reanchor_count = 0;
  long reanchor_alarms = 0;  // re-anchors where the drift exceeded 1e-5
  ModelState final_state;
};

// One Metropolis-Hastings toggle of a uniformly drawn detail coefficient.
// Mutates st on acceptance.
StepOutcome mh_step(ModelState& st, const FitContext& ctx, std::mt19937_64& rng);

// Full sampler: starts from the scaling-only model, records every thin-th
// state after burn-in, and re-anchors the running marginal likelihood
// against the candidate identity every 10^4 iterations.
ChainOutput run_chain(const Dataset& ds, const DesignMatrix& design,
                      const SmoothPrior& sp, const Hyperparams& h,
                      const ChainConfig& cfg);

}  // namespace dwreg
