#pragma once

#include <random>
#include <vector>

#include "dwreg/common.hpp"
#include "dwreg/dataset.hpp"
#include "dwreg/smooth_prior.hpp"

namespace dwreg {

// Immutable per-fit quantities shared by every model visited by the sampler.
// The Gram matrix X' S^-1 X is cached densely up to a size guard, otherwise
// entries are recomputed on demand.
struct FitContext {
  Hyperparams h;
  const SmoothPrior* prior = nullptr;  // not owned; must outlive the context
  Matrix X;                            // N x n design
  Vector y;
  Vector noise_var;  // sigma_i^2
  Vector vfull;      // X' S^-1 y
  Matrix Qfull;      // X' S^-1 X when cached
  bool q_cached = false;
  double logdetS = 0.0;
  double y_Sinv_y = 0.0;
  long N = 0;

  static FitContext build(const Dataset& ds, const DesignMatrix& design,
                          const SmoothPrior& sp, const Hyperparams& h);

  int n() const { return prior->n; }
  double q_entry(int a, int b) const;
};

// Cached posterior for one model gamma.  gamma is ordered: moves that add a
// coefficient prepend it, so position 0 is the most recently added column.
struct ModelState {
  std::vector<int> gamma;  // included columns, ordered
  Vector mu;               // posterior mean of theta_gamma
  Vector vG;               // X_gamma' S^-1 y
  Matrix Sigma;            // posterior covariance
  Matrix LambdaG;          // prior covariance factor (Omega_gamma)^-1, unscaled
  Matrix T;                // lower Cholesky factor, T T' = Sigma
  double logml = 0.0;      // log p(y | gamma), anchored at initialization
  double lambda = 0.0;     // cached prior scale
  int num_scaling = 0;

  int size() const { return static_cast<int>(gamma.size()); }
  int position_of(int column) const;  // -1 when absent
};

struct MoveResult {
  ModelState state;
  double log_ratio = 0.0;  // log p(y | gamma*) - log p(y | gamma)
};

// Dense O(l^3) construction; also the reference the incremental moves are
// tested against.  gamma0 must contain every scaling column.
ModelState init_state(const FitContext& ctx, const std::vector<int>& gamma0);

// Remove the detail coefficient at gamma position `pos` (rank-one downdate of
// Sigma, LambdaG and mu; the Cholesky factor is restored to triangular form
// with plane rotations and a rank-one downdate, O(q^2)).
MoveResult down_move(const ModelState& st, int pos);

// Add column `new_col`, prepended at gamma position 0 (rank-one extension).
// Throws numerical_error when the Schur complements degenerate.
MoveResult up_move(const ModelState& st, int new_col, const FitContext& ctx);

// theta_gamma = mu + T z embedded into a length-n vector (zeros elsewhere).
Vector sample_theta(const ModelState& st, int n_total, std::mt19937_64& rng);

// log p(y | gamma) evaluated from the cached state via the zero-coefficient
// candidate identity; used to anchor and periodically re-anchor logml.
double candidate_logml(const FitContext& ctx, const ModelState& st);

}  // namespace dwreg
