#pragma once

#include <vector>

#include "dwreg/chain.hpp"
#include "dwreg/common.hpp"
#include "dwreg/smooth_prior.hpp"

// Slow reference implementations used to cross-check the incremental sampler
// arithmetic.  Everything here recomputes from definitions in observation
// space and shares no code with the cached-state update path.
namespace dwreg::oracle {

// log p(y | gamma) computed directly from the marginal law of the data:
// y ~ N(0, M) with M = X_gamma (lambda Omega_gamma^-1) X_gamma' + S and
// S = diag(noise_var).  O(N^3 + q^3); for testing only.
double log_marginal_dense(const Matrix& X, const Vector& y, const Vector& noise_var,
                          const SmoothPrior& sp, const Hyperparams& h,
                          const std::vector<int>& gamma);

struct ConditionedGaussian {
  std::vector<int> free;  // indices of the unconstrained entries, ascending
  Vector mean;            // their conditional mean
  Matrix cov;             // their conditional covariance
};

// Condition N(mean, cov) on the listed coordinates taking the given values.
// Standard partitioned-Gaussian formulas; the constrained block is inverted
// densely.
ConditionedGaussian condition_gaussian(const Vector& mean, const Matrix& cov,
                                       const std::vector<int>& constrained,
                                       const Vector& values);

struct EnumeratedPosterior {
  std::vector<std::vector<int>> models;  // sorted gamma per model
  Vector probs;                          // Pr(gamma | y), sums to one
  std::vector<double> log_posts;         // unnormalized log posteriors
};

// Exact model posterior by enumerating every subset of the detail columns
// (scaling columns are always included).  Refuses more than 12 detail
// columns; beyond that the 2^d sweep stops being a test fixture.
EnumeratedPosterior enumerate_posterior(const Matrix& X, const Vector& y,
                                        const Vector& noise_var, const SmoothPrior& sp,
                                        const Hyperparams& h);

// Total-variation distance between the exact model posterior and the
// empirical visit frequencies of the recorded chain states.
double tv_distance(const EnumeratedPosterior& exact,
                   const std::vector<ChainRecord>& records);

}  // namespace dwreg::oracle
