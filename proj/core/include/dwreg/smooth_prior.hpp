#pragma once

#include <cstdint>
#include <vector>

#include "dwreg/common.hpp"
#include "dwreg/hyperparams.hpp"
#include "dwreg/wavelet.hpp"

namespace dwreg {

// Covariance of the n increments d_i = f_i - f_{i-1}:
// Delta_ij = lambda * exp(-beta |i - j|).
Matrix build_delta(const Hyperparams& h, int n);

struct GridPrior {
  Matrix V;  // covariance of (f_0, ..., f_{n-1}) under f_n = f_0, scale folded in
  double v;  // variance of the unconstrained full-period increment sum, 1' Delta 1
};

// Prior covariance of the grid values: V = A H0 A' with A the running-sum
// matrix, H0 = blockdiag(lambda sigma0^2, H), and H the increment covariance
// conditioned on the period closing (rule selected by h.closure).
GridPrior build_V(const Hyperparams& h, int n);

struct SmoothPrior {
  int n = 0;
  Matrix V;            // grid-value covariance
  Matrix Omega;        // W V^-1 W': precision transported to coefficient space
  Matrix Lambda_full;  // W V W': full-model coefficient covariance
};

SmoothPrior build_wavelet_prior(const Matrix& V, const Matrix& W);

// Prior covariance of the included coefficients: lambda * (Omega_gamma)^-1.
// gamma lists coefficient columns (scaling indices must all be present).
Matrix conditioned_prior(const SmoothPrior& sp, const Hyperparams& h,
                         const std::vector<int>& gamma);

// log Pr(gamma) under independent level-wise inclusion: a detail coefficient
// at level j is included with probability alpha^{j+1}; scaling coefficients
// are always included and contribute nothing.
double log_prior_gamma(const Hyperparams& h, const std::vector<int>& gamma);

// Draws of the grid curve implied by theta_gamma ~ N(0, lambda Omega_gamma^-1)
// with excluded coefficients pinned at zero (inverse DWT of the embedded draw).
std::vector<Vector> simulate_prior(const SmoothPrior& sp, const Hyperparams& h,
                                   const Wavelet& w, const std::vector<int>& gamma,
                                   int count, std::uint64_t seed);

// As above but returning the coefficient vectors before synthesis.
std::vector<Vector> simulate_prior_coefs(const SmoothPrior& sp, const Hyperparams& h,
                                         const std::vector<int>& gamma, int count,
                                         std::uint64_t seed);

enum class ThresholdRule {
  UniversalLog,  // sigma_hat * sqrt(2 log n)  (standard form, default)
  SqrtTwoN,      // sigma_hat * sqrt(2 n)      (selectable alternative)
};

// Indices of detail coefficients whose magnitude exceeds the rule's
// threshold; scaling coefficients are never thresholded and never returned.
std::vector<int> universal_threshold(const Vector& coefficients, double sigma_hat,
                                     int n, int J0,
                                     ThresholdRule rule = ThresholdRule::UniversalLog);

// Robust noise-scale proxy for thresholding: median absolute finest-level
// detail coefficient divided by the normal-consistency constant 0.6745.
double mad_sigma_hat(const Vector& coefficients);

// Convenience: every column index, scaling and detail alike.
std::vector<int> full_gamma(const Hyperparams& h);
std::vector<int> scaling_gamma(const Hyperparams& h);

}  // namespace dwreg
