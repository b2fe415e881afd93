#pragma once

#include <bit>
#include <stdexcept>

namespace dwreg {

// How the increment process is tied to the periodicity constraint f_n = f_0.
// CrossCovariance conditions the first n-1 increments on their full-period
// sum being zero (covariance vector = row sums of the increment covariance);
// LastColumn uses only the last column of the increment covariance in the
// rank-one correction.  CrossCovariance is the default; LastColumn is kept
// selectable for side-by-side comparison.
enum class ClosureRule { CrossCovariance, LastColumn };

struct Hyperparams {
  double lambda = 1.0;    // global prior scale
  double beta = 0.1;      // increment correlation decay
  double alpha = 0.5;     // level-wise inclusion base probability
  double sigma0sq = 1.0;  // variance of the anchor value f(0), defaults to lambda
  int J0 = 0;             // coarsest retained level, 2^J0 scaling functions
  int J = 6;              // finest level; grid size n = 2^J
  ClosureRule closure = ClosureRule::CrossCovariance;

  int n() const { return 1 << J; }
  int num_scaling() const { return 1 << J0; }
  int num_detail() const { return n() - num_scaling(); }

  void validate() const {
    if (!(lambda > 0)) throw std::invalid_argument("hyperparams: lambda must be > 0");
    if (!(beta > 0)) throw std::invalid_argument("hyperparams: beta must be > 0");
    if (!(alpha > 0 && alpha < 1))
      throw std::invalid_argument("hyperparams: alpha must lie in (0, 1)");
    if (!(sigma0sq >= 0)) throw std::invalid_argument("hyperparams: sigma0sq must be >= 0");
    if (J0 < 0 || J < 1 || J0 >= J)
      throw std::invalid_argument("hyperparams: need 0 <= J0 < J");
    if (J > 14) throw std::invalid_argument("hyperparams: J > 14 exceeds the desk-scale cap");
  }
};

// Coefficient layout shared by the DWT, the prior and the design matrix:
// columns 0 .. 2^J0-1 hold scaling coefficients, and detail (j, k) sits at
// column 2^j + k, so level blocks are [2^j, 2^{j+1}) for j = J0 .. J-1.
inline bool is_detail_column(int h, int J0) { return h >= (1 << J0); }

inline int column_level(int h, int J0) {
  if (!is_detail_column(h, J0)) return J0;
  return std::bit_width(static_cast<unsigned>(h)) - 1;
}

inline int column_shift(int h, int J0) {
  if (!is_detail_column(h, J0)) return h;
  return h - (1 << column_level(h, J0));
}

}  // namespace dwreg
