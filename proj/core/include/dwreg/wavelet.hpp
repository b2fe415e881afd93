#pragma once

#include <string>
#include <vector>

#include "dwreg/common.hpp"
#include "dwreg/hyperparams.hpp"

namespace dwreg {

enum class WaveletKind { Haar, Daubechies };

struct WaveletFamily {
  WaveletKind kind = WaveletKind::Daubechies;
  int vanishing_moments = 4;  // Daubechies only; filter length is 2x this
  int refinement_depth = 12;  // dyadic resolution of the cascade tables

  static WaveletFamily parse(const std::string& name);  // "haar", "db2".."db10"
  std::string name() const;
};

// Orthonormal scaling filter for the Daubechies family with K vanishing
// moments (length 2K, sums to sqrt(2)), built by spectral factorization.
std::vector<double> daubechies_filter(int K);

// A compactly supported orthonormal wavelet pair with point evaluation.
// Haar is evaluated in closed form; Daubechies via the exact-at-dyadic
// refinement cascade with linear interpolation in between.
class Wavelet {
 public:
  explicit Wavelet(const WaveletFamily& family);

  const WaveletFamily& family() const { return family_; }
  const std::vector<double>& lowpass() const { return h_; }
  const std::vector<double>& highpass() const { return g_; }
  int support_length() const { return static_cast<int>(h_.size()) - 1; }

  // Mother functions on their natural support [0, support_length()].
  double scaling_raw(double t) const;
  double wavelet_raw(double t) const;
  double max_abs_scaling() const { return max_abs_phi_; }
  double max_abs_wavelet() const { return max_abs_psi_; }

  // L2-normalized periodized basis on [0, 1): 2^{j/2} sum_m b(2^j (x+m) - k).
  // Requires x in [0, 1), 0 <= k < 2^j.
  double eval_scaling(int j, int k, double x) const;
  double eval_wavelet(int j, int k, double x) const;

 private:
  double periodized(bool detail, int j, int k, double x) const;

  WaveletFamily family_;
  std::vector<double> h_, g_;
  std::vector<double> phi_table_, psi_table_;  // step 2^-depth on [0, L-1]
  double max_abs_phi_ = 1.0, max_abs_psi_ = 1.0;
};

// Periodic orthogonal DWT on 2^J points down to level J0, in the column
// layout of hyperparams.hpp (scaling block first, then level blocks).
Vector dwt(const Wavelet& w, int J0, const Vector& grid_values);
Vector idwt(const Wavelet& w, int J0, const Vector& coefficients);

// Dense analysis matrix W with W W' = I; rows follow the coefficient layout.
Matrix dwt_matrix(const Wavelet& w, const Hyperparams& h);

struct DesignMatrix {
  Matrix X;  // one row per observation phase, one column per coefficient
  int J0 = 0;
  int J = 0;
};

// Design matrix mapping the coefficient vector to curve values at the given
// phases.  Columns are the periodized basis functions scaled by 2^{-J/2},
// which makes the map coincide with the inverse DWT on the dyadic grid
// {i/2^J}: coefficients and curves share the data's units.
DesignMatrix build_design(const Wavelet& w, const Hyperparams& h,
                          const std::vector<double>& phases);

}  // namespace dwreg
