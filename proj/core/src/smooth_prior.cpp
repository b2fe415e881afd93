#include "dwreg/smooth_prior.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dwreg/numeric.hpp"

namespace dwreg {

Matrix build_delta(const Hyperparams& h, int n) {
  h.validate();
  if (n < 1) throw std::invalid_argument("build_delta: n must be >= 1");
  Matrix delta(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      delta(i, j) = h.lambda * std::exp(-h.beta * std::abs(i - j));
  return delta;
}

GridPrior build_V(const Hyperparams& h, int n) {
  if (n < 2) throw std::invalid_argument("build_V: n must be >= 2");
  const Matrix delta = build_delta(h, n);
  const double v = delta.sum();

  // Rank-one correction tying the increments to the periodicity constraint.
  Vector coupling(n - 1);
  if (h.closure == ClosureRule::CrossCovariance) {
    coupling = delta.topRows(n - 1).rowwise().sum();
  } else {
    coupling = delta.col(n - 1).head(n - 1);
  }
  Matrix H = delta.topLeftCorner(n - 1, n - 1) - coupling * coupling.transpose() / v;

  // V = A H0 A' with A lower-triangular ones and H0 = blockdiag(lambda
  // sigma0^2, H): the anchor f_0 ~ N(0, lambda sigma0^2) shares the
  // increments' scale, keeping V homogeneous of degree one in lambda.
  Matrix H0 = Matrix::Zero(n, n);
  H0(0, 0) = h.lambda * h.sigma0sq;
  H0.bottomRightCorner(n - 1, n - 1) = H;
  Matrix V(n, n);
  // (A H0 A')_{ab} = sum_{i<=a, j<=b} H0_{ij}: two cumulative-sum passes.
  Matrix cum = H0;
  for (int i = 1; i < n; ++i) cum.row(i) += cum.row(i - 1);
  for (int j = 1; j < n; ++j) cum.col(j) += cum.col(j - 1);
  V = 0.5 * (cum + cum.transpose());  // symmetrize round-off

  chol_psd(V, "grid prior covariance V");  // degenerate hyperparameters fail here
  return {std::move(V), v};
}

SmoothPrior build_wavelet_prior(const Matrix& V, const Matrix& W) {
  if (V.rows() != V.cols() || W.rows() != W.cols() || V.rows() != W.rows())
    throw std::invalid_argument("build_wavelet_prior: dimension mismatch");
  SmoothPrior sp;
  sp.n = static_cast<int>(V.rows());
  sp.V = V;
  sp.Lambda_full = W * V * W.transpose();
  // The precision is transported explicitly rather than formed by inverting
  // Lambda_full: Omega = W V^-1 W' keeps the two representations consistent.
  const Matrix Vinv = invert_psd(V, "grid prior covariance V");
  sp.Omega = W * Vinv * W.transpose();
  sp.Lambda_full = 0.5 * (sp.Lambda_full + sp.Lambda_full.transpose());
  sp.Omega = 0.5 * (sp.Omega + sp.Omega.transpose());
  return sp;
}

namespace {

void check_gamma(const std::vector<int>& gamma, int n, int J0, const char* who) {
  std::vector<char> seen(n, 0);
  for (int c : gamma) {
    if (c < 0 || c >= n)
      throw std::invalid_argument(std::string(who) + ": column index out of range");
    if (seen[c]++) throw std::invalid_argument(std::string(who) + ": duplicate column");
  }
  for (int c = 0; c < (1 << J0); ++c)
    if (!seen[c])
      throw std::invalid_argument(std::string(who) +
                                  ": all scaling columns must be included");
}

Matrix gather(const Matrix& M, const std::vector<int>& rows,
              const std::vector<int>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = M(rows[i], cols[j]);
  return out;
}

}  // namespace

Matrix conditioned_prior(const SmoothPrior& sp, const Hyperparams& h,
                         const std::vector<int>& gamma) {
  h.validate();
  check_gamma(gamma, sp.n, h.J0, "conditioned_prior");
  const Matrix omega_g = gather(sp.Omega, gamma, gamma);
  return h.lambda * invert_psd(omega_g, "conditioned prior precision");
}

double log_prior_gamma(const Hyperparams& h, const std::vector<int>& gamma) {
  h.validate();
  check_gamma(gamma, h.n(), h.J0, "log_prior_gamma");
  std::vector<char> in(h.n(), 0);
  for (int c : gamma) in[c] = 1;
  double lp = 0.0;
  for (int c = h.num_scaling(); c < h.n(); ++c) {
    const int j = column_level(c, h.J0);
    const double p_inc = std::pow(h.alpha, j + 1);
    lp += in[c] ? std::log(p_inc) : std::log1p(-p_inc);
  }
  return lp;
}

std::vector<Vector> simulate_prior_coefs(const SmoothPrior& sp, const Hyperparams& h,
                                         const std::vector<int>& gamma, int count,
                                         std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("simulate_prior: negative count");
  const Matrix cov = conditioned_prior(sp, h, gamma);
  const Matrix L = chol_psd(cov, "conditioned prior covariance");
  const auto l = static_cast<Eigen::Index>(gamma.size());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> draws;
  draws.reserve(count);
  for (int d = 0; d < count; ++d) {
    Vector z(l);
    for (Eigen::Index i = 0; i < l; ++i) z[i] = normal(rng);
    Vector theta_g = L.triangularView<Eigen::Lower>() * z;
    Vector full = Vector::Zero(sp.n);
    for (std::size_t i = 0; i < gamma.size(); ++i) full[gamma[i]] = theta_g[i];
    draws.push_back(std::move(full));
  }
  return draws;
}

std::vector<Vector> simulate_prior(const SmoothPrior& sp, const Hyperparams& h,
                                   const Wavelet& w, const std::vector<int>& gamma,
                                   int count, std::uint64_t seed) {
  std::vector<Vector> draws = simulate_prior_coefs(sp, h, gamma, count, seed);
  for (Vector& d : draws) d = idwt(w, h.J0, d);
  return draws;
}

std::vector<int> universal_threshold(const Vector& coefficients, double sigma_hat,
                                     int n, int J0, ThresholdRule rule) {
  if (!(sigma_hat > 0)) throw std::invalid_argument("universal_threshold: sigma_hat must be > 0");
  if (n != static_cast<int>(coefficients.size()))
    throw std::invalid_argument("universal_threshold: n does not match coefficient count");
  const double cut = rule == ThresholdRule::UniversalLog
                         ? sigma_hat * std::sqrt(2.0 * std::log(static_cast<double>(n)))
                         : sigma_hat * std::sqrt(2.0 * static_cast<double>(n));
  std::vector<int> kept;
  for (int c = 1 << J0; c < n; ++c)
    if (std::abs(coefficients[c]) > cut) kept.push_back(c);
  return kept;
}

double mad_sigma_hat(const Vector& coefficients) {
  const auto n = coefficients.size();
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("mad_sigma_hat: coefficient length must be 2^J >= 2");
  std::vector<double> mags;
  mags.reserve(n / 2);
  for (Eigen::Index c = n / 2; c < n; ++c) mags.push_back(std::abs(coefficients[c]));
  std::sort(mags.begin(), mags.end());
  const std::size_t m = mags.size();
  const double median =
      m % 2 ? mags[m / 2] : 0.5 * (mags[m / 2 - 1] + mags[m / 2]);
  return median / 0.6745;
}

std::vector<int> full_gamma(const Hyperparams& h) {
  std::vector<int> g(h.n());
  for (int i = 0; i < h.n(); ++i) g[i] = i;
  return g;
}

std::vector<int> scaling_gamma(const Hyperparams& h) {
  std::vector<int> g(h.num_scaling());
  for (int i = 0; i < h.num_scaling(); ++i) g[i] = i;
  return g;
}

}  // namespace dwreg
