#include "dwreg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dwreg/numeric.hpp"

namespace dwreg::oracle {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

Matrix gather(const Matrix& M, const std::vector<int>& rows,
              const std::vector<int>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = M(rows[i], cols[j]);
  return out;
}

}  // namespace

double log_marginal_dense(const Matrix& X, const Vector& y, const Vector& noise_var,
                          const SmoothPrior& sp, const Hyperparams& h,
                          const std::vector<int>& gamma) {
  if (X.rows() != y.size() || X.rows() != noise_var.size())
    throw std::invalid_argument("log_marginal_dense: inconsistent data sizes");
  if (gamma.empty()) throw std::invalid_argument("log_marginal_dense: empty gamma");

  const auto N = X.rows();
  Matrix Xg(N, gamma.size());
  for (std::size_t j = 0; j < gamma.size(); ++j) Xg.col(j) = X.col(gamma[j]);

  const Matrix prior_cov =
      h.lambda * invert_psd(gather(sp.Omega, gamma, gamma), "oracle Omega_gamma");
  Matrix M = Xg * prior_cov * Xg.transpose();
  M.diagonal() += noise_var;
  M = 0.5 * (M + M.transpose()).eval();

  const Matrix L = chol_psd(M, "oracle marginal covariance");
  const Vector alpha = L.triangularView<Eigen::Lower>().solve(y);
  return -0.5 * (static_cast<double>(N) * kLog2Pi + logdet_from_chol(L) +
                 alpha.squaredNorm());
}

ConditionedGaussian condition_gaussian(const Vector& mean, const Matrix& cov,
                                       const std::vector<int>& constrained,
                                       const Vector& values) {
  const auto n = mean.size();
  if (cov.rows() != n || cov.cols() != n)
    throw std::invalid_argument("condition_gaussian: covariance shape mismatch");
  if (static_cast<Eigen::Index>(constrained.size()) != values.size())
    throw std::invalid_argument("condition_gaussian: one value per constrained index");

  std::vector<char> is_constrained(n, 0);
  for (int idx : constrained) {
    if (idx < 0 || idx >= n)
      throw std::invalid_argument("condition_gaussian: index out of range");
    if (is_constrained[idx])
      throw std::invalid_argument("condition_gaussian: duplicate index");
    is_constrained[idx] = 1;
  }

  ConditionedGaussian out;
  for (Eigen::Index i = 0; i < n; ++i)
    if (!is_constrained[i]) out.free.push_back(static_cast<int>(i));
  if (out.free.empty())
    throw std::invalid_argument("condition_gaussian: nothing left unconstrained");

  const Matrix cov_ff = gather(cov, out.free, out.free);
  if (constrained.empty()) {
    out.mean = Vector(out.free.size());
    for (std::size_t i = 0; i < out.free.size(); ++i) out.mean[i] = mean[out.free[i]];
    out.cov = cov_ff;
    return out;
  }

  const Matrix cov_fc = gather(cov, out.free, constrained);
  const Matrix cov_cc = gather(cov, constrained, constrained);
  Vector mean_c(constrained.size());
  for (std::size_t i = 0; i < constrained.size(); ++i) mean_c[i] = mean[constrained[i]];

  const Matrix cc_inv = invert_psd(cov_cc, "condition_gaussian constrained block");
  const Matrix gain = cov_fc * cc_inv;

  out.mean = Vector(out.free.size());
  for (std::size_t i = 0; i < out.free.size(); ++i) out.mean[i] = mean[out.free[i]];
  out.mean += gain * (values - mean_c);
  out.cov = cov_ff - gain * cov_fc.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

EnumeratedPosterior enumerate_posterior(const Matrix& X, const Vector& y,
                                        const Vector& noise_var, const SmoothPrior& sp,
                                        const Hyperparams& h) {
  const int d = h.num_detail();
  if (d > 12)
    throw std::invalid_argument(
        "enumerate_posterior: more than 12 detail columns; enumeration refused");

  std::vector<int> detail_cols;
  for (int c = h.num_scaling(); c < h.n(); ++c) detail_cols.push_back(c);
  const std::vector<int> scaling = [&] {
    std::vector<int> s(h.num_scaling());
    for (int c = 0; c < h.num_scaling(); ++c) s[c] = c;
    return s;
  }();

  EnumeratedPosterior out;
  const std::uint32_t count = 1u << d;
  out.models.reserve(count);
  out.log_posts.reserve(count);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    std::vector<int> gamma = scaling;
    for (int b = 0; b < d; ++b)
      if (mask & (1u << b)) gamma.push_back(detail_cols[b]);
    const double lp = log_marginal_dense(X, y, noise_var, sp, h, gamma) +
                      log_prior_gamma(h, gamma);
    out.models.push_back(std::move(gamma));
    out.log_posts.push_back(lp);
  }

  const double top = *std::max_element(out.log_posts.begin(), out.log_posts.end());
  out.probs = Vector(count);
  double total = 0.0;
  for (std::uint32_t m = 0; m < count; ++m) {
    out.probs[m] = std::exp(out.log_posts[m] - top);
    total += out.probs[m];
  }
  out.probs /= total;
  return out;
}

double tv_distance(const EnumeratedPosterior& exact,
                   const std::vector<ChainRecord>& records) {
  if (records.empty()) throw std::invalid_argument("tv_distance: no chain records");

  std::map<std::vector<int>, double> freq;
  const double w = 1.0 / static_cast<double>(records.size());
  for (const ChainRecord& r : records) freq[r.gamma] += w;

  double tv = 0.0;
  for (std::size_t m = 0; m < exact.models.size(); ++m) {
    const auto it = freq.find(exact.models[m]);
    const double emp = it == freq.end() ? 0.0 : it->second;
    tv += std::abs(exact.probs[static_cast<Eigen::Index>(m)] - emp);
    if (it != freq.end()) freq.erase(it);
  }
  for (const auto& [gamma, emp] : freq) tv += emp;  // visited but not enumerated
  return 0.5 * tv;
}

}  // namespace dwreg::oracle
