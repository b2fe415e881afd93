#include "dwreg/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace dwreg {

double pd_jitter(const Matrix& m) {
  const double n = static_cast<double>(m.rows());
  return n > 0 ? 1e-10 * m.trace() / n : 0.0;
}

Matrix chol_psd(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw numerical_error(std::string(what) + ": non-finite entries");
  }
  if (m.rows() == 0) return Matrix(0, 0);
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() == Eigen::Success && llt.matrixLLT().diagonal().allFinite() &&
      (llt.matrixLLT().diagonal().array() > 0).all()) {
    return llt.matrixL();
  }
  Matrix jittered = m;
  jittered.diagonal().array() += pd_jitter(m);
  llt.compute(jittered);
  if (llt.info() != Eigen::Success || !llt.matrixLLT().diagonal().allFinite() ||
      !(llt.matrixLLT().diagonal().array() > 0).all()) {
    throw numerical_error(std::string(what) +
                          ": not positive definite at working tolerance");
  }
  return llt.matrixL();
}

Matrix invert_psd(const Matrix& m, const char* what) {
  Matrix L = chol_psd(m, what);
  Matrix inv = Matrix::Identity(m.rows(), m.cols());
  L.triangularView<Eigen::Lower>().solveInPlace(inv);
  L.triangularView<Eigen::Lower>().transpose().solveInPlace(inv);
  return inv;
}

double logdet_from_chol(const Matrix& L) {
  return 2.0 * L.diagonal().array().log().sum();
}

double total_variation(const Vector& f) {
  double tv = 0.0;
  for (Eigen::Index i = 1; i < f.size(); ++i) tv += std::abs(f[i] - f[i - 1]);
  return tv;
}

double quantile(std::vector<double> sample, double p) {
  if (sample.empty()) throw std::invalid_argument("quantile: empty sample");
  p = std::clamp(p, 0.0, 1.0);
  std::sort(sample.begin(), sample.end());
  const double pos = p * static_cast<double>(sample.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sample.size()) return sample.back();
  const double frac = pos - static_cast<double>(lo);
  return sample[lo] * (1.0 - frac) + sample[lo + 1] * frac;
}

}  // namespace dwreg
