#include "dwreg/wavelet.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace dwreg {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
  return r;
}

// Roots of a real polynomial (ascending coefficients) via the companion
// matrix; degrees here never exceed 9.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& coef) {
  const int deg = static_cast<int>(coef.size()) - 1;
  if (deg < 1) return {};
  Matrix companion = Matrix::Zero(deg, deg);
  for (int i = 0; i < deg; ++i) {
    companion(i, deg - 1) = -coef[i] / coef[deg];
    if (i > 0) companion(i, i - 1) = 1.0;
  }
  Eigen::EigenSolver<Matrix> es(companion);
  std::vector<std::complex<double>> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()[i];
  return roots;
}

std::vector<std::complex<double>> poly_mul(
    const std::vector<std::complex<double>>& a,
    const std::vector<std::complex<double>>& b) {
  std::vector<std::complex<double>> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

std::vector<double> daubechies_filter(int K) {
  if (K < 1 || K > 10)
    throw std::invalid_argument("daubechies_filter: vanishing moments must be in 1..10");
  if (K == 1) return {1.0 / kSqrt2, 1.0 / kSqrt2};

  // |m0(w)|^2 = cos^{2K}(w/2) P(sin^2(w/2)) with P the degree K-1 maximally
  // flat half-band polynomial.  Factor P by pairing each root y with the
  // z-root of z^2 - (2 - 4y) z + 1 inside the unit disc.
  std::vector<double> P(K);
  for (int k = 0; k < K; ++k) P[k] = binomial(K - 1 + k, k);

  std::vector<std::complex<double>> L{1.0};
  for (const auto& y : poly_roots(P)) {
    const std::complex<double> b = 2.0 - 4.0 * y;
    const std::complex<double> disc = std::sqrt(b * b - 4.0);
    std::complex<double> z = (b + disc) / 2.0;
    if (std::abs(z) > 1.0) z = (b - disc) / 2.0;
    L = poly_mul(L, {-z, 1.0});
  }

  // m0(z) = ((1+z)/2)^K * L(z)/L(1); conjugate root pairs make L real.
  std::vector<std::complex<double>> m0{1.0};
  for (int i = 0; i < K; ++i) m0 = poly_mul(m0, {0.5, 0.5});
  m0 = poly_mul(m0, L);

  std::vector<double> filter(m0.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < m0.size(); ++i) {
    filter[i] = m0[i].real();
    sum += filter[i];
  }
  for (double& c : filter) c *= kSqrt2 / sum;
  // Orient with the dominant taps first (textbook extremal-phase order).
  std::reverse(filter.begin(), filter.end());
  return filter;
}

WaveletFamily WaveletFamily::parse(const std::string& name) {
  WaveletFamily fam;
  if (name == "haar") {
    fam.kind = WaveletKind::Haar;
    fam.vanishing_moments = 1;
    return fam;
  }
  if (name.size() > 2 && name.compare(0, 2, "db") == 0) {
    int k = 0;
    try {
      k = std::stoi(name.substr(2));
    } catch (const std::exception&) {
      k = 0;
    }
    if (k >= 2 && k <= 10) {
      fam.kind = WaveletKind::Daubechies;
      fam.vanishing_moments = k;
      return fam;
    }
  }
  throw usage_error("unknown wavelet family '" + name + "' (expected haar or db2..db10)");
}

std::string WaveletFamily::name() const {
  if (kind == WaveletKind::Haar) return "haar";
  return "db" + std::to_string(vanishing_moments);
}

Wavelet::Wavelet(const WaveletFamily& family) : family_(family) {
  if (family_.refinement_depth < 4 || family_.refinement_depth > 24)
    throw std::invalid_argument("wavelet: refinement depth must be in 4..24");

  if (family_.kind == WaveletKind::Haar) {
    h_ = {1.0 / kSqrt2, 1.0 / kSqrt2};
    g_ = {1.0 / kSqrt2, -1.0 / kSqrt2};
    max_abs_phi_ = 1.0;
    max_abs_psi_ = 1.0;
    return;
  }

  h_ = daubechies_filter(family_.vanishing_moments);
  const int L = static_cast<int>(h_.size());
  g_.resize(L);
  for (int k = 0; k < L; ++k) g_[k] = (k % 2 ? -1.0 : 1.0) * h_[L - 1 - k];

  // Exact values of the scaling function at the integers: the refinement
  // relation phi(m) = sqrt(2) sum_k h_k phi(2m - k) makes (phi(1)..phi(L-2))
  // the eigenvector of A_{m,i} = sqrt(2) h_{2m-i} at eigenvalue 1, normalized
  // to sum to one (phi vanishes at both support endpoints).
  const int interior = L - 2;
  Matrix A = Matrix::Zero(interior, interior);
  for (int m = 1; m <= interior; ++m)
    for (int i = 1; i <= interior; ++i) {
      const int idx = 2 * m - i;
      if (idx >= 0 && idx < L) A(m - 1, i - 1) = kSqrt2 * h_[idx];
    }
  Eigen::EigenSolver<Matrix> es(A);
  int best = 0;
  for (int i = 1; i < interior; ++i)
    if (std::abs(es.eigenvalues()[i] - 1.0) < std::abs(es.eigenvalues()[best] - 1.0))
      best = i;
  Vector at_integers = es.eigenvectors().col(best).real();
  at_integers /= at_integers.sum();

  // Refine to the dyadic grid of step 2^-depth; every new point is an odd
  // multiple whose refinement arguments land exactly on the previous grid,
  // so the tabulated values are exact (up to round-off) at dyadic rationals.
  const int depth = family_.refinement_depth;
  const std::size_t size = static_cast<std::size_t>(L - 1) * (1u << depth) + 1;
  phi_table_.assign(size, 0.0);
  const long step0 = 1L << depth;
  for (int m = 1; m <= interior; ++m) phi_table_[m * step0] = at_integers[m - 1];
  for (int d = 1; d <= depth; ++d) {
    const long step = 1L << (depth - d);
    for (long i = step; i < static_cast<long>(size); i += 2 * step) {
      double v = 0.0;
      for (int k = 0; k < L; ++k) {
        const long arg = 2 * i - k * step0;
        if (arg >= 0 && arg < static_cast<long>(size)) v += h_[k] * phi_table_[arg];
      }
      phi_table_[i] = kSqrt2 * v;
    }
  }

  psi_table_.assign(size, 0.0);
  for (long i = 0; i < static_cast<long>(size); ++i) {
    double v = 0.0;
    for (int k = 0; k < L; ++k) {
      const long arg = 2 * i - k * step0;
      if (arg >= 0 && arg < static_cast<long>(size)) v += g_[k] * phi_table_[arg];
    }
    psi_table_[i] = kSqrt2 * v;
  }

  max_abs_phi_ = 0.0;
  for (double v : phi_table_) max_abs_phi_ = std::max(max_abs_phi_, std::abs(v));
  max_abs_psi_ = 0.0;
  for (double v : psi_table_) max_abs_psi_ = std::max(max_abs_psi_, std::abs(v));
}

double Wavelet::scaling_raw(double t) const {
  if (family_.kind == WaveletKind::Haar) return (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
  const double span = static_cast<double>(support_length());
  if (t <= 0.0 || t >= span) return 0.0;
  const double pos = std::ldexp(t, family_.refinement_depth);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= phi_table_.size()) return phi_table_.back();
  const double frac = pos - static_cast<double>(lo);
  return phi_table_[lo] * (1.0 - frac) + phi_table_[lo + 1] * frac;
}

double Wavelet::wavelet_raw(double t) const {
  if (family_.kind == WaveletKind::Haar) {
    if (t >= 0.0 && t < 0.5) return 1.0;
    if (t >= 0.5 && t < 1.0) return -1.0;
    return 0.0;
  }
  const double span = static_cast<double>(support_length());
  if (t <= 0.0 || t >= span) return 0.0;
  const double pos = std::ldexp(t, family_.refinement_depth);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= psi_table_.size()) return psi_table_.back();
  const double frac = pos - static_cast<double>(lo);
  return psi_table_[lo] * (1.0 - frac) + psi_table_[lo + 1] * frac;
}

double Wavelet::periodized(bool detail, int j, int k, double x) const {
  if (!(x >= 0.0 && x < 1.0))
    throw std::domain_error("wavelet eval: phase must lie in [0, 1)");
  if (j < 0 || j > 30 || k < 0 || k >= (1 << j))
    throw std::invalid_argument("wavelet eval: shift k out of range for level j");
  const double twoj = std::ldexp(1.0, j);
  const double base = twoj * x - k;  // argument at period m = 0
  const double span = static_cast<double>(support_length());
  // Wrap over the periods m with base + m*2^j inside the support.
  const auto mlo = static_cast<long>(std::ceil(-base / twoj - 1e-12));
  const auto mhi = static_cast<long>(std::floor((span - base) / twoj + 1e-12));
  double s = 0.0;
  for (long m = mlo; m <= mhi; ++m) {
    const double t = base + static_cast<double>(m) * twoj;
    s += detail ? wavelet_raw(t) : scaling_raw(t);
  }
  return std::sqrt(twoj) * s;
}

double Wavelet::eval_scaling(int j, int k, double x) const {
  return periodized(false, j, k, x);
}

double Wavelet::eval_wavelet(int j, int k, double x) const {
  return periodized(true, j, k, x);
}

Vector dwt(const Wavelet& w, int J0, const Vector& grid_values) {
  const auto n = static_cast<int>(grid_values.size());
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("dwt: input length must be a power of two");
  const int m0 = 1 << J0;
  if (m0 >= n) throw std::invalid_argument("dwt: coarsest level too fine for input");

  const auto& h = w.lowpass();
  const auto& g = w.highpass();
  const int L = static_cast<int>(h.size());

  Vector coef(n);
  std::vector<double> c(grid_values.data(), grid_values.data() + n);
  int len = n;
  while (len > m0) {
    const int half = len / 2;
    std::vector<double> a(half);
    for (int k = 0; k < half; ++k) {
      double av = 0.0, dv = 0.0;
      for (int i = 0; i < L; ++i) {
        const double v = c[(2 * k + i) % len];
        av += h[i] * v;
        dv += g[i] * v;
      }
      a[k] = av;
      coef[half + k] = dv;  // level block [2^j, 2^{j+1})
    }
    c.assign(a.begin(), a.end());
    len = half;
  }
  for (int k = 0; k < m0; ++k) coef[k] = c[k];
  return coef;
}

Vector idwt(const Wavelet& w, int J0, const Vector& coefficients) {
  const auto n = static_cast<int>(coefficients.size());
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("idwt: input length must be a power of two");
  const int m0 = 1 << J0;
  if (m0 >= n) throw std::invalid_argument("idwt: coarsest level too fine for input");

  const auto& h = w.lowpass();
  const auto& g = w.highpass();
  const int L = static_cast<int>(h.size());

  std::vector<double> c(coefficients.data(), coefficients.data() + m0);
  int half = m0;
  while (half < n) {
    const int len = 2 * half;
    std::vector<double> out(len, 0.0);
    for (int k = 0; k < half; ++k) {
      const double a = c[k];
      const double d = coefficients[half + k];
      for (int i = 0; i < L; ++i) {
        out[(2 * k + i) % len] += h[i] * a + g[i] * d;
      }
    }
    c.swap(out);
    half = len;
  }
  return Eigen::Map<Vector>(c.data(), n);
}

Matrix dwt_matrix(const Wavelet& w, const Hyperparams& h) {
  h.validate();
  const int n = h.n();
  Matrix W(n, n);
  Vector e = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    e[i] = 1.0;
    W.col(i) = dwt(w, h.J0, e);
    e[i] = 0.0;
  }
  return W;
}

DesignMatrix build_design(const Wavelet& w, const Hyperparams& h,
                          const std::vector<double>& phases) {
  h.validate();
  const int n = h.n();
  const int m0 = h.num_scaling();
  const double scale = std::ldexp(1.0, -h.J / 2) * (h.J % 2 ? 1.0 / kSqrt2 : 1.0);

  DesignMatrix d;
  d.J0 = h.J0;
  d.J = h.J;
  d.X.resize(static_cast<Eigen::Index>(phases.size()), n);
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double x = phases[i];
    for (int col = 0; col < n; ++col) {
      const int j = column_level(col, h.J0);
      const int k = column_shift(col, h.J0);
      const double v = col < m0 ? w.eval_scaling(h.J0, k, x) : w.eval_wavelet(j, k, x);
      d.X(static_cast<Eigen::Index>(i), col) = scale * v;
    }
  }
  return d;
}

}  // namespace dwreg
