#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "dwreg/wavelet.hpp"
#include "support.hpp"

using namespace dwreg;

namespace {

// Riemann-sum inner product of two periodized basis evaluations on [0, 1).
double inner(const Wavelet& w, bool da, int ja, int ka, bool db, int jb, int kb,
             int points = 1 << 14) {
  double s = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = (i + 0.5) / points;
    const double a = da ? w.eval_wavelet(ja, ka, x) : w.eval_scaling(ja, ka, x);
    const double b = db ? w.eval_wavelet(jb, kb, x) : w.eval_scaling(jb, kb, x);
    s += a * b;
  }
  return s / points;
}

}  // namespace

TEST_SUITE("wavelet") {

TEST_CASE("family parsing round-trips and rejects junk") {
  CHECK(WaveletFamily::parse("haar").kind == WaveletKind::Haar);
  CHECK(WaveletFamily::parse("db2").vanishing_moments == 2);
  CHECK(WaveletFamily::parse("db10").vanishing_moments == 10);
  CHECK(WaveletFamily::parse("db7").name() == "db7");
  CHECK_THROWS_AS(WaveletFamily::parse("db11"), usage_error);
  CHECK_THROWS_AS(WaveletFamily::parse("sym4"), usage_error);
  CHECK_THROWS_AS(WaveletFamily::parse(""), usage_error);
}

TEST_CASE("db2 filter matches the closed form") {
  const auto f = daubechies_filter(2);
  const double s3 = std::sqrt(3.0), d = 4.0 * std::numbers::sqrt2;
  REQUIRE(f.size() == 4);
  CHECK(f[0] == doctest::Approx((1 + s3) / d).epsilon(1e-12));
  CHECK(f[1] == doctest::Approx((3 + s3) / d).epsilon(1e-12));
  CHECK(f[2] == doctest::Approx((3 - s3) / d).epsilon(1e-12));
  CHECK(f[3] == doctest::Approx((1 - s3) / d).epsilon(1e-12));
}

TEST_CASE("filters for K=2..10 satisfy the orthonormality identities") {
  for (int K = 2; K <= 10; ++K) {
    CAPTURE(K);
    const auto h = daubechies_filter(K);
    REQUIRE(static_cast<int>(h.size()) == 2 * K);
    double sum = 0.0;
    for (double c : h) sum += c;
    CHECK(sum == doctest::Approx(std::numbers::sqrt2).epsilon(1e-10));
    // sum_k h_k h_{k+2m} = delta_m
    for (int m = 0; m < K; ++m) {
      double dot = 0.0;
      for (std::size_t k = 0; k + 2 * m < h.size(); ++k) dot += h[k] * h[k + 2 * m];
      CHECK(dot == doctest::Approx(m == 0 ? 1.0 : 0.0).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(daubechies_filter(0), std::invalid_argument);
  CHECK_THROWS_AS(daubechies_filter(11), std::invalid_argument);
}

TEST_CASE("haar evaluations are closed form") {
  Wavelet w(WaveletFamily::parse("haar"));
  CHECK(w.eval_scaling(0, 0, 0.3) == doctest::Approx(1.0));
  CHECK(w.eval_wavelet(0, 0, 0.25) == doctest::Approx(1.0));
  CHECK(w.eval_wavelet(0, 0, 0.75) == doctest::Approx(-1.0));
  // Level 1 carries the 2^{j/2} normalization.
  CHECK(w.eval_wavelet(1, 0, 0.1) == doctest::Approx(std::numbers::sqrt2));
  CHECK(w.eval_wavelet(1, 0, 0.4) == doctest::Approx(-std::numbers::sqrt2));
  CHECK(w.eval_wavelet(1, 1, 0.1) == doctest::Approx(0.0));
}

TEST_CASE("evaluation rejects out-of-domain arguments") {
  Wavelet w(WaveletFamily::parse("haar"));
  CHECK_THROWS_AS(w.eval_scaling(0, 0, 1.0), std::domain_error);
  CHECK_THROWS_AS(w.eval_scaling(0, 0, -0.1), std::domain_error);
  CHECK_THROWS_AS(w.eval_wavelet(1, 2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(w.eval_wavelet(1, -1, 0.5), std::invalid_argument);
}

TEST_CASE("daubechies mother functions integrate correctly") {
  for (const char* name : {"db2", "db4", "db8"}) {
    CAPTURE(name);
    Wavelet w(WaveletFamily::parse(name));
    const int pts = 1 << 15;
    const double span = w.support_length();
    double iphi = 0.0, ipsi = 0.0, e2 = 0.0;
    for (int i = 0; i < pts; ++i) {
      const double t = span * (i + 0.5) / pts;
      iphi += w.scaling_raw(t);
      ipsi += w.wavelet_raw(t);
      e2 += w.scaling_raw(t) * w.scaling_raw(t);
    }
    iphi *= span / pts;
    ipsi *= span / pts;
    e2 *= span / pts;
    CHECK(iphi == doctest::Approx(1.0).epsilon(1e-6));       // partition of unity mass
    CHECK(std::abs(ipsi) < 1e-6);                            // zero mean
    CHECK(e2 == doctest::Approx(1.0).epsilon(1e-4));         // unit L2 norm
  }
}

TEST_CASE("periodized basis is orthonormal") {
  Wavelet w(WaveletFamily::parse("db4"));
  // A representative sample across levels and shifts.
  CHECK(inner(w, false, 1, 0, false, 1, 0) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(inner(w, true, 2, 1, true, 2, 1) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(std::abs(inner(w, false, 1, 0, false, 1, 1)) < 1e-4);
  CHECK(std::abs(inner(w, true, 2, 1, true, 2, 3)) < 1e-4);
  CHECK(std::abs(inner(w, false, 1, 0, true, 1, 0)) < 1e-4);
  CHECK(std::abs(inner(w, true, 1, 0, true, 3, 5)) < 1e-4);
}

TEST_CASE("cascade tables converge in refinement depth") {
  WaveletFamily coarse = WaveletFamily::parse("db4");
  coarse.refinement_depth = 6;
  WaveletFamily fine = WaveletFamily::parse("db4");
  fine.refinement_depth = 14;
  Wavelet wc(coarse), wf(fine);
  for (double t : {0.4, 1.3, 2.7, 5.9}) {
    CHECK(wc.scaling_raw(t) == doctest::Approx(wf.scaling_raw(t)).epsilon(2e-3));
    CHECK(wc.wavelet_raw(t) == doctest::Approx(wf.wavelet_raw(t)).epsilon(2e-3));
  }
  // At dyadic rationals of the coarse grid the two tables agree exactly.
  CHECK(wc.scaling_raw(1.0 + 1.0 / 64.0) ==
        doctest::Approx(wf.scaling_raw(1.0 + 1.0 / 64.0)).epsilon(1e-12));
}

TEST_CASE("dwt matrix is orthogonal and matches dwt/idwt") {
  for (const char* name : {"haar", "db4"}) {
    CAPTURE(name);
    Hyperparams h;
    h.J = 4;
    h.J0 = 1;
    Wavelet w(WaveletFamily::parse(name));
    const int n = h.n();
    Matrix W = dwt_matrix(w, h);
    CHECK((W * W.transpose() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    Vector f(n);
    for (int i = 0; i < n; ++i) f[i] = nd(rng);
    Vector coef = dwt(w, h.J0, f);
    CHECK((coef - W * f).cwiseAbs().maxCoeff() < 1e-12);
    Vector rec = idwt(w, h.J0, coef);
    CHECK((rec - f).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("constant input has zero detail coefficients") {
  Wavelet w(WaveletFamily::parse("db6"));
  Vector f = Vector::Constant(32, 2.5);
  Vector coef = dwt(w, 2, f);
  for (int hcol = 4; hcol < 32; ++hcol) CHECK(std::abs(coef[hcol]) < 1e-12);
}

TEST_CASE("dwt rejects bad lengths") {
  Wavelet w(WaveletFamily::parse("haar"));
  Vector f = Vector::Zero(12);
  CHECK_THROWS_AS(dwt(w, 0, f), std::invalid_argument);
  Vector g = Vector::Zero(8);
  CHECK_THROWS_AS(dwt(w, 3, g), std::invalid_argument);
}

TEST_CASE("design on the dyadic grid is the synthesis operator") {
  Hyperparams h;
  h.J = 4;
  h.J0 = 2;
  const int n = h.n();
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = static_cast<double>(i) / n;

  SUBCASE("haar: X equals W transposed") {
    Wavelet w(WaveletFamily::parse("haar"));
    Matrix X = build_design(w, h, grid).X;
    Matrix W = dwt_matrix(w, h);
    CHECK((X - W.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("db4: X equals the scaling circulant times W transposed") {
    // At dyadic points the periodized level-J basis reduces to phi at the
    // integers, so X = Phi W' with Phi_{ik} = phi((i - k) mod n).
    Wavelet w(WaveletFamily::parse("db4"));
    Matrix X = build_design(w, h, grid).X;
    Matrix W = dwt_matrix(w, h);
    Matrix Phi = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const int d = ((i - k) % n + n) % n;
        double v = 0.0;
        for (int m = -1; m <= 1; ++m) v += w.scaling_raw(d + m * n);
        Phi(i, k) = v;
      }
    CHECK((X - Phi * W.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("haar design rows have one scaling and one detail entry per level") {
  // At a generic phase exactly 1 + (J - J0) haar basis functions are nonzero:
  // the covering scaling function plus one wavelet per retained level.
  Wavelet w(WaveletFamily::parse("haar"));
  for (int J0 = 2; J0 <= 3; ++J0) {
    Hyperparams h;
    h.J = J0 + 1;
    h.J0 = J0;
    Matrix X = build_design(w, h, {0.37}).X;
    int nonzero = 0;
    for (int c = 0; c < X.cols(); ++c)
      if (std::abs(X(0, c)) > 1e-12) ++nonzero;
    CHECK(nonzero == 1 + (h.J - h.J0));
  }
}

TEST_CASE("design round-trips a curve sampled off the dyadic grid") {
  // Synthesis at arbitrary phases must interpolate the idwt: reconstruct a
  // random coefficient vector on a shifted grid and compare against dense
  // evaluation through the basis directly.
  Hyperparams h;
  h.J = 3;
  h.J0 = 1;
  Wavelet w(WaveletFamily::parse("db2"));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  Vector theta(h.n());
  for (int i = 0; i < h.n(); ++i) theta[i] = nd(rng);

  std::vector<double> phases{0.05, 0.21, 0.48, 0.77, 0.93};
  Matrix X = build_design(w, h, phases).X;
  const double norm = std::pow(2.0, -h.J / 2.0);  // 2^{-J/2}
  for (std::size_t r = 0; r < phases.size(); ++r) {
    double direct = 0.0;
    for (int c = 0; c < h.n(); ++c) {
      const int lev = column_level(c, h.J0);
      const int k = column_shift(c, h.J0);
      const double b = is_detail_column(c, h.J0) ? w.eval_wavelet(lev, k, phases[r])
                                                 : w.eval_scaling(h.J0, k, phases[r]);
      direct += theta[c] * b;
    }
    CHECK(X.row(r).dot(theta) == doctest::Approx(norm * direct).epsilon(1e-12));
  }
}

}  // TEST_SUITE
