#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "dwreg/oracle.hpp"
#include "dwreg/wavelet.hpp"
#include "support.hpp"

using namespace dwreg;
using dwreg::testing::max_abs;

TEST_SUITE("oracle") {

TEST_CASE("single observation matches the scalar normal density") {
  Hyperparams h;
  h.J = 1;
  h.J0 = 0;
  h.lambda = 1.7;
  h.beta = 0.3;
  Wavelet w(WaveletFamily::parse("haar"));
  auto gp = build_V(h, h.n());
  auto sp = build_wavelet_prior(gp.V, dwt_matrix(w, h));

  const double x = 0.3, yv = 1.4, sig = 0.6;
  Matrix X = build_design(w, h, {x}).X;
  Vector y(1), nv(1);
  y << yv;
  nv << sig * sig;

  std::vector<int> gamma{0};  // scaling only
  const double m = X(0, 0) * (h.lambda / sp.Omega(0, 0)) * X(0, 0) + sig * sig;
  const double expected =
      -0.5 * (std::log(2.0 * std::numbers::pi) + std::log(m) + yv * yv / m);
  CHECK(oracle::log_marginal_dense(X, y, nv, sp, h, gamma) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("vanishing prior scale reduces to the noise-only law") {
  Hyperparams h;
  h.J = 2;
  h.J0 = 0;
  h.lambda = 1e-12;
  h.beta = 0.5;
  Wavelet w(WaveletFamily::parse("haar"));
  auto gp = build_V(h, h.n());
  auto sp = build_wavelet_prior(gp.V, dwt_matrix(w, h));

  Matrix X = build_design(w, h, {0.1, 0.4, 0.8}).X;
  Vector y(3), nv(3);
  y << 0.5, -0.2, 0.9;
  nv << 0.25, 0.36, 0.49;

  double expected = 0.0;
  for (int i = 0; i < 3; ++i)
    expected += -0.5 * (std::log(2.0 * std::numbers::pi) + std::log(nv[i]) +
                        y[i] * y[i] / nv[i]);
  CHECK(oracle::log_marginal_dense(X, y, nv, sp, h, full_gamma(h)) ==
        doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("condition_gaussian reproduces the bivariate closed form") {
  Vector mean(2);
  mean << 1.0, 2.0;
  Matrix cov(2, 2);
  cov << 2.0, 1.0, 1.0, 3.0;
  Vector val(1);
  val << 4.0;
  auto cond = oracle::condition_gaussian(mean, cov, {1}, val);
  REQUIRE(cond.free == std::vector<int>{0});
  CHECK(cond.mean[0] == doctest::Approx(1.0 + (4.0 - 2.0) / 3.0));
  CHECK(cond.cov(0, 0) == doctest::Approx(2.0 - 1.0 / 3.0));
}

TEST_CASE("condition_gaussian validates its arguments") {
  Vector mean = Vector::Zero(3);
  Matrix cov = Matrix::Identity(3, 3);
  Vector one = Vector::Zero(1);
  CHECK_THROWS_AS(oracle::condition_gaussian(mean, cov, {3}, one),
                  std::invalid_argument);
  Vector two = Vector::Zero(2);
  CHECK_THROWS_AS(oracle::condition_gaussian(mean, cov, {1, 1}, two),
                  std::invalid_argument);
  Vector three = Vector::Zero(3);
  CHECK_THROWS_AS(oracle::condition_gaussian(mean, cov, {0, 1, 2}, three),
                  std::invalid_argument);
}

TEST_CASE("conditioning on an independent block changes nothing") {
  Matrix cov = Matrix::Zero(3, 3);
  cov(0, 0) = 2.0;
  cov(1, 1) = 1.0;
  cov(2, 2) = 4.0;
  cov(0, 1) = cov(1, 0) = 0.5;  // block {0,1} independent of {2}
  Vector mean(3);
  mean << 1.0, -1.0, 5.0;
  Vector val(1);
  val << -3.0;
  auto cond = oracle::condition_gaussian(mean, cov, {2}, val);
  CHECK(cond.mean[0] == doctest::Approx(1.0));
  CHECK(cond.mean[1] == doctest::Approx(-1.0));
  CHECK(cond.cov(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("enumerate_posterior is a normalized distribution") {
  dwreg::testing::TestProblem p(
      [] {
        Hyperparams h;
        h.J = 3;
        h.J0 = 1;
        h.beta = 0.4;
        return h;
      }(),
      "haar", 40, 0.4, 17);

  auto post = oracle::enumerate_posterior(p.ctx.X, p.ctx.y, p.ctx.noise_var, p.sp, p.h);
  REQUIRE(post.models.size() == 64);  // 2^6 detail subsets
  CHECK(post.probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(post.probs.minCoeff() >= 0.0);
  // Models come back sorted and include the scaling-only model.
  bool found_base = false;
  for (const auto& m : post.models)
    if (m == std::vector<int>{0, 1}) found_base = true;
  CHECK(found_base);
}

TEST_CASE("enumerate_posterior refuses oversized detail spaces") {
  dwreg::testing::TestProblem p(
      [] {
        Hyperparams h;
        h.J = 4;  // 14 detail columns at J0 = 1
        h.J0 = 1;
        return h;
      }(),
      "haar", 30, 0.4, 3);
  CHECK_THROWS_AS(
      oracle::enumerate_posterior(p.ctx.X, p.ctx.y, p.ctx.noise_var, p.sp, p.h),
      std::invalid_argument);
}

TEST_CASE("tv_distance of a single-model chain is one minus its mass") {
  dwreg::testing::TestProblem p(
      [] {
        Hyperparams h;
        h.J = 2;
        h.J0 = 1;
        return h;
      }(),
      "haar", 25, 0.4, 9);
  auto post = oracle::enumerate_posterior(p.ctx.X, p.ctx.y, p.ctx.noise_var, p.sp, p.h);

  std::vector<ChainRecord> records(10);
  for (auto& r : records) r.gamma = post.models[0];
  const double tv = oracle::tv_distance(post, records);
  CHECK(tv == doctest::Approx(1.0 - post.probs[0]).epsilon(1e-12));
}

TEST_CASE("tv_distance vanishes when frequencies match the posterior") {
  // Synthesize records in exact proportion to a 4-model posterior.
  dwreg::testing::TestProblem p(
      [] {
        Hyperparams h;
        h.J = 2;
        h.J0 = 1;
        return h;
      }(),
      "haar", 25, 0.4, 9);
  auto post = oracle::enumerate_posterior(p.ctx.X, p.ctx.y, p.ctx.noise_var, p.sp, p.h);

  const int total = 100000;
  std::vector<ChainRecord> records;
  records.reserve(total);
  for (std::size_t m = 0; m < post.models.size(); ++m) {
    const int copies = static_cast<int>(std::round(post.probs[m] * total));
    for (int c = 0; c < copies; ++c) {
      ChainRecord r;
      r.gamma = post.models[m];
      records.push_back(r);
    }
  }
  CHECK(oracle::tv_distance(post, records) < 1e-4);
}

}  // TEST_SUITE
