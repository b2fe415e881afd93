#pragma once

#include <random>
#include <vector>

#include "dwreg/chain.hpp"
#include "dwreg/dataset.hpp"
#include "dwreg/model_state.hpp"
#include "dwreg/smooth_prior.hpp"
#include "dwreg/wavelet.hpp"

namespace dwreg::testing {

// A fully wired fit problem on synthetic data.  Members are constructed in
// declaration order and ctx holds a pointer into sp, so sp must stay put:
// the struct is pinned in place (no copies, no moves).
struct TestProblem {
  Hyperparams h;
  Wavelet w;
  Dataset ds;
  DesignMatrix design;
  GridPrior gp;
  SmoothPrior sp;
  FitContext ctx;

  TestProblem(const Hyperparams& hp, const std::string& family, int N,
              double sigma, std::uint64_t seed)
      : h(hp),
        w(WaveletFamily::parse(family)),
        ds(generate_synthetic(TrigPoly::default_fifth_order(), N, sigma, seed)),
        design(build_design(w, h, ds.phases())),
        gp(build_V(h, h.n())),
        sp(build_wavelet_prior(gp.V, dwt_matrix(w, h))),
        ctx(FitContext::build(ds, design, sp, h)) {}

  TestProblem(const TestProblem&) = delete;
  TestProblem& operator=(const TestProblem&) = delete;
};

// Random subset of detail columns plus the mandatory scaling block.
inline std::vector<int> random_gamma(const Hyperparams& h, std::mt19937_64& rng,
                                     double keep_prob = 0.5) {
  std::vector<int> gamma = scaling_gamma(h);
  std::bernoulli_distribution keep(keep_prob);
  for (int col = h.num_scaling(); col < h.n(); ++col)
    if (keep(rng)) gamma.push_back(col);
  return gamma;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace dwreg::testing
