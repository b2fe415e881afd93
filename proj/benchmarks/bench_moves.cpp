// Microbenchmarks for the hot paths: single up/down moves at various model
// sizes (the O(q^2) claim), the transform, and a full Metropolis step.

#include <benchmark/benchmark.h>

#include <random>

#include "dwreg/chain.hpp"
#include "dwreg/dataset.hpp"
#include "dwreg/model_state.hpp"
#include "dwreg/smooth_prior.hpp"
#include "dwreg/wavelet.hpp"

using namespace dwreg;

namespace {

// One shared n=256 problem; building it per iteration would swamp the move
// cost being measured.
struct Fixture {
  Hyperparams h;
  Wavelet w{WaveletFamily::parse("haar")};
  Dataset ds;
  DesignMatrix design;
  SmoothPrior sp;
  FitContext ctx;

  Fixture()
      : h([] {
          Hyperparams h;
          h.J = 8;
          h.J0 = 0;
          h.beta = 0.3;
          return h;
        }()),
        ds(generate_synthetic(TrigPoly::default_fifth_order(), 400, 0.5, 31)),
        design(build_design(w, h, ds.phases())),
        sp(build_wavelet_prior(build_V(h, h.n()).V, dwt_matrix(w, h))),
        ctx(FitContext::build(ds, design, sp, h)) {}

  static const Fixture& get() {
    static Fixture f;
    return f;
  }

  ModelState state_of_size(int q, std::mt19937_64& rng) const {
    std::vector<int> gamma = scaling_gamma(h);
    std::vector<int> details;
    for (int c = h.num_scaling(); c < h.n(); ++c) details.push_back(c);
    std::shuffle(details.begin(), details.end(), rng);
    gamma.insert(gamma.end(), details.begin(),
                 details.begin() + (q - h.num_scaling()));
    return init_state(ctx, gamma);
  }
};

void BM_MovePair(benchmark::State& state) {
  const auto& f = Fixture::get();
  std::mt19937_64 rng(7);
  const int q = static_cast<int>(state.range(0));
  ModelState st = f.state_of_size(q, rng);
  // Membership is restored every iteration, so the detail columns of the
  // initial model stay valid picks even as positions shift across moves.
  std::vector<int> detail_cols(st.gamma.begin() + f.h.num_scaling(), st.gamma.end());
  std::uniform_int_distribution<std::size_t> pick(0, detail_cols.size() - 1);
  for (auto _ : state) {
    const int col = detail_cols[pick(rng)];
    MoveResult down = down_move(st, st.position_of(col));
    MoveResult up = up_move(down.state, col, f.ctx);
    benchmark::DoNotOptimize(up.state.logml);
    st = std::move(up.state);
  }
  state.SetItemsProcessed(state.iterations() * 2);  // two moves per iteration
}
BENCHMARK(BM_MovePair)->Arg(32)->Arg(64)->Arg(128)->Arg(256);

void BM_MhStep(benchmark::State& state) {
  const auto& f = Fixture::get();
  std::mt19937_64 rng(11);
  ModelState st = f.state_of_size(64, rng);
  for (auto _ : state) {
    StepOutcome r = mh_step(st, f.ctx, rng);
    benchmark::DoNotOptimize(r.accepted);
  }
}
BENCHMARK(BM_MhStep);

void BM_Dwt(benchmark::State& state) {
  const auto& f = Fixture::get();
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss;
  Vector x(f.h.n());
  for (int i = 0; i < x.size(); ++i) x[i] = gauss(rng);
  for (auto _ : state) {
    Vector coefs = dwt(f.w, f.h.J0, x);
    benchmark::DoNotOptimize(coefs.sum());
  }
}
BENCHMARK(BM_Dwt);

}  // namespace

BENCHMARK_MAIN();
