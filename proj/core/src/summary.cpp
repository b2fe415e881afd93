#include "dwreg/summary.hpp"

#include "dwreg/numeric.hpp"

namespace dwreg {

Vector reconstruct(const Vector& theta_full, const Wavelet& w, const Hyperparams& h,
                   const std::vector<double>& grid) {
  if (theta_full.size() != h.n())
    throw std::invalid_argument("reconstruct: coefficient vector has wrong length");
  const DesignMatrix d = build_design(w, h, grid);
  return d.X * theta_full;
}

PosteriorCurveSummary summarize(const ChainOutput& chain, const Wavelet& w,
                                const Hyperparams& h, const std::vector<double>& grid) {
  const auto m = static_cast<int>(chain.thetas.size());
  if (m < 100)
    throw std::invalid_argument("summarize: need at least 100 stored draws");
  if (grid.empty()) throw std::invalid_argument("summarize: empty grid");

  const DesignMatrix d = build_design(w, h, grid);
  const auto g = static_cast<Eigen::Index>(grid.size());

  Matrix curves(g, m);
  for (int s = 0; s < m; ++s) curves.col(s) = d.X * chain.thetas[s];

  PosteriorCurveSummary out;
  out.grid = grid;
  out.n_samples = m;
  out.mean = curves.rowwise().mean();
  out.p05.resize(g);
  out.p25.resize(g);
  out.p75.resize(g);
  out.p95.resize(g);
  std::vector<double> row(m);
  for (Eigen::Index i = 0; i < g; ++i) {
    for (int s = 0; s < m; ++s) row[s] = curves(i, s);
    out.p05[i] = quantile(row, 0.05);
    out.p25[i] = quantile(row, 0.25);
    out.p75[i] = quantile(row, 0.75);
    out.p95[i] = quantile(row, 0.95);
  }
  return out;
}

std::vector<double> default_grid(int size) {
  if (size < 1) throw std::invalid_argument("default_grid: size must be >= 1");
  std::vector<double> grid(size);
  for (int i = 0; i < size; ++i) grid[i] = static_cast<double>(i) / size;
  return grid;
}

}  // namespace dwreg
