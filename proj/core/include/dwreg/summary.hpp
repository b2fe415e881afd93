#pragma once

#include <vector>

#include "dwreg/chain.hpp"
#include "dwreg/wavelet.hpp"

namespace dwreg {

// Curve values at the given phases for a full-length coefficient vector
// (scaling + wavelet synthesis; on the dyadic grid this is the inverse DWT).
Vector reconstruct(const Vector& theta_full, const Wavelet& w, const Hyperparams& h,
                   const std::vector<double>& grid);

struct PosteriorCurveSummary {
  std::vector<double> grid;
  Vector mean;
  Vector p05, p25, p75, p95;  // pointwise percentile bands
  int n_samples = 0;
};

// Pointwise mean and 50%/90% central bands of the stored posterior draws.
// Requires at least 100 stored theta draws.
PosteriorCurveSummary summarize(const ChainOutput& chain, const Wavelet& w,
                                const Hyperparams& h, const std::vector<double>& grid);

// size equally spaced phases i/size on [0, 1).
std::vector<double> default_grid(int size = 256);

}  // namespace dwreg
