#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dwreg/chain.hpp"
#include "dwreg/dataset.hpp"
#include "dwreg/smooth_prior.hpp"
#include "dwreg/wavelet.hpp"

namespace dwreg {

enum class RunMode { Fit, PriorSim, EnumerateCheck };

// The four-panel (alpha, beta) grid {0.5, 0.7} x {0.1, 0.9}; each panel runs
// a full fit into its own subdirectory of output_dir.
enum class Preset { None, PanelGrid };

struct RunConfig {
  Hyperparams h;
  std::optional<double> sigma0sq;  // unset: follows lambda
  WaveletFamily family;            // db4 unless overridden
  ChainConfig chain;
  RunMode mode = RunMode::Fit;
  Preset preset = Preset::None;
  std::string input_path;    // empty: synthetic default dataset
  std::string output_dir = ".";
  int grid_size = 256;       // summary.csv rows
  int prior_draws = 500;     // prior-sim draws per beta
  std::vector<double> prior_betas = {0.1, 0.9};
  ThresholdRule threshold = ThresholdRule::UniversalLog;
  int synthetic_n = 100;     // synthetic dataset size
  double synthetic_sigma = 0.5;
};

// Hyperparams with the sigma0sq default resolved; validation failures are
// reported as usage errors.
Hyperparams resolved_hyperparams(const RunConfig& cfg);

// Applies one setting to the config; keys are case-insensitive with '-' and
// '_' interchangeable.  Unknown keys and unparseable values throw usage_error.
void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value);

// Flat key=value file; '#' starts a comment, blank lines are skipped, keys
// are normalized by folding '-' to '_'.
void apply_config_file(RunConfig& cfg, const std::string& path);

// Executes the configured mode, writing outputs under cfg.output_dir.
// Returns the process exit code: 0 success, 1 usage error, 2 data error,
// 3 numerical error; failure details go to stderr.
int run(const RunConfig& cfg);

}  // namespace dwreg
