#include "dwreg/driver.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <climits>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "dwreg/numeric.hpp"
#include "dwreg/oracle.hpp"
#include "dwreg/summary.hpp"

namespace dwreg {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Keys: case-insensitive, '-' and '_' interchangeable.
std::string normalize_key(std::string s) {
  for (char& c : s) {
    if (c == '-') c = '_';
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return s;
}

// Enum-valued settings accept either separator as well.
std::string normalize_value(std::string s) {
  for (char& c : s) {
    if (c == '_') c = '-';
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return s;
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw usage_error("config: key '" + key + "': expected a real number, got '" + v + "'");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw usage_error("config: key '" + key + "': expected an integer, got '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  const long x = parse_long(key, v);
  if (x < INT_MIN || x > INT_MAX)
    throw usage_error("config: key '" + key + "': value out of range");
  return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw usage_error("config: key '" + key + "': expected a non-negative integer, got '" +
                      v + "'");
  }
}

bool parse_flag(const std::string& key, const std::string& v) {
  const std::string n = normalize_value(v);
  if (n == "true" || n == "1" || n == "yes" || n == "on") return true;
  if (n == "false" || n == "0" || n == "no" || n == "off") return false;
  throw usage_error("config: key '" + key + "': expected true/false, got '" + v + "'");
}

RunMode parse_mode(const std::string& v) {
  const std::string n = normalize_value(v);
  if (n == "fit") return RunMode::Fit;
  if (n == "prior-sim") return RunMode::PriorSim;
  if (n == "enumerate-check") return RunMode::EnumerateCheck;
  throw usage_error("config: mode must be fit, prior-sim or enumerate-check, got '" + v +
                    "'");
}

Preset parse_preset(const std::string& v) {
  const std::string n = normalize_value(v);
  if (n == "none") return Preset::None;
  if (n == "panel-grid") return Preset::PanelGrid;
  throw usage_error("config: preset must be none or panel-grid, got '" + v + "'");
}

ThresholdRule parse_threshold(const std::string& v) {
  const std::string n = normalize_value(v);
  if (n == "universal-log") return ThresholdRule::UniversalLog;
  if (n == "sqrt-2n") return ThresholdRule::SqrtTwoN;
  throw usage_error("config: threshold must be universal-log or sqrt-2n, got '" + v + "'");
}

ClosureRule parse_closure(const std::string& v) {
  const std::string n = normalize_value(v);
  if (n == "cross-covariance") return ClosureRule::CrossCovariance;
  if (n == "last-column") return ClosureRule::LastColumn;
  throw usage_error("config: closure must be cross-covariance or last-column, got '" + v +
                    "'");
}

std::vector<double> parse_beta_list(const std::string& key, const std::string& v) {
  std::vector<double> betas;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double b = parse_real(key, trim(item));
    if (!(b > 0)) throw usage_error("config: key '" + key + "': betas must be > 0");
    betas.push_back(b);
  }
  if (betas.empty())
    throw usage_error("config: key '" + key + "': expected a comma-separated list");
  return betas;
}

const char* mode_name(RunMode m) {
  switch (m) {
    case RunMode::Fit: return "fit";
    case RunMode::PriorSim: return "prior-sim";
    case RunMode::EnumerateCheck: return "enumerate-check";
  }
  return "?";
}

const char* preset_name(Preset p) {
  return p == Preset::PanelGrid ? "panel-grid" : "none";
}

const char* threshold_name(ThresholdRule r) {
  return r == ThresholdRule::UniversalLog ? "universal-log" : "sqrt-2n";
}

const char* closure_name(ClosureRule c) {
  return c == ClosureRule::CrossCovariance ? "cross-covariance" : "last-column";
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw data_error("cannot write " + p.string());
  return out;
}

void ensure_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw data_error("cannot create output directory " + p.string() + ": " +
                           ec.message());
}

// Full resolved configuration; every run echoes this for auditability.
json config_echo(const RunConfig& cfg, const Hyperparams& h) {
  json j;
  j["mode"] = mode_name(cfg.mode);
  j["preset"] = preset_name(cfg.preset);
  j["lambda"] = h.lambda;
  j["beta"] = h.beta;
  j["alpha"] = h.alpha;
  j["sigma0sq"] = h.sigma0sq;
  j["J0"] = h.J0;
  j["J"] = h.J;
  j["closure"] = closure_name(h.closure);
  j["family"] = cfg.family.name();
  j["iterations"] = cfg.chain.iterations;
  j["burn_in"] = cfg.chain.burn_in;
  j["thin"] = cfg.chain.thin;
  j["seed"] = cfg.chain.seed;
  j["store_theta"] = cfg.chain.store_theta;
  j["input"] = cfg.input_path;
  j["out"] = cfg.output_dir;
  j["grid_size"] = cfg.grid_size;
  j["prior_draws"] = cfg.prior_draws;
  j["prior_betas"] = cfg.prior_betas;
  j["threshold"] = threshold_name(cfg.threshold);
  j["synthetic_n"] = cfg.synthetic_n;
  j["synthetic_sigma"] = cfg.synthetic_sigma;
  return j;
}

void check_chain_config(const ChainConfig& c) {
  if (c.iterations < 1 || c.burn_in < 0 || c.burn_in >= c.iterations)
    throw usage_error("config: need 0 <= burn_in < iterations");
  if (c.thin < 1) throw usage_error("config: thin must be >= 1");
}

// Loads the input CSV, or generates (and saves) the synthetic default when no
// input path is configured.  The data seed is offset from the chain seed so
// the two random streams never alias.
Dataset load_or_generate(const RunConfig& cfg, const fs::path& outdir) {
  if (!cfg.input_path.empty()) return parse_dataset(cfg.input_path);
  if (cfg.synthetic_n < 1) throw usage_error("config: synthetic_n must be >= 1");
  if (!(cfg.synthetic_sigma > 0))
    throw usage_error("config: synthetic_sigma must be > 0");
  const Dataset ds = generate_synthetic(TrigPoly::default_fifth_order(), cfg.synthetic_n,
                                        cfg.synthetic_sigma, cfg.chain.seed + 1);
  emit_dataset(ds, outdir / "dataset.csv");
  return ds;
}

void write_summary_csv(const fs::path& path, const PosteriorCurveSummary& s) {
  std::ofstream out = open_output(path);
  out << "grid,mean,p05,p25,p75,p95\n";
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out << fmt17(s.grid[i]) << ',' << fmt17(s.mean[k]) << ',' << fmt17(s.p05[k]) << ','
        << fmt17(s.p25[k]) << ',' << fmt17(s.p75[k]) << ',' << fmt17(s.p95[k]) << '\n';
  }
  if (!out) throw data_error("failed writing " + path.string());
}

void write_trace_csv(const fs::path& path, const ChainOutput& chain) {
  std::ofstream out = open_output(path);
  out << "iter,model_size,log_post\n";
  for (const ChainRecord& r : chain.records)
    out << r.iter << ',' << r.gamma.size() << ',' << fmt17(r.log_post) << '\n';
  if (!out) throw data_error("failed writing " + path.string());
}

void run_fit(const RunConfig& cfg, const Hyperparams& h, const fs::path& outdir) {
  check_chain_config(cfg.chain);
  if (!cfg.chain.store_theta)
    throw usage_error("fit: store_theta must stay enabled (the curve summary needs draws)");
  const long stored = (cfg.chain.iterations - cfg.chain.burn_in) / cfg.chain.thin;
  if (stored < 100)
    throw usage_error("fit: configuration stores fewer than 100 posterior draws; "
                      "raise iterations or lower thin");
  if (cfg.grid_size < 1) throw usage_error("config: grid_size must be >= 1");

  ensure_dir(outdir);
  const Dataset ds = load_or_generate(cfg, outdir);

  const auto t0 = std::chrono::steady_clock::now();
  const Wavelet w(cfg.family);
  const DesignMatrix design = build_design(w, h, ds.phases());
  const GridPrior gp = build_V(h, h.n());
  const SmoothPrior sp = build_wavelet_prior(gp.V, dwt_matrix(w, h));

  const ChainOutput chain = run_chain(ds, design, sp, h, cfg.chain);
  const PosteriorCurveSummary summ = summarize(chain, w, h, default_grid(cfg.grid_size));
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;

  write_summary_csv(outdir / "summary.csv", summ);
  write_trace_csv(outdir / "trace.csv", chain);

  json diag;
  diag["acceptance_rate"] = chain.acceptance_rate;
  diag["reanchor_max_drift"] = chain.reanchor_max_drift;
  diag["seed"] = cfg.chain.seed;
  diag["config"] = config_echo(cfg, h);
  diag["runtime_seconds"] = elapsed.count();
  diag["chain"] = {{"proposals", chain.proposals},
                   {"accepted", chain.accepted},
                   {"degenerate_rejects", chain.degenerate_rejects},
                   {"records", chain.records.size()},
                   {"reanchor_count", chain.reanchor_count},
                   {"reanchor_alarms", chain.reanchor_alarms},
                   {"final_model_size", chain.final_state.gamma.size()}};
  diag["data"] = {{"source", cfg.input_path.empty() ? "synthetic" : cfg.input_path},
                  {"rows", ds.records.size()}};
  open_output(outdir / "diagnostics.json") << diag.dump(2) << '\n';
}

void run_panel_grid(const RunConfig& cfg) {
  if (cfg.mode != RunMode::Fit)
    throw usage_error("preset panel-grid applies to fit mode only");
  ensure_dir(cfg.output_dir);
  for (const double alpha : {0.5, 0.7}) {
    for (const double beta : {0.1, 0.9}) {
      RunConfig panel = cfg;
      panel.preset = Preset::None;
      panel.h.alpha = alpha;
      panel.h.beta = beta;
      const fs::path sub = fs::path(cfg.output_dir) /
                           ("alpha" + fmt_short(alpha) + "_beta" + fmt_short(beta));
      panel.output_dir = sub.string();
      run_fit(panel, resolved_hyperparams(panel), sub);
    }
  }
}

void run_prior_sim(const RunConfig& cfg, const Hyperparams& h) {
  if (cfg.prior_draws < 1) throw usage_error("config: prior_draws must be >= 1");
  ensure_dir(cfg.output_dir);
  const fs::path outdir(cfg.output_dir);

  const Wavelet w(cfg.family);
  const Matrix W = dwt_matrix(w, h);
  const std::vector<int> gamma = full_gamma(h);
  const int n = h.n();

  std::ofstream tv_out = open_output(outdir / "prior_tv.csv");
  tv_out << "beta,draw,tv_raw,tv_thresholded\n";

  std::vector<double> mean_raw, mean_thr;
  for (std::size_t bi = 0; bi < cfg.prior_betas.size(); ++bi) {
    Hyperparams hb = h;
    hb.beta = cfg.prior_betas[bi];
    const GridPrior gp = build_V(hb, n);
    const SmoothPrior sp = build_wavelet_prior(gp.V, W);
    const std::vector<Vector> coefs = simulate_prior_coefs(
        sp, hb, gamma, cfg.prior_draws, cfg.chain.seed + bi);
    // Seed stream for the conditioned redraws, distinct from the raw draws.
    std::mt19937_64 redraw_seeds(cfg.chain.seed + 1000 + bi);

    std::ofstream raw_out =
        open_output(outdir / ("prior_draws_beta" + fmt_short(hb.beta) + "_raw.csv"));
    std::ofstream thr_out = open_output(
        outdir / ("prior_draws_beta" + fmt_short(hb.beta) + "_thresholded.csv"));
    raw_out << "draw,phase,value\n";
    thr_out << "draw,phase,value\n";

    double sum_raw = 0.0, sum_thr = 0.0;
    for (int s = 0; s < cfg.prior_draws; ++s) {
      const Vector& theta = coefs[s];
      const Vector curve = idwt(w, h.J0, theta);

      // The thresholded panel conditions the prior on the excluded
      // coefficients being zero and draws afresh, rather than zeroing the
      // raw draw's own coefficients: the support is picked per draw by the
      // universal rule, the curve by the conditioned prior on that support.
      const double sigma_hat = mad_sigma_hat(theta);
      std::vector<int> gamma_thr = scaling_gamma(hb);
      if (sigma_hat > 0) {
        for (int c : universal_threshold(theta, sigma_hat, n, hb.J0, cfg.threshold))
          gamma_thr.push_back(c);
      } else {
        gamma_thr = gamma;  // flat draw: nothing falls below the cut
      }
      const Vector kept =
          simulate_prior_coefs(sp, hb, gamma_thr, 1, redraw_seeds()).front();
      const Vector curve_thr = idwt(w, h.J0, kept);

      const double tv_raw = total_variation(curve);
      const double tv_thr = total_variation(curve_thr);
      sum_raw += tv_raw;
      sum_thr += tv_thr;
      tv_out << fmt_short(hb.beta) << ',' << s << ',' << fmt17(tv_raw) << ','
             << fmt17(tv_thr) << '\n';
      for (int i = 0; i < n; ++i) {
        const std::string phase = fmt17(static_cast<double>(i) / n);
        raw_out << s << ',' << phase << ',' << fmt17(curve[i]) << '\n';
        thr_out << s << ',' << phase << ',' << fmt17(curve_thr[i]) << '\n';
      }
    }
    mean_raw.push_back(sum_raw / cfg.prior_draws);
    mean_thr.push_back(sum_thr / cfg.prior_draws);
  }

  json j;
  j["betas"] = cfg.prior_betas;
  j["draws"] = cfg.prior_draws;
  j["threshold"] = threshold_name(cfg.threshold);
  j["seed"] = cfg.chain.seed;
  j["mean_tv_raw"] = mean_raw;
  j["mean_tv_thresholded"] = mean_thr;
  j["config"] = config_echo(cfg, h);
  open_output(outdir / "prior_sim.json") << j.dump(2) << '\n';
}

void run_enumerate_check(const RunConfig& cfg, const Hyperparams& h) {
  check_chain_config(cfg.chain);
  if (h.num_detail() > 12)
    throw usage_error("enumerate-check: needs at most 12 detail columns "
                      "(2^J - 2^J0 <= 12); lower J");
  ensure_dir(cfg.output_dir);
  const fs::path outdir(cfg.output_dir);
  const Dataset ds = load_or_generate(cfg, outdir);

  const Wavelet w(cfg.family);
  const DesignMatrix design = build_design(w, h, ds.phases());
  const GridPrior gp = build_V(h, h.n());
  const SmoothPrior sp = build_wavelet_prior(gp.V, dwt_matrix(w, h));

  const ChainOutput chain = run_chain(ds, design, sp, h, cfg.chain);
  const Vector noise_var = ds.sigmas().array().square().matrix();
  const oracle::EnumeratedPosterior exact =
      oracle::enumerate_posterior(design.X, ds.values(), noise_var, sp, h);
  const double tv = oracle::tv_distance(exact, chain.records);

  json j;
  j["tv"] = tv;
  j["num_models"] = exact.models.size();
  j["records"] = chain.records.size();
  j["acceptance_rate"] = chain.acceptance_rate;
  j["seed"] = cfg.chain.seed;
  j["config"] = config_echo(cfg, h);
  open_output(outdir / "enumerate_check.json") << j.dump(2) << '\n';
}

}  // namespace

Hyperparams resolved_hyperparams(const RunConfig& cfg) {
  Hyperparams h = cfg.h;
  h.sigma0sq = cfg.sigma0sq.value_or(h.lambda);
  try {
    h.validate();
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  return h;
}

void apply_config_kv(RunConfig& cfg, const std::string& raw_key,
                     const std::string& value) {
  const std::string key = normalize_key(trim(raw_key));
  const std::string v = trim(value);
  if (key == "lambda") cfg.h.lambda = parse_real(key, v);
  else if (key == "beta") cfg.h.beta = parse_real(key, v);
  else if (key == "alpha") cfg.h.alpha = parse_real(key, v);
  else if (key == "sigma0sq") cfg.sigma0sq = parse_real(key, v);
  else if (key == "j0") cfg.h.J0 = parse_int(key, v);
  else if (key == "j") cfg.h.J = parse_int(key, v);
  else if (key == "closure") cfg.h.closure = parse_closure(v);
  else if (key == "family") cfg.family = WaveletFamily::parse(normalize_value(v));
  else if (key == "iterations") cfg.chain.iterations = parse_long(key, v);
  else if (key == "burn_in") cfg.chain.burn_in = parse_long(key, v);
  else if (key == "thin") cfg.chain.thin = parse_int(key, v);
  else if (key == "seed") cfg.chain.seed = parse_u64(key, v);
  else if (key == "store_theta") cfg.chain.store_theta = parse_flag(key, v);
  else if (key == "mode") cfg.mode = parse_mode(v);
  else if (key == "preset") cfg.preset = parse_preset(v);
  else if (key == "input") cfg.input_path = v;
  else if (key == "out") cfg.output_dir = v;
  else if (key == "grid_size") cfg.grid_size = parse_int(key, v);
  else if (key == "prior_draws") cfg.prior_draws = parse_int(key, v);
  else if (key == "prior_betas") cfg.prior_betas = parse_beta_list(key, v);
  else if (key == "threshold") cfg.threshold = parse_threshold(v);
  else if (key == "synthetic_n") cfg.synthetic_n = parse_int(key, v);
  else if (key == "synthetic_sigma") cfg.synthetic_sigma = parse_real(key, v);
  else throw usage_error("config: unknown key '" + raw_key + "'");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("config: cannot open " + path);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw usage_error(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw usage_error(path + ":" + std::to_string(lineno) + ": empty key");
    try {
      apply_config_kv(cfg, key, value);
    } catch (const usage_error& e) {
      throw usage_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

int run(const RunConfig& cfg) {
  try {
    const Hyperparams h = resolved_hyperparams(cfg);
    if (cfg.preset == Preset::PanelGrid) {
      run_panel_grid(cfg);
    } else {
      switch (cfg.mode) {
        case RunMode::Fit: run_fit(cfg, h, cfg.output_dir); break;
        case RunMode::PriorSim: run_prior_sim(cfg, h); break;
        case RunMode::EnumerateCheck: run_enumerate_check(cfg, h); break;
      }
    }
    return 0;
  } catch (const usage_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace dwreg
