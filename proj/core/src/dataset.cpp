#include "dwreg/dataset.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace dwreg {

std::vector<double> Dataset::phases() const {
  std::vector<double> x(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) x[i] = records[i].phase;
  return x;
}

Vector Dataset::values() const {
  Vector y(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) y[i] = records[i].value;
  return y;
}

Vector Dataset::sigmas() const {
  Vector s(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) s[i] = records[i].sigma;
  return s;
}

namespace {

bool parse_row(const std::string& line, Observation& obs) {
  std::istringstream ss(line);
  std::string field;
  double vals[3];
  for (int i = 0; i < 3; ++i) {
    if (!std::getline(ss, field, ',')) return false;
    try {
      std::size_t used = 0;
      vals[i] = std::stod(field, &used);
      while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used])))
        ++used;
      if (used != field.size()) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  if (std::getline(ss, field, ',')) return false;  // trailing fields
  obs = {vals[0], vals[1], vals[2]};
  return true;
}

}  // namespace

Dataset parse_dataset(std::istream& in, const std::string& name) {
  Dataset ds;
  std::string line;
  long lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = line;
    stripped.erase(0, stripped.find_first_not_of(" \t"));
    if (stripped.empty()) continue;

    Observation obs;
    if (!parse_row(stripped, obs)) {
      if (first) {  // tolerate one header row
        first = false;
        continue;
      }
      throw data_error(name + ":" + std::to_string(lineno) + ": malformed row '" +
                       line + "'");
    }
    first = false;
    if (!(obs.sigma > 0))
      throw data_error(name + ":" + std::to_string(lineno) +
                       ": sigma must be > 0");
    obs.phase -= std::floor(obs.phase);  // fold into [0, 1)
    if (obs.phase >= 1.0) obs.phase = 0.0;
    ds.records.push_back(obs);
  }
  if (ds.records.empty()) throw data_error(name + ": no data rows");
  return ds;
}

Dataset parse_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error(path.string() + ": cannot open");
  return parse_dataset(in, path.string());
}

void emit_dataset(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error(path.string() + ": cannot open for writing");
  out << "phase,value,sigma\n";
  char buf[128];
  for (const Observation& o : ds.records) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", o.phase, o.value, o.sigma);
    out << buf;
  }
  if (!out) throw data_error(path.string() + ": write failed");
}

double TrigPoly::operator()(double x) const {
  if (static_cast<int>(coefs.size()) != 2 * order + 1)
    throw std::invalid_argument("trig poly: expect 2*order+1 coefficients");
  double y = coefs[0];
  for (int m = 1; m <= order; ++m) {
    const double w = 2.0 * std::numbers::pi * m * x;
    y += coefs[2 * m - 1] * std::cos(w) + coefs[2 * m] * std::sin(w);
  }
  return y;
}

TrigPoly TrigPoly::default_fifth_order() {
  // Pulsation-style curve: geometrically decaying harmonics (ratio ~0.4)
  // give one slow rise and a steeper descent, like a folded velocity curve.
  // Every harmonic through order five is nonzero, but the energy sits in
  // the first three, so the target is smooth at fine scales.
  TrigPoly t;
  t.order = 5;
  t.coefs = {10.0,
             2.4,   1.6,    // a1, b1
             -1.05, 0.85,   // a2, b2
             0.45,  -0.35,  // a3, b3
             -0.18, 0.13,   // a4, b4
             0.07,  -0.05}; // a5, b5
  return t;
}

Dataset generate_synthetic(const TrigPoly& truth, int N, double sigma,
                           std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("generate_synthetic: N must be >= 1");
  if (!(sigma > 0)) throw std::invalid_argument("generate_synthetic: sigma must be > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uphase(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, sigma);
  Dataset ds;
  ds.records.resize(N);
  for (int i = 0; i < N; ++i) {
    const double x = uphase(rng);
    ds.records[i] = {x, truth(x) + noise(rng), sigma};
  }
  return ds;
}

}  // namespace dwreg
