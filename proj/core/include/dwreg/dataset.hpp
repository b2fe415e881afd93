#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "dwreg/common.hpp"

namespace dwreg {

struct Observation {
  double phase = 0.0;  // folded into [0, 1)
  double value = 0.0;
  double sigma = 0.0;  // per-point noise standard deviation, > 0
};

struct Dataset {
  std::vector<Observation> records;

  std::vector<double> phases() const;
  Vector values() const;
  Vector sigmas() const;
};

// CSV reader for rows "phase,value,sigma".  A single leading header row is
// tolerated; phases are folded into [0, 1); errors carry the line number.
Dataset parse_dataset(const std::filesystem::path& path);
Dataset parse_dataset(std::istream& in, const std::string& name);

// Writes CSV that parses back bit-identically.
void emit_dataset(const Dataset& ds, const std::filesystem::path& path);

// Periodic test curve: a0 + sum_m a_m cos(2 pi m x) + b_m sin(2 pi m x).
struct TrigPoly {
  int order = 0;
  std::vector<double> coefs;  // a0, a1, b1, ..., a_order, b_order

  double operator()(double x) const;
  // Fifth-order curve with geometrically decaying harmonics: a smooth
  // rise-and-fall shape whose energy sits in the first three orders.
  static TrigPoly default_fifth_order();
};

// N noisy samples of the curve at uniform random phases.
Dataset generate_synthetic(const TrigPoly& truth, int N, double sigma,
                           std::uint64_t seed);

}  // namespace dwreg
