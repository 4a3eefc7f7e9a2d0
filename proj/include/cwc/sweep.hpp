#ifndef CWC_SWEEP_HPP
#define CWC_SWEEP_HPP

#include <string>
#include <vector>

#include "cwc/model.hpp"

namespace cwc {

/// `r<rule>.k=<start>:<stop>:<step>`: kinetic constant of one rule swept
/// over start, start + step, ... up to stop inclusive.
struct SweepSpec {
  int rule = 0;
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  std::vector<double> values() const;
};

/// Throws std::invalid_argument on malformed text, step <= 0 or start > stop.
SweepSpec parse_sweep(const std::string& text);

struct SweepPoint {
  Model model;
  std::vector<std::pair<int, double>> settings;  // (rule, k) applied to the base model
};

/// Cartesian product of all sweeps; a single unmodified point when `sweeps` is empty.
std::vector<SweepPoint> expand_sweeps(const Model& base, const std::vector<SweepSpec>& sweeps);

}  // namespace cwc

#endif  // CWC_SWEEP_HPP
