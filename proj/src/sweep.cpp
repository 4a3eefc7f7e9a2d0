#include "cwc/sweep.hpp"

#include <cmath>
#include <regex>
#include <stdexcept>

namespace cwc {

std::vector<double> SweepSpec::values() const {
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

SweepSpec parse_sweep(const std::string& text) {
  static const std::regex pattern(R"(^r(\d+)\.k=([^:]+):([^:]+):([^:]+)$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern))
    throw std::invalid_argument("sweep must look like r<rule>.k=<start>:<stop>:<step>, got '" + text + "'");
  SweepSpec s;
  try {
    s.rule = std::stoi(m[1]);
    s.start = std::stod(m[2]);
    s.stop = std::stod(m[3]);
    s.step = std::stod(m[4]);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad number in sweep '" + text + "'");
  }
  if (!(s.step > 0)) throw std::invalid_argument("sweep step must be positive");
  if (s.start > s.stop) throw std::invalid_argument("sweep start exceeds stop");
  if (!(s.start > 0)) throw std::invalid_argument("swept kinetic constants must be positive");
  return s;
}

std::vector<SweepPoint> expand_sweeps(const Model& base, const std::vector<SweepSpec>& sweeps) {
  for (const auto& s : sweeps)
    if (s.rule < 0 || static_cast<std::size_t>(s.rule) >= base.rules.size())
      throw std::invalid_argument("sweep names rule r" + std::to_string(s.rule) + " but the model has " +
                                  std::to_string(base.rules.size()) + " rules");
  std::vector<SweepPoint> points{SweepPoint{base, {}}};
  for (const auto& s : sweeps) {
    std::vector<SweepPoint> next;
    for (const auto& p : points) {
      for (double k : s.values()) {
        SweepPoint q = p;
        q.model.rules[static_cast<std::size_t>(s.rule)].k = k;
        q.settings.emplace_back(s.rule, k);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

}  // namespace cwc
