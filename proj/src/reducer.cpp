#include "cwc/reducer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace cwc {

double ci90_half_width(double variance, std::size_t n) {
  if (n < 2) return 0.0;
  return kZ90 * std::sqrt(variance / static_cast<double>(n));
}

Reducer::Reducer(std::size_t n_instances, std::size_t n_observables, double delta)
    : n_instances_(n_instances), n_observables_(n_observables), delta_(delta) {
  if (n_instances == 0) throw std::invalid_argument("reducer needs at least one instance");
}

void Reducer::fold(Slot& slot, const std::vector<Count>& values) {
  for (std::size_t k = 0; k < n_observables_; ++k) slot.acc[k].push(static_cast<double>(values[k]));
  ++slot.next_instance;
}

void Reducer::accumulate(const TrajectorySample& sample) {
  if (sample.instance_id >= n_instances_)
    throw ReducerError("sample from unknown instance " + std::to_string(sample.instance_id));
  if (sample.values.size() != n_observables_) throw ReducerError("sample has the wrong number of observables");
  if (sample.grid_index < window_begin_)
    throw ReducerError("grid point " + std::to_string(sample.grid_index) + " already retired");
  const std::size_t offset = sample.grid_index - window_begin_;
  while (window_.size() <= offset) window_.push_back(Slot{0, std::vector<Welford>(n_observables_), {}});
  Slot& slot = window_[offset];
  if (sample.instance_id < slot.next_instance || slot.waiting.count(sample.instance_id))
    throw ReducerError("duplicate sample for instance " + std::to_string(sample.instance_id) + " at grid point " +
                       std::to_string(sample.grid_index));
  if (sample.instance_id != slot.next_instance) {
    slot.waiting.emplace(sample.instance_id, sample.values);
    peak_buffered_ = std::max(peak_buffered_, ++buffered_);
    return;
  }
  fold(slot, sample.values);
  for (auto it = slot.waiting.begin(); it != slot.waiting.end() && it->first == slot.next_instance;) {
    fold(slot, it->second);
    it = slot.waiting.erase(it);
    --buffered_;
  }
}

bool Reducer::ready() const { return !window_.empty() && window_.front().next_instance == n_instances_; }

StatPoint Reducer::retire(std::size_t j) {
  if (j != window_begin_)
    throw ReducerError("retire(" + std::to_string(j) + ") out of order; next is " + std::to_string(window_begin_));
  if (!ready()) throw ReducerError("grid point " + std::to_string(j) + " is incomplete");
  StatPoint p;
  p.grid_index = j;
  p.time = static_cast<double>(j) * delta_;
  p.stats.reserve(n_observables_);
  for (const Welford& w : window_.front().acc)
    p.stats.push_back({w.mean(), w.variance(), ci90_half_width(w.variance(), w.count())});
  window_.pop_front();
  ++window_begin_;
  return p;
}

std::vector<StatPoint> Reducer::retire_ready() {
  std::vector<StatPoint> out;
  while (ready()) out.push_back(retire(window_begin_));
  return out;
}

std::vector<StatPoint> reduce_all(std::size_t n_instances, std::size_t n_observables, double delta,
                                  std::span<const TrajectorySample> samples) {
  Reducer r(n_instances, n_observables, delta);
  for (const auto& s : samples) r.accumulate(s);
  auto points = r.retire_ready();
  if (r.open_points() != 0) throw ReducerError("incomplete trajectory set");
  return points;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& observables)
    : out_(out), n_observables_(observables.size()) {
  out_ << "time";
  for (const auto& name : observables) out_ << ',' << name << "_mean," << name << "_var," << name << "_ci90";
  out_ << '\n';
}

void CsvWriter::write(const StatPoint& p) {
  if (p.stats.size() != n_observables_) throw std::invalid_argument("stat point has the wrong number of observables");
  out_ << format_number(p.time);
  for (const auto& s : p.stats)
    out_ << ',' << format_number(s.mean) << ',' << format_number(s.variance) << ',' << format_number(s.ci90);
  out_ << '\n';
  if (!out_) throw std::runtime_error("failed to write statistics");
}

void write_csv(std::span<const StatPoint> points, const std::vector<std::string>& observables, std::ostream& out) {
  CsvWriter w(out, observables);
  for (const auto& p : points) w.write(p);
}

std::vector<StatPoint> read_csv(std::istream& in, std::vector<std::string>* observables) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty statistics file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.empty() || header[0] != "time" || (header.size() - 1) % 3 != 0)
    throw std::runtime_error("malformed statistics header");
  const std::size_t n_obs = (header.size() - 1) / 3;
  if (observables) {
    observables->clear();
    for (std::size_t k = 0; k < n_obs; ++k) {
      const std::string& h = header[1 + 3 * k];
      observables->push_back(h.substr(0, h.size() - std::string("_mean").size()));
    }
  }
  std::vector<StatPoint> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(std::stod(cell));
    if (cells.size() != header.size()) throw std::runtime_error("malformed statistics row");
    StatPoint p;
    p.grid_index = points.size();
    p.time = cells[0];
    for (std::size_t k = 0; k < n_obs; ++k) p.stats.push_back({cells[1 + 3 * k], cells[2 + 3 * k], cells[3 + 3 * k]});
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace cwc
