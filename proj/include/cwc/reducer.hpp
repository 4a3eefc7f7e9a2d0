#ifndef CWC_REDUCER_HPP
#define CWC_REDUCER_HPP

#include <cstddef>
#include <deque>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cwc/ssa.hpp"

namespace cwc {

/// Two-sided 90% normal quantile.
inline constexpr double kZ90 = 1.6449;

/// z * sqrt(variance / n); zero for n < 2.
double ci90_half_width(double variance, std::size_t n);

/// Welford running mean / sum of squared deviations.
class Welford {
 public:
  void push(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }
  double variance() const { return n_ >= 2 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct ObservableStats {
  double mean = 0.0;
  double variance = 0.0;
  double ci90 = 0.0;
};

struct StatPoint {
  std::size_t grid_index = 0;
  double time = 0.0;
  std::vector<ObservableStats> stats;  // one per observable
};

class ReducerError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Running-window reduction of aligned trajectories.
///
/// Samples may arrive in any order. For each grid point they are folded into
/// the accumulators in ascending instance id, so the floating-point result
/// depends only on the sample multiset. Samples that arrive ahead of a lower
/// id are buffered; once every instance has reported a grid point it can be
/// retired and its storage released.
class Reducer {
 public:
  Reducer(std::size_t n_instances, std::size_t n_observables, double delta);

  /// Throws ReducerError on a duplicate (instance, grid index), on a grid
  /// index that was already retired, or on a malformed sample.
  void accumulate(const TrajectorySample& sample);

  /// True when the lowest unretired grid point has all its samples.
  bool ready() const;

  /// Retires grid point `j`, which must be the lowest unretired one and complete.
  StatPoint retire(std::size_t j);

  /// Retires every complete leading grid point, in ascending order.
  std::vector<StatPoint> retire_ready();

  std::size_t window_begin() const { return window_begin_; }
  /// Raw samples held back waiting for lower instance ids.
  std::size_t buffered() const { return buffered_; }
  std::size_t peak_buffered() const { return peak_buffered_; }
  std::size_t retired() const { return window_begin_; }
  /// Grid points seen but not yet retired.
  std::size_t open_points() const { return window_.size(); }

 private:
  struct Slot {
    std::size_t next_instance = 0;
    std::vector<Welford> acc;
    std::map<std::size_t, std::vector<Count>> waiting;
  };

  void fold(Slot& slot, const std::vector<Count>& values);

  std::size_t n_instances_;
  std::size_t n_observables_;
  double delta_;
  std::size_t window_begin_ = 0;
  std::deque<Slot> window_;
  std::size_t buffered_ = 0;
  std::size_t peak_buffered_ = 0;
};

/// Reduces a complete set of trajectories grid point by grid point.
std::vector<StatPoint> reduce_all(std::size_t n_instances, std::size_t n_observables, double delta,
                                  std::span<const TrajectorySample> samples);

/// `time,<obs>_mean,<obs>_var,<obs>_ci90,...` with 9 significant digits.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& observables);
  void write(const StatPoint& p);

 private:
  std::ostream& out_;
  std::size_t n_observables_;
};

void write_csv(std::span<const StatPoint> points, const std::vector<std::string>& observables, std::ostream& out);

/// Parses text produced by CsvWriter back into points and observable names.
std::vector<StatPoint> read_csv(std::istream& in, std::vector<std::string>* observables = nullptr);

std::string format_number(double v);

}  // namespace cwc

#endif  // CWC_REDUCER_HPP
