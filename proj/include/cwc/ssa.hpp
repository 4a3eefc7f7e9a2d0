#ifndef CWC_SSA_HPP
#define CWC_SSA_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cwc/matcher.hpp"
#include "cwc/random.hpp"

namespace cwc {

/// tau = -ln(u) / rate for u in (0, 1]. Requires rate > 0.
double exponential_offset(double u, double rate);
double sample_exponential(Prng& prng, double rate);

/// Index i such that u * sum(weights) lies in (c_{i-1}, c_i], where c are the
/// cumulative sums. Zero-weight slots are never returned. Requires a positive sum.
std::size_t select_index(std::span<const double> weights, double u);

std::size_t select_rule(Prng& prng, const MatchSet& matchset);
const MatchEntry& select_context(Prng& prng, std::span<const MatchEntry> entries);

/// Observable totals at grid point j (time j * delta).
struct TrajectorySample {
  std::size_t instance_id = 0;
  std::size_t grid_index = 0;
  double time = 0.0;
  std::vector<Count> values;

  friend bool operator==(const TrajectorySample&, const TrajectorySample&) = default;
};

using SampleSink = std::function<void(TrajectorySample&&)>;

enum class Status { Running, Stalled, Done };

/// Outcome of a single `step`: the time offset of the applied event, or
/// nullopt when no rule is applicable.
using StepResult = std::optional<double>;

/// A resumable Gillespie simulation. It owns its term, clock and generator,
/// so it can be advanced in arbitrary slices on any thread and still produce
/// the same trajectory for a given seed.
///
/// Sampling is piecewise constant: the sample at t_j reflects every event with
/// time strictly below t_j. The next event is drawn ahead of time and kept
/// pending across slices.
class SimulationInstance {
 public:
  SimulationInstance(std::size_t id, std::shared_ptr<const Model> model, std::uint64_t seed);

  std::size_t id() const { return id_; }
  const Model& model() const { return *model_; }
  const Term& term() const { return term_; }
  double clock() const { return clock_; }
  Status status() const { return status_; }
  bool stalled() const { return stalled_; }
  std::size_t next_sample_index() const { return next_sample_; }
  std::uint64_t events() const { return events_; }

  /// Applies one event regardless of the sampling grid.
  StepResult step();

  /// Runs until `t_bound` (clamped to t_stop), emitting every grid sample
  /// with t_j < t_bound, or all remaining samples when t_bound reaches t_stop.
  /// A stalled instance keeps emitting its frozen state.
  Status advance_until(double t_bound, const SampleSink& sink);

  std::vector<Count> observe() const;

 private:
  struct Pending {
    double time;
    std::size_t rule;
    MatchEntry entry;
  };

  /// Draws the next event; returns false (and marks the stall) when r = 0.
  bool draw();
  void apply_pending();
  void emit_before(double limit, const SampleSink& sink);
  void emit_rest(const SampleSink& sink);

  std::size_t id_;
  std::shared_ptr<const Model> model_;
  Term term_;
  IdSource ids_;
  double clock_ = 0.0;
  Prng prng_;
  std::size_t next_sample_ = 0;
  Status status_ = Status::Running;
  bool stalled_ = false;
  std::uint64_t events_ = 0;
  std::optional<Pending> pending_;
  MatchSet scratch_;
};

}  // namespace cwc

#endif  // CWC_SSA_HPP
