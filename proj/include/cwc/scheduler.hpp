#ifndef CWC_SCHEDULER_HPP
#define CWC_SCHEDULER_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cwc/farm.hpp"
#include "cwc/reducer.hpp"
#include "cwc/ssa.hpp"

namespace cwc {

enum class Schema { Static, OnDemand, Sliced };

std::string to_string(Schema s);
std::optional<Schema> parse_schema(std::string_view s);

struct SchedulerConfig {
  Schema schema = Schema::Sliced;
  std::size_t workers = 1;
  std::size_t quantum_mult = 10;  // quantum = quantum_mult * delta
  std::uint64_t master_seed = 1;
  std::size_t capacity = kDefaultChannelCapacity;
};

/// Instance `index` of a run seeded with `master_seed`.
std::unique_ptr<SimulationInstance> make_instance(std::shared_ptr<const Model> model, std::size_t index,
                                                  std::uint64_t master_seed);

using SampleObserver = std::function<void(const TrajectorySample&)>;
using PointSink = std::function<void(const StatPoint&)>;

/// Every sample of every instance, kept until the run is over.
struct TrajectoryStore {
  std::size_t n_observables = 0;
  std::vector<std::vector<TrajectorySample>> by_instance;
  std::vector<std::size_t> worker_of;  // worker that ran each instance
  FarmReport report;
};

/// Reduction phase for the buffered schemas: grid point by grid point,
/// instances in ascending id.
std::vector<StatPoint> reduce(const TrajectoryStore& store, double delta);

/// Instance i runs on worker i mod w, start to finish.
TrajectoryStore run_static(std::shared_ptr<const Model> model, std::size_t n_instances, const SchedulerConfig& config,
                           const SampleObserver& observer = {});

/// Whole instances go to the first idle worker.
TrajectoryStore run_ondemand(std::shared_ptr<const Model> model, std::size_t n_instances,
                             const SchedulerConfig& config, const SampleObserver& observer = {});

struct SlicedRun {
  std::vector<StatPoint> points;
  FarmReport report;
  std::size_t peak_buffered = 0;          // reducer's raw-sample high-water mark
  std::vector<std::size_t> quanta;        // slices dispatched per instance
  std::size_t max_progress_spread = 0;    // in quanta, over the whole run
};

/// Time-sliced schema with on-line reduction: instances circulate through
/// the farm one quantum at a time and the collector retires grid points as
/// soon as every instance has passed them.
SlicedRun run_sliced(std::shared_ptr<const Model> model, std::size_t n_instances, const SchedulerConfig& config,
                     const PointSink& on_point = {}, const SampleObserver& observer = {});

/// Runs the configured schema and returns the reduced statistics.
std::vector<StatPoint> run_reduced(std::shared_ptr<const Model> model, std::size_t n_instances,
                                   const SchedulerConfig& config, const SampleObserver& observer = {});

/// Worker lists for the round-robin schema.
std::vector<std::vector<std::size_t>> static_assignment(std::size_t n_instances, std::size_t workers);

struct ReadyInstance {
  std::size_t id;
  std::size_t progress;  // completed quanta
};

/// Least progress first, lowest id on ties. Requires a non-empty set.
std::size_t next_dispatch(std::span<const ReadyInstance> ready);

/// Slice bookkeeping for the time-sliced schema. An instance is eligible
/// when it is parked (not running on a worker) and no unfinished instance
/// has completed fewer quanta, so every trajectory stays within one quantum
/// of the slowest one and the reduction window stays bounded.
class SliceDispatcher {
 public:
  SliceDispatcher(std::size_t n_instances, std::size_t total_quanta);

  /// Picks the next instance to run and marks it in flight.
  std::optional<std::size_t> next();

  /// An in-flight instance came back; `done` retires it.
  void returned(std::size_t id, bool done);

  bool all_done() const { return finished_ == state_.size(); }
  std::size_t quanta_started(std::size_t id) const { return state_[id].started; }
  /// Max minus min completed quanta over the instances still running.
  std::size_t progress_spread() const;

 private:
  struct State {
    std::size_t started = 0;
    bool in_flight = false;
    bool done = false;
  };

  std::size_t completed(const State& s) const { return s.started - (s.in_flight ? 1 : 0); }

  std::vector<State> state_;
  std::size_t total_quanta_;
  std::size_t finished_ = 0;
};

}  // namespace cwc

#endif  // CWC_SCHEDULER_HPP
