#include "cwc/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cwc {

std::string to_string(Schema s) {
  switch (s) {
    case Schema::Static: return "static";
    case Schema::OnDemand: return "ondemand";
    case Schema::Sliced: return "sliced";
  }
  return "?";
}

std::optional<Schema> parse_schema(std::string_view s) {
  if (s == "static") return Schema::Static;
  if (s == "ondemand") return Schema::OnDemand;
  if (s == "sliced") return Schema::Sliced;
  return std::nullopt;
}

std::unique_ptr<SimulationInstance> make_instance(std::shared_ptr<const Model> model, std::size_t index,
                                                  std::uint64_t master_seed) {
  return std::make_unique<SimulationInstance>(index, std::move(model), instance_seed(master_seed, index));
}

std::vector<std::vector<std::size_t>> static_assignment(std::size_t n_instances, std::size_t workers) {
  if (workers == 0) throw std::invalid_argument("at least one worker is required");
  std::vector<std::vector<std::size_t>> out(workers);
  for (std::size_t i = 0; i < n_instances; ++i) out[i % workers].push_back(i);
  return out;
}

std::vector<StatPoint> reduce(const TrajectoryStore& store, double delta) {
  const std::size_t n = store.by_instance.size();
  Reducer reducer(n, store.n_observables, delta);
  std::vector<StatPoint> points;
  const std::size_t grid = n == 0 ? 0 : store.by_instance.front().size();
  for (std::size_t j = 0; j < grid; ++j) {
    for (std::size_t i = 0; i < n; ++i) reducer.accumulate(store.by_instance[i].at(j));
    points.push_back(reducer.retire(j));
  }
  return points;
}

namespace {

void check_config(const SchedulerConfig& config, std::size_t n_instances) {
  if (config.workers == 0) throw std::invalid_argument("at least one worker is required");
  if (n_instances == 0) throw std::invalid_argument("at least one instance is required");
  if (config.quantum_mult == 0) throw std::invalid_argument("quantum must be a positive multiple of delta");
}

struct WholeRun {
  std::unique_ptr<SimulationInstance> instance;
};

struct WholeResult {
  std::size_t instance_id = 0;
  std::size_t worker = 0;
  std::vector<TrajectorySample> samples;
};

/// Static and on-demand schemas differ only in how the emitter routes instances.
TrajectoryStore run_whole(std::shared_ptr<const Model> model, std::size_t n_instances, const SchedulerConfig& config,
                          bool on_demand, const SampleObserver& observer) {
  check_config(config, n_instances);
  TrajectoryStore store;
  store.n_observables = model->observables.size();
  store.by_instance.resize(n_instances);
  store.worker_of.assign(n_instances, 0);

  std::size_t next = 0;
  auto emitter = [&, model](EmitterContext<WholeRun>& ctx) -> Emission<WholeRun> {
    if (next == n_instances) return Emission<WholeRun>::end();
    std::size_t target;
    if (on_demand) {
      auto idle = ctx.idle_worker();
      if (!idle) return Emission<WholeRun>::wait();
      target = *idle;
    } else {
      target = next % ctx.workers();
    }
    auto instance = make_instance(model, next, config.master_seed);
    ++next;
    return Emission<WholeRun>::item(WholeRun{std::move(instance)}, target);
  };
  auto worker = [](WholeRun&& task, std::size_t index) {
    WholeResult r;
    r.instance_id = task.instance->id();
    r.worker = index;
    r.samples.reserve(task.instance->model().grid_size());
    task.instance->advance_until(task.instance->model().t_stop,
                                 [&](TrajectorySample&& s) { r.samples.push_back(std::move(s)); });
    return r;
  };
  auto collector = [&](WholeResult&& r, FeedbackPort<WholeRun>&) {
    if (observer)
      for (const auto& s : r.samples) observer(s);
    store.worker_of[r.instance_id] = r.worker;
    store.by_instance[r.instance_id] = std::move(r.samples);
  };
  FarmOptions options{config.workers, false, config.capacity};
  store.report = run_farm<WholeRun, WholeResult>(emitter, worker, collector, options);
  return store;
}

struct Slice {
  std::unique_ptr<SimulationInstance> instance;
  double t_bound = 0.0;
};

struct SliceResult {
  std::unique_ptr<SimulationInstance> instance;
  std::vector<TrajectorySample> samples;
};

}  // namespace

TrajectoryStore run_static(std::shared_ptr<const Model> model, std::size_t n_instances, const SchedulerConfig& config,
                           const SampleObserver& observer) {
  return run_whole(std::move(model), n_instances, config, false, observer);
}

TrajectoryStore run_ondemand(std::shared_ptr<const Model> model, std::size_t n_instances,
                             const SchedulerConfig& config, const SampleObserver& observer) {
  return run_whole(std::move(model), n_instances, config, true, observer);
}

std::size_t next_dispatch(std::span<const ReadyInstance> ready) {
  if (ready.empty()) throw std::invalid_argument("no ready instance");
  const auto it = std::min_element(ready.begin(), ready.end(), [](const ReadyInstance& a, const ReadyInstance& b) {
    return a.progress != b.progress ? a.progress < b.progress : a.id < b.id;
  });
  return it->id;
}

SliceDispatcher::SliceDispatcher(std::size_t n_instances, std::size_t total_quanta)
    : state_(n_instances), total_quanta_(total_quanta) {}

std::optional<std::size_t> SliceDispatcher::next() {
  std::size_t floor = std::numeric_limits<std::size_t>::max();
  for (const auto& s : state_)
    if (!s.done) floor = std::min(floor, completed(s));
  std::vector<ReadyInstance> ready;
  for (std::size_t i = 0; i < state_.size(); ++i) {
    const State& s = state_[i];
    if (!s.done && !s.in_flight && s.started <= floor) ready.push_back({i, s.started});
  }
  if (ready.empty()) return std::nullopt;
  const std::size_t id = next_dispatch(ready);
  state_[id].in_flight = true;
  ++state_[id].started;
  return id;
}

void SliceDispatcher::returned(std::size_t id, bool done) {
  State& s = state_.at(id);
  if (!s.in_flight) throw std::logic_error("instance " + std::to_string(id) + " returned but was not dispatched");
  s.in_flight = false;
  if (done || s.started >= total_quanta_) {
    if (!s.done) ++finished_;
    s.done = true;
  }
}

std::size_t SliceDispatcher::progress_spread() const {
  std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
  for (const auto& s : state_) {
    if (s.done) continue;
    lo = std::min(lo, completed(s));
    hi = std::max(hi, completed(s));
  }
  return lo > hi ? 0 : hi - lo;
}

SlicedRun run_sliced(std::shared_ptr<const Model> model, std::size_t n_instances, const SchedulerConfig& config,
                     const PointSink& on_point, const SampleObserver& observer) {
  check_config(config, n_instances);
  const double quantum = static_cast<double>(config.quantum_mult) * model->delta;
  const auto total_quanta = static_cast<std::size_t>(std::ceil(model->t_stop / quantum - 1e-9));

  SlicedRun run;
  SliceDispatcher dispatcher(n_instances, total_quanta);
  std::vector<std::unique_ptr<SimulationInstance>> parked(n_instances);
  for (std::size_t i = 0; i < n_instances; ++i) parked[i] = make_instance(model, i, config.master_seed);

  auto emitter = [&](EmitterContext<Slice>& ctx) -> Emission<Slice> {
    auto& returned = ctx.feedback();
    while (!returned.empty()) {
      Slice back = std::move(returned.front());
      returned.pop_front();
      const std::size_t id = back.instance->id();
      const bool done = back.instance->status() == Status::Done;
      dispatcher.returned(id, done);
      if (!done) parked[id] = std::move(back.instance);
    }
    if (dispatcher.all_done()) return Emission<Slice>::end();
    auto idle = ctx.idle_worker();
    if (!idle) return Emission<Slice>::wait();
    auto id = dispatcher.next();
    if (!id) return Emission<Slice>::wait();
    run.max_progress_spread = std::max(run.max_progress_spread, dispatcher.progress_spread());
    const std::size_t quantum_index = dispatcher.quanta_started(*id);
    // Boundaries are computed from grid indices so they coincide exactly with sample times.
    const double bound = static_cast<double>(quantum_index * config.quantum_mult) * model->delta;
    const double t_bound = quantum_index >= total_quanta ? model->t_stop : bound;
    return Emission<Slice>::item(Slice{std::move(parked[*id]), t_bound}, *idle);
  };
  auto worker = [](Slice&& slice, std::size_t) {
    SliceResult r;
    r.samples.reserve(32);
    slice.instance->advance_until(slice.t_bound, [&](TrajectorySample&& s) { r.samples.push_back(std::move(s)); });
    r.instance = std::move(slice.instance);
    return r;
  };
  Reducer reducer(n_instances, model->observables.size(), model->delta);
  auto collector = [&](SliceResult&& r, FeedbackPort<Slice>& port) {
    for (const auto& s : r.samples) {
      if (observer) observer(s);
      reducer.accumulate(s);
    }
    for (auto& p : reducer.retire_ready()) {
      if (on_point) on_point(p);
      run.points.push_back(std::move(p));
    }
    port.send(Slice{std::move(r.instance), 0.0});
  };
  FarmOptions options{config.workers, true, config.capacity};
  run.report = run_farm<Slice, SliceResult>(emitter, worker, collector, options);
  if (reducer.open_points() != 0) throw std::logic_error("sliced run ended with unreduced grid points");
  run.peak_buffered = reducer.peak_buffered();
  run.quanta.resize(n_instances);
  for (std::size_t i = 0; i < n_instances; ++i) run.quanta[i] = dispatcher.quanta_started(i);
  return run;
}

std::vector<StatPoint> run_reduced(std::shared_ptr<const Model> model, std::size_t n_instances,
                                   const SchedulerConfig& config, const SampleObserver& observer) {
  switch (config.schema) {
    case Schema::Static: return reduce(run_static(model, n_instances, config, observer), model->delta);
    case Schema::OnDemand: return reduce(run_ondemand(model, n_instances, config, observer), model->delta);
    case Schema::Sliced: return run_sliced(model, n_instances, config, {}, observer).points;
  }
  throw std::logic_error("unknown schema");
}

}  // namespace cwc
