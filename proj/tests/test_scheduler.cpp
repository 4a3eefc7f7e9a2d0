#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "cwc/builtin.hpp"
#include "cwc/parser.hpp"
#include "cwc/scheduler.hpp"

using namespace cwc;

namespace {

std::shared_ptr<const Model> small_model() {
  return std::make_shared<const Model>(parse_model(R"(
%name cells
%term x1*30 x2*20 (m | x1*5)@cell (m*2 | )@cell
%rule TOP : x1 $X => x1 x1 $X @ 1
%rule TOP : x1 x2 $X => x2 x2 $X @ 0.03
%rule TOP : x2 $X => $X @ 1
%rule TOP : x1 (m $W | $Y)@cell $X => (m $W | x1 $Y)@cell $X @ 0.05
%rule cell : x1 $X => $X @ 0.5
%tstop 3
%delta 0.1
)"));
}

/// Reference: every instance run start to finish on the calling thread.
std::vector<std::vector<TrajectorySample>> sequential(std::shared_ptr<const Model> m, std::size_t n, std::uint64_t seed) {
  std::vector<std::vector<TrajectorySample>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    SimulationInstance inst(i, m, instance_seed(seed, i));
    inst.advance_until(m->t_stop, [&](TrajectorySample&& s) { out[i].push_back(std::move(s)); });
  }
  return out;
}

std::string csv_of(const std::vector<StatPoint>& points, const Model& m) {
  std::vector<std::string> names;
  for (Atom a : m.observables) names.push_back(a.name());
  std::ostringstream out;
  write_csv(points, names, out);
  return out.str();
}

}  // namespace

TEST_CASE("round-robin assignment") {
  const auto a = static_assignment(6, 3);
  CHECK(a == std::vector<std::vector<std::size_t>>{{0, 3}, {1, 4}, {2, 5}});
  CHECK(static_assignment(1, 4) == std::vector<std::vector<std::size_t>>{{0}, {}, {}, {}});

  auto m = small_model();
  SchedulerConfig cfg{Schema::Static, 3, 10, 42};
  const TrajectoryStore store = run_static(m, 6, cfg);
  CHECK(store.worker_of == std::vector<std::size_t>{0, 1, 2, 0, 1, 2});
  CHECK(store.report.processed == std::vector<std::size_t>{2, 2, 2});

  SchedulerConfig four{Schema::Static, 4, 10, 42};
  CHECK(run_static(m, 1, four).report.processed == std::vector<std::size_t>{1, 0, 0, 0});
}

TEST_CASE("static run reproduces the sequential loop") {
  auto m = small_model();
  const auto reference = sequential(m, 8, 7);
  for (std::size_t w : {1, 3}) {
    const TrajectoryStore store = run_static(m, 8, SchedulerConfig{Schema::Static, w, 10, 7});
    CHECK(store.by_instance == reference);
  }
}

TEST_CASE("on-demand run produces the same samples") {
  auto m = small_model();
  const auto reference = sequential(m, 10, 3);
  const TrajectoryStore store = run_ondemand(m, 10, SchedulerConfig{Schema::OnDemand, 4, 10, 3});
  CHECK(store.by_instance == reference);
}

TEST_CASE("on-demand with one worker runs instances in dispatch order") {
  auto m = small_model();
  std::vector<std::size_t> order;
  run_ondemand(m, 6, SchedulerConfig{Schema::OnDemand, 1, 10, 3},
               [&](const TrajectorySample& s) {
                 if (order.empty() || order.back() != s.instance_id) order.push_back(s.instance_id);
               });
  CHECK(order == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("sliced run with one instance reproduces its trajectory") {
  auto m = small_model();
  const auto reference = sequential(m, 1, 11);
  const SlicedRun run = run_sliced(m, 1, SchedulerConfig{Schema::Sliced, 2, 5, 11});
  REQUIRE(run.points.size() == m->grid_size());
  for (std::size_t j = 0; j < run.points.size(); ++j) {
    for (std::size_t k = 0; k < m->observables.size(); ++k) {
      CHECK(run.points[j].stats[k].mean == static_cast<double>(reference[0][j].values[k]));
      CHECK(run.points[j].stats[k].variance == 0.0);
    }
  }
}

TEST_CASE("reduced output is identical across schemas and worker counts") {
  auto m = small_model();
  const std::string expected = csv_of(reduce(TrajectoryStore{m->observables.size(), sequential(m, 12, 5), {}, {}}, m->delta), *m);
  for (Schema s : {Schema::Static, Schema::OnDemand, Schema::Sliced})
    for (std::size_t w : {1, 2, 5}) {
      CAPTURE(to_string(s));
      CAPTURE(w);
      CHECK(csv_of(run_reduced(m, 12, SchedulerConfig{s, w, 3, 5}), *m) == expected);
    }
}

TEST_CASE("sliced run keeps the reduction window bounded") {
  auto m = small_model();
  for (std::size_t mult : {1, 4, 10}) {
    for (std::size_t w : {1, 3}) {
      const std::size_t n = 16;
      const SlicedRun run = run_sliced(m, n, SchedulerConfig{Schema::Sliced, w, mult, 9});
      CHECK(run.peak_buffered <= n * (mult + 1));
      CHECK(run.max_progress_spread <= 1);
      const auto quanta = static_cast<std::size_t>(std::ceil(m->t_stop / (static_cast<double>(mult) * m->delta) - 1e-9));
      CHECK(run.quanta == std::vector<std::size_t>(n, quanta));
      CHECK(run.points.size() == m->grid_size());
    }
  }
}

TEST_CASE("sliced run streams points in ascending order") {
  auto m = small_model();
  std::vector<std::size_t> seen;
  run_sliced(m, 4, SchedulerConfig{Schema::Sliced, 2, 2, 1}, [&](const StatPoint& p) { seen.push_back(p.grid_index); });
  REQUIRE(seen.size() == m->grid_size());
  for (std::size_t j = 0; j < seen.size(); ++j) CHECK(seen[j] == j);
}

TEST_CASE("next_dispatch picks the least progressed instance") {
  CHECK(next_dispatch(std::vector<ReadyInstance>{{0, 3}, {1, 1}, {2, 2}}) == 1);
  CHECK(next_dispatch(std::vector<ReadyInstance>{{4, 2}, {2, 2}, {3, 2}}) == 2);
  CHECK_THROWS(next_dispatch(std::vector<ReadyInstance>{}));
}

TEST_CASE("slice dispatcher under a synthetic 2x speed skew") {
  // Discrete-event model of the emitter: w workers, odd instances take twice
  // as long per quantum. Checks spread, idleness and quanta counts.
  const std::size_t n = 9, w = 3, total = 12;
  SliceDispatcher d(n, total);
  using Event = std::pair<double, std::size_t>;  // (finish time, instance)
  std::priority_queue<Event, std::vector<Event>, std::greater<>> running;
  double now = 0;
  std::size_t max_spread = 0;
  bool idle_with_work = false;
  while (!d.all_done()) {
    while (running.size() < w) {
      auto id = d.next();
      if (!id) break;
      running.push({now + (*id % 2 ? 2.0 : 1.0), *id});
      max_spread = std::max(max_spread, d.progress_spread());
    }
    if (running.size() < w) {
      // an idle worker is only acceptable when nothing is eligible
      SliceDispatcher probe = d;
      idle_with_work |= probe.next().has_value();
    }
    REQUIRE_FALSE(running.empty());
    const auto [t, id] = running.top();
    running.pop();
    now = t;
    d.returned(id, false);
  }
  CHECK(max_spread <= 2);
  CHECK_FALSE(idle_with_work);
  for (std::size_t i = 0; i < n; ++i) CHECK(d.quanta_started(i) == total);
}

TEST_CASE("configuration errors") {
  auto m = small_model();
  CHECK_THROWS(run_static(m, 0, SchedulerConfig{Schema::Static, 1, 10, 1}));
  CHECK_THROWS(run_sliced(m, 2, SchedulerConfig{Schema::Sliced, 0, 10, 1}));
  CHECK_THROWS(run_sliced(m, 2, SchedulerConfig{Schema::Sliced, 1, 0, 1}));
  CHECK(parse_schema("sliced") == Schema::Sliced);
  CHECK_FALSE(parse_schema("fast"));
}

TEST_CASE("built-in Lotka-Volterra models") {
  const Model two = lotka_volterra(2);
  CHECK(two.rules.size() == 3);
  CHECK(build_matchset(two, two.initial).total_rate > 0);
  CHECK(lotka_volterra(4).rules.size() == 8);
  for (int s : {4, 8, 16, 32}) CHECK(lotka_volterra(s).rules.size() == static_cast<std::size_t>(2 * s));
  CHECK(lotka_volterra(8).observables.size() == 8);
  CHECK_THROWS_AS(lotka_volterra(3), std::invalid_argument);
  CHECK_THROWS_AS(builtin_model("lotka-volterra:x"), std::invalid_argument);
  CHECK_THROWS_AS(builtin_model("brusselator:2"), std::invalid_argument);
  CHECK(builtin_model("lotka-volterra:2").rules.size() == 3);
}
