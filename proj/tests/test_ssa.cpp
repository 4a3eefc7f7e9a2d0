#include <doctest.h>

#include <cmath>

#include "cwc/parser.hpp"
#include "cwc/ssa.hpp"
#include "oracles.hpp"

using namespace cwc;

namespace {

std::shared_ptr<const Model> shared(const std::string& text) { return std::make_shared<const Model>(parse_model(text)); }

std::vector<TrajectorySample> run_all(SimulationInstance& inst) {
  std::vector<TrajectorySample> out;
  inst.advance_until(inst.model().t_stop, [&](TrajectorySample&& s) { out.push_back(std::move(s)); });
  return out;
}

const char* kPredatorPrey = R"(
%term x1*60 x2*40
%rule TOP : x1 $X => x1 x1 $X @ 1
%rule TOP : x1 x2 $X => x2 x2 $X @ 0.02
%rule TOP : x2 $X => $X @ 1
%tstop 4
%delta 0.25
)";

}  // namespace

TEST_CASE("exponential offsets") {
  CHECK(exponential_offset(std::exp(-1.0), 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(exponential_offset(1.0, 5.0) == 0.0);
  Prng p(3);
  CHECK_THROWS(sample_exponential(p, 0.0));

  double sum = 0;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) sum += sample_exponential(p, 2.0);
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("uniform draws stay in (0, 1]") {
  Prng p(0);
  for (int i = 0; i < 100000; ++i) {
    const double u = p.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
  }
}

TEST_CASE("equal seeds give equal streams") {
  Prng a(instance_seed(42, 7)), b(instance_seed(42, 7)), c(instance_seed(42, 8));
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.bits();
    CHECK(x == b.bits());
    differs |= x != c.bits();
  }
  CHECK(differs);
}

TEST_CASE("select_index uses cumulative intervals") {
  const std::vector<double> sums{2, 3, 5};
  CHECK(select_index(sums, 0.45) == 1);
  CHECK(select_index(sums, 0.2) == 0);   // 2.0 closes the first interval
  CHECK(select_index(sums, 0.21) == 1);
  CHECK(select_index(sums, 1.0) == 2);
  CHECK(select_index(std::vector<double>{7}, 0.001) == 0);
  CHECK(select_index(std::vector<double>{7}, 1.0) == 0);
  CHECK(select_index(std::vector<double>{1, 0, 1}, 0.6) == 2);
  CHECK(select_index(std::vector<double>{0, 1, 0}, 1.0) == 1);
  CHECK_THROWS(select_index(std::vector<double>{0, 0}, 0.5));
}

TEST_CASE("select_context frequencies follow the rates") {
  std::vector<MatchEntry> entries(3);
  entries[0].rate = 1;
  entries[1].rate = 2;
  entries[2].rate = 5;
  Prng p(17);
  std::vector<int> hits(3, 0);
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) ++hits[static_cast<std::size_t>(&select_context(p, entries) - entries.data())];
  for (int k = 0; k < 3; ++k) {
    const double prob = entries[k].rate / 8.0;
    const double sigma = std::sqrt(trials * prob * (1 - prob));
    CHECK(std::abs(hits[k] - trials * prob) <= 3 * sigma);
  }

  // equal rates: u < 0.5 picks the first entry
  CHECK(select_index(std::vector<double>{1.5, 1.5}, 0.49) == 0);
  CHECK(select_index(std::vector<double>{1.5, 1.5}, 0.51) == 1);

  std::vector<MatchEntry> one(1);
  one[0].rate = 3;
  CHECK(&select_context(p, one) == &one[0]);
}

TEST_CASE("single decay step") {
  auto m = shared("%term a\n%rule TOP : a $X => $X @ 1\n%tstop 10\n%delta 1");
  SimulationInstance inst(0, m, 5);
  const StepResult tau = inst.step();
  REQUIRE(tau);
  CHECK(*tau > 0);
  CHECK(inst.term().empty());
  CHECK(inst.clock() == *tau);
  CHECK_FALSE(inst.step());
  CHECK(inst.status() == Status::Stalled);
  CHECK(inst.clock() == *tau);
}

TEST_CASE("no applicable rule stalls with the term unchanged") {
  auto m = shared("%term b*3\n%rule TOP : a $X => $X @ 1\n%tstop 3\n%delta 1");
  SimulationInstance inst(0, m, 1);
  CHECK_FALSE(inst.step());
  CHECK(inst.status() == Status::Stalled);
  CHECK(format_term(inst.term()) == "b*3");

  SimulationInstance again(0, m, 1);
  auto samples = run_all(again);
  REQUIRE(samples.size() == 4);
  for (const auto& s : samples) CHECK(s.values == std::vector<Count>{3});
  CHECK(again.status() == Status::Done);
  CHECK(again.stalled());
}

TEST_CASE("samples are piecewise constant over the event log") {
  auto m = shared(kPredatorPrey);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SimulationInstance sampled(0, m, seed);
    const auto samples = run_all(sampled);

    // Replay the same seed event by event and record (time, state) pairs.
    SimulationInstance stepped(0, m, seed);
    std::vector<std::pair<double, std::vector<Count>>> log{{0.0, stepped.observe()}};
    while (stepped.clock() <= m->t_stop) {
      if (!stepped.step()) break;
      log.emplace_back(stepped.clock(), stepped.observe());
    }

    REQUIRE(samples.size() == m->grid_size());
    for (std::size_t j = 0; j < samples.size(); ++j) {
      CHECK(samples[j].grid_index == j);
      CHECK(samples[j].time == j * m->delta);
      // state after the last event strictly before t_j (the initial state counts as time 0)
      std::size_t k = 0;
      while (k + 1 < log.size() && log[k + 1].first < samples[j].time) ++k;
      CHECK(samples[j].values == log[k].second);
    }
  }
}

TEST_CASE("frozen samples after a stall") {
  auto m = shared("%term a*3\n%rule TOP : a $X => $X @ 4\n%tstop 5\n%delta 1");
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SimulationInstance inst(0, m, seed);
    const auto samples = run_all(inst);
    REQUIRE(samples.size() == 6);
    CHECK(inst.stalled());
    CHECK(inst.status() == Status::Done);
    CHECK(samples.back().values == std::vector<Count>{0});
    for (std::size_t j = 1; j < samples.size(); ++j) CHECK(samples[j].values[0] <= samples[j - 1].values[0]);
  }
}

TEST_CASE("slicing does not change the trajectory") {
  auto m = shared(kPredatorPrey);
  oracle::TermGen g(3);
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    SimulationInstance whole(0, m, seed);
    const auto reference = run_all(whole);

    SimulationInstance sliced(0, m, seed);
    std::vector<TrajectorySample> pieces;
    double bound = 0;
    double last_clock = 0;
    while (sliced.status() != Status::Done) {
      bound += g.real(0.0, 0.7);
      sliced.advance_until(bound, [&](TrajectorySample&& s) { pieces.push_back(std::move(s)); });
      CHECK(sliced.clock() >= last_clock);
      last_clock = sliced.clock();
    }
    CHECK(pieces == reference);
    CHECK(sliced.events() == whole.events());
  }
}

TEST_CASE("first-event frequencies match rate ratios") {
  // a b -> c at rate 4k1 and a a -> d at rate k2 on a*2 b*2
  auto m = shared("%term a*2 b*2\n%rule TOP : a b $X => c $X @ 1\n%rule TOP : a a $X => d $X @ 1\n%tstop 1\n%delta 1");
  const int runs = 100000;
  int first = 0;
  for (int i = 0; i < runs; ++i) {
    SimulationInstance inst(static_cast<std::size_t>(i), m, instance_seed(9, static_cast<std::uint64_t>(i)));
    inst.step();
    if (species_total(inst.term(), Atom("c")) == 1) ++first;
  }
  const double p = 0.8;
  CHECK(std::abs(first - runs * p) <= 3 * std::sqrt(runs * p * (1 - p)));
}

TEST_CASE("pure decay mean matches the CTMC expectation") {
  auto m = shared("%term a*1000\n%rule TOP : a $X => $X @ 1\n%tstop 1\n%delta 0.5");
  const int n = 300;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    SimulationInstance inst(static_cast<std::size_t>(i), m, instance_seed(1, static_cast<std::uint64_t>(i)));
    const auto s = run_all(inst);
    const double v = static_cast<double>(s.back().values[0]);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n;
  const double expected = 1000 * std::exp(-1.0);
  const double se = std::sqrt(1000 * std::exp(-1.0) * (1 - std::exp(-1.0)) / n);
  CHECK(std::abs(mean - expected) <= 3 * se);
}

TEST_CASE("stoichiometry of random predator-prey steps") {
  auto m = shared(kPredatorPrey);
  SimulationInstance inst(0, m, 77);
  const Atom x1("x1"), x2("x2");
  for (int i = 0; i < 2000; ++i) {
    const long long a0 = static_cast<long long>(oracle::census(inst.term(), x1));
    const long long b0 = static_cast<long long>(oracle::census(inst.term(), x2));
    if (!inst.step()) break;
    const long long da = static_cast<long long>(oracle::census(inst.term(), x1)) - a0;
    const long long db = static_cast<long long>(oracle::census(inst.term(), x2)) - b0;
    const bool birth = da == 1 && db == 0;
    const bool predation = da == -1 && db == 1;
    const bool death = da == 0 && db == -1;
    CHECK((birth || predation || death));
  }
}
