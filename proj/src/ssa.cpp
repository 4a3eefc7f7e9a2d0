#include "cwc/ssa.hpp"

#include <cmath>
#include <stdexcept>

namespace cwc {

double exponential_offset(double u, double rate) { return -std::log(u) / rate; }

double sample_exponential(Prng& prng, double rate) {
  if (!(rate > 0.0)) throw std::logic_error("exponential draw needs a positive rate");
  return exponential_offset(prng.uniform(), rate);
}

std::size_t select_index(std::span<const double> weights, double u) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = u * total;
  double cumulative = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cumulative += weights[i];
    last_positive = i;
    if (target <= cumulative) return i;
  }
  // Rounding can leave u * total a hair above the final cumulative sum.
  if (last_positive == weights.size()) throw std::logic_error("selection over all-zero weights");
  return last_positive;
}

std::size_t select_rule(Prng& prng, const MatchSet& matchset) {
  return select_index(matchset.rule_rates, prng.uniform());
}

const MatchEntry& select_context(Prng& prng, std::span<const MatchEntry> entries) {
  if (entries.size() == 1) {
    prng.uniform();  // keep the draw count independent of the entry count
    return entries.front();
  }
  std::vector<double> rates;
  rates.reserve(entries.size());
  for (const auto& e : entries) rates.push_back(e.rate);
  return entries[select_index(rates, prng.uniform())];
}

SimulationInstance::SimulationInstance(std::size_t id, std::shared_ptr<const Model> model, std::uint64_t seed)
    : id_(id), model_(std::move(model)), term_(model_->initial), ids_(max_compartment_id(term_) + 1), prng_(seed) {}

std::vector<Count> SimulationInstance::observe() const {
  std::vector<Count> values;
  values.reserve(model_->observables.size());
  for (Atom a : model_->observables) values.push_back(species_total(term_, a));
  return values;
}

bool SimulationInstance::draw() {
  build_matchset(*model_, term_, scratch_);
  if (!(scratch_.total_rate > 0.0)) {
    stalled_ = true;
    status_ = Status::Stalled;
    return false;
  }
  const double tau = sample_exponential(prng_, scratch_.total_rate);
  const std::size_t mu = select_rule(prng_, scratch_);
  const MatchEntry& entry = select_context(prng_, scratch_.entries[mu]);
  pending_ = Pending{clock_ + tau, mu, entry};
  return true;
}

void SimulationInstance::apply_pending() {
  const Rule& rule = model_->rules[pending_->rule];
  Binding binding = extract_match(rule, pending_->entry, term_);
  apply_binding(rule.rhs, binding, term_, pending_->entry.context, ids_);
  clock_ = pending_->time;
  ++events_;
  pending_.reset();
}

StepResult SimulationInstance::step() {
  if (status_ != Status::Running) return std::nullopt;
  if (!pending_ && !draw()) return std::nullopt;
  const double tau = pending_->time - clock_;
  apply_pending();
  return tau;
}

void SimulationInstance::emit_before(double limit, const SampleSink& sink) {
  const std::size_t last = model_->last_grid_index();
  while (next_sample_ <= last && static_cast<double>(next_sample_) * model_->delta < limit) {
    sink(TrajectorySample{id_, next_sample_, static_cast<double>(next_sample_) * model_->delta, observe()});
    ++next_sample_;
  }
}

void SimulationInstance::emit_rest(const SampleSink& sink) {
  const std::size_t last = model_->last_grid_index();
  while (next_sample_ <= last) {
    sink(TrajectorySample{id_, next_sample_, static_cast<double>(next_sample_) * model_->delta, observe()});
    ++next_sample_;
  }
}

Status SimulationInstance::advance_until(double t_bound, const SampleSink& sink) {
  if (status_ == Status::Done) return status_;
  const bool final = t_bound >= model_->t_stop;
  while (true) {
    if (status_ == Status::Running && !pending_) draw();
    if (status_ == Status::Stalled) {
      if (final) {
        emit_rest(sink);
        status_ = Status::Done;
      } else {
        emit_before(t_bound, sink);
      }
      return status_;
    }
    if (pending_->time >= t_bound || (final && pending_->time >= model_->t_stop)) {
      if (final) {
        emit_rest(sink);
        status_ = Status::Done;
      } else {
        emit_before(t_bound, sink);
      }
      return status_;
    }
    emit_before(pending_->time, sink);
    apply_pending();
  }
}

}  // namespace cwc
