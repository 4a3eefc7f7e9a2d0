#include "cwc/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cwc {

double binomial(Count n, Count k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (Count i = 0; i < k; ++i) {
    // acc * (n - i) / (i + 1) stays integral: it is C(n, i + 1) * (i + 1)! / (i + 1)!
    acc = acc * (n - i) / (i + 1);
    if (acc > UINT64_MAX) {
      double nd = static_cast<double>(n), kd = static_cast<double>(k);
      return std::exp(std::lgamma(nd + 1) - std::lgamma(kd + 1) - std::lgamma(nd - kd + 1));
    }
  }
  return static_cast<double>(static_cast<std::uint64_t>(acc));
}

double match_populations(const Multiset& pattern, const Multiset& subject) {
  double product = 1.0;
  for (const auto& [atom, k] : pattern) {
    product *= binomial(count(subject, atom), k);
    if (product == 0.0) break;
  }
  return product;
}

void MatchSet::clear(std::size_t n_rules) {
  entries.resize(n_rules);
  for (auto& e : entries) e.clear();
  rule_rates.assign(n_rules, 0.0);
  total_rate = 0.0;
}

std::size_t MatchSet::size() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.size();
  return n;
}

namespace {

void match_rule(const Rule& rule, std::size_t slot, const Term& content, ContextPath& path, bool label_matches,
                MatchSet& out) {
  if (label_matches) {
    const double population = match_populations(rule.lhs.atoms, content.atoms);
    if (population > 0.0) {
      auto emit = [&](double combinations, std::optional<CompartmentId> chosen) {
        const double rate = combinations * rule.k;
        if (!(rate > kNegligibleRate)) return;
        MatchEntry e;
        e.rule_id = rule.id;
        e.context = path;
        e.combinations = combinations;
        e.rate = rate;
        e.binding.compartment = chosen;
        out.entries[slot].push_back(std::move(e));
        out.rule_rates[slot] += rate;
      };
      if (!rule.lhs.compartment) {
        emit(population, std::nullopt);
      } else {
        const CompartmentPattern& cp = *rule.lhs.compartment;
        for (const auto& c : content.compartments) {
          if (c.label != cp.label) continue;
          const double inner =
              match_populations(cp.wrap_atoms, c.wrap) * match_populations(cp.content.atoms, c.content.atoms);
          if (inner > 0.0) emit(population * inner, c.id);
        }
      }
    }
  }
  for (const auto& c : content.compartments) {
    path.push_back(c.id);
    match_rule(rule, slot, c.content, path, c.label == rule.label, out);
    path.pop_back();
  }
}

}  // namespace

void build_matchset(const Model& model, const Term& term, MatchSet& out) {
  out.clear(model.rules.size());
  ContextPath path;
  for (std::size_t i = 0; i < model.rules.size(); ++i) {
    const Rule& rule = model.rules[i];
    match_rule(rule, i, term, path, rule.label.is_top(), out);
    out.total_rate += out.rule_rates[i];
  }
}

MatchSet build_matchset(const Model& model, const Term& term) {
  MatchSet m;
  build_matchset(model, term, m);
  return m;
}

Binding extract_match(const Rule& rule, const MatchEntry& entry, Term& term) {
  Term& content = resolve(term, entry.context);
  Binding b;
  remove(content.atoms, rule.lhs.atoms);
  if (rule.lhs.compartment) {
    const CompartmentPattern& cp = *rule.lhs.compartment;
    if (!entry.binding.compartment) throw std::logic_error("match entry lacks its compartment");
    auto it = std::find_if(content.compartments.begin(), content.compartments.end(),
                           [&](const Compartment& c) { return c.id == *entry.binding.compartment; });
    if (it == content.compartments.end() || it->label != cp.label)
      throw std::logic_error("stale match: compartment " + std::to_string(*entry.binding.compartment));
    Compartment chosen = std::move(*it);
    content.compartments.erase(it);
    remove(chosen.wrap, cp.wrap_atoms);
    remove(chosen.content.atoms, cp.content.atoms);
    b.vars[cp.wrap_rest_var].atoms = std::move(chosen.wrap);
    b.vars[cp.content.rest_var] = std::move(chosen.content);
    b.compartment = chosen.id;
  }
  b.vars[rule.lhs.rest_var] = std::move(content);
  content = Term{};
  return b;
}

}  // namespace cwc
