#ifndef CWC_MATCHER_HPP
#define CWC_MATCHER_HPP

#include <cstddef>
#include <vector>

#include "cwc/model.hpp"

namespace cwc {

/// C(n, k). Exact whenever the result fits in 64 bits, otherwise evaluated
/// through log-gamma. Zero when k > n.
double binomial(Count n, Count k);

/// Number of distinct ways to pick `pattern` out of `subject`: the product of
/// C(n_x, k_x) over the pattern species.
double match_populations(const Multiset& pattern, const Multiset& subject);

/// One way to apply a rule: where, how fast, and (for compartment patterns)
/// which compartment is consumed. Rest-variable captures are taken when the
/// match is extracted, not stored here.
struct MatchEntry {
  int rule_id = 0;
  ContextPath context;
  double combinations = 0.0;  // distinct reactant choices
  double rate = 0.0;          // combinations * k
  Binding binding;
};

struct MatchSet {
  std::vector<std::vector<MatchEntry>> entries;  // indexed by rule position
  std::vector<double> rule_rates;
  double total_rate = 0.0;

  void clear(std::size_t n_rules);
  std::size_t size() const;
};

inline constexpr double kNegligibleRate = 1e-300;

/// Rebuilds `out` with every application of every rule of `model` in `term`.
/// Entries are ordered by rule, then pre-order context, then compartment.
void build_matchset(const Model& model, const Term& term, MatchSet& out);
MatchSet build_matchset(const Model& model, const Term& term);

/// Removes the left-hand side of `rule` at `entry` from `term` and returns the
/// captured variables. The context content is left empty, ready for the
/// instantiated right-hand side.
Binding extract_match(const Rule& rule, const MatchEntry& entry, Term& term);

}  // namespace cwc

#endif  // CWC_MATCHER_HPP
