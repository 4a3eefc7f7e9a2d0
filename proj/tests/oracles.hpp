// Test-only reference implementations and generators. Nothing here calls the
// matcher, binomial or the reducer.
#ifndef CWC_TESTS_ORACLES_HPP
#define CWC_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cwc/model.hpp"

namespace cwc::oracle {

/// Expands a multiset into one token per molecule.
inline std::vector<Atom> tokens(const Multiset& m) {
  std::vector<Atom> out;
  for (const auto& [a, n] : m)
    for (Count i = 0; i < n; ++i) out.push_back(a);
  return out;
}

/// Number of index subsets of `subject` tokens whose species multiset equals `pattern`.
inline std::uint64_t count_submultisets(const Multiset& pattern, const Multiset& subject) {
  std::vector<Atom> subj = tokens(subject);
  std::size_t k = 0;
  for (const auto& [a, n] : pattern) k += n;
  if (k == 0) return 1;
  if (k > subj.size()) return 0;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::uint64_t hits = 0;
  while (true) {
    Multiset chosen;
    for (std::size_t i : idx) chosen[subj[i]] += 1;
    if (chosen == pattern) ++hits;
    // next combination
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == subj.size() - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return hits;
}

struct BruteEntry {
  int rule_id;
  ContextPath context;
  std::optional<CompartmentId> compartment;
  std::uint64_t combinations;
};

inline void brute_visit(const Rule& r, const Term& content, ContextPath& path, bool label_ok,
                        std::vector<BruteEntry>& out) {
  if (label_ok) {
    const std::uint64_t outer = count_submultisets(r.lhs.atoms, content.atoms);
    if (!r.lhs.compartment) {
      if (outer) out.push_back({r.id, path, std::nullopt, outer});
    } else {
      for (const auto& c : content.compartments) {
        if (c.label != r.lhs.compartment->label) continue;
        const std::uint64_t n = outer * count_submultisets(r.lhs.compartment->wrap_atoms, c.wrap) *
                                count_submultisets(r.lhs.compartment->content.atoms, c.content.atoms);
        if (n) out.push_back({r.id, path, c.id, n});
      }
    }
  }
  for (const auto& c : content.compartments) {
    path.push_back(c.id);
    brute_visit(r, c.content, path, c.label == r.label, out);
    path.pop_back();
  }
}

/// Every (rule, context, compartment) application with its number of distinct reactant choices.
inline std::vector<BruteEntry> enumerate_matches(const Model& m, const Term& t) {
  std::vector<BruteEntry> out;
  ContextPath path;
  for (const auto& r : m.rules) brute_visit(r, t, path, r.label.is_top(), out);
  return out;
}

/// Pascal's triangle with 128-bit integers; exact for n <= 130.
inline unsigned __int128 pascal(unsigned n, unsigned k) {
  std::vector<unsigned __int128> row(n + 1, 0);
  row[0] = 1;
  for (unsigned i = 1; i <= n; ++i)
    for (unsigned j = i; j > 0; --j) row[j] += row[j - 1];
  return k > n ? 0 : row[k];
}

// --- generators ------------------------------------------------------------

inline const std::vector<Atom>& alphabet() {
  static const std::vector<Atom> a{Atom("a"), Atom("b"), Atom("c"), Atom("d")};
  return a;
}

inline const std::vector<Label>& labels() {
  static const std::vector<Label> l{Label("l"), Label("m")};
  return l;
}

class TermGen {
 public:
  explicit TermGen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::mt19937_64& rng() { return rng_; }

  Multiset atoms(std::size_t& budget, std::size_t max_here) {
    Multiset m;
    const std::size_t n = budget == 0 ? 0 : below(std::min(budget, max_here) + 1);
    for (std::size_t i = 0; i < n; ++i) add(m, alphabet()[below(alphabet().size())]);
    budget -= n;
    return m;
  }

  /// Random term with at most `budget` molecules and compartments nested `depth` deep.
  Term term(std::size_t budget, int depth, std::size_t max_compartments = 3) {
    IdSource ids;
    return term_impl(budget, depth, max_compartments, ids);
  }

 private:
  Term term_impl(std::size_t& budget, int depth, std::size_t max_compartments, IdSource& ids) {
    Term t;
    t.atoms = atoms(budget, 8);
    if (depth > 0) {
      const std::size_t n = below(max_compartments + 1);
      for (std::size_t i = 0; i < n; ++i) {
        Compartment c;
        c.id = ids.fresh();
        c.label = labels()[below(labels().size())];
        c.wrap = atoms(budget, 3);
        c.content = term_impl(budget, depth - 1, max_compartments, ids);
        t.compartments.push_back(std::move(c));
      }
    }
    return t;
  }

  std::mt19937_64 rng_;
};

/// Small random multiset with `max_size` molecules at most.
inline Multiset small_multiset(TermGen& g, std::size_t max_size) {
  Multiset m;
  const std::size_t n = g.below(max_size + 1);
  for (std::size_t i = 0; i < n; ++i) add(m, alphabet()[g.below(alphabet().size())]);
  return m;
}

/// Random rule; the rhs keeps every captured variable and adds random atoms.
inline Rule random_rule(TermGen& g, int id) {
  Rule r;
  r.id = id;
  const std::size_t pick = g.below(3);
  r.label = pick == 0 ? Label::top() : labels()[pick - 1];
  r.lhs.atoms = small_multiset(g, 3);
  r.lhs.rest_var = "$X";
  r.rhs.atoms = small_multiset(g, 2);
  r.rhs.vars.push_back("$X");
  if (g.below(3) == 0) {
    CompartmentPattern cp;
    cp.label = labels()[g.below(labels().size())];
    cp.wrap_atoms = small_multiset(g, 2);
    cp.wrap_rest_var = "$W";
    cp.content.atoms = small_multiset(g, 2);
    cp.content.rest_var = "$Y";
    r.lhs.compartment = cp;
    OutputCompartment oc;
    oc.label = cp.label;
    oc.wrap_vars.push_back("$W");
    oc.content.atoms = small_multiset(g, 1);
    oc.content.vars.push_back("$Y");
    r.rhs.compartments.push_back(std::move(oc));
  }
  r.k = g.real(0.1, 3.0);
  return r;
}

inline Count tokens_in(const Multiset& m, Atom a) {
  auto it = m.find(a);
  return it == m.end() ? 0 : it->second;
}

/// Whole-term total of `a`, written independently of species_total.
inline Count census(const Term& t, Atom a) {
  Count n = tokens_in(t.atoms, a);
  for (const auto& c : t.compartments) n += tokens_in(c.wrap, a) + census(c.content, a);
  return n;
}

}  // namespace cwc::oracle

#endif  // CWC_TESTS_ORACLES_HPP
