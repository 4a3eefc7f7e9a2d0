#ifndef CWC_MODEL_HPP
#define CWC_MODEL_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cwc/term.hpp"

namespace cwc {

/// Content pattern of a compartment pattern: atoms plus the rest variable.
struct ContentPattern {
  Multiset atoms;
  std::string rest_var;
};

/// `( wrap_atoms $W | content )@label` on a rule left-hand side.
struct CompartmentPattern {
  Label label;
  Multiset wrap_atoms;
  std::string wrap_rest_var;
  ContentPattern content;
};

/// Left-hand side of a rule. Matches a context content whose atoms include
/// `atoms` and, if present, one compartment satisfying `compartment`;
/// `rest_var` captures everything else.
struct Pattern {
  Multiset atoms;
  std::optional<CompartmentPattern> compartment;
  std::string rest_var;
};

struct OutputCompartment;

/// Right-hand side template: atoms, variable references and new compartments.
struct OutputTemplate {
  Multiset atoms;
  std::vector<std::string> vars;
  std::vector<OutputCompartment> compartments;
};

struct OutputCompartment {
  Label label;
  Multiset wrap_atoms;
  std::vector<std::string> wrap_vars;
  OutputTemplate content;
};

/// `label : lhs => rhs @ k`
struct Rule {
  int id = 0;
  Label label;
  Pattern lhs;
  OutputTemplate rhs;
  double k = 1.0;
};

struct Model {
  std::string name;
  Term initial;
  std::vector<Rule> rules;
  std::vector<Atom> observables;
  double t_stop = 100.0;
  double delta = 1.0;

  /// Number of grid points t_j = j * delta with t_j <= t_stop.
  std::size_t grid_size() const;
  /// Index of the last grid point.
  std::size_t last_grid_index() const { return grid_size() - 1; }
};

/// Variable assignment produced when a match is extracted from a term.
/// Content variables capture whole terms, wrap variables atoms only.
struct Binding {
  std::map<std::string, Term> vars;
  std::optional<CompartmentId> compartment;
};

/// Instantiates `rhs` under `binding` and merges the result into the content
/// designated by `context`. Variables used more than once are duplicated with
/// fresh compartment ids; `binding` is consumed.
void apply_binding(const OutputTemplate& rhs, Binding& binding, Term& target, const ContextPath& context,
                   IdSource& ids);

/// Builds sigma(O) as a standalone term.
Term instantiate(const OutputTemplate& rhs, Binding& binding, IdSource& ids);

}  // namespace cwc

#endif  // CWC_MODEL_HPP
