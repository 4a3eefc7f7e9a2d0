#ifndef CWC_TERM_HPP
#define CWC_TERM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cwc/symbol.hpp"

namespace cwc {

using Count = std::uint64_t;
using CompartmentId = std::uint64_t;

/// Atom multiset. Stored counts are always >= 1; a species with no copies is
/// absent from the map.
using Multiset = std::map<Atom, Count>;

void add(Multiset& m, Atom a, Count n = 1);
void add(Multiset& m, const Multiset& other);
/// Removes `n` copies of `a`. Throws std::logic_error if fewer are present.
void remove(Multiset& m, Atom a, Count n = 1);
void remove(Multiset& m, const Multiset& other);
Count count(const Multiset& m, Atom a);
Count size(const Multiset& m);
/// True when every species of `sub` is present in `m` with at least the same multiplicity.
bool contains(const Multiset& m, const Multiset& sub);

struct Compartment;

/// A CWC term: a multiset of atoms plus a sequence of wrapped compartments.
struct Term {
  Multiset atoms;
  std::vector<Compartment> compartments;

  bool empty() const;
};

struct Compartment {
  CompartmentId id = 0;
  Label label;
  Multiset wrap;
  Term content;
};

/// Hands out compartment ids that are unique within one simulation instance.
class IdSource {
 public:
  explicit IdSource(CompartmentId next = 1) : next_(next) {}
  CompartmentId fresh() { return next_++; }
  CompartmentId peek() const { return next_; }

 private:
  CompartmentId next_;
};

/// Largest compartment id used anywhere in `t`, 0 when there are none.
CompartmentId max_compartment_id(const Term& t);

/// Replaces every compartment id in `t` with a fresh one.
void renumber(Term& t, IdSource& ids);

/// Merges `src` into `dst`: atoms are added and compartments appended.
void merge(Term& dst, Term&& src);

/// Copies of `a` anywhere in `t`, including nested contents and wraps.
Count species_total(const Term& t, Atom a);

/// Every species occurring anywhere in `t`, sorted by name.
std::vector<Atom> species_of(const Term& t);

/// Path of compartment ids from the root; empty designates the top level.
using ContextPath = std::vector<CompartmentId>;

/// Resolves `path` to the content it designates. Throws std::logic_error if a
/// compartment on the path no longer exists.
Term& resolve(Term& root, const ContextPath& path);
const Term& resolve(const Term& root, const ContextPath& path);

/// Canonical text: atoms sorted by name as `name` or `name*count`, then
/// compartments `(wrap | content)@label` sorted by label and canonical form.
std::string format_term(const Term& t);
std::string format_multiset(const Multiset& m);

}  // namespace cwc

#endif  // CWC_TERM_HPP
