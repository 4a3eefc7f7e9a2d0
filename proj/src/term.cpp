#include "cwc/term.hpp"

#include <algorithm>
#include <iterator>
#include <set>
#include <stdexcept>

namespace cwc {

void add(Multiset& m, Atom a, Count n) {
  if (n == 0) return;
  m[a] += n;
}

void add(Multiset& m, const Multiset& other) {
  for (const auto& [a, n] : other) add(m, a, n);
}

void remove(Multiset& m, Atom a, Count n) {
  if (n == 0) return;
  auto it = m.find(a);
  if (it == m.end() || it->second < n)
    throw std::logic_error("cannot remove " + std::to_string(n) + " copies of '" + a.name() + "'");
  it->second -= n;
  if (it->second == 0) m.erase(it);
}

void remove(Multiset& m, const Multiset& other) {
  for (const auto& [a, n] : other) remove(m, a, n);
}

Count count(const Multiset& m, Atom a) {
  auto it = m.find(a);
  return it == m.end() ? 0 : it->second;
}

Count size(const Multiset& m) {
  Count total = 0;
  for (const auto& [a, n] : m) total += n;
  return total;
}

bool contains(const Multiset& m, const Multiset& sub) {
  return std::all_of(sub.begin(), sub.end(), [&](const auto& e) { return count(m, e.first) >= e.second; });
}

bool Term::empty() const { return atoms.empty() && compartments.empty(); }

CompartmentId max_compartment_id(const Term& t) {
  CompartmentId best = 0;
  for (const auto& c : t.compartments) best = std::max({best, c.id, max_compartment_id(c.content)});
  return best;
}

void renumber(Term& t, IdSource& ids) {
  for (auto& c : t.compartments) {
    c.id = ids.fresh();
    renumber(c.content, ids);
  }
}

void merge(Term& dst, Term&& src) {
  if (dst.empty()) {
    dst = std::move(src);
    return;
  }
  add(dst.atoms, src.atoms);
  dst.compartments.reserve(dst.compartments.size() + src.compartments.size());
  std::move(src.compartments.begin(), src.compartments.end(), std::back_inserter(dst.compartments));
  src = Term{};
}

Count species_total(const Term& t, Atom a) {
  Count total = count(t.atoms, a);
  for (const auto& c : t.compartments) total += count(c.wrap, a) + species_total(c.content, a);
  return total;
}

namespace {

void collect_species(const Term& t, std::set<Atom>& out) {
  for (const auto& [a, n] : t.atoms) out.insert(a);
  for (const auto& c : t.compartments) {
    for (const auto& [a, n] : c.wrap) out.insert(a);
    collect_species(c.content, out);
  }
}

template <typename TermT>
TermT& resolve_impl(TermT& root, const ContextPath& path) {
  TermT* cur = &root;
  for (CompartmentId id : path) {
    auto it = std::find_if(cur->compartments.begin(), cur->compartments.end(),
                           [id](const Compartment& c) { return c.id == id; });
    if (it == cur->compartments.end())
      throw std::logic_error("stale context: compartment " + std::to_string(id) + " not found");
    cur = &it->content;
  }
  return *cur;
}

}  // namespace

std::vector<Atom> species_of(const Term& t) {
  std::set<Atom> found;
  collect_species(t, found);
  std::vector<Atom> out(found.begin(), found.end());
  std::sort(out.begin(), out.end(), [](Atom x, Atom y) { return x.name() < y.name(); });
  return out;
}

Term& resolve(Term& root, const ContextPath& path) { return resolve_impl(root, path); }
const Term& resolve(const Term& root, const ContextPath& path) { return resolve_impl(root, path); }

std::string format_multiset(const Multiset& m) {
  std::vector<std::pair<const std::string*, Count>> entries;
  entries.reserve(m.size());
  for (const auto& [a, n] : m) entries.emplace_back(&a.name(), n);
  std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) { return *x.first < *y.first; });
  std::string out;
  for (const auto& [name, n] : entries) {
    if (!out.empty()) out += ' ';
    out += *name;
    if (n != 1) out += '*' + std::to_string(n);
  }
  return out;
}

std::string format_term(const Term& t) {
  std::vector<std::pair<const std::string*, std::string>> parts;
  parts.reserve(t.compartments.size());
  for (const auto& c : t.compartments) {
    std::string wrap = format_multiset(c.wrap);
    std::string content = format_term(c.content);
    std::string s = "(";
    s += wrap;
    if (!wrap.empty()) s += ' ';
    s += '|';
    if (!content.empty()) s += ' ';
    s += content;
    s += ")@";
    s += c.label.name();
    parts.emplace_back(&c.label.name(), std::move(s));
  }
  std::sort(parts.begin(), parts.end(), [](const auto& x, const auto& y) {
    return *x.first != *y.first ? *x.first < *y.first : x.second < y.second;
  });
  std::string out = format_multiset(t.atoms);
  for (const auto& [label, s] : parts) {
    if (!out.empty()) out += ' ';
    out += s;
  }
  return out;
}

}  // namespace cwc
