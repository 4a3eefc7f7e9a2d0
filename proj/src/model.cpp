#include "cwc/model.hpp"

#include <cmath>
#include <stdexcept>

namespace cwc {

std::size_t Model::grid_size() const {
  // Tolerance absorbs t_stop/delta landing just below an integer, e.g. 0.3/0.1.
  return static_cast<std::size_t>(std::floor(t_stop / delta + 1e-9)) + 1;
}

namespace {

void count_uses(const OutputTemplate& o, std::map<std::string, int>& uses) {
  for (const auto& v : o.vars) ++uses[v];
  for (const auto& c : o.compartments) {
    for (const auto& v : c.wrap_vars) ++uses[v];
    count_uses(c.content, uses);
  }
}

class Instantiator {
 public:
  Instantiator(Binding& binding, IdSource& ids) : binding_(binding), ids_(ids) {}

  Term build(const OutputTemplate& o) {
    count_uses(o, remaining_);
    return build_content(o);
  }

 private:
  Term take(const std::string& var) {
    auto it = binding_.vars.find(var);
    if (it == binding_.vars.end()) throw std::logic_error("unbound variable " + var);
    if (--remaining_[var] == 0) return std::move(it->second);
    Term copy = it->second;
    renumber(copy, ids_);
    return copy;
  }

  Term build_content(const OutputTemplate& o) {
    Term out;
    out.atoms = o.atoms;
    for (const auto& v : o.vars) merge(out, take(v));
    for (const auto& oc : o.compartments) {
      Compartment c;
      c.id = ids_.fresh();
      c.label = oc.label;
      c.wrap = oc.wrap_atoms;
      for (const auto& v : oc.wrap_vars) {
        Term captured = take(v);
        if (!captured.compartments.empty())
          throw std::logic_error("variable " + v + " holds compartments and cannot appear in a wrap");
        add(c.wrap, captured.atoms);
      }
      c.content = build_content(oc.content);
      out.compartments.push_back(std::move(c));
    }
    return out;
  }

  Binding& binding_;
  IdSource& ids_;
  std::map<std::string, int> remaining_;
};

}  // namespace

Term instantiate(const OutputTemplate& rhs, Binding& binding, IdSource& ids) {
  return Instantiator(binding, ids).build(rhs);
}

void apply_binding(const OutputTemplate& rhs, Binding& binding, Term& target, const ContextPath& context,
                   IdSource& ids) {
  Term& content = resolve(target, context);
  merge(content, instantiate(rhs, binding, ids));
}

}  // namespace cwc
