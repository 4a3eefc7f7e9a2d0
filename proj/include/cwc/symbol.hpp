#ifndef CWC_SYMBOL_HPP
#define CWC_SYMBOL_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace cwc {

/// Process-wide interned identifier. Two symbols with the same name always
/// share the same index, so comparisons are integer comparisons.
class Symbol {
 public:
  Symbol() = default;

  static Symbol intern(std::string_view name);

  std::uint32_t index() const { return index_; }
  const std::string& name() const;

  friend auto operator<=>(Symbol, Symbol) = default;

 protected:
  explicit Symbol(std::uint32_t index) : index_(index) {}

 private:
  std::uint32_t index_ = 0;
};

/// A species name (a, b, ...).
class Atom : public Symbol {
 public:
  Atom() = default;
  explicit Atom(std::string_view name) : Symbol(intern(name)) {}
};

/// A compartment type. `Label::top()` names the root context and may only
/// appear as a rule label.
class Label : public Symbol {
 public:
  Label() : Label(top()) {}
  explicit Label(std::string_view name) : Symbol(intern(name)) {}

  static Label top();
  bool is_top() const { return *this == top(); }

 private:
  explicit Label(Symbol s) : Symbol(s) {}
};

inline constexpr std::string_view kTopLabel = "TOP";

}  // namespace cwc

template <>
struct std::hash<cwc::Atom> {
  std::size_t operator()(cwc::Atom a) const noexcept { return a.index(); }
};

#endif  // CWC_SYMBOL_HPP
