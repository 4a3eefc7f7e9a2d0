#include "cwc/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

namespace cwc {

namespace {

class SymbolTable {
 public:
  std::uint32_t intern(std::string_view name) {
    if (name.empty()) throw std::invalid_argument("symbol names must be non-empty");
    {
      std::shared_lock lock(mutex_);
      if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = index_.try_emplace(std::string(name), static_cast<std::uint32_t>(names_.size()));
    if (inserted) names_.emplace_back(name);
    return it->second;
  }

  const std::string& name(std::uint32_t index) const {
    std::shared_lock lock(mutex_);
    return names_.at(index);  // deque keeps references stable
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::deque<std::string> names_;
};

SymbolTable& table() {
  static SymbolTable t;
  return t;
}

}  // namespace

Symbol Symbol::intern(std::string_view name) { return Symbol(table().intern(name)); }

const std::string& Symbol::name() const { return table().name(index_); }

Label Label::top() {
  static const Label t{Symbol::intern(kTopLabel)};
  return t;
}

}  // namespace cwc
