#include "cwc/builtin.hpp"

#include <sstream>
#include <stdexcept>

#include "cwc/parser.hpp"

namespace cwc {

bool supported_lotka_volterra(int species) {
  return species == 2 || species == 4 || species == 8 || species == 16 || species == 32;
}

std::string lotka_volterra_source(int species) {
  if (!supported_lotka_volterra(species))
    throw std::invalid_argument("lotka-volterra supports 2, 4, 8, 16 or 32 species, not " + std::to_string(species));
  std::ostringstream out;
  out << "%name lotka_volterra_" << species << "\n%term";
  for (int i = 1; i <= species; ++i) out << " x" << i << "*1000";
  out << "\n%rule TOP : x1 $X => x1 x1 $X @ 10\n";
  for (int i = 2; i <= species; ++i)
    out << "%rule TOP : x" << i - 1 << " x" << i << " $X => x" << i << " x" << i << " $X @ 0.01\n";
  // close the cycle: the top predator is eaten by x1 (for s=2 this would just mirror predation)
  if (species > 2) out << "%rule TOP : x" << species << " x1 $X => x1 x1 $X @ 0.01\n";
  for (int i = 2; i <= species; ++i) out << "%rule TOP : x" << i << " $X => $X @ 10\n";
  out << "%tstop 2\n%delta 0.01\n";
  return out.str();
}

Model lotka_volterra(int species) { return parse_model(lotka_volterra_source(species)); }

Model builtin_model(const std::string& spec) {
  const std::string prefix = "lotka-volterra:";
  if (spec.rfind(prefix, 0) != 0) throw std::invalid_argument("unknown builtin model '" + spec + "'");
  int species = 0;
  try {
    std::size_t used = 0;
    species = std::stoi(spec.substr(prefix.size()), &used);
    if (used != spec.size() - prefix.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("bad species count in '" + spec + "'");
  }
  return lotka_volterra(species);
}

}  // namespace cwc
