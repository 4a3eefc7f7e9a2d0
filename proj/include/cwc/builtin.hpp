#ifndef CWC_BUILTIN_HPP
#define CWC_BUILTIN_HPP

#include <string>

#include "cwc/model.hpp"

namespace cwc {

/// Species counts accepted by `lotka_volterra`.
bool supported_lotka_volterra(int species);

/// Model text for an s-species Lotka-Volterra predation chain over x1..xs:
/// x1 reproduces, x(i-1) is eaten by x(i), every predator dies. s = 2 is the
/// classic prey-predator system. Rates and initial populations are defaults
/// chosen for benchmarking (birth 10, predation 0.01, death 10, 1000 each).
std::string lotka_volterra_source(int species);
Model lotka_volterra(int species);

/// Resolves `name` of the form `lotka-volterra:S`. Throws std::invalid_argument.
Model builtin_model(const std::string& spec);

}  // namespace cwc

#endif  // CWC_BUILTIN_HPP
