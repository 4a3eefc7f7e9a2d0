#ifndef CWC_CLI_HPP
#define CWC_CLI_HPP

#include <iosfwd>

namespace cwc {

inline constexpr const char* kVersion = "1.0.0";

/// Entry point of `cwc-sim`. Returns 0 on success, 1 on usage, model or
/// configuration errors, 2 on runtime failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cwc

#endif  // CWC_CLI_HPP
