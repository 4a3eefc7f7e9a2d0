#ifndef CWC_PARSER_HPP
#define CWC_PARSER_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include "cwc/model.hpp"

namespace cwc {

/// Raised for malformed model text; carries a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses a model file.
///
/// Line-oriented grammar, `#` starts a comment:
///
///     %name  lv2
///     %term  a*100 b (c d | e f)@l
///     %rule  l : a b $X => c $X @ 0.5
///     %rule  TOP : (| a $Y)@l $X => (| $Y)@l a $X @ 2
///     %observe a b
///     %tstop 10
///     %delta 0.1
///
/// Compartment ids are assigned 1, 2, ... in document order. Rules are
/// numbered in order of appearance. When `%observe` is absent every species
/// of the initial term is observed.
Model parse_model(std::string_view text);

/// Parses a bare term, e.g. `a*2 b (c | d)@l`.
Term parse_term(std::string_view text);

}  // namespace cwc

#endif  // CWC_PARSER_HPP
