#include "cwc/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <vector>

namespace cwc {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Var, Number, Star, LParen, RParen, Bar, At, Colon, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  int column;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> tokenize(std::string_view s, int line, int col0) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto col = [&](std::size_t p) { return col0 + static_cast<int>(p); };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::Ident, std::string(s.substr(start, i - start)), col(start)});
    } else if (c == '$') {
      ++i;
      if (i >= s.size() || !ident_start(s[i])) throw ParseError("expected variable name after '$'", line, col(start));
      while (i < s.size() && ident_char(s[i])) ++i;
      out.push_back({Tok::Var, std::string(s.substr(start, i - start)), col(start)});
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+') {
      ++i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '.' ||
                              ((s[i] == '-' || s[i] == '+') && (s[i - 1] == 'e' || s[i - 1] == 'E'))))
        ++i;
      out.push_back({Tok::Number, std::string(s.substr(start, i - start)), col(start)});
    } else if (c == '=' && i + 1 < s.size() && s[i + 1] == '>') {
      i += 2;
      out.push_back({Tok::Arrow, "=>", col(start)});
    } else {
      Tok k;
      switch (c) {
        case '*': k = Tok::Star; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '|': k = Tok::Bar; break;
        case '@': k = Tok::At; break;
        case ':': k = Tok::Colon; break;
        default: throw ParseError(std::string("unexpected character '") + c + "'", line, col(start));
      }
      ++i;
      out.push_back({k, std::string(1, c), col(start)});
    }
  }
  out.push_back({Tok::End, "", col(s.size())});
  return out;
}

double parse_real(const Token& t, int line) {
  std::string_view text = t.text;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
    throw ParseError("invalid number '" + t.text + "'", line, t.column);
  return value;
}

class LineParser {
 public:
  LineParser(std::string_view text, int line, int col0) : toks_(tokenize(text, line, col0)), line_(line) {}

  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }
  bool at(Tok k) const { return peek().kind == k; }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, peek().column); }
  [[noreturn]] void fail(const std::string& message, const Token& t) const {
    throw ParseError(message, line_, t.column);
  }

  Token expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what + (peek().kind == Tok::End ? ", found end of line" : ", found '" + peek().text + "'"));
    return next();
  }

  void expect_end() {
    if (!at(Tok::End)) fail("unexpected '" + peek().text + "'");
  }

  Label compartment_label() {
    Token t = expect(Tok::Ident, "compartment label");
    if (t.text == kTopLabel) fail(std::string(kTopLabel) + " is reserved for the top level", t);
    return Label(t.text);
  }

  /// atom ['*' count]
  void atom_into(Multiset& m) {
    Token t = next();
    Count n = 1;
    if (at(Tok::Star)) {
      next();
      Token num = expect(Tok::Number, "multiplicity");
      auto [ptr, ec] = std::from_chars(num.text.data(), num.text.data() + num.text.size(), n);
      if (ec != std::errc() || ptr != num.text.data() + num.text.size())
        fail("invalid multiplicity '" + num.text + "'", num);
      if (n == 0) fail("multiplicity must be at least 1", num);
    }
    add(m, Atom(t.text), n);
  }

  // --- terms -------------------------------------------------------------

  Term term(IdSource& ids) {
    Term t;
    while (true) {
      if (at(Tok::Ident)) {
        atom_into(t.atoms);
      } else if (at(Tok::LParen)) {
        next();
        Compartment c;
        c.id = ids.fresh();
        while (at(Tok::Ident)) atom_into(c.wrap);
        expect(Tok::Bar, "'|' after compartment wrap");
        c.content = term(ids);
        expect(Tok::RParen, "')'");
        expect(Tok::At, "'@' before compartment label");
        c.label = compartment_label();
        t.compartments.push_back(std::move(c));
      } else {
        return t;
      }
    }
  }

  // --- rules -------------------------------------------------------------

  Pattern lhs(std::set<std::string>& content_vars, std::set<std::string>& wrap_vars) {
    Pattern p;
    std::optional<Token> rest;
    while (!at(Tok::Arrow)) {
      if (at(Tok::Ident)) {
        atom_into(p.atoms);
      } else if (at(Tok::Var)) {
        Token v = next();
        if (rest) fail("content pattern already has rest variable " + rest->text, v);
        declare(v, content_vars, wrap_vars);
        content_vars.insert(v.text);
        rest = v;
      } else if (at(Tok::LParen)) {
        Token open = next();
        if (p.compartment) fail("at most one compartment pattern is allowed on a left-hand side", open);
        p.compartment = compartment_pattern(content_vars, wrap_vars);
      } else {
        fail(at(Tok::End) ? "expected '=>'" : "unexpected '" + peek().text + "' in left-hand side");
      }
    }
    if (!rest) fail("left-hand side needs a rest variable");
    p.rest_var = rest->text;
    return p;
  }

  CompartmentPattern compartment_pattern(std::set<std::string>& content_vars, std::set<std::string>& wrap_vars) {
    CompartmentPattern cp;
    std::optional<Token> wrap_rest;
    while (!at(Tok::Bar)) {
      if (at(Tok::Ident)) {
        atom_into(cp.wrap_atoms);
      } else if (at(Tok::Var)) {
        Token v = next();
        if (wrap_rest) fail("wrap pattern already has rest variable " + wrap_rest->text, v);
        declare(v, content_vars, wrap_vars);
        wrap_vars.insert(v.text);
        wrap_rest = v;
      } else {
        fail("expected atom, variable or '|' in wrap pattern");
      }
    }
    if (!wrap_rest) fail("wrap pattern needs a rest variable");
    cp.wrap_rest_var = wrap_rest->text;
    next();
    std::optional<Token> rest;
    while (!at(Tok::RParen)) {
      if (at(Tok::Ident)) {
        atom_into(cp.content.atoms);
      } else if (at(Tok::Var)) {
        Token v = next();
        if (rest) fail("content pattern already has rest variable " + rest->text, v);
        declare(v, content_vars, wrap_vars);
        content_vars.insert(v.text);
        rest = v;
      } else if (at(Tok::LParen)) {
        fail("nested compartment patterns are not supported");
      } else {
        fail("expected atom, variable or ')' in compartment content pattern");
      }
    }
    if (!rest) fail("compartment content pattern needs a rest variable");
    cp.content.rest_var = rest->text;
    next();
    expect(Tok::At, "'@' before compartment label");
    cp.label = compartment_label();
    return cp;
  }

  void declare(const Token& v, const std::set<std::string>& content_vars, const std::set<std::string>& wrap_vars) {
    if (content_vars.count(v.text) || wrap_vars.count(v.text)) fail("duplicate rest variable " + v.text, v);
  }

  OutputTemplate rhs(const std::set<std::string>& content_vars, const std::set<std::string>& wrap_vars) {
    OutputTemplate o;
    while (true) {
      if (at(Tok::Ident)) {
        atom_into(o.atoms);
      } else if (at(Tok::Var)) {
        Token v = next();
        if (!content_vars.count(v.text) && !wrap_vars.count(v.text)) fail("unbound variable " + v.text, v);
        o.vars.push_back(v.text);
      } else if (at(Tok::LParen)) {
        next();
        OutputCompartment oc;
        while (!at(Tok::Bar)) {
          if (at(Tok::Ident)) {
            atom_into(oc.wrap_atoms);
          } else if (at(Tok::Var)) {
            Token v = next();
            if (content_vars.count(v.text)) fail("content variable " + v.text + " cannot appear in a wrap", v);
            if (!wrap_vars.count(v.text)) fail("unbound variable " + v.text, v);
            oc.wrap_vars.push_back(v.text);
          } else {
            fail("expected atom, variable or '|' in wrap");
          }
        }
        next();
        oc.content = rhs(content_vars, wrap_vars);
        expect(Tok::RParen, "')'");
        expect(Tok::At, "'@' before compartment label");
        oc.label = compartment_label();
        o.compartments.push_back(std::move(oc));
      } else {
        return o;
      }
    }
  }

  Rule rule(int id) {
    Rule r;
    r.id = id;
    Token label = expect(Tok::Ident, "rule label");
    r.label = Label(label.text);
    expect(Tok::Colon, "':' after rule label");
    std::set<std::string> content_vars, wrap_vars;
    r.lhs = lhs(content_vars, wrap_vars);
    next();  // =>
    r.rhs = rhs(content_vars, wrap_vars);
    expect(Tok::At, "'@' before kinetic constant");
    Token k = expect(Tok::Number, "kinetic constant");
    r.k = parse_real(k, line_);
    if (!(r.k > 0)) fail("kinetic constant must be positive", k);
    expect_end();
    return r;
  }

  double positive_real(const char* what) {
    Token t = expect(Tok::Number, what);
    double v = parse_real(t, line_);
    if (!(v > 0)) fail(std::string(what) + " must be positive", t);
    expect_end();
    return v;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int line_;
};

}  // namespace

Term parse_term(std::string_view text) {
  IdSource ids;
  LineParser p(text, 1, 1);
  Term t = p.term(ids);
  p.expect_end();
  return t;
}

Model parse_model(std::string_view text) {
  Model m;
  IdSource ids;
  bool have_term = false, have_tstop = false, have_delta = false, have_observe = false, have_name = false;
  int line_no = 0;
  int tstop_line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i == line.size()) continue;
    if (line[i] != '%') throw ParseError("expected a directive starting with '%'", line_no, static_cast<int>(i) + 1);
    std::size_t j = i + 1;
    while (j < line.size() && ident_char(line[j])) ++j;
    std::string directive(line.substr(i + 1, j - i - 1));
    int directive_col = static_cast<int>(i) + 1;
    LineParser p(line.substr(j), line_no, static_cast<int>(j) + 1);

    auto once = [&](bool& seen) {
      if (seen) throw ParseError("duplicate %" + directive, line_no, directive_col);
      seen = true;
    };

    if (directive == "term") {
      once(have_term);
      m.initial = p.term(ids);
      p.expect_end();
    } else if (directive == "rule") {
      m.rules.push_back(p.rule(static_cast<int>(m.rules.size())));
    } else if (directive == "observe") {
      have_observe = true;
      while (p.at(Tok::Ident)) m.observables.emplace_back(p.next().text);
      p.expect_end();
    } else if (directive == "tstop") {
      once(have_tstop);
      tstop_line = line_no;
      m.t_stop = p.positive_real("t_stop");
    } else if (directive == "delta") {
      once(have_delta);
      m.delta = p.positive_real("delta");
    } else if (directive == "name") {
      once(have_name);
      m.name = std::string(p.expect(Tok::Ident, "model name").text);
      p.expect_end();
    } else {
      throw ParseError("unknown directive %" + directive, line_no, directive_col);
    }
  }
  if (m.delta > m.t_stop) throw ParseError("delta must not exceed t_stop", tstop_line ? tstop_line : 1, 1);
  if (!have_observe || m.observables.empty()) m.observables = species_of(m.initial);
  return m;
}

}  // namespace cwc
