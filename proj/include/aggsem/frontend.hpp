#pragma once

// Concrete syntax:
//   program   := statement*
//   statement := universe | rule
//   universe  := "#universe" atom ("," atom)* "."
//   rule      := head? (":-" body)? "."
//   head      := atom ("|" atom)*
//   body      := aggregate ("," aggregate)*
//   aggregate := func "{" elements? "}" cmp integer
//   elements  := integer ":" atom ("," integer ":" atom)*
// "%" starts a comment running to end of line. The five function names are
// keywords and cannot be used as atoms. parse_program(render_program(p))
// reproduces p exactly.

#include <cassert>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"

namespace aggsem {

// 1-based line/column of the first character plus its length.
struct SourceSpan {
  int line = 1;
  int column = 1;
  int length = 0;

  bool operator==(const SourceSpan&) const = default;
};

struct ParseError {
  SourceSpan span;
  std::string message;
  std::vector<std::string> expected;
};

struct ParseResult {
  std::optional<Program> program;
  std::optional<ParseError> error;
  std::vector<SourceSpan> rule_spans;  // aligned with program->rules

  bool ok() const { return program.has_value(); }
};

struct ExpressionParseResult {
  std::optional<AggregateExpression> expression;
  std::optional<ParseError> error;

  bool ok() const { return expression.has_value(); }
};

namespace detail {

enum class TokenKind {
  identifier,
  keyword,    // sum times avg min max
  integer,
  universe,   // #universe
  implied_by, // :-
  colon,
  comma,
  pipe,
  lbrace,
  rbrace,
  dot,
  cmp,        // < <= >= > = !=
  end,
  error
};

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_trivia();
    Token t;
    t.span = {line_, column_, 1};
    if (pos_ >= src_.size()) {
      t.kind = TokenKind::end;
      t.span.length = 0;
      return t;
    }
    const char c = src_[pos_];
    if (c >= 'a' && c <= 'z') {
      std::size_t start = pos_;
      while (pos_ < src_.size() && is_name_char(src_[pos_])) advance();
      t.text = std::string(src_.substr(start, pos_ - start));
      t.kind = function_from_string(t.text) ? TokenKind::keyword
                                            : TokenKind::identifier;
      t.span.length = int(pos_ - start);
      return t;
    }
    if ((c >= '0' && c <= '9') ||
        (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] >= '0' &&
         src_[pos_ + 1] <= '9')) {
      std::size_t start = pos_;
      advance();
      while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9')
        advance();
      t.kind = TokenKind::integer;
      t.text = std::string(src_.substr(start, pos_ - start));
      t.span.length = int(pos_ - start);
      return t;
    }
    switch (c) {
      case '#': {
        std::size_t start = pos_;
        advance();
        while (pos_ < src_.size() && is_name_char(src_[pos_])) advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        t.span.length = int(pos_ - start);
        t.kind = t.text == "#universe" ? TokenKind::universe : TokenKind::error;
        return t;
      }
      case ':':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '-') {
          advance();
          t.kind = TokenKind::implied_by;
          t.text = ":-";
          t.span.length = 2;
        } else {
          t.kind = TokenKind::colon;
          t.text = ":";
        }
        return t;
      case ',': advance(); t.kind = TokenKind::comma; t.text = ","; return t;
      case '|': advance(); t.kind = TokenKind::pipe; t.text = "|"; return t;
      case '{': advance(); t.kind = TokenKind::lbrace; t.text = "{"; return t;
      case '}': advance(); t.kind = TokenKind::rbrace; t.text = "}"; return t;
      case '.': advance(); t.kind = TokenKind::dot; t.text = "."; return t;
      case '<':
      case '>':
        advance();
        t.text = std::string(1, c);
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          t.text += '=';
          t.span.length = 2;
        }
        t.kind = TokenKind::cmp;
        return t;
      case '=': advance(); t.kind = TokenKind::cmp; t.text = "="; return t;
      case '!':
        advance();
        if (pos_ < src_.size() && src_[pos_] == '=') {
          advance();
          t.kind = TokenKind::cmp;
          t.text = "!=";
          t.span.length = 2;
          return t;
        }
        t.kind = TokenKind::error;
        t.text = "!";
        return t;
      default:
        advance();
        t.kind = TokenKind::error;
        t.text = std::string(1, c);
        return t;
    }
  }

 private:
  static bool is_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { shift(); }

  ParseResult parse_program() {
    ParseResult result;
    Program program;
    while (!failed_ && current_.kind != TokenKind::end) {
      if (current_.kind == TokenKind::universe) {
        parse_universe(program);
      } else {
        const SourceSpan start = current_.span;
        if (parse_rule(program)) result.rule_spans.push_back(start);
      }
    }
    if (failed_) {
      result.error = std::move(error_);
      result.rule_spans.clear();
      return result;
    }
    result.program = std::move(program);
    return result;
  }

  ExpressionParseResult parse_expression_only() {
    ExpressionParseResult result;
    auto expr = parse_aggregate();
    if (!failed_ && current_.kind != TokenKind::end)
      fail("unexpected trailing input after aggregate expression", {});
    if (failed_) {
      result.error = std::move(error_);
      return result;
    }
    result.expression = std::move(expr);
    return result;
  }

 private:
  void shift() { current_ = lexer_.next(); }

  void fail(std::string message, std::vector<std::string> expected) {
    if (failed_) return;
    failed_ = true;
    error_ = ParseError{current_.span, std::move(message),
                        std::move(expected)};
  }

  bool expect(TokenKind kind, const char* what) {
    if (current_.kind == kind) {
      shift();
      return true;
    }
    fail(std::string("expected ") + what, {what});
    return false;
  }

  Atom parse_atom() {
    if (current_.kind == TokenKind::keyword) {
      fail("aggregate function name '" + current_.text +
               "' cannot be used as an atom",
           {"atom"});
      return {};
    }
    if (current_.kind != TokenKind::identifier) {
      fail("expected atom", {"atom"});
      return {};
    }
    Atom atom{current_.text};
    shift();
    return atom;
  }

  void parse_universe(Program& program) {
    shift();  // #universe
    while (true) {
      Atom atom = parse_atom();
      if (failed_) return;
      program.declared_atoms.insert(std::move(atom));
      if (current_.kind == TokenKind::comma) {
        shift();
        continue;
      }
      break;
    }
    expect(TokenKind::dot, "'.'");
  }

  // rule := head? (":-" body)? "."
  bool parse_rule(Program& program) {
    std::vector<Atom> head;
    std::vector<AggregateExpression> body;
    if (current_.kind == TokenKind::identifier) {
      while (true) {
        Atom atom = parse_atom();
        if (failed_) return false;
        head.push_back(std::move(atom));
        if (current_.kind == TokenKind::pipe) {
          shift();
          continue;
        }
        break;
      }
    } else if (current_.kind != TokenKind::implied_by &&
               current_.kind != TokenKind::dot) {
      fail("expected rule", {"atom", "':-'", "'.'"});
      return false;
    }
    if (current_.kind == TokenKind::implied_by) {
      shift();
      while (true) {
        AggregateExpression a = parse_aggregate();
        if (failed_) return false;
        body.push_back(std::move(a));
        if (current_.kind == TokenKind::comma) {
          shift();
          continue;
        }
        break;
      }
    }
    if (!expect(TokenKind::dot, "'.'")) return false;
    program.rules.push_back(make_rule(std::move(head), std::move(body)));
    return true;
  }

  AggregateExpression parse_aggregate() {
    AggregateExpression a;
    if (current_.kind != TokenKind::keyword) {
      fail("expected aggregate function",
           {"sum", "times", "avg", "min", "max"});
      return a;
    }
    a.function = *function_from_string(current_.text);
    shift();
    if (!expect(TokenKind::lbrace, "'{'")) return a;
    std::set<Atom> seen;
    if (current_.kind != TokenKind::rbrace) {
      while (true) {
        if (current_.kind != TokenKind::integer) {
          fail("expected integer weight", {"integer"});
          return a;
        }
        Int weight(current_.text);
        shift();
        if (!expect(TokenKind::colon, "':'")) return a;
        const SourceSpan atom_span = current_.span;
        Atom atom = parse_atom();
        if (failed_) return a;
        if (!seen.insert(atom).second) {
          failed_ = true;
          error_ = ParseError{atom_span,
                              "duplicate atom '" + atom.name +
                                  "' among aggregate elements",
                              {}};
          return a;
        }
        a.elements.push_back({std::move(weight), std::move(atom)});
        if (current_.kind == TokenKind::comma) {
          shift();
          continue;
        }
        break;
      }
    }
    if (!expect(TokenKind::rbrace, "'}'")) return a;
    if (current_.kind != TokenKind::cmp) {
      fail("expected comparison operator",
           {"<", "<=", ">=", ">", "=", "!="});
      return a;
    }
    a.op = *op_from_string(current_.text);
    shift();
    if (current_.kind != TokenKind::integer) {
      fail("expected integer bound", {"integer"});
      return a;
    }
    a.bound = Int(current_.text);
    shift();
    return a;
  }

  Lexer lexer_;
  Token current_;
  bool failed_ = false;
  ParseError error_;
};

}  // namespace detail

inline ParseResult parse_program(std::string_view source) {
  return detail::Parser(source).parse_program();
}

inline ExpressionParseResult parse_expression(std::string_view source) {
  return detail::Parser(source).parse_expression_only();
}

inline std::string render_expression(const AggregateExpression& a) {
  std::string out{to_string(a.function)};
  out += "{";
  for (std::size_t i = 0; i < a.elements.size(); ++i) {
    if (i) out += ", ";
    out += a.elements[i].weight.str();
    out += ":";
    out += a.elements[i].atom.name;
  }
  out += "} ";
  out += to_string(a.op);
  out += " ";
  out += a.bound.str();
  return out;
}

inline std::string render_rule(const Rule& r) {
  std::string out;
  for (std::size_t i = 0; i < r.head.size(); ++i) {
    if (i) out += " | ";
    out += r.head[i].name;
  }
  if (!r.body.empty()) {
    if (!r.head.empty()) out += " ";
    out += ":- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      if (i) out += ", ";
      out += render_expression(r.body[i]);
    }
  }
  out += ".";
  return out;
}

// Canonical text form; parse_program(render_program(p)) == p.
inline std::string render_program(const Program& p) {
  std::string out;
  if (!p.declared_atoms.empty()) {
    out += "#universe ";
    bool first = true;
    for (const auto& atom : p.declared_atoms) {
      if (!first) out += ", ";
      out += atom.name;
      first = false;
    }
    out += ".\n";
  }
  for (const auto& r : p.rules) {
    out += render_rule(r);
    out += "\n";
  }
  return out;
}

namespace detail {

inline const std::map<std::string, std::string>& corpus_source_map() {
  static const std::map<std::string, std::string> sources = {
      {"P1",
       "p :- sum{1:p, -1:q} >= 0.\n"
       "p :- sum{1:q} > 0.\n"
       "q :- sum{1:p} > 0.\n"},
      {"P1p",
       "s :- sum{1:p, -1:q} >= 0.\n"
       "p :- sum{1:q} > 0.\n"
       "q :- sum{1:s} > 0.\n"},
      {"P2",
       "p :- sum{1:p} > 0.\n"
       "p :- sum{1:p} < 1.\n"},
      {"P3",
       "x1 :- sum{1:y1} < 1.\n"
       "y1 :- sum{1:x1} < 1.\n"
       "x2 :- sum{1:y2} < 1.\n"
       "y2 :- sum{1:x2} < 1.\n"
       "z1 :- sum{1:p} > 0.\n"
       "z2 :- sum{1:p} > 0.\n"
       "p :- sum{1:y1, 2:y2, 2:z1, 3:z2} != 5.\n"
       ":- sum{1:p} < 1.\n"},
      {"P3p",
       "x.\n"
       "x1 :- sum{1:y1} < 1.\n"
       "y1 :- sum{1:x1} < 1.\n"
       "x2 :- sum{1:y2} < 1.\n"
       "y2 :- sum{1:x2} < 1.\n"
       "z1 :- sum{1:p} > 0.\n"
       "z2 :- sum{1:p} > 0.\n"
       "p :- avg{1:y1, 2:y2, 2:z1, 3:z2, -5:x} != 0.\n"
       ":- sum{1:p} < 1.\n"},
      {"P4",
       "o_ab.\n"
       "o_ac.\n"
       "o_bc.\n"
       "c_ab :- sum{80:o_ab} > 50.\n"
       "c_ac :- sum{30:o_ac, 30:c_ab} > 50.\n"
       "c_bc :- sum{30:o_bc, 30:c_ba} > 50.\n"},
      {"P4p",
       "o_ab.\n"
       "o_ac.\n"
       "o_bc.\n"
       "c_ab :- sum{80:o_ab, 10:c_ac} > 50.\n"
       "c_ac :- sum{30:o_ac, 30:c_ab} > 50.\n"
       "c_bc :- sum{30:o_bc, 30:c_ba} > 50.\n"},
      {"P5",
       "x1 :- sum{1:p} > 0.\n"
       "x2 :- sum{1:p} > 0.\n"
       "x3 :- sum{1:p} > 0.\n"
       "p :- sum{2:x1, 2:x2, 3:x3} != 5.\n"},
      {"P5p",
       "x1 :- sum{1:p} > 0.\n"
       "x2 :- sum{1:p} > 0.\n"
       "x3 :- sum{1:p} > 0.\n"
       "p :- sum{2:x1, 2:x2, 3:x3} != 6.\n"},
      {"P6",
       "x1.\n"
       "x2.\n"
       "x3.\n"
       "p :- sum{2:x1, 2:x2, 3:x3, -2:p} = 5.\n"},
      {"P6p",
       "x1.\n"
       "x2.\n"
       "x3.\n"
       "p :- sum{2:x1, 2:x2, 3:x3, -1:p} = 6.\n"},
      {"P7", "p :- sum{1:p} >= 0.\n"},
  };
  return sources;
}

}  // namespace detail

// Bundled example programs. P1..P7 are fixed benchmark programs; the "p"
// suffix marks the primed variant of the same index (e.g. P4p replaces P4's
// first non-fact rule).
inline const std::map<std::string, Program>& corpus() {
  static const std::map<std::string, Program> programs = [] {
    std::map<std::string, Program> out;
    for (const auto& [name, source] : detail::corpus_source_map()) {
      ParseResult r = parse_program(source);
      if (!r.ok())
        throw std::logic_error("bundled program " + name + " failed to parse");
      out.emplace(name, std::move(*r.program));
    }
    return out;
  }();
  return programs;
}

inline const std::map<std::string, std::string>& corpus_sources() {
  return detail::corpus_source_map();
}

inline std::vector<std::string> corpus_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : corpus()) names.push_back(name);
  return names;
}

}  // namespace aggsem
