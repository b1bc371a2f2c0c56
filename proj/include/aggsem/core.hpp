#pragma once

// Propositional programs whose rule bodies are aggregate expressions
// `fn{w1:p1, ..., wn:pn} op w0` over exact unbounded integer weights.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace aggsem {

inline constexpr std::string_view version = "0.1.0";

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Thrown when an operation would exceed an enumeration cap; callers may retry
// with a larger explicit cap.
class CapExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an operator-based semantics is applied to a disjunctive program.
class DisjunctiveProgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Atom {
  std::string name;

  auto operator<=>(const Atom&) const = default;
};

// Valid atom names match [a-z][A-Za-z0-9_]*; the five aggregate function
// names are reserved.
inline bool is_valid_atom_name(std::string_view name) {
  if (name.empty() || name[0] < 'a' || name[0] > 'z') return false;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return name != "sum" && name != "times" && name != "avg" && name != "min" &&
         name != "max";
}

enum class AggregateFunction { sum, times, avg, min, max };
enum class ComparisonOp { lt, le, ge, gt, eq, ne };

inline constexpr AggregateFunction all_functions[] = {
    AggregateFunction::sum, AggregateFunction::times, AggregateFunction::avg,
    AggregateFunction::min, AggregateFunction::max};
inline constexpr ComparisonOp all_ops[] = {ComparisonOp::lt, ComparisonOp::le,
                                           ComparisonOp::ge, ComparisonOp::gt,
                                           ComparisonOp::eq, ComparisonOp::ne};

inline std::string_view to_string(AggregateFunction f) {
  switch (f) {
    case AggregateFunction::sum: return "sum";
    case AggregateFunction::times: return "times";
    case AggregateFunction::avg: return "avg";
    case AggregateFunction::min: return "min";
    case AggregateFunction::max: return "max";
  }
  return "?";
}

inline std::string_view to_string(ComparisonOp op) {
  switch (op) {
    case ComparisonOp::lt: return "<";
    case ComparisonOp::le: return "<=";
    case ComparisonOp::ge: return ">=";
    case ComparisonOp::gt: return ">";
    case ComparisonOp::eq: return "=";
    case ComparisonOp::ne: return "!=";
  }
  return "?";
}

inline std::optional<AggregateFunction> function_from_string(
    std::string_view s) {
  for (auto f : all_functions)
    if (to_string(f) == s) return f;
  return std::nullopt;
}

inline std::optional<ComparisonOp> op_from_string(std::string_view s) {
  for (auto op : all_ops)
    if (to_string(op) == s) return op;
  return std::nullopt;
}

struct WeightedAtom {
  Int weight;
  Atom atom;

  bool operator==(const WeightedAtom&) const = default;
};

// Invariant (enforced by make_aggregate, the parser, and validate()): the
// element atoms are pairwise distinct, so a subset of atoms picks a
// well-defined sub-multiset of weights.
struct AggregateExpression {
  AggregateFunction function = AggregateFunction::sum;
  std::vector<WeightedAtom> elements;
  ComparisonOp op = ComparisonOp::ge;
  Int bound = 0;

  bool operator==(const AggregateExpression&) const = default;
};

// head holds a disjunction (kept sorted and deduplicated by make_rule and the
// parser); empty head = constraint, empty body = fact.
struct Rule {
  std::vector<Atom> head;
  std::vector<AggregateExpression> body;

  bool is_constraint() const { return head.empty(); }
  bool is_fact() const { return body.empty() && !head.empty(); }

  bool operator==(const Rule&) const = default;
};

struct Program {
  std::vector<Rule> rules;
  std::set<Atom> declared_atoms;

  bool operator==(const Program&) const = default;
};

using Interpretation = std::set<Atom>;

struct Diagnostic {
  enum class Severity { error, warning };
  Severity severity = Severity::error;
  std::string message;
  std::optional<std::size_t> rule_index;
};

inline AggregateExpression make_aggregate(AggregateFunction function,
                                          std::vector<WeightedAtom> elements,
                                          ComparisonOp op, Int bound) {
  std::set<Atom> seen;
  for (const auto& e : elements)
    if (!seen.insert(e.atom).second)
      throw std::invalid_argument("duplicate atom '" + e.atom.name +
                                  "' among aggregate elements");
  return AggregateExpression{function, std::move(elements), op,
                             std::move(bound)};
}

inline Rule make_rule(std::vector<Atom> head,
                      std::vector<AggregateExpression> body) {
  std::sort(head.begin(), head.end());
  head.erase(std::unique(head.begin(), head.end()), head.end());
  return Rule{std::move(head), std::move(body)};
}

// Atoms occurring in the expression's elements, sorted, duplicate-free.
inline std::vector<Atom> expression_atoms(const AggregateExpression& a) {
  std::vector<Atom> atoms;
  atoms.reserve(a.elements.size());
  for (const auto& e : a.elements) atoms.push_back(e.atom);
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

// Universe of a program: declared atoms plus every atom occurring in a head
// or body.
inline std::set<Atom> program_atoms(const Program& p) {
  std::set<Atom> atoms = p.declared_atoms;
  for (const auto& r : p.rules) {
    atoms.insert(r.head.begin(), r.head.end());
    for (const auto& a : r.body)
      for (const auto& e : a.elements) atoms.insert(e.atom);
  }
  return atoms;
}

inline bool is_non_disjunctive(const Program& p) {
  return std::all_of(p.rules.begin(), p.rules.end(),
                     [](const Rule& r) { return r.head.size() <= 1; });
}

// Structural diagnostics: invalid atom names and duplicate atoms within one
// aggregate are errors; duplicate rules are warnings.
inline std::vector<Diagnostic> validate(const Program& p) {
  std::vector<Diagnostic> out;
  auto check_name = [&](const Atom& atom, std::size_t rule_index) {
    if (!is_valid_atom_name(atom.name))
      out.push_back({Diagnostic::Severity::error,
                     "invalid atom name '" + atom.name + "'", rule_index});
  };
  for (std::size_t i = 0; i < p.rules.size(); ++i) {
    const Rule& r = p.rules[i];
    for (const auto& h : r.head) check_name(h, i);
    for (const auto& a : r.body) {
      std::set<Atom> seen;
      for (const auto& e : a.elements) {
        check_name(e.atom, i);
        if (!seen.insert(e.atom).second)
          out.push_back({Diagnostic::Severity::error,
                         "duplicate atom '" + e.atom.name +
                             "' among aggregate elements",
                         i});
      }
    }
    for (std::size_t j = 0; j < i; ++j)
      if (p.rules[j] == r) {
        out.push_back(
            {Diagnostic::Severity::warning, "duplicate rule", i});
        break;
      }
  }
  for (const auto& atom : p.declared_atoms)
    if (!is_valid_atom_name(atom.name))
      out.push_back({Diagnostic::Severity::error,
                     "invalid atom name '" + atom.name + "'", std::nullopt});
  return out;
}

inline std::string format_interpretation(const Interpretation& x) {
  std::string out = "{";
  bool first = true;
  for (const auto& atom : x) {
    if (!first) out += ",";
    out += atom.name;
    first = false;
  }
  out += "}";
  return out;
}

}  // namespace aggsem
