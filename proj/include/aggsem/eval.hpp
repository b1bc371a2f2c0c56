#pragma once

// Exact aggregate evaluation, feasible value bounds, satisfiability, and
// monotonicity classification. No floating point anywhere: averages are
// exact rationals and all comparisons cross-multiply.

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "core.hpp"

namespace aggsem {

// Outcome of evaluating an aggregate expression's function over a weight
// multiset. pos_inf/neg_inf arise from min/max over the empty multiset,
// undefined only from avg over the empty multiset. finite_rat keeps a
// positive denominator in lowest terms and only arises from avg.
class AggregateValue {
 public:
  enum class Kind { finite_int, finite_rat, pos_inf, neg_inf, undefined };

  static AggregateValue integer(Int v) {
    AggregateValue out;
    out.kind_ = Kind::finite_int;
    out.int_ = std::move(v);
    return out;
  }
  static AggregateValue rational(const Int& num, const Int& den) {
    assert(den != 0);
    AggregateValue out;
    out.kind_ = Kind::finite_rat;
    out.rat_ = Rat(num, den);  // canonicalizes: den > 0, gcd 1
    return out;
  }
  static AggregateValue positive_infinity() {
    AggregateValue out;
    out.kind_ = Kind::pos_inf;
    return out;
  }
  static AggregateValue negative_infinity() {
    AggregateValue out;
    out.kind_ = Kind::neg_inf;
    return out;
  }
  static AggregateValue undefined() { return AggregateValue{}; }

  Kind kind() const { return kind_; }
  bool is_finite() const {
    return kind_ == Kind::finite_int || kind_ == Kind::finite_rat;
  }
  const Int& as_integer() const {
    assert(kind_ == Kind::finite_int);
    return int_;
  }
  Rat as_rational() const {
    assert(is_finite());
    return kind_ == Kind::finite_int ? Rat(int_) : rat_;
  }

  // Numeric equality: a rational equal to an integer compares equal to it.
  bool operator==(const AggregateValue& other) const {
    if (is_finite() && other.is_finite())
      return as_rational() == other.as_rational();
    return kind_ == other.kind_;
  }

 private:
  Kind kind_ = Kind::undefined;
  Int int_;
  Rat rat_;
};

inline std::string to_string(const AggregateValue& v) {
  switch (v.kind()) {
    case AggregateValue::Kind::finite_int: return v.as_integer().str();
    case AggregateValue::Kind::finite_rat: {
      Rat r = v.as_rational();
      return boost::multiprecision::numerator(r).str() + "/" +
             boost::multiprecision::denominator(r).str();
    }
    case AggregateValue::Kind::pos_inf: return "inf";
    case AggregateValue::Kind::neg_inf: return "-inf";
    case AggregateValue::Kind::undefined: return "undef";
  }
  return "?";
}

// `value op bound` for an integer bound. Infinities satisfy exactly the
// operators consistent with the order extension (pos_inf: >=, >, !=;
// neg_inf: <, <=, !=); the undefined value satisfies nothing.
inline bool compare(const AggregateValue& value, ComparisonOp op,
                    const Int& bound) {
  switch (value.kind()) {
    case AggregateValue::Kind::undefined:
      return false;
    case AggregateValue::Kind::pos_inf:
      return op == ComparisonOp::ge || op == ComparisonOp::gt ||
             op == ComparisonOp::ne;
    case AggregateValue::Kind::neg_inf:
      return op == ComparisonOp::lt || op == ComparisonOp::le ||
             op == ComparisonOp::ne;
    case AggregateValue::Kind::finite_int:
    case AggregateValue::Kind::finite_rat:
      break;
  }
  // Cross-multiplied comparison: num op bound*den with den > 0.
  Int num, rhs;
  if (value.kind() == AggregateValue::Kind::finite_int) {
    num = value.as_integer();
    rhs = bound;
  } else {
    Rat r = value.as_rational();
    num = boost::multiprecision::numerator(r);
    rhs = bound * boost::multiprecision::denominator(r);
  }
  switch (op) {
    case ComparisonOp::lt: return num < rhs;
    case ComparisonOp::le: return num <= rhs;
    case ComparisonOp::ge: return num >= rhs;
    case ComparisonOp::gt: return num > rhs;
    case ComparisonOp::eq: return num == rhs;
    case ComparisonOp::ne: return num != rhs;
  }
  return false;
}

// Total order over defined values with neg_inf < finite < pos_inf.
inline bool value_le(const AggregateValue& a, const AggregateValue& b) {
  assert(a.kind() != AggregateValue::Kind::undefined);
  assert(b.kind() != AggregateValue::Kind::undefined);
  if (a.kind() == AggregateValue::Kind::neg_inf) return true;
  if (b.kind() == AggregateValue::Kind::pos_inf) return true;
  if (a.kind() == AggregateValue::Kind::pos_inf)
    return b.kind() == AggregateValue::Kind::pos_inf;
  if (b.kind() == AggregateValue::Kind::neg_inf) return false;
  return a.as_rational() <= b.as_rational();
}

// Weights of the elements whose atom is in x, in element order.
inline std::vector<Int> weight_multiset(const AggregateExpression& a,
                                        const Interpretation& x) {
  std::vector<Int> weights;
  for (const auto& e : a.elements)
    if (x.count(e.atom)) weights.push_back(e.weight);
  return weights;
}

namespace detail {

inline AggregateValue evaluate_weights(AggregateFunction function,
                                       const std::vector<Int>& weights) {
  switch (function) {
    case AggregateFunction::sum: {
      Int total = 0;
      for (const auto& w : weights) total += w;
      return AggregateValue::integer(total);
    }
    case AggregateFunction::times: {
      Int product = 1;
      for (const auto& w : weights) product *= w;
      return AggregateValue::integer(product);
    }
    case AggregateFunction::avg: {
      if (weights.empty()) return AggregateValue::undefined();
      Int total = 0;
      for (const auto& w : weights) total += w;
      return AggregateValue::rational(total, Int(weights.size()));
    }
    case AggregateFunction::min: {
      if (weights.empty()) return AggregateValue::positive_infinity();
      Int best = weights[0];
      for (const auto& w : weights)
        if (w < best) best = w;
      return AggregateValue::integer(best);
    }
    case AggregateFunction::max: {
      if (weights.empty()) return AggregateValue::negative_infinity();
      Int best = weights[0];
      for (const auto& w : weights)
        if (w > best) best = w;
      return AggregateValue::integer(best);
    }
  }
  return AggregateValue::undefined();
}

}  // namespace detail

inline AggregateValue evaluate(const AggregateExpression& a,
                               const Interpretation& x) {
  return detail::evaluate_weights(a.function, weight_multiset(a, x));
}

inline bool satisfies(const Interpretation& x, const AggregateExpression& a) {
  return compare(evaluate(a, x), a.op, a.bound);
}

// Mask-indexed variants: bit i selects a.elements[i]. Because element atoms
// are distinct, element masks are in bijection with subsets of the
// expression's atoms.
inline constexpr std::size_t max_mask_elements = 63;

namespace detail {

inline void require_mask_width(const AggregateExpression& a,
                               const char* what) {
  if (a.elements.size() > max_mask_elements)
    throw CapExceededError(std::string(what) + " over " +
                           std::to_string(a.elements.size()) +
                           " elements exceeds the supported subset width of " +
                           std::to_string(max_mask_elements));
}

}  // namespace detail

inline AggregateValue evaluate_selection(const AggregateExpression& a,
                                         std::uint64_t mask) {
  detail::require_mask_width(a, "selection evaluation");
  std::vector<Int> weights;
  for (std::size_t i = 0; i < a.elements.size(); ++i)
    if (mask >> i & 1) weights.push_back(a.elements[i].weight);
  return detail::evaluate_weights(a.function, weights);
}

inline bool satisfies_selection(const AggregateExpression& a,
                                std::uint64_t mask) {
  return compare(evaluate_selection(a, mask), a.op, a.bound);
}

// Elements of a whose atom is in x, as a mask.
inline std::uint64_t element_mask(const AggregateExpression& a,
                                  const Interpretation& x) {
  detail::require_mask_width(a, "element selection");
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < a.elements.size(); ++i)
    if (x.count(a.elements[i].atom)) mask |= std::uint64_t(1) << i;
  return mask;
}

// Extreme products over non-zero weights and zero weights used to derive
// times bounds; greatest_negative is absent when no weight is negative.
struct TimesBoundsTrace {
  Int pi_pm;
  Int pi_0;
  std::optional<Int> greatest_negative;

  bool operator==(const TimesBoundsTrace&) const = default;
};

// Feasible evaluation range: every subset of the expression's atoms
// evaluates into [lower, upper], and both ends are attained (infinities by
// the empty subset). lower = upper = undefined exactly for avg with no
// elements.
struct Bounds {
  AggregateValue lower;
  AggregateValue upper;
  std::optional<TimesBoundsTrace> times_trace;
};

inline Bounds feasible_bounds(const AggregateExpression& a) {
  switch (a.function) {
    case AggregateFunction::sum: {
      Int lo = 0, hi = 0;
      for (const auto& e : a.elements) {
        if (e.weight < 0) lo += e.weight;
        if (e.weight > 0) hi += e.weight;
      }
      return {AggregateValue::integer(lo), AggregateValue::integer(hi),
              std::nullopt};
    }
    case AggregateFunction::times: {
      TimesBoundsTrace trace{Int(1), Int(1), std::nullopt};
      for (const auto& e : a.elements) {
        if (e.weight == 0) {
          trace.pi_0 = 0;
        } else {
          trace.pi_pm *= e.weight;
          if (e.weight < 0 &&
              (!trace.greatest_negative || e.weight > *trace.greatest_negative))
            trace.greatest_negative = e.weight;
        }
      }
      Int lo, hi;
      if (trace.pi_pm < 0) {
        lo = trace.pi_pm;
        hi = trace.pi_pm / *trace.greatest_negative;
      } else if (trace.greatest_negative) {
        lo = trace.pi_pm / *trace.greatest_negative;
        hi = trace.pi_pm;
      } else {
        lo = trace.pi_0;
        hi = trace.pi_pm;
      }
      return {AggregateValue::integer(lo), AggregateValue::integer(hi),
              std::move(trace)};
    }
    case AggregateFunction::avg: {
      if (a.elements.empty())
        return {AggregateValue::undefined(), AggregateValue::undefined(),
                std::nullopt};
      Int lo = a.elements[0].weight, hi = a.elements[0].weight;
      for (const auto& e : a.elements) {
        if (e.weight < lo) lo = e.weight;
        if (e.weight > hi) hi = e.weight;
      }
      return {AggregateValue::integer(lo), AggregateValue::integer(hi),
              std::nullopt};
    }
    case AggregateFunction::min: {
      if (a.elements.empty())
        return {AggregateValue::positive_infinity(),
                AggregateValue::positive_infinity(), std::nullopt};
      Int lo = a.elements[0].weight;
      for (const auto& e : a.elements)
        if (e.weight < lo) lo = e.weight;
      return {AggregateValue::integer(lo),
              AggregateValue::positive_infinity(), std::nullopt};
    }
    case AggregateFunction::max: {
      if (a.elements.empty())
        return {AggregateValue::negative_infinity(),
                AggregateValue::negative_infinity(), std::nullopt};
      Int hi = a.elements[0].weight;
      for (const auto& e : a.elements)
        if (e.weight > hi) hi = e.weight;
      return {AggregateValue::negative_infinity(),
              AggregateValue::integer(hi), std::nullopt};
    }
  }
  return {AggregateValue::undefined(), AggregateValue::undefined(),
          std::nullopt};
}

namespace detail {

// Subset search for `fn{...} = w0` with fn in {sum, times, avg}: Gray-code
// order so each step toggles one element of the running state. Exponential
// by design (subset sum/product).
inline bool equality_subset_search(const AggregateExpression& a) {
  require_mask_width(a, "equality subset search");
  const std::size_t n = a.elements.size();
  const Int& w0 = a.bound;

  Int sum = 0;        // sum of selected weights
  Int prod_nz = 1;    // product of selected non-zero weights
  int zeros = 0;      // selected zero weights
  std::size_t count = 0;

  auto state_matches = [&]() {
    switch (a.function) {
      case AggregateFunction::sum:
        return sum == w0;
      case AggregateFunction::times:
        return zeros > 0 ? w0 == 0 : prod_nz == w0;
      case AggregateFunction::avg:
        return count > 0 && sum == w0 * Int(count);
      default:
        return false;
    }
  };

  if (state_matches()) return true;  // empty selection
  std::uint64_t gray = 0;
  for (std::uint64_t i = 1; i < (std::uint64_t(1) << n); ++i) {
    const std::uint64_t next = i ^ (i >> 1);
    const std::uint64_t bit = gray ^ next;
    std::size_t idx = 0;
    while (!(bit >> idx & 1)) ++idx;
    const Int& w = a.elements[idx].weight;
    const bool added = next & bit;
    if (added) {
      sum += w;
      ++count;
      if (w == 0)
        ++zeros;
      else
        prod_nz *= w;
    } else {
      sum -= w;
      --count;
      if (w == 0)
        --zeros;
      else
        prod_nz /= w;
    }
    gray = next;
    if (state_matches()) return true;
  }
  return false;
}

}  // namespace detail

// Whether some interpretation satisfies the expression. Decided from the
// feasible bounds for the order operators and !=; for = on min/max by
// single-weight membership, and on sum/times/avg by subset search.
inline bool is_satisfiable(const AggregateExpression& a) {
  const Bounds b = feasible_bounds(a);
  if (b.lower.kind() == AggregateValue::Kind::undefined)
    return false;  // avg over no elements never holds
  switch (a.op) {
    case ComparisonOp::lt:
      return compare(b.lower, ComparisonOp::lt, a.bound);
    case ComparisonOp::le:
      return compare(b.lower, ComparisonOp::le, a.bound);
    case ComparisonOp::ge:
      return compare(b.upper, ComparisonOp::ge, a.bound);
    case ComparisonOp::gt:
      return compare(b.upper, ComparisonOp::gt, a.bound);
    case ComparisonOp::ne:
      return compare(b.lower, ComparisonOp::ne, a.bound) ||
             compare(b.upper, ComparisonOp::ne, a.bound);
    case ComparisonOp::eq:
      break;
  }
  if (a.function == AggregateFunction::min ||
      a.function == AggregateFunction::max) {
    for (const auto& e : a.elements)
      if (e.weight == a.bound) return true;
    return false;
  }
  return detail::equality_subset_search(a);
}

enum class MonotonicityClass {
  monotone,
  anti_monotone,
  constant,
  convex,
  non_convex
};

inline std::string_view to_string(MonotonicityClass c) {
  switch (c) {
    case MonotonicityClass::monotone: return "monotone";
    case MonotonicityClass::anti_monotone: return "anti-monotone";
    case MonotonicityClass::constant: return "constant";
    case MonotonicityClass::convex: return "convex";
    case MonotonicityClass::non_convex: return "non-convex";
  }
  return "?";
}

inline std::optional<MonotonicityClass> monotonicity_from_string(
    std::string_view s) {
  for (auto c :
       {MonotonicityClass::monotone, MonotonicityClass::anti_monotone,
        MonotonicityClass::constant, MonotonicityClass::convex,
        MonotonicityClass::non_convex})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

// Whether membership in `c` guarantees the property named by `property`
// (constant counts as monotone and anti-monotone; all three imply convex).
inline bool class_implies(MonotonicityClass c, MonotonicityClass property) {
  if (c == property) return true;
  switch (property) {
    case MonotonicityClass::monotone:
    case MonotonicityClass::anti_monotone:
      return c == MonotonicityClass::constant;
    case MonotonicityClass::convex:
      return c == MonotonicityClass::constant ||
             c == MonotonicityClass::monotone ||
             c == MonotonicityClass::anti_monotone;
    case MonotonicityClass::constant:
      return false;
    case MonotonicityClass::non_convex:
      return true;
  }
  return false;
}

// Sign-restriction family table. The + (resp. -) family requires every
// weight and the bound to be strictly positive (resp. negative); a zero
// weight or bound falls back to the unrestricted family. Labels are sound
// guarantees; the non_convex label only means "family contains non-convex
// members".
inline MonotonicityClass classify_syntactic(const AggregateExpression& a) {
  bool all_pos = a.bound > 0, all_neg = a.bound < 0;
  for (const auto& e : a.elements) {
    if (e.weight <= 0) all_pos = false;
    if (e.weight >= 0) all_neg = false;
  }
  auto by_op = [&](MonotonicityClass on_less) {
    MonotonicityClass on_greater = on_less == MonotonicityClass::monotone
                                       ? MonotonicityClass::anti_monotone
                                       : MonotonicityClass::monotone;
    switch (a.op) {
      case ComparisonOp::lt:
      case ComparisonOp::le: return on_less;
      case ComparisonOp::ge:
      case ComparisonOp::gt: return on_greater;
      case ComparisonOp::eq: return MonotonicityClass::convex;
      case ComparisonOp::ne: return MonotonicityClass::non_convex;
    }
    return MonotonicityClass::non_convex;
  };
  switch (a.function) {
    case AggregateFunction::sum:
      if (all_pos) return by_op(MonotonicityClass::anti_monotone);
      if (all_neg) return by_op(MonotonicityClass::monotone);
      return MonotonicityClass::non_convex;
    case AggregateFunction::times:
      if (all_pos) return by_op(MonotonicityClass::anti_monotone);
      return MonotonicityClass::non_convex;
    case AggregateFunction::avg:
      return MonotonicityClass::non_convex;
    case AggregateFunction::min:
      return by_op(MonotonicityClass::monotone);
    case AggregateFunction::max:
      return by_op(MonotonicityClass::anti_monotone);
  }
  return MonotonicityClass::non_convex;
}

inline constexpr std::size_t default_classify_cap = 16;

// Exact classification by enumerating all subsets of the expression's atoms.
// Returns the most specific label: constant (both closures hold), monotone
// (closed under supersets), anti-monotone (closed under subsets), convex
// (closed under intermediate sets), else non_convex.
inline MonotonicityClass classify_exact(
    const AggregateExpression& a, std::size_t max_atoms = default_classify_cap) {
  const std::size_t n = a.elements.size();
  if (n > max_atoms)
    throw CapExceededError(
        "exact classification over " + std::to_string(n) +
        " atoms exceeds the cap of " + std::to_string(max_atoms));
  const std::size_t size = std::size_t(1) << n;
  std::vector<char> sat(size);
  for (std::uint64_t mask = 0; mask < size; ++mask)
    sat[mask] = satisfies_selection(a, mask);

  bool monotone = true, anti_monotone = true;
  for (std::uint64_t mask = 0; mask < size && (monotone || anti_monotone);
       ++mask) {
    if (!sat[mask]) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t with = mask | (std::uint64_t(1) << i);
      if (with == mask) continue;
      if (!sat[with]) monotone = false;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t bit = std::uint64_t(1) << i;
      if ((mask & bit) && !sat[mask ^ bit]) anti_monotone = false;
    }
  }
  if (monotone && anti_monotone) return MonotonicityClass::constant;
  if (monotone) return MonotonicityClass::monotone;
  if (anti_monotone) return MonotonicityClass::anti_monotone;

  // reaches_down/up[mask]: some satisfied subset/superset exists.
  std::vector<char> down(sat), up(sat);
  for (std::size_t i = 0; i < n; ++i)
    for (std::uint64_t mask = 0; mask < size; ++mask) {
      const std::uint64_t bit = std::uint64_t(1) << i;
      if (mask & bit) {
        if (down[mask ^ bit]) down[mask] = true;
      } else {
        if (up[mask | bit]) up[mask] = true;
      }
    }
  for (std::uint64_t mask = 0; mask < size; ++mask)
    if (!sat[mask] && down[mask] && up[mask])
      return MonotonicityClass::non_convex;
  return MonotonicityClass::convex;
}

}  // namespace aggsem
