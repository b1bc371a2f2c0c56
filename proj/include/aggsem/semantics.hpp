#pragma once

// Five answer-set semantics for aggregate programs. FFLP is reduct-based:
// X is an answer set iff X is a subset-minimal model of the reduct. The
// other four (GZ, LPST, MR, DPB) accept X iff X is a model and the least
// fixpoint of the semantics' one-step operator (relative to X) equals X;
// they are defined for non-disjunctive programs only.

#include <cassert>
#include <cstdint>
#include <string>
#include <vector>

#include "core.hpp"
#include "eval.hpp"

namespace aggsem {

enum class SemanticsId { fflp, gz, lpst, mr, dpb };

inline constexpr SemanticsId all_semantics[] = {
    SemanticsId::fflp, SemanticsId::gz, SemanticsId::lpst, SemanticsId::mr,
    SemanticsId::dpb};

inline std::string_view to_string(SemanticsId s) {
  switch (s) {
    case SemanticsId::fflp: return "fflp";
    case SemanticsId::gz: return "gz";
    case SemanticsId::lpst: return "lpst";
    case SemanticsId::mr: return "mr";
    case SemanticsId::dpb: return "dpb";
  }
  return "?";
}

inline std::optional<SemanticsId> semantics_from_string(std::string_view s) {
  for (auto id : all_semantics)
    if (to_string(id) == s) return id;
  return std::nullopt;
}

inline bool uses_operator(SemanticsId s) { return s != SemanticsId::fflp; }

// Iterates of the one-step operator from the empty set. stages[0] is empty.
// When the candidate is a model the stages grow strictly until the final
// pair, which is equal, and converged is true. For non-model candidates a
// fired head may fall outside the candidate, the iterates can leave the
// monotone regime, and the capped iteration may end with converged false.
struct FixpointTrace {
  SemanticsId semantics = SemanticsId::gz;
  Interpretation candidate;
  std::vector<Interpretation> stages;
  bool converged = false;

  const Interpretation& result() const {
    assert(!stages.empty());
    return stages.back();
  }
};

struct CheckVerdict {
  SemanticsId semantics = SemanticsId::fflp;
  Interpretation candidate;
  bool is_model = false;
  bool is_answer_set = false;
  // Rejection witness for fflp: a strictly smaller model of the reduct.
  std::optional<Interpretation> smaller_model;
  // Fixpoint iterations for the operator semantics (also kept on success).
  std::optional<FixpointTrace> trace;
};

inline bool satisfies_body(const Interpretation& x, const Rule& r) {
  for (const auto& a : r.body)
    if (!satisfies(x, a)) return false;
  return true;
}

inline bool is_model(const Interpretation& x, const Program& p) {
  for (const auto& r : p.rules) {
    if (!satisfies_body(x, r)) continue;
    bool head_met = false;
    for (const auto& h : r.head)
      if (x.count(h)) {
        head_met = true;
        break;
      }
    if (!head_met) return false;
  }
  return true;
}

// Rules whose body X satisfies; the declared universe is preserved.
inline Program reduct(const Program& p, const Interpretation& x) {
  Program out;
  out.declared_atoms = p.declared_atoms;
  for (const auto& r : p.rules)
    if (satisfies_body(x, r)) out.rules.push_back(r);
  return out;
}

inline constexpr std::size_t default_enumeration_cap = 20;

namespace detail {

inline std::vector<Atom> sorted_universe(const Program& p) {
  const std::set<Atom> atoms = program_atoms(p);
  return {atoms.begin(), atoms.end()};
}

inline Interpretation from_mask(const std::vector<Atom>& universe,
                                std::uint64_t mask) {
  Interpretation x;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (mask >> i & 1) x.insert(universe[i]);
  return x;
}

inline void require_enumerable(std::size_t n, std::size_t cap,
                               const char* what) {
  if (n > cap)
    throw CapExceededError(std::string(what) + " over a universe of " +
                           std::to_string(n) + " atoms exceeds the cap of " +
                           std::to_string(cap) +
                           " (raise the cap to force exponential work)");
}

}  // namespace detail

// All subset-minimal models over the program universe, in lexicographic
// order of the sorted atom sequences.
inline std::vector<Interpretation> minimal_models(
    const Program& p, std::size_t max_atoms = default_enumeration_cap) {
  const std::vector<Atom> universe = detail::sorted_universe(p);
  detail::require_enumerable(universe.size(), max_atoms,
                             "minimal model enumeration");
  std::vector<std::uint64_t> found;
  // Cardinality-ascending scan: any proper subset of a candidate has been
  // seen already, so candidates not above a found model are minimal.
  std::vector<std::vector<std::uint64_t>> by_size(universe.size() + 1);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << universe.size());
       ++mask)
    by_size[std::size_t(__builtin_popcountll(mask))].push_back(mask);
  for (const auto& layer : by_size)
    for (std::uint64_t mask : layer) {
      bool above = false;
      for (std::uint64_t m : found)
        if ((m & mask) == m) {
          above = true;
          break;
        }
      if (above) continue;
      if (is_model(detail::from_mask(universe, mask), p)) found.push_back(mask);
    }
  std::vector<Interpretation> out;
  out.reserve(found.size());
  for (std::uint64_t mask : found)
    out.push_back(detail::from_mask(universe, mask));
  std::sort(out.begin(), out.end());
  return out;
}

// (y, x)-satisfaction for y <= x. GZ: x satisfies a and y already fixes a's
// atoms to their value in x. LPST: every z between y and x satisfies a.
// MR: x satisfies a and some subset of y does.
inline bool sat_gz(const Interpretation& y, const Interpretation& x,
                   const AggregateExpression& a) {
  return satisfies(x, a) && element_mask(a, y) == element_mask(a, x);
}

// Exhaustive variant without the convexity shortcut; exposed so the
// shortcut's agreement is testable.
inline bool sat_lpst_exhaustive(const Interpretation& y,
                                const Interpretation& x,
                                const AggregateExpression& a) {
  const std::uint64_t base = element_mask(a, y);
  const std::uint64_t free = element_mask(a, x) & ~base;
  std::uint64_t s = free;
  while (true) {
    if (!satisfies_selection(a, base | s)) return false;
    if (s == 0) break;
    s = (s - 1) & free;
  }
  return true;
}

inline bool sat_lpst(const Interpretation& y, const Interpretation& x,
                     const AggregateExpression& a) {
  // For syntactically convex-or-stronger expressions the two endpoints
  // decide the whole interval.
  if (class_implies(classify_syntactic(a), MonotonicityClass::convex))
    return satisfies(y, a) && satisfies(x, a);
  return sat_lpst_exhaustive(y, x, a);
}

inline bool sat_mr(const Interpretation& y, const Interpretation& x,
                   const AggregateExpression& a) {
  if (!satisfies(x, a)) return false;
  std::uint64_t inside = element_mask(a, y);
  std::uint64_t s = inside;
  while (true) {
    if (satisfies_selection(a, s)) return true;
    if (s == 0) break;
    s = (s - 1) & inside;
  }
  return false;
}

namespace detail {

inline bool sat_relation(SemanticsId s, const Interpretation& y,
                         const Interpretation& x,
                         const AggregateExpression& a) {
  switch (s) {
    case SemanticsId::gz: return sat_gz(y, x, a);
    case SemanticsId::lpst: return sat_lpst(y, x, a);
    case SemanticsId::mr: return sat_mr(y, x, a);
    default: assert(false); return false;
  }
}

}  // namespace detail

// One operator application at y relative to candidate x (y <= x). For GZ,
// LPST, and MR: heads of rules whose whole body is (y, x)-satisfied. For
// DPB: the intersection over all z between y and x of the heads derivable
// classically at z; the enumeration stops early only when the running
// intersection is empty, which is exact.
inline Interpretation operator_step(SemanticsId s, const Program& p,
                                    const Interpretation& x,
                                    const Interpretation& y) {
  if (!uses_operator(s))
    throw std::invalid_argument("fflp has no one-step operator");
  if (!is_non_disjunctive(p))
    throw DisjunctiveProgramError(
        "operator semantics are defined for non-disjunctive programs only");
  Interpretation result;
  if (s != SemanticsId::dpb) {
    for (const auto& r : p.rules) {
      if (r.head.empty()) continue;
      bool fires = true;
      for (const auto& a : r.body)
        if (!detail::sat_relation(s, y, x, a)) {
          fires = false;
          break;
        }
      if (fires) result.insert(r.head.begin(), r.head.end());
    }
    return result;
  }
  std::vector<Atom> free;
  for (const auto& atom : x)
    if (!y.count(atom)) free.push_back(atom);
  if (free.size() > 62)
    throw CapExceededError("interval enumeration over " +
                           std::to_string(free.size()) +
                           " free atoms exceeds the supported subset width");
  bool first = true;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << free.size());
       ++mask) {
    Interpretation z = y;
    for (std::size_t i = 0; i < free.size(); ++i)
      if (mask >> i & 1) z.insert(free[i]);
    Interpretation heads;
    for (const auto& r : p.rules)
      if (!r.head.empty() && satisfies_body(z, r))
        heads.insert(r.head.begin(), r.head.end());
    if (first) {
      result = std::move(heads);
      first = false;
    } else {
      Interpretation kept;
      std::set_intersection(result.begin(), result.end(), heads.begin(),
                            heads.end(), std::inserter(kept, kept.begin()));
      result = std::move(kept);
    }
    if (result.empty()) break;
  }
  return result;
}

// Least fixpoint iteration from the empty interpretation. For arguments
// y <= x the operators are monotone in y, and when x is a model every stage
// stays below x, so the sequence is an increasing chain that repeats within
// |atoms| + 1 steps (the equal final pair is recorded). The iteration count
// is capped so non-model candidates terminate too.
inline FixpointTrace least_fixpoint(SemanticsId s, const Program& p,
                                    const Interpretation& x) {
  FixpointTrace trace;
  trace.semantics = s;
  trace.candidate = x;
  trace.stages.push_back({});
  const std::size_t limit = program_atoms(p).size() + 1;
  for (std::size_t i = 0; i <= limit; ++i) {
    Interpretation next = operator_step(s, p, x, trace.stages.back());
    const bool done = next == trace.stages.back();
    trace.stages.push_back(std::move(next));
    if (done) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

inline CheckVerdict check(SemanticsId s, const Program& p,
                          const Interpretation& x) {
  {
    const std::set<Atom> universe = program_atoms(p);
    for (const auto& atom : x)
      if (!universe.count(atom))
        throw std::invalid_argument("atom '" + atom.name +
                                    "' is not part of the program universe");
  }
  CheckVerdict verdict;
  verdict.semantics = s;
  verdict.candidate = x;
  verdict.is_model = is_model(x, p);
  if (s == SemanticsId::fflp) {
    if (!verdict.is_model) return verdict;
    const Program red = reduct(p, x);
    const std::vector<Atom> atoms(x.begin(), x.end());
    if (atoms.size() > 62)
      throw CapExceededError("minimality check over " +
                             std::to_string(atoms.size()) +
                             " atoms exceeds the supported subset width");
    const std::uint64_t full = atoms.empty()
                                   ? 0
                                   : ((std::uint64_t(1) << atoms.size()) - 1);
    for (std::uint64_t mask = 0; mask < full; ++mask) {
      Interpretation candidate = detail::from_mask(atoms, mask);
      if (is_model(candidate, red)) {
        verdict.smaller_model = std::move(candidate);
        return verdict;
      }
    }
    verdict.is_answer_set = true;
    return verdict;
  }
  verdict.trace = least_fixpoint(s, p, x);
  verdict.is_answer_set =
      verdict.is_model && verdict.trace->converged &&
      verdict.trace->result() == x;
  return verdict;
}

// All answer sets over the program universe, lexicographically ordered.
inline std::vector<Interpretation> enumerate_answer_sets(
    SemanticsId s, const Program& p,
    std::size_t max_atoms = default_enumeration_cap) {
  const std::vector<Atom> universe = detail::sorted_universe(p);
  detail::require_enumerable(universe.size(), max_atoms,
                             "answer set enumeration");
  std::vector<Interpretation> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << universe.size());
       ++mask) {
    Interpretation x = detail::from_mask(universe, mask);
    if (check(s, p, x).is_answer_set) out.push_back(std::move(x));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// First answer set in cardinality-then-lexicographic candidate order, so the
// existence decision can stop at the first witness.
inline std::optional<Interpretation> first_answer_set(
    SemanticsId s, const Program& p,
    std::size_t max_atoms = default_enumeration_cap) {
  const std::vector<Atom> universe = detail::sorted_universe(p);
  detail::require_enumerable(universe.size(), max_atoms,
                             "answer set search");
  const std::size_t n = universe.size();
  for (std::size_t k = 0; k <= n; ++k) {
    // Combinations of size k in lexicographic order of the chosen indices.
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      Interpretation x;
      for (std::size_t i : idx) x.insert(universe[i]);
      if (check(s, p, x).is_answer_set) return x;
      // next combination
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (k == 0 && n == 0) break;
  }
  return std::nullopt;
}

}  // namespace aggsem
