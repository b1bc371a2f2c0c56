#pragma once

// Structural analysis (atom dependency graph, acyclicity, aggregate
// stratification), a deterministic random program generator, and the
// differential harness that checks the inclusion relationships between the
// five semantics.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "eval.hpp"
#include "semantics.hpp"

namespace aggsem {

class GeneratorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Edge (p, q) when q occurs in a body aggregate of a rule with head atom p.
struct DependencyGraph {
  std::set<Atom> vertices;
  std::set<std::pair<Atom, Atom>> edges;

  bool operator==(const DependencyGraph&) const = default;
};

inline DependencyGraph dependency_graph(const Program& p) {
  DependencyGraph g;
  g.vertices = program_atoms(p);
  for (const auto& r : p.rules)
    for (const auto& h : r.head)
      for (const auto& a : r.body)
        for (const auto& e : a.elements) g.edges.insert({h, e.atom});
  return g;
}

namespace detail {

// Tarjan over the atom-indexed adjacency; returns the component index per
// vertex position (components in reverse topological order).
inline std::vector<int> scc_components(const std::vector<Atom>& vertices,
                                       const DependencyGraph& g) {
  std::map<Atom, int> index_of;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    index_of[vertices[i]] = int(i);
  std::vector<std::vector<int>> adj(vertices.size());
  for (const auto& [from, to] : g.edges)
    adj[index_of.at(from)].push_back(index_of.at(to));

  const int n = int(vertices.size());
  std::vector<int> order(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_order = 0, next_comp = 0;

  // Iterative DFS; frame = (vertex, next adjacency position).
  for (int root = 0; root < n; ++root) {
    if (order[root] != -1) continue;
    std::vector<std::pair<int, std::size_t>> frames{{root, 0}};
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      if (pos == 0) {
        order[v] = low[v] = next_order++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      if (pos < adj[v].size()) {
        const int w = adj[v][pos++];
        if (order[w] == -1) {
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      if (low[v] == order[v]) {
        while (true) {
          const int w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = next_comp;
          if (w == v) break;
        }
        ++next_comp;
      }
      frames.pop_back();
      if (!frames.empty())
        low[frames.back().first] =
            std::min(low[frames.back().first], low[v]);
    }
  }
  return comp;
}

}  // namespace detail

inline bool is_acyclic(const DependencyGraph& g) {
  for (const auto& [from, to] : g.edges)
    if (from == to) return false;
  const std::vector<Atom> vertices(g.vertices.begin(), g.vertices.end());
  const std::vector<int> comp = detail::scc_components(vertices, g);
  std::set<int> seen(comp.begin(), comp.end());
  return seen.size() == vertices.size();
}

// True when no atom inside a non-empty body aggregate shares a dependency
// cycle (an SCC of the atom graph) with a head atom of the same rule.
inline bool is_aggregate_stratified(const Program& p) {
  const DependencyGraph g = dependency_graph(p);
  const std::vector<Atom> vertices(g.vertices.begin(), g.vertices.end());
  const std::vector<int> comp = detail::scc_components(vertices, g);
  std::map<Atom, int> comp_of;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    comp_of[vertices[i]] = comp[i];
  for (const auto& r : p.rules)
    for (const auto& h : r.head)
      for (const auto& a : r.body)
        for (const auto& e : a.elements)
          if (comp_of.at(e.atom) == comp_of.at(h)) return false;
  return true;
}

inline std::string to_dot(const DependencyGraph& g) {
  std::string out = "digraph dependencies {\n";
  for (const auto& v : g.vertices) out += "  " + v.name + ";\n";
  for (const auto& [from, to] : g.edges)
    out += "  " + from.name + " -> " + to.name + ";\n";
  out += "}\n";
  return out;
}

struct GeneratorConfig {
  int atom_count = 4;       // 1..8
  int rule_count = 4;       // 0..10
  int max_body = 2;         // 0..3 aggregate expressions per rule
  int max_elements = 3;     // 0..4 elements per expression
  long long weight_min = -3;
  long long weight_max = 3;  // also used for bounds
  std::vector<AggregateFunction> functions{all_functions,
                                           all_functions + 5};
  std::vector<ComparisonOp> ops{all_ops, all_ops + 6};
  // When set, every generated expression's syntactic class must guarantee
  // this property (constant never occurs syntactically; monotone under a
  // convex filter is fine).
  std::optional<MonotonicityClass> class_filter;
  bool allow_constraints = true;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic bounded sampling over a fixed engine; avoids the
// implementation-defined std distributions.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = seed;
    splitmix64(state);
    state ^= 0x632be59bd9b4e019ULL * (stream + 1);
    engine_.seed(splitmix64(state));
  }

  std::uint64_t below(std::uint64_t n) {
    // rejection sampling keeps the draw uniform
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  long long range(long long lo, long long hi) {
    return lo + (long long)below(std::uint64_t(hi - lo + 1));
  }

  bool chance(unsigned numerator, unsigned denominator) {
    return below(denominator) < numerator;
  }

 private:
  std::mt19937_64 engine_;
};

inline void check_generator_config(const GeneratorConfig& cfg) {
  auto bad = [](const std::string& message) {
    throw std::invalid_argument("generator config: " + message);
  };
  if (cfg.atom_count < 1 || cfg.atom_count > 8)
    bad("atom_count must be in 1..8");
  if (cfg.rule_count < 0 || cfg.rule_count > 10)
    bad("rule_count must be in 0..10");
  if (cfg.max_body < 0 || cfg.max_body > 3) bad("max_body must be in 0..3");
  if (cfg.max_elements < 0 || cfg.max_elements > 4)
    bad("max_elements must be in 0..4");
  if (cfg.weight_min > cfg.weight_max) bad("empty weight range");
  if (cfg.functions.empty()) bad("no aggregate functions allowed");
  if (cfg.ops.empty()) bad("no comparison operators allowed");
}

}  // namespace detail

// Deterministic: the same (config, index) always yields the same program.
// Generated programs are non-disjunctive; all configured atoms are declared,
// so the universe does not depend on which atoms happen to occur.
inline Program generate_program(const GeneratorConfig& cfg,
                                std::uint64_t index) {
  detail::check_generator_config(cfg);
  detail::Rng rng(cfg.seed, index);
  static const char* names[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  std::vector<Atom> atoms;
  for (int i = 0; i < cfg.atom_count; ++i) atoms.push_back(Atom{names[i]});

  auto sample_expression = [&]() -> AggregateExpression {
    // Three in ten hit one of the simple threshold forms that drive
    // recursion through rules.
    if (rng.chance(3, 10)) {
      const Atom& atom = atoms[rng.below(atoms.size())];
      if (rng.chance(1, 2))
        return make_aggregate(AggregateFunction::sum, {{Int(1), atom}},
                              ComparisonOp::gt, Int(0));
      return make_aggregate(AggregateFunction::sum, {{Int(1), atom}},
                            ComparisonOp::lt, Int(1));
    }
    const AggregateFunction f = cfg.functions[rng.below(cfg.functions.size())];
    const ComparisonOp op = cfg.ops[rng.below(cfg.ops.size())];
    const std::size_t count = rng.below(std::uint64_t(cfg.max_elements) + 1);
    std::vector<std::size_t> pool(atoms.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    std::vector<WeightedAtom> elements;
    for (std::size_t i = 0; i < count && !pool.empty(); ++i) {
      const std::size_t pick = rng.below(pool.size());
      elements.push_back(
          {Int(rng.range(cfg.weight_min, cfg.weight_max)), atoms[pool[pick]]});
      pool.erase(pool.begin() + long(pick));
    }
    return make_aggregate(f, std::move(elements), op,
                          Int(rng.range(cfg.weight_min, cfg.weight_max)));
  };

  auto admissible = [&](const AggregateExpression& a) {
    return !cfg.class_filter ||
           class_implies(classify_syntactic(a), *cfg.class_filter);
  };

  Program p;
  p.declared_atoms.insert(atoms.begin(), atoms.end());
  for (int r = 0; r < cfg.rule_count; ++r) {
    std::vector<Atom> head;
    if (!cfg.allow_constraints || !rng.chance(1, 8))
      head.push_back(atoms[rng.below(atoms.size())]);
    const std::size_t body_len = rng.below(std::uint64_t(cfg.max_body) + 1);
    std::vector<AggregateExpression> body;
    for (std::size_t i = 0; i < body_len; ++i) {
      AggregateExpression a;
      bool found = false;
      for (int attempt = 0; attempt < 10000; ++attempt) {
        a = sample_expression();
        if (admissible(a)) {
          found = true;
          break;
        }
      }
      if (!found)
        throw GeneratorError(
            "class filter cannot be met by the configured functions, "
            "operators, and weight range");
      body.push_back(std::move(a));
    }
    p.rules.push_back(make_rule(std::move(head), std::move(body)));
  }
  return p;
}

struct RelationViolation {
  std::uint64_t program_index = 0;
  Program program;
  Interpretation witness;  // answer set under `from` missing under `to`
};

struct RelationArc {
  SemanticsId from = SemanticsId::gz;
  SemanticsId to = SemanticsId::lpst;
  // The restriction class licensing the arc (arbitrary when unconditional).
  std::optional<MonotonicityClass> restriction;
  std::vector<RelationViolation> violations;
};

struct RelationReport {
  std::uint64_t programs_tested = 0;
  std::uint64_t refusals = 0;
  std::vector<RelationArc> arcs;

  bool clean() const {
    for (const auto& arc : arcs)
      if (!arc.violations.empty()) return false;
    return true;
  }
};

// Arcs checked for a run: the unconditional ones, plus the convex
// strengthening under a convex-or-stronger filter, plus the operator
// collapse under a homogeneous monotone or anti-monotone filter.
inline std::vector<RelationArc> relation_arcs_for(
    const std::optional<MonotonicityClass>& filter) {
  std::vector<RelationArc> arcs;
  arcs.push_back({SemanticsId::gz, SemanticsId::lpst, std::nullopt, {}});
  arcs.push_back({SemanticsId::lpst, SemanticsId::dpb, std::nullopt, {}});
  arcs.push_back({SemanticsId::lpst, SemanticsId::fflp, std::nullopt, {}});
  arcs.push_back({SemanticsId::fflp, SemanticsId::mr, std::nullopt, {}});
  if (filter &&
      (*filter == MonotonicityClass::convex ||
       *filter == MonotonicityClass::monotone ||
       *filter == MonotonicityClass::anti_monotone))
    arcs.push_back({SemanticsId::mr, SemanticsId::lpst,
                    MonotonicityClass::convex, {}});
  if (filter && (*filter == MonotonicityClass::monotone ||
                 *filter == MonotonicityClass::anti_monotone))
    arcs.push_back({SemanticsId::dpb, SemanticsId::lpst, *filter, {}});
  return arcs;
}

inline RelationReport verify_relationships(const GeneratorConfig& cfg,
                                           std::uint64_t count) {
  RelationReport report;
  report.arcs = relation_arcs_for(cfg.class_filter);
  for (std::uint64_t i = 0; i < count; ++i) {
    const Program p = generate_program(cfg, i);
    std::map<SemanticsId, std::vector<Interpretation>> sets;
    try {
      for (auto s : all_semantics) sets[s] = enumerate_answer_sets(s, p);
    } catch (const CapExceededError&) {
      ++report.refusals;
      continue;
    } catch (const DisjunctiveProgramError&) {
      ++report.refusals;
      continue;
    }
    ++report.programs_tested;
    for (auto& arc : report.arcs) {
      const auto& from = sets[arc.from];
      const auto& to = sets[arc.to];
      for (const auto& x : from)
        if (!std::binary_search(to.begin(), to.end(), x))
          arc.violations.push_back({i, p, x});
    }
  }
  return report;
}

struct DivergenceReport {
  // Answer sets per semantics; unset when enumeration was refused.
  std::map<SemanticsId, std::vector<Interpretation>> answer_sets;
  std::map<SemanticsId, std::string> refusals;

  // Answer sets under `from` that are missing under `to`; empty when either
  // side was refused.
  std::vector<Interpretation> cell(SemanticsId from, SemanticsId to) const {
    auto f = answer_sets.find(from);
    auto t = answer_sets.find(to);
    if (f == answer_sets.end() || t == answer_sets.end()) return {};
    std::vector<Interpretation> out;
    for (const auto& x : f->second)
      if (!std::binary_search(t->second.begin(), t->second.end(), x))
        out.push_back(x);
    return out;
  }
};

inline DivergenceReport divergence_witnesses(
    const Program& p, std::size_t max_atoms = default_enumeration_cap) {
  DivergenceReport report;
  for (auto s : all_semantics) {
    try {
      report.answer_sets[s] = enumerate_answer_sets(s, p, max_atoms);
    } catch (const std::exception& e) {
      report.refusals[s] = e.what();
    }
  }
  return report;
}

}  // namespace aggsem
