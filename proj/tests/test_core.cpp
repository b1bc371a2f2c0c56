#include <catch2/catch_amalgamated.hpp>

#include "aggsem/core.hpp"
#include "aggsem/frontend.hpp"

using namespace aggsem;

namespace {

AggregateExpression simple(AggregateFunction f, ComparisonOp op, long bound,
                           std::vector<std::pair<long, const char*>> elems) {
  std::vector<WeightedAtom> weighted;
  for (auto& [w, name] : elems) weighted.push_back({Int(w), Atom{name}});
  return make_aggregate(f, std::move(weighted), op, Int(bound));
}

}  // namespace

TEST_CASE("atom names") {
  CHECK(is_valid_atom_name("p"));
  CHECK(is_valid_atom_name("o_ab"));
  CHECK(is_valid_atom_name("x1Y_z"));
  CHECK_FALSE(is_valid_atom_name(""));
  CHECK_FALSE(is_valid_atom_name("P"));
  CHECK_FALSE(is_valid_atom_name("1p"));
  CHECK_FALSE(is_valid_atom_name("_p"));
  CHECK_FALSE(is_valid_atom_name("p-q"));
  for (auto f : all_functions)
    CHECK_FALSE(is_valid_atom_name(std::string(to_string(f))));
}

TEST_CASE("make_aggregate rejects duplicate atoms") {
  CHECK_THROWS_AS(simple(AggregateFunction::sum, ComparisonOp::eq, 0,
                         {{1, "p"}, {2, "p"}}),
                  std::invalid_argument);
  CHECK_NOTHROW(simple(AggregateFunction::sum, ComparisonOp::eq, 0,
                       {{1, "p"}, {2, "q"}}));
}

TEST_CASE("make_rule normalizes the head") {
  const Rule r = make_rule({Atom{"q"}, Atom{"p"}, Atom{"q"}}, {});
  REQUIRE(r.head.size() == 2);
  CHECK(r.head[0] == Atom{"p"});
  CHECK(r.head[1] == Atom{"q"});
  CHECK(r.is_fact());
  CHECK_FALSE(r.is_constraint());
  CHECK(make_rule({}, {}).is_constraint());
}

TEST_CASE("expression_atoms is sorted and duplicate-free") {
  const auto a = simple(AggregateFunction::sum, ComparisonOp::ne, 5,
                        {{3, "z"}, {1, "a"}, {2, "m"}});
  const std::vector<Atom> atoms = expression_atoms(a);
  REQUIRE(atoms.size() == 3);
  CHECK(atoms[0].name == "a");
  CHECK(atoms[1].name == "m");
  CHECK(atoms[2].name == "z");
  CHECK(atoms.size() == a.elements.size());
}

TEST_CASE("program_atoms covers declared and occurring atoms") {
  Program p;
  p.declared_atoms = {Atom{"u"}};
  p.rules.push_back(make_rule(
      {Atom{"h"}},
      {simple(AggregateFunction::min, ComparisonOp::le, 2, {{1, "b"}})}));
  const auto atoms = program_atoms(p);
  CHECK(atoms == std::set<Atom>{Atom{"b"}, Atom{"h"}, Atom{"u"}});

  SECTION("monotone under rule addition") {
    Program q = p;
    q.rules.push_back(make_rule({Atom{"k"}}, {}));
    const auto grown = program_atoms(q);
    CHECK(std::includes(grown.begin(), grown.end(), atoms.begin(),
                        atoms.end()));
  }
}

TEST_CASE("is_non_disjunctive") {
  Program p;
  p.rules.push_back(make_rule({Atom{"a"}}, {}));
  p.rules.push_back(make_rule({}, {}));
  CHECK(is_non_disjunctive(p));
  p.rules.push_back(make_rule({Atom{"a"}, Atom{"b"}}, {}));
  CHECK_FALSE(is_non_disjunctive(p));
}

TEST_CASE("validate flags duplicate element atoms as errors") {
  Program p;
  AggregateExpression bad;
  bad.function = AggregateFunction::sum;
  bad.elements = {{Int(1), Atom{"p"}}, {Int(2), Atom{"p"}}};
  bad.op = ComparisonOp::ge;
  bad.bound = 0;
  p.rules.push_back(Rule{{Atom{"q"}}, {bad}});
  const auto diags = validate(p);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].severity == Diagnostic::Severity::error);
  CHECK(diags[0].message.find("duplicate atom 'p'") != std::string::npos);
  CHECK(diags[0].rule_index == 0);
}

TEST_CASE("validate warns on duplicate rules") {
  Program p;
  p.rules.push_back(make_rule({Atom{"a"}}, {}));
  p.rules.push_back(make_rule({Atom{"a"}}, {}));
  const auto diags = validate(p);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].severity == Diagnostic::Severity::warning);
  CHECK(diags[0].message == "duplicate rule");
  CHECK(diags[0].rule_index == 1);
}

TEST_CASE("validate flags invalid atom names") {
  Program p;
  p.rules.push_back(Rule{{Atom{"Bad"}}, {}});
  const auto diags = validate(p);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].severity == Diagnostic::Severity::error);
}

TEST_CASE("validate accepts the bundled programs") {
  for (const auto& [name, program] : corpus()) {
    INFO(name);
    CHECK(validate(program).empty());
  }
}

TEST_CASE("interpretation formatting") {
  CHECK(format_interpretation({}) == "{}");
  CHECK(format_interpretation({Atom{"q"}, Atom{"p"}}) == "{p,q}");
}

TEST_CASE("enum round-trips") {
  for (auto f : all_functions)
    CHECK(function_from_string(to_string(f)) == f);
  for (auto op : all_ops) CHECK(op_from_string(to_string(op)) == op);
  CHECK_FALSE(function_from_string("prod").has_value());
  CHECK_FALSE(op_from_string("==").has_value());
}
