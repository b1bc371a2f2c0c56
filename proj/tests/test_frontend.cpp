#include <catch2/catch_amalgamated.hpp>

#include "aggsem/analysis.hpp"
#include "aggsem/frontend.hpp"
#include "oracles.hpp"

using namespace aggsem;

namespace {

Program parsed(const std::string& source) {
  ParseResult r = parse_program(source);
  INFO(source);
  REQUIRE(r.ok());
  return *r.program;
}

ParseError parse_failure(const std::string& source) {
  ParseResult r = parse_program(source);
  INFO(source);
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.error.has_value());
  CHECK(r.rule_spans.empty());
  return *r.error;
}

}  // namespace

TEST_CASE("parsing a small program") {
  const Program p = parsed(
      "% two rules and a constraint\n"
      "p :- sum{1:p, -1:q} >= 0.\n"
      "q :- min{} > 3, max{2:p} != 2.\n"
      ":- times{-2:q} <= -2.\n");
  REQUIRE(p.rules.size() == 3);
  CHECK(p.declared_atoms.empty());

  const Rule& r0 = p.rules[0];
  CHECK(r0.head == std::vector<Atom>{Atom{"p"}});
  REQUIRE(r0.body.size() == 1);
  CHECK(r0.body[0] ==
        make_aggregate(AggregateFunction::sum,
                       {{Int(1), Atom{"p"}}, {Int(-1), Atom{"q"}}},
                       ComparisonOp::ge, Int(0)));

  const Rule& r1 = p.rules[1];
  REQUIRE(r1.body.size() == 2);
  CHECK(r1.body[0].function == AggregateFunction::min);
  CHECK(r1.body[0].elements.empty());
  CHECK(r1.body[0].op == ComparisonOp::gt);
  CHECK(r1.body[1].function == AggregateFunction::max);
  CHECK(r1.body[1].op == ComparisonOp::ne);

  CHECK(p.rules[2].is_constraint());
  CHECK(p.rules[2].body[0].function == AggregateFunction::times);
  CHECK(p.rules[2].body[0].bound == Int(-2));
}

TEST_CASE("facts, empty rules, and disjunctive heads") {
  const Program p = parsed("q.\n.\nb | a | a.\n");
  REQUIRE(p.rules.size() == 3);
  CHECK(p.rules[0] == make_rule({Atom{"q"}}, {}));
  CHECK(p.rules[0].is_fact());
  CHECK(p.rules[1] == make_rule({}, {}));
  CHECK(p.rules[1].is_constraint());
  // Heads are sorted and deduplicated on construction.
  CHECK(p.rules[2].head == std::vector<Atom>{Atom{"a"}, Atom{"b"}});
  CHECK(render_rule(p.rules[2]) == "a | b.");
}

TEST_CASE("universe declarations merge and render sorted") {
  const Program p = parsed("#universe c, a.\nq.\n#universe b.\n");
  CHECK(p.declared_atoms ==
        std::set<Atom>{Atom{"a"}, Atom{"b"}, Atom{"c"}});
  CHECK(render_program(p) == "#universe a, b, c.\nq.\n");
  // Declared atoms count toward the program's atom base even when unused.
  CHECK(program_atoms(p) ==
        std::set<Atom>{Atom{"a"}, Atom{"b"}, Atom{"c"}, Atom{"q"}});
}

TEST_CASE("whitespace, tabs, and comments are insignificant") {
  const Program p = parsed(
      "\t p \t:- \n sum { 1 : p } > 0 . % trailing comment\n"
      "% a full-line comment\n");
  REQUIRE(p.rules.size() == 1);
  CHECK(render_rule(p.rules[0]) == "p :- sum{1:p} > 0.");
  CHECK(parsed("").rules.empty());
  CHECK(parsed("% nothing but a comment").rules.empty());
}

TEST_CASE("weights and bounds beyond machine words") {
  const std::string big = "123456789012345678901234567890";
  const Program p = parsed("p :- sum{" + big + ":q} = " + big + ".\n");
  const AggregateExpression& a = p.rules[0].body[0];
  CHECK(a.elements[0].weight == Int(big));
  CHECK(a.bound == Int(big));
  CHECK(satisfies({Atom{"q"}}, a));
  CHECK_FALSE(satisfies({}, a));
  CHECK(render_expression(a) == "sum{" + big + ":q} = " + big);
}

TEST_CASE("rule spans are recorded one-based") {
  ParseResult r = parse_program(
      "% leading comment\n"
      "p :- sum{1:q} > 0.\n"
      "  q.\n");
  REQUIRE(r.ok());
  REQUIRE(r.rule_spans.size() == 2);
  CHECK(r.rule_spans[0] == SourceSpan{2, 1, 1});
  CHECK(r.rule_spans[1] == SourceSpan{3, 3, 1});
}

TEST_CASE("duplicate atoms in one expression are a parse error") {
  const ParseError e = parse_failure("p :- sum{1:q, 2:q} >= 0.\n");
  CHECK(e.message == "duplicate atom 'q' among aggregate elements");
  CHECK(e.span == SourceSpan{1, 17, 1});
}

TEST_CASE("aggregate function names cannot be atoms") {
  for (const char* kw : {"sum", "times", "avg", "min", "max"}) {
    const ParseError e =
        parse_failure("p :- sum{1:" + std::string(kw) + "} > 0.");
    CHECK(e.message == "aggregate function name '" + std::string(kw) +
                           "' cannot be used as an atom");
  }
  const ParseError e = parse_failure("#universe avg.");
  CHECK(e.message ==
        "aggregate function name 'avg' cannot be used as an atom");
  // A keyword with extra name characters is an ordinary identifier.
  CHECK(parsed("summary.").rules[0].head ==
        std::vector<Atom>{Atom{"summary"}});
}

TEST_CASE("parse errors carry position and expectations") {
  SECTION("missing comparison operator") {
    const ParseError e = parse_failure("q.\np :- sum{1:p} 0.");
    CHECK(e.message == "expected comparison operator");
    CHECK(e.span == SourceSpan{2, 15, 1});
    CHECK(e.expected ==
          std::vector<std::string>{"<", "<=", ">=", ">", "=", "!="});
  }
  SECTION("missing dot") {
    const ParseError e = parse_failure("p q.");
    CHECK(e.message == "expected '.'");
    CHECK(e.span == SourceSpan{1, 3, 1});
  }
  SECTION("missing bound") {
    const ParseError e = parse_failure("p :- sum{1:p} > .");
    CHECK(e.message == "expected integer bound");
    CHECK(e.expected == std::vector<std::string>{"integer"});
  }
  SECTION("missing weight") {
    const ParseError e = parse_failure("p :- sum{p} > 0.");
    CHECK(e.message == "expected integer weight");
  }
  SECTION("body without an aggregate") {
    const ParseError e = parse_failure(":- .");
    CHECK(e.message == "expected aggregate function");
    CHECK(e.expected ==
          std::vector<std::string>{"sum", "times", "avg", "min", "max"});
  }
  SECTION("uppercase start is not an atom") {
    const ParseError e = parse_failure("Ab.");
    CHECK(e.message == "expected rule");
  }
  SECTION("stray directive") {
    const ParseError e = parse_failure("#foo.");
    CHECK(e.span == SourceSpan{1, 1, 4});
  }
  SECTION("lone exclamation mark") {
    CHECK_FALSE(parse_program("p :- sum{1:p} ! 0.").ok());
  }
}

TEST_CASE("standalone expression parsing") {
  const ExpressionParseResult ok = parse_expression("avg{1:p, 2:q} != 3");
  REQUIRE(ok.ok());
  CHECK(*ok.expression ==
        make_aggregate(AggregateFunction::avg,
                       {{Int(1), Atom{"p"}}, {Int(2), Atom{"q"}}},
                       ComparisonOp::ne, Int(3)));

  const ExpressionParseResult empty = parse_expression("min{} > 3");
  REQUIRE(empty.ok());
  CHECK(empty.expression->elements.empty());

  const ExpressionParseResult trailing = parse_expression("sum{1:p} > 0.");
  REQUIRE_FALSE(trailing.ok());
  CHECK(trailing.error->message ==
        "unexpected trailing input after aggregate expression");
  CHECK_FALSE(parse_expression("").ok());
}

TEST_CASE("rendering canonical text") {
  CHECK(render_expression(make_aggregate(
            AggregateFunction::sum,
            {{Int(1), Atom{"p"}}, {Int(-2), Atom{"q"}}}, ComparisonOp::ne,
            Int(5))) == "sum{1:p, -2:q} != 5");
  CHECK(render_expression(make_aggregate(AggregateFunction::min, {},
                                         ComparisonOp::le, Int(-1))) ==
        "min{} <= -1");
  CHECK(render_rule(make_rule({Atom{"q"}}, {})) == "q.");
  CHECK(render_rule(make_rule({}, {})) == ".");
  const Program p = parsed(":- sum{1:p} < 1.\n");
  CHECK(render_rule(p.rules[0]) == ":- sum{1:p} < 1.");
  CHECK(render_program(Program{}).empty());
}

TEST_CASE("bundled corpus inventory") {
  CHECK(corpus_names() ==
        std::vector<std::string>{"P1", "P1p", "P2", "P3", "P3p", "P4", "P4p",
                                 "P5", "P5p", "P6", "P6p", "P7"});
  const auto& programs = corpus();
  const std::map<std::string, std::size_t> rule_counts = {
      {"P1", 3}, {"P1p", 3}, {"P2", 2}, {"P3", 8}, {"P3p", 9}, {"P4", 6},
      {"P4p", 6}, {"P5", 4}, {"P5p", 4}, {"P6", 4}, {"P6p", 4}, {"P7", 1}};
  for (const auto& [name, count] : rule_counts) {
    INFO(name);
    REQUIRE(programs.count(name) == 1);
    CHECK(programs.at(name).rules.size() == count);
  }
}

TEST_CASE("bundled corpus details") {
  const auto& programs = corpus();

  const Program& p4 = programs.at("P4");
  for (std::size_t i = 0; i < 3; ++i) CHECK(p4.rules[i].is_fact());
  CHECK(p4.rules[3].head == std::vector<Atom>{Atom{"c_ab"}});

  const Program& p3 = programs.at("P3");
  CHECK(p3.rules[7].is_constraint());
  CHECK(p3.rules[6].body[0] ==
        make_aggregate(AggregateFunction::sum,
                       {{Int(1), Atom{"y1"}},
                        {Int(2), Atom{"y2"}},
                        {Int(2), Atom{"z1"}},
                        {Int(3), Atom{"z2"}}},
                       ComparisonOp::ne, Int(5)));

  const Program& p6 = programs.at("P6");
  const AggregateExpression& a6 = p6.rules[3].body[0];
  CHECK(p6.rules[3].head == std::vector<Atom>{Atom{"p"}});
  CHECK(a6.elements.back() == WeightedAtom{Int(-2), Atom{"p"}});
  CHECK(a6.op == ComparisonOp::eq);
  CHECK(a6.bound == Int(5));

  CHECK(programs.at("P3p").rules[7].body[0].function ==
        AggregateFunction::avg);
  CHECK(programs.at("P7").rules[0].body[0].op == ComparisonOp::ge);
}

TEST_CASE("rendering a bundled program reproduces its source") {
  for (const auto& [name, source] : corpus_sources()) {
    INFO(name);
    CHECK(render_program(corpus().at(name)) == source);
  }
}

TEST_CASE("parse after render is the identity") {
  for (const auto& [name, program] : corpus()) {
    INFO(name);
    const ParseResult r = parse_program(render_program(program));
    REQUIRE(r.ok());
    CHECK(*r.program == program);
  }
  GeneratorConfig config;
  config.atom_count = 5;
  config.rule_count = 6;
  for (std::uint64_t index = 0; index < 150; ++index) {
    const Program program = generate_program(config, index);
    const std::string text = render_program(program);
    INFO(text);
    const ParseResult r = parse_program(text);
    REQUIRE(r.ok());
    CHECK(*r.program == program);
  }
}
