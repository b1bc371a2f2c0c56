// Command-line surface over the aggsem library: solve, check, classify,
// compare, graph, and fuzz, each with line-oriented text output or a single
// JSON document. Exit codes: 0 affirmative, 1 negative verdict, 2 on usage,
// parse, or refusal errors.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "aggsem/aggsem.hpp"

using namespace aggsem;
using nlohmann::json;

namespace {

// Errors that end the invocation with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_source(const std::string& path) {
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string describe(const ParseError& e) {
  std::string out = "line " + std::to_string(e.span.line) + " column " +
                    std::to_string(e.span.column) + ": " + e.message;
  if (!e.expected.empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < e.expected.size(); ++i) {
      if (i) out += ", ";
      out += e.expected[i];
    }
    out += ")";
  }
  return out;
}

Program load_program(const std::string& path) {
  const ParseResult r = parse_program(read_source(path));
  if (!r.ok()) throw UsageError(path + ": " + describe(*r.error));
  return *r.program;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto begin = item.find_first_not_of(" \t");
    if (begin == std::string::npos) {
      out.push_back("");
      continue;
    }
    const auto end = item.find_last_not_of(" \t");
    out.push_back(item.substr(begin, end - begin + 1));
  }
  return out;
}

std::vector<SemanticsId> parse_semantics_list(const std::string& text) {
  if (text == "all")
    return {all_semantics, all_semantics + 5};
  std::vector<SemanticsId> out;
  for (const auto& name : split_list(text)) {
    const auto s = semantics_from_string(name);
    if (!s)
      throw UsageError("unknown semantics '" + name +
                       "' (use fflp, gz, lpst, mr, dpb, or all)");
    out.push_back(*s);
  }
  if (out.empty()) throw UsageError("no semantics requested");
  return out;
}

Interpretation parse_model(const std::string& text) {
  Interpretation x;
  if (text.empty()) return x;
  for (const auto& name : split_list(text)) {
    if (name.empty()) throw UsageError("empty atom name in --model");
    x.insert(Atom{name});
  }
  return x;
}

void warn_exponential(std::size_t requested, std::size_t default_cap,
                      const char* what) {
  if (requested > default_cap)
    std::cerr << "warning: raising the " << what << " cap to " << requested
              << " atoms is exponential work\n";
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string sets_text(const std::vector<Interpretation>& sets) {
  if (sets.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i) out += " ";
    out += format_interpretation(sets[i]);
  }
  return out;
}

json sets_json(const std::vector<Interpretation>& sets) {
  json out = json::array();
  for (const auto& x : sets) out.push_back(format_interpretation(x));
  return out;
}

// Text form of a fixpoint trace: the repeated final stage collapses into a
// "(fixpoint)" marker. JSON keeps the raw stages instead.
std::string trace_text(const FixpointTrace& t) {
  std::string out;
  const std::size_t shown = t.converged && t.stages.size() > 1
                                ? t.stages.size() - 1
                                : t.stages.size();
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) out += " -> ";
    out += format_interpretation(t.stages[i]);
  }
  out += t.converged ? " (fixpoint)" : " (no fixpoint)";
  return out;
}

json trace_json(const FixpointTrace& t) {
  json stages = json::array();
  for (const auto& s : t.stages) stages.push_back(format_interpretation(s));
  return {{"stages", std::move(stages)}, {"converged", t.converged}};
}

void emit(const json& document) { std::cout << document.dump(2) << "\n"; }

json report_skeleton(const std::string& command, json inputs) {
  return {{"command", command},
          {"version", std::string(version)},
          {"inputs", std::move(inputs)},
          {"results", json::object()}};
}

int cmd_solve(const std::string& file, const std::string& semantics_text,
              bool first_only, std::size_t max_atoms,
              const std::string& format) {
  const Program p = load_program(file);
  const auto requested = parse_semantics_list(semantics_text);
  warn_exponential(max_atoms, default_enumeration_cap, "enumeration");

  std::vector<std::pair<SemanticsId, std::vector<Interpretation>>> results;
  for (auto s : requested) {
    std::vector<Interpretation> sets;
    if (first_only) {
      const auto first = first_answer_set(s, p, max_atoms);
      if (first) sets.push_back(*first);
    } else {
      sets = enumerate_answer_sets(s, p, max_atoms);
    }
    results.emplace_back(s, std::move(sets));
  }
  bool affirmative = true;
  for (const auto& [s, sets] : results)
    if (sets.empty()) affirmative = false;

  if (format == "json") {
    json report = report_skeleton(
        "solve", {{"file", file},
                  {"semantics", semantics_text},
                  {"mode", first_only ? "first" : "all"},
                  {"max_atoms", max_atoms}});
    json rows = json::array();
    for (const auto& [s, sets] : results)
      rows.push_back({{"name", std::string(to_string(s))},
                      {"answer_sets", sets_json(sets)}});
    report["results"]["semantics"] = std::move(rows);
    report["results"]["affirmative"] = affirmative;
    emit(report);
  } else {
    for (const auto& [s, sets] : results)
      std::cout << to_string(s) << ": " << sets_text(sets) << "\n";
  }
  return affirmative ? 0 : 1;
}

int cmd_check(const std::string& file, const std::string& semantics_name,
              const std::string& model_text, const std::string& format) {
  const Program p = load_program(file);
  const auto s = semantics_from_string(semantics_name);
  if (!s)
    throw UsageError("unknown semantics '" + semantics_name +
                     "' (use fflp, gz, lpst, mr, or dpb)");
  const Interpretation x = parse_model(model_text);
  CheckVerdict v;
  try {
    v = check(*s, p, x);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  if (format == "json") {
    json report = report_skeleton(
        "check", {{"file", file},
                  {"semantics", std::string(to_string(*s))},
                  {"model", format_interpretation(x)}});
    json& r = report["results"];
    r["is_model"] = v.is_model;
    r["is_answer_set"] = v.is_answer_set;
    r["smaller_model"] = v.smaller_model
                             ? json(format_interpretation(*v.smaller_model))
                             : json(nullptr);
    r["trace"] = v.trace ? trace_json(*v.trace) : json(nullptr);
    emit(report);
  } else {
    std::cout << "semantics: " << to_string(*s) << "\n"
              << "model: " << format_interpretation(x) << "\n"
              << "is_model: " << yes_no(v.is_model) << "\n";
    if (v.smaller_model)
      std::cout << "smaller_model: " << format_interpretation(*v.smaller_model)
                << "\n";
    if (v.trace) std::cout << "trace: " << trace_text(*v.trace) << "\n";
    std::cout << "answer_set: " << yes_no(v.is_answer_set) << "\n";
  }
  return v.is_answer_set ? 0 : 1;
}

int cmd_classify(const std::string& file, const std::string& expr_text,
                 std::size_t max_atoms, const std::string& format) {
  if (file.empty() == expr_text.empty())
    throw UsageError("classify needs a program file or --expr, not both");
  warn_exponential(max_atoms, default_classify_cap, "exact classification");

  std::vector<AggregateExpression> expressions;
  if (!expr_text.empty()) {
    const ExpressionParseResult r = parse_expression(expr_text);
    if (!r.ok()) throw UsageError("--expr: " + describe(*r.error));
    expressions.push_back(*r.expression);
  } else {
    const Program p = load_program(file);
    for (const auto& rule : p.rules)
      for (const auto& a : rule.body) expressions.push_back(a);
  }

  json rows = json::array();
  bool first = true;
  for (const auto& a : expressions) {
    const MonotonicityClass syntactic = classify_syntactic(a);
    std::string exact = "skipped";
    try {
      exact = std::string(to_string(classify_exact(a, max_atoms)));
    } catch (const CapExceededError&) {
      // Keep the row; the exact column stays "skipped".
    }
    const Bounds b = feasible_bounds(a);
    const bool sat = is_satisfiable(a);
    if (format == "json") {
      rows.push_back({{"text", render_expression(a)},
                      {"syntactic", std::string(to_string(syntactic))},
                      {"exact", exact},
                      {"bounds",
                       {{"lower", to_string(b.lower)},
                        {"upper", to_string(b.upper)}}},
                      {"satisfiable", sat}});
    } else {
      if (!first) std::cout << "\n";
      first = false;
      std::cout << "expression: " << render_expression(a) << "\n"
                << "syntactic: " << to_string(syntactic) << "\n"
                << "exact: " << exact << "\n"
                << "bounds: [" << to_string(b.lower) << ", "
                << to_string(b.upper) << "]\n"
                << "satisfiable: " << yes_no(sat) << "\n";
    }
  }
  if (format == "json") {
    json report = report_skeleton(
        "classify",
        {{"file", file.empty() ? json(nullptr) : json(file)},
         {"expr", expr_text.empty() ? json(nullptr) : json(expr_text)},
         {"max_atoms", max_atoms}});
    report["results"]["expressions"] = std::move(rows);
    emit(report);
  }
  return 0;
}

int cmd_compare(const std::string& file, std::size_t max_atoms,
                const std::string& format) {
  const Program p = load_program(file);
  warn_exponential(max_atoms, default_enumeration_cap, "enumeration");
  const DivergenceReport report = divergence_witnesses(p, max_atoms);

  if (format == "json") {
    json doc = report_skeleton("compare",
                               {{"file", file}, {"max_atoms", max_atoms}});
    json& r = doc["results"];
    r["answer_sets"] = json::object();
    for (const auto& [s, sets] : report.answer_sets)
      r["answer_sets"][std::string(to_string(s))] = sets_json(sets);
    r["refusals"] = json::object();
    for (const auto& [s, message] : report.refusals)
      r["refusals"][std::string(to_string(s))] = message;
    json divergences = json::array();
    for (auto from : all_semantics)
      for (auto to : all_semantics) {
        if (from == to) continue;
        const auto cell = report.cell(from, to);
        if (cell.empty()) continue;
        divergences.push_back({{"from", std::string(to_string(from))},
                               {"to", std::string(to_string(to))},
                               {"witnesses", sets_json(cell)}});
      }
    r["divergences"] = std::move(divergences);
    emit(doc);
  } else {
    for (auto s : all_semantics) {
      const auto refused = report.refusals.find(s);
      if (refused != report.refusals.end()) {
        std::cout << to_string(s) << ": refused (" << refused->second
                  << ")\n";
        continue;
      }
      std::cout << to_string(s) << ": "
                << sets_text(report.answer_sets.at(s)) << "\n";
    }
    bool any = false;
    for (auto from : all_semantics)
      for (auto to : all_semantics) {
        if (from == to) continue;
        const auto cell = report.cell(from, to);
        if (cell.empty()) continue;
        any = true;
        std::cout << to_string(from) << " \\ " << to_string(to) << ": "
                  << sets_text(cell) << "\n";
      }
    if (!any) std::cout << "no divergence\n";
  }
  return 0;
}

int cmd_graph(const std::string& file, const std::string& dot_path,
              const std::string& format) {
  const Program p = load_program(file);
  const DependencyGraph g = dependency_graph(p);
  const std::string dot = to_dot(g);
  const bool acyclic = is_acyclic(g);
  const bool stratified = is_aggregate_stratified(p);

  if (!dot_path.empty()) {
    std::ofstream out(dot_path);
    if (!out) throw UsageError("cannot write '" + dot_path + "'");
    out << dot;
    if (!out.flush()) throw UsageError("cannot write '" + dot_path + "'");
  }

  if (format == "json") {
    json report = report_skeleton(
        "graph", {{"file", file},
                  {"dot", dot_path.empty() ? json(nullptr) : json(dot_path)}});
    json& r = report["results"];
    r["vertices"] = g.vertices.size();
    r["edges"] = g.edges.size();
    r["acyclic"] = acyclic;
    r["stratified"] = stratified;
    r["dot"] = dot;
    emit(report);
  } else {
    std::cout << "vertices: " << g.vertices.size() << "\n"
              << "edges: " << g.edges.size() << "\n"
              << "acyclic: " << yes_no(acyclic) << "\n"
              << "stratified: " << yes_no(stratified) << "\n";
    if (dot_path.empty())
      std::cout << "\n" << dot;
    else
      std::cout << "dot written to " << dot_path << "\n";
  }
  return 0;
}

int cmd_fuzz(std::uint64_t seed, std::uint64_t count,
             const std::string& restriction, const std::string& format) {
  GeneratorConfig config;
  config.seed = seed;
  if (restriction != "arbitrary") {
    const auto c = monotonicity_from_string(restriction);
    if (!c)
      throw UsageError("unknown restriction '" + restriction +
                       "' (use arbitrary, convex, monotone, anti-monotone)");
    config.class_filter = *c;
  }
  RelationReport report;
  try {
    report = verify_relationships(config, count);
  } catch (const GeneratorError& e) {
    throw UsageError(e.what());
  }
  std::size_t violations = 0;
  for (const auto& arc : report.arcs) violations += arc.violations.size();

  if (format == "json") {
    json doc = report_skeleton("fuzz", {{"seed", seed},
                                        {"count", count},
                                        {"restriction", restriction}});
    json& r = doc["results"];
    r["programs_tested"] = report.programs_tested;
    r["refusals"] = report.refusals;
    json arcs = json::array();
    for (const auto& arc : report.arcs)
      arcs.push_back(
          {{"from", std::string(to_string(arc.from))},
           {"to", std::string(to_string(arc.to))},
           {"restriction", arc.restriction
                               ? json(std::string(to_string(*arc.restriction)))
                               : json(nullptr)},
           {"violations", arc.violations.size()}});
    r["arcs"] = std::move(arcs);
    r["clean"] = report.clean();
    emit(doc);
  } else {
    std::cout << "programs: " << report.programs_tested << "\n"
              << "refusals: " << report.refusals << "\n";
    for (const auto& arc : report.arcs) {
      std::cout << "arc " << to_string(arc.from) << " <= "
                << to_string(arc.to);
      if (arc.restriction)
        std::cout << " (" << to_string(*arc.restriction) << ")";
      std::cout << ": " << arc.violations.size() << " violations\n";
    }
    std::cout << "result: "
              << (report.clean() ? "clean"
                                 : std::to_string(violations) + " violations")
              << "\n";
  }
  return report.clean() ? 0 : 1;
}

void add_format_option(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "propositional aggregate programs under five answer-set semantics"};
  app.require_subcommand(1);

  std::string format = "text";

  auto* solve = app.add_subcommand("solve", "enumerate answer sets");
  std::string solve_file, solve_semantics = "all";
  std::size_t solve_max_atoms = default_enumeration_cap;
  bool solve_first = false, solve_all = false;
  solve->add_option("file", solve_file, "program file, or - for stdin")
      ->required();
  solve->add_option("--semantics", solve_semantics,
                    "comma-separated semantics, or all")
      ->capture_default_str();
  auto* all_flag = solve->add_flag("--all", solve_all,
                                   "enumerate every answer set (default)");
  solve->add_flag("--first", solve_first,
                  "stop at the first answer set per semantics")
      ->excludes(all_flag);
  solve->add_option("--max-atoms", solve_max_atoms, "enumeration cap")
      ->capture_default_str();
  add_format_option(solve, format);

  auto* chk = app.add_subcommand("check", "test one candidate answer set");
  std::string check_file, check_semantics, check_model;
  chk->add_option("file", check_file, "program file, or - for stdin")
      ->required();
  chk->add_option("--semantics", check_semantics,
                  "one of fflp, gz, lpst, mr, dpb")
      ->required();
  chk->add_option("--model", check_model,
                  "comma-separated atoms; empty for the empty set")
      ->required();
  add_format_option(chk, format);

  auto* classify = app.add_subcommand(
      "classify", "monotonicity, bounds, and satisfiability per expression");
  std::string classify_file, classify_expr;
  std::size_t classify_max_atoms = default_classify_cap;
  classify->add_option("file", classify_file,
                       "program file, or - for stdin");
  classify->add_option("--expr", classify_expr,
                       "classify a single expression instead of a file");
  classify
      ->add_option("--max-atoms", classify_max_atoms,
                   "exact classification cap")
      ->capture_default_str();
  add_format_option(classify, format);

  auto* compare =
      app.add_subcommand("compare", "divergences between the five semantics");
  std::string compare_file;
  std::size_t compare_max_atoms = default_enumeration_cap;
  compare->add_option("file", compare_file, "program file, or - for stdin")
      ->required();
  compare->add_option("--max-atoms", compare_max_atoms, "enumeration cap")
      ->capture_default_str();
  add_format_option(compare, format);

  auto* graph = app.add_subcommand(
      "graph", "atom dependency graph, acyclicity, and stratification");
  std::string graph_file, graph_dot;
  graph->add_option("file", graph_file, "program file, or - for stdin")
      ->required();
  graph->add_option("--dot", graph_dot, "write DOT to this path");
  add_format_option(graph, format);

  auto* fuzz = app.add_subcommand(
      "fuzz", "verify semantics inclusions on generated programs");
  std::uint64_t fuzz_seed = 0, fuzz_count = 100;
  std::string fuzz_restriction = "arbitrary";
  fuzz->add_option("--seed", fuzz_seed, "generator seed")
      ->capture_default_str();
  fuzz->add_option("--count", fuzz_count, "programs to generate")
      ->capture_default_str();
  fuzz->add_option("--restriction", fuzz_restriction,
                   "expression class restriction")
      ->check(CLI::IsMember({"arbitrary", "convex", "monotone",
                             "anti-monotone"}))
      ->capture_default_str();
  add_format_option(fuzz, format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(solve))
      return cmd_solve(solve_file, solve_semantics, solve_first,
                       solve_max_atoms, format);
    if (app.got_subcommand(chk))
      return cmd_check(check_file, check_semantics, check_model, format);
    if (app.got_subcommand(classify))
      return cmd_classify(classify_file, classify_expr, classify_max_atoms,
                          format);
    if (app.got_subcommand(compare))
      return cmd_compare(compare_file, compare_max_atoms, format);
    if (app.got_subcommand(graph))
      return cmd_graph(graph_file, graph_dot, format);
    if (app.got_subcommand(fuzz))
      return cmd_fuzz(fuzz_seed, fuzz_count, fuzz_restriction, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
