// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <iostream>
#include <sstream>

#include "support.hpp"

using namespace recpath;
using namespace recpath::testing;

namespace {

struct Criterion {
  bool ok = true;
  std::ostringstream why;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    if (!ok) why << "; ";
    ok = false;
    why << what;
  }
};

AnalysisOptions study_options(const std::string& omit, RenderMode render = RenderMode::Paper) {
  AnalysisOptions o;
  o.load.node_map = NodeMap::parse(corpus_source("fig1.nodemap"));
  o.load.omit = {omit};
  o.render = render;
  return o;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

std::vector<std::string> paper_paths(const Analysis& a) {
  std::vector<std::string> out;
  for (const auto& t : a.paths.traces) out.push_back(render_trace(t.trace, RenderMode::Paper, a.program, a.recursion));
  return out;
}

void interpreter_outputs(Criterion& c) {
  ExecConfig cfg;
  cfg.inputs = {4};
  const auto t = run_program(fig1(), cfg);
  c.expect(t.outputs == std::vector<Value>{24, 33}, "fig1 with input 4 printed a different sequence");
}

void golden_paths(Criterion& c) {
  const auto one = analyze("fig1.mini", corpus_source("fig1.mini"), study_options("SumofFact"));
  const std::vector<std::string> want_one = {"1-2-3-4-7-8-10-12-5", "1-2-3-4-7-8-9-11-7-8-10-12-11-5"};
  c.expect(paper_paths(one) == want_one, "--omit SumofFact gave [" + join(paper_paths(one)) + "]");
  const auto two = analyze("fig1.mini", corpus_source("fig1.mini"), study_options("4"));
  const std::vector<std::string> want_two = {"1-2-3-5-13-14-16-18-6", "1-2-3-5-13-14-15-17-7-8-9-11-19-13-14-16-18-6"};
  c.expect(paper_paths(two) == want_two, "--omit 4 gave [" + join(paper_paths(two)) + "]");
  const std::string text = paths_text(one, RenderMode::Paper);
  c.expect(text.find("Path-1. 1-2-3-4-7-8-10-12-5\n") != std::string::npos, "report path section lacks Path-1");
}

void conditions_and_data(Criterion& c) {
  const auto one = analyze("fig1.mini", corpus_source("fig1.mini"), study_options("SumofFact"));
  c.expect(one.cases.size() == 2, "aspect-1 study has " + std::to_string(one.cases.size()) + " cases");
  if (one.cases.size() == 2) {
    c.expect(one.cases[0].family == "n < 1", "aspect-1 base family is " + one.cases[0].family);
    c.expect(one.cases[1].family == "n ≥ 1", "aspect-1 recursive family is " + one.cases[1].family);
    c.expect(one.cases[0].data == std::vector<Value>{0}, "aspect-1 base data is not 0");
    c.expect(one.cases[1].data == std::vector<Value>{1}, "aspect-1 recursive data is not 1");
  }
  auto o = study_options("4");
  o.reference = parse_reference(corpus_source("fig1.reference"));
  const auto two = analyze("fig1.mini", corpus_source("fig1.mini"), o);
  c.expect(!two.cases.empty() && two.cases[0].condition.text() == "n ≤ 0", "aspect-2 base condition is not n ≤ 0");
  const std::string text = report_text(two);
  c.expect(text.find("discrepancy: derived n ≤ 0 differs from reference n < 0") != std::string::npos,
           "report does not flag the n < 0 discrepancy");
}

void coverage_hole(Criterion& c) {
  const auto prog = fig1({"4"});
  const auto rec = analyze_recursion(prog);
  const auto single = coverage(prog, {{0}}, "main");
  const auto& fact = single.function("Factorial");
  c.expect(fact.covered.size() == 0 && fact.total == 6,
           "Factorial coverage " + std::to_string(fact.covered.size()) + "/" + std::to_string(fact.total));
  bool w1 = false;
  for (const auto& w : defect_exposure(single, prog, rec))
    w1 = w1 || (w.code == "W1-recursive-module-unexecuted" && w.subject == "Factorial");
  c.expect(w1, "no W1 for Factorial");
  const auto both = coverage(prog, {{0}, {2}}, "main");
  for (const auto& fc : both.functions)
    c.expect(fc.ratio() == 1.0, fc.function + " coverage " + fixed2(fc.ratio()) + " with suite {0, 2}");
}

void complexity_identities(Criterion& c) {
  for (const auto& name : corpus_programs()) {
    const auto prog = corpus_program(name);
    for (const auto& g : prog.graphs()) {
      const int e = static_cast<int>(g.edges.size()), n = static_cast<int>(g.nodes.size());
      const int v = cyclomatic_complexity(g);
      const std::string who = name + ":" + g.owner;
      c.expect(v == e - n + 2, who + " V(G) != E - N + 2");
      c.expect(v == g.predicate_count() + 1, who + " V(G) != predicates + 1");
      c.expect(static_cast<int>(basis_paths(g).size()) == v, who + " basis size != V(G)");
    }
  }
  const auto prog = fig1();
  c.expect(cyclomatic_complexity(*prog.graph("Factorial")) == 2, "Factorial V(G) != 2");
  c.expect(cyclomatic_complexity(*prog.graph("SumofFact")) == 2, "SumofFact V(G) != 2");
  c.expect(cyclomatic_complexity(*prog.graph("main")) == 1, "main V(G) != 1");
}

void oracle_equivalence(Criterion& c) {
  int mismatches = 0;
  for (const char* name : {"fig1.mini", "factorial.mini", "fib.mini", "even_odd.mini", "split3.mini"}) {
    const auto prog = corpus_program(name);
    const auto rec = analyze_recursion(prog);
    EnumerateOptions opt;
    opt.depth = 8;
    opt.max_paths = 4096;
    const auto ps = enumerate_paths(prog, rec, prog.entry(), opt);
    for (Value v = -5; v <= 5; ++v) {
      ExecConfig cfg;
      cfg.inputs = {v};
      const auto t = run_program(prog, cfg);
      std::vector<std::size_t> hits;
      for (std::size_t i = 0; i < ps.traces.size(); ++i)
        if (path_condition(ps.traces[i], prog).satisfied_by({v})) hits.push_back(i);
      if (hits.size() != 1 || !t.same_shape(ps.traces[hits[0]].trace)) {
        ++mismatches;
        c.expect(false, std::string(name) + " v=" + std::to_string(v) + " matched " + std::to_string(hits.size()) +
                            " conditions");
      }
    }
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
}

void classification(Criterion& c) {
  const std::vector<std::tuple<std::string, std::string, std::string>> want = {
      {"factorial.mini", "fact", "linear"},
      {"fib.mini", "fib", "binary"},
      {"even_odd.mini", "even", "mutual"},
      {"even_odd.mini", "odd", "mutual"},
      {"split3.mini", "tri", "n-ary(3)"}};
  for (const auto& [file, fn, cls] : want) {
    const auto got = analyze_recursion(corpus_program(file)).info(fn).class_name();
    c.expect(got == cls, fn + " classified " + got);
  }
  const auto rec = analyze_recursion(fig1());
  c.expect(rec.aspects.nesting.at("SumofFact") == 2, "SumofFact nesting level is not 2");
  const std::vector<std::tuple<int, std::string, std::string, Aspect>> sites = {
      {4, "main", "Factorial", Aspect::First},
      {17, "SumofFact", "Factorial", Aspect::Second},
      {19, "SumofFact", "SumofFact", Aspect::Self}};
  for (const auto& [site, caller, callee, aspect] : sites) {
    const AspectEntry* e = rec.aspects.at_site(site);
    c.expect(e && e->caller == caller && e->callee == callee && e->aspect == aspect,
             caller + "->" + callee + " is not " + to_string(aspect));
  }
}

void interpreter_laws(Criterion& c) {
  const auto prog = fig1();
  for (int n = 0; n <= 20; ++n)
    c.expect(call_function(prog, "Factorial", {n}).first == factorial_oracle(n), "Factorial(" + std::to_string(n) + ")");
  for (int n = 0; n <= 12; ++n)
    c.expect(call_function(prog, "SumofFact", {n}).first == sum_of_factorials_oracle(n),
             "SumofFact(" + std::to_string(n) + ")");
  bool overflow = false;
  try {
    call_function(prog, "Factorial", {21});
  } catch (const RuntimeError& e) {
    overflow = e.kind() == ErrorKind::ArithmeticOverflow;
  }
  c.expect(overflow, "Factorial(21) did not raise ArithmeticOverflow");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, void (*)(Criterion&)>> criteria = {
      {"interpreter prints 24 then 33 for input 4", interpreter_outputs},
      {"golden paper-mode path strings", golden_paths},
      {"test conditions, data and the n < 0 discrepancy", conditions_and_data},
      {"aspect-2 coverage hole and W1", coverage_hole},
      {"complexity identities over the corpus", complexity_identities},
      {"oracle equivalence at depth 8 over [-5, 5]", oracle_equivalence},
      {"recursion classes, nesting and aspects", classification},
      {"Factorial and SumofFact laws, overflow at 21", interpreter_laws},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first;
    if (!c.ok) std::cout << " (" << c.why.str() << ")";
    std::cout << "\n";
    failed += c.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
