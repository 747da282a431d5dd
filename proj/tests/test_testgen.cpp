#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"

using namespace recpath;
using namespace recpath::testing;

namespace {

struct Study {
  AnalyzedProgram prog;
  RecursionAnalysis rec;
  PathSet paths;
  std::vector<TestCase> cases;
};

Study study(AnalyzedProgram prog, int depth = 2) {
  auto rec = analyze_recursion(prog);
  EnumerateOptions opt;
  opt.depth = depth;
  auto paths = enumerate_paths(prog, rec, prog.entry(), opt);
  auto cases = derive_test_cases(prog, rec, paths);
  return {std::move(prog), std::move(rec), std::move(paths), std::move(cases)};
}

Condition symbolic(const std::string& text) {
  Condition c;
  c.kind = ConditionKind::Symbolic;
  c.names = {"n"};
  c.constraint = parse_condition(text, c.names);
  return c;
}

std::optional<ExecutionTrace> try_run(const AnalyzedProgram& prog, Value v) {
  ExecConfig cfg;
  cfg.inputs = {v};
  cfg.step_limit = 20000;
  try {
    return run_program(prog, cfg);
  } catch (const RuntimeError&) {
    return std::nullopt;
  }
}

std::set<std::string> codes_for(const std::vector<DefectExposure>& ws, const std::string& code) {
  std::set<std::string> out;
  for (const auto& w : ws)
    if (w.code == code) out.insert(w.subject);
  return out;
}

std::vector<AnalyzedProgram> single_input_programs() {
  std::vector<AnalyzedProgram> out;
  for (const auto& name : corpus_programs())
    if (name != "loopy.mini") out.push_back(corpus_program(name));
  out.push_back(fig1({"SumofFact"}));
  out.push_back(fig1({"4"}));
  return out;
}

}  // namespace

TEST(PathCondition, AspectOne) {
  const auto s = study(fig1({"SumofFact"}));
  ASSERT_EQ(s.cases.size(), 2u);
  EXPECT_EQ(s.cases[0].condition.kind, ConditionKind::Symbolic);
  EXPECT_EQ(s.cases[0].condition.text(), "n < 1");
  EXPECT_EQ(s.cases[1].condition.text(), "n = 1");
  EXPECT_EQ(s.cases[1].family, "n ≥ 1");
}

TEST(PathCondition, AspectTwo) {
  const auto s = study(fig1({"4"}));
  ASSERT_EQ(s.cases.size(), 2u);
  EXPECT_EQ(s.cases[0].condition.text(), "n ≤ 0");
  EXPECT_EQ(s.cases[1].condition.text(), "n = 1");
  EXPECT_EQ(s.cases[1].family, "n > 0");
}

// globals assigned from inputs are substituted; the result is still exact
TEST(PathCondition, GlobalsSubstituted) {
  const auto prog = load_program(
      "int g = 0; int f(int n) { g = g + read(); if (g > 3) { return 1; } return 0; } void main() { print(f(read())); }",
      {});
  const auto s = study(prog);
  ASSERT_EQ(s.cases.size(), 2u);
  for (const auto& tc : s.cases) {
    EXPECT_EQ(tc.condition.kind, ConditionKind::Symbolic);
    for (Value a = -5; a <= 5; ++a)
      for (Value b = -5; b <= 5; ++b) {
        ExecConfig cfg;
        cfg.inputs = {a, b};
        const bool same = run_program(s.prog, cfg).same_shape(s.paths.traces[tc.path_index].trace);
        EXPECT_EQ(tc.condition.satisfied_by({a, b}), same) << tc.condition.text();
      }
  }
}

TEST(PathCondition, NonAffineIsEmpirical) {
  const auto prog = load_program("void main() { int n; n = read(); if (n * n > 3) { print(1); } }", {});
  const auto s = study(prog);
  ASSERT_EQ(s.cases.size(), 2u);
  EXPECT_EQ(s.cases[0].condition.kind, ConditionKind::Empirical);
  EXPECT_EQ(s.cases[0].data, std::vector<Value>{2});
  EXPECT_EQ(s.cases[1].condition.kind, ConditionKind::Empirical);
  EXPECT_EQ(s.cases[1].data, std::vector<Value>{0});
  EXPECT_EQ(s.cases[1].condition.witnesses, (std::vector<std::vector<Value>>{{0}, {1}, {-1}}));
}

TEST(PathCondition, InfeasibleHasNoWitnesses) {
  const auto prog = load_program(
      "void main() { int n; n = read(); if (n * n < 0) { print(1); } else { print(0); } }", {});
  EnumerateOptions opt;
  opt.prune = false;
  const auto rec = analyze_recursion(prog);
  const auto ps = enumerate_paths(prog, rec, "main", opt);
  bool saw_infeasible = false;
  for (const auto& p : ps.traces) {
    const Condition c = path_condition(p, prog);
    if (c.kind == ConditionKind::Infeasible) {
      saw_infeasible = true;
      EXPECT_TRUE(c.witnesses.empty());
      EXPECT_FALSE(find_test_data(c, 16).has_value());
    }
  }
  EXPECT_TRUE(saw_infeasible);
}

TEST(FindTestData, Examples) {
  EXPECT_EQ(find_test_data(symbolic("n < 1"), 16), std::vector<Value>{0});
  EXPECT_EQ(find_test_data(symbolic("n >= 1"), 16), std::vector<Value>{1});
  EXPECT_FALSE(find_test_data(symbolic("n < -999999"), 16).has_value());
}

TEST(FindTestData, TieBreak) {
  EXPECT_EQ(find_test_data(symbolic("n != 0"), 16), std::vector<Value>{1});
  EXPECT_EQ(find_test_data(symbolic("n < 0"), 16), std::vector<Value>{-1});
  EXPECT_EQ(find_test_data(symbolic("n > 16"), 16), std::nullopt);
  EXPECT_EQ(find_test_data(symbolic("n >= 16"), 16), std::vector<Value>{16});
  EXPECT_EQ(find_test_data(symbolic("n <= -5 && n >= -9"), 16), std::vector<Value>{-5});
}

// smallest |v| first, non-negative preferred: checked against a plain scan
TEST(FindTestDataProperty, MatchesScan) {
  for (const char* text : {"n < 3", "n > -4", "n = 7", "n != 0", "n >= 2 && n <= 5", "n < -2", "n > 2 && n < 2"}) {
    const Condition c = symbolic(text);
    std::optional<Value> best;
    for (Value v = -16; v <= 16; ++v) {
      if (!c.satisfied_by({v})) continue;
      if (!best || std::abs(v) < std::abs(*best) || (std::abs(v) == std::abs(*best) && v > *best)) best = v;
    }
    const auto got = find_test_data(c, 16);
    if (!best) {
      EXPECT_FALSE(got.has_value()) << text;
    } else {
      EXPECT_EQ(got, std::vector<Value>{*best}) << text;
    }
  }
}

TEST(DeriveTestCases, StudyData) {
  for (const auto& omit : {std::string("SumofFact"), std::string("4")}) {
    const auto s = study(fig1({omit}));
    ASSERT_EQ(s.cases.size(), 2u);
    EXPECT_EQ(s.cases[0].data, std::vector<Value>{0}) << omit;
    EXPECT_EQ(s.cases[1].data, std::vector<Value>{1}) << omit;
    for (const auto& tc : s.cases) {
      EXPECT_TRUE(tc.validated);
      EXPECT_TRUE(tc.condition.satisfied_by(tc.data));
    }
  }
}

TEST(DeriveTestCases, AspectTags) {
  const auto one = study(fig1({"SumofFact"}));
  EXPECT_EQ(one.cases[0].aspect_tags(), std::vector<std::string>{"aspect-1"});
  EXPECT_EQ(one.cases[1].aspect_tags(), (std::vector<std::string>{"aspect-1", "self"}));
  const auto two = study(fig1({"4"}));
  const auto tags = two.cases[1].aspect_tags();
  EXPECT_NE(std::find(tags.begin(), tags.end(), "aspect-2"), tags.end());
}

TEST(DeriveTestCases, StraightLine) {
  const auto s = study(corpus_program("straight.mini"));
  ASSERT_EQ(s.cases.size(), 1u);
  EXPECT_EQ(s.cases[0].condition.text(), "true");
  EXPECT_TRUE(s.cases[0].condition.constraint.atoms.empty());
  EXPECT_TRUE(s.cases[0].validated);
}

TEST(TestGenProperty, DataReproducesPath) {
  for (const auto& prog : single_input_programs()) {
    const auto s = study(prog, 3);
    for (const auto& tc : s.cases) {
      if (tc.condition.kind == ConditionKind::Infeasible) {
        EXPECT_TRUE(tc.data.empty());
        continue;
      }
      ASSERT_FALSE(tc.data.empty());
      const auto t = try_run(s.prog, tc.data[0]);
      ASSERT_TRUE(t.has_value());
      EXPECT_TRUE(t->same_shape(s.paths.traces[tc.path_index].trace)) << tc.full;
    }
  }
}

TEST(TestGenProperty, ConditionTraceAgreement) {
  for (const auto& prog : single_input_programs()) {
    const auto s = study(prog, 3);
    for (Value v = -16; v <= 16; ++v) {
      const auto t = try_run(s.prog, v);
      for (const auto& tc : s.cases) {
        const bool same = t && t->same_shape(s.paths.traces[tc.path_index].trace);
        EXPECT_EQ(tc.condition.satisfied_by({v}), same) << tc.full << " v=" << v << " " << tc.condition.text();
      }
    }
  }
}

TEST(Coverage, AspectTwoSingleCase) {
  const auto prog = fig1({"4"});
  const auto r = coverage(prog, {{0}}, "main");
  EXPECT_EQ(r.function("Factorial").covered.size(), 0u);
  EXPECT_EQ(r.function("Factorial").total, 6u);
  EXPECT_DOUBLE_EQ(r.function("Factorial").ratio(), 0.0);
  EXPECT_EQ(r.runs.size(), 1u);
}

TEST(Coverage, AspectTwoTwoCases) {
  const auto prog = fig1({"4"});
  const auto r = coverage(prog, {{0}, {2}}, "main");
  for (const auto& fc : r.functions) EXPECT_DOUBLE_EQ(fc.ratio(), 1.0) << fc.function;
  EXPECT_EQ(r.functions.size(), 3u);
}

TEST(Coverage, EmptySuite) {
  const auto r = coverage(fig1(), {}, "main");
  for (const auto& fc : r.functions) {
    EXPECT_DOUBLE_EQ(fc.ratio(), 0.0);
    EXPECT_TRUE(fc.covered_edges.empty());
  }
}

TEST(Coverage, ErrorNamesTestCase) {
  const auto prog = corpus_program("loopy.mini");
  try {
    coverage(prog, {{1}}, "main", 500);
    FAIL() << "expected StepLimitExceeded";
  } catch (const RuntimeError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StepLimitExceeded);
    EXPECT_NE(std::string(e.what()).find("test case 1"), std::string::npos) << e.what();
  }
}

TEST(CoverageProperty, PartitionAndRatio) {
  for (const auto& prog : single_input_programs()) {
    const auto r = coverage(prog, {{0}, {1}, {-2}}, prog.entry());
    for (const auto& fc : r.functions) {
      const FlowGraph& g = *prog.graph(fc.function);
      std::set<int> all;
      for (const auto& n : g.nodes) all.insert(n.id);
      std::set<int> got(fc.covered.begin(), fc.covered.end());
      for (int v : fc.uncovered) EXPECT_TRUE(got.insert(v).second) << "overlap at " << v;
      EXPECT_EQ(got, all) << fc.function;
      EXPECT_EQ(fc.total, all.size());
      EXPECT_GE(fc.ratio(), 0.0);
      EXPECT_LE(fc.ratio(), 1.0);
    }
  }
}

TEST(CoverageProperty, Monotone) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dist(-4, 6);
  for (const auto& prog : single_input_programs()) {
    std::vector<std::vector<Value>> suite;
    auto before = coverage(prog, suite, prog.entry());
    for (int i = 0; i < 6; ++i) {
      suite.push_back({dist(rng)});
      const auto after = coverage(prog, suite, prog.entry());
      for (const auto& fc : before.functions) {
        const auto& now = after.function(fc.function);
        for (int v : fc.covered)
          EXPECT_NE(std::find(now.covered.begin(), now.covered.end(), v), now.covered.end()) << fc.function;
        for (const auto& e : fc.covered_edges)
          EXPECT_NE(std::find(now.covered_edges.begin(), now.covered_edges.end(), e), now.covered_edges.end());
      }
      before = after;
    }
  }
}

TEST(Warnings, AspectTwoSingleCase) {
  const auto prog = fig1({"4"});
  const auto rec = analyze_recursion(prog);
  const auto ws = defect_exposure(coverage(prog, {{0}}, "main"), prog, rec);
  EXPECT_EQ(codes_for(ws, "W1-recursive-module-unexecuted"), std::set<std::string>{"Factorial"});
  EXPECT_EQ(codes_for(ws, "W5-nesting-level-high"), std::set<std::string>{"SumofFact"});
  EXPECT_EQ(codes_for(ws, "W2-base-case-unexecuted"), std::set<std::string>{});
  EXPECT_EQ(codes_for(ws, "W3-recursive-branch-unexecuted"), std::set<std::string>{"SumofFact"});
}

TEST(Warnings, AspectTwoTwoCases) {
  const auto prog = fig1({"4"});
  const auto rec = analyze_recursion(prog);
  const auto ws = defect_exposure(coverage(prog, {{0}, {2}}, "main"), prog, rec);
  for (const auto& w : ws) {
    EXPECT_NE(w.code.substr(0, 2), "W1");
    EXPECT_NE(w.code.substr(0, 2), "W2");
    EXPECT_NE(w.code.substr(0, 2), "W3");
  }
  EXPECT_EQ(codes_for(ws, "W4-aspect2-transitive-base"), std::set<std::string>{"SumofFact->Factorial@17"});
  EXPECT_EQ(codes_for(ws, "W5-nesting-level-high"), std::set<std::string>{"SumofFact"});
}

TEST(Warnings, NonRecursiveProgram) {
  const auto prog = corpus_program("straight.mini");
  const auto rec = analyze_recursion(prog);
  EXPECT_TRUE(defect_exposure(coverage(prog, {}, "main"), prog, rec).empty());
  EXPECT_TRUE(defect_exposure(coverage(prog, {{3}}, "main"), prog, rec).empty());
}

TEST(Warnings, AspectOneStudyHasNoW4) {
  const auto prog = fig1();
  const auto rec = analyze_recursion(prog);
  const auto ws = defect_exposure(coverage(prog, {{0}, {2}}, "main"), prog, rec);
  EXPECT_TRUE(codes_for(ws, "W4-aspect2-transitive-base").empty());
}

TEST(WarningsProperty, W1SubsumesW2W3) {
  std::vector<std::vector<std::vector<Value>>> suites = {{}, {{0}}, {{1}}, {{-1}, {3}}};
  for (const auto& prog : single_input_programs()) {
    const auto rec = analyze_recursion(prog);
    for (const auto& suite : suites) {
      const auto ws = defect_exposure(coverage(prog, suite, prog.entry()), prog, rec);
      for (const auto& f : codes_for(ws, "W1-recursive-module-unexecuted")) {
        EXPECT_EQ(codes_for(ws, "W2-base-case-unexecuted").count(f), 0u) << f;
        EXPECT_EQ(codes_for(ws, "W3-recursive-branch-unexecuted").count(f), 0u) << f;
      }
      for (const auto& w : ws) {
        EXPECT_FALSE(w.subject.empty());
        EXPECT_FALSE(w.message.empty());
        const std::string fn = w.subject.substr(0, w.subject.find("->"));
        EXPECT_NE(prog.graph(fn), nullptr) << w.subject;
      }
    }
  }
}

TEST(Reference, ParseAndCheck) {
  const auto refs = parse_reference(corpus_source("fig1.reference"));
  ASSERT_EQ(refs.size(), 4u);
  EXPECT_EQ(refs[2].path, "1-2-3-5-13-14-16-18-6");
  EXPECT_EQ(refs[2].condition, "n < 0");
  EXPECT_EQ(refs[2].data, std::vector<Value>{0});

  const auto one = check_reference(study(fig1({"SumofFact"})).cases, refs, 16);
  ASSERT_EQ(one.size(), 2u);
  for (const auto& rc : one) {
    EXPECT_TRUE(rc.condition_agrees);
    EXPECT_TRUE(rc.data_satisfies);
    EXPECT_TRUE(rc.notes.empty());
  }

  const auto two = check_reference(study(fig1({"4"})).cases, refs, 16);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_FALSE(two[0].condition_agrees);
  EXPECT_FALSE(two[0].data_satisfies);
  EXPECT_TRUE(two[0].data_agrees);
  EXPECT_EQ(two[0].notes, (std::vector<std::string>{"derived n ≤ 0 differs from reference n < 0",
                                                    "reference data 0 does not satisfy reference condition n < 0"}));
  EXPECT_TRUE(two[1].condition_agrees);
  EXPECT_TRUE(two[1].notes.empty());
}

TEST(Reference, ParseErrors) {
  EXPECT_THROW(parse_reference("1-2-3 n < 1 | 0"), IoError);
  EXPECT_THROW(parse_reference("1-2-3 = n < 1 | x"), IoError);
  EXPECT_TRUE(parse_reference("# only a comment\n\n").empty());
}

TEST(Reference, ConditionSyntax) {
  const std::vector<std::string> names = {"n"};
  for (const auto& [a, b] : std::vector<std::pair<std::string, std::string>>{
           {"n <= 0", "n ≤ 0"}, {"n >= 1", "n ≥ 1"}, {"n != 2", "n ≠ 2"}, {"n == 3", "n = 3"},
           {"n > 0 && n < 4", "n > 0 ∧ n < 4"}}) {
    const auto ca = parse_condition(a, names);
    const auto cb = parse_condition(b, names);
    for (Value v = -6; v <= 6; ++v) EXPECT_EQ(ca.satisfied_by({v}), cb.satisfied_by({v})) << a << " v=" << v;
  }
  EXPECT_THROW(parse_condition("m < 1", names), IoError);
}

TEST(PathCondition, ManyInputsStillSearched) {
  const auto prog = load_program(
      "int f(int a, int b, int c, int d) { if (a * b > c + d) { return 1; } return 0; }"
      "void main() { print(f(read(), read(), read(), read())); }",
      {});
  const auto s = study(prog);
  ASSERT_EQ(s.cases.size(), 2u);
  for (const auto& tc : s.cases) {
    EXPECT_EQ(tc.condition.kind, ConditionKind::Empirical);
    ASSERT_EQ(tc.data.size(), 4u);
    EXPECT_TRUE(tc.validated);
    EXPECT_NE(tc.condition.text().find("in total}"), std::string::npos);
  }
  EXPECT_EQ(s.cases[1].data, (std::vector<Value>{0, 0, 0, 0}));
}
