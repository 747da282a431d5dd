#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "recpath/parser.hpp"
#include "recpath/paths.hpp"
#include "recpath/recursion.hpp"
#include "recpath/testgen.hpp"

namespace recpath {

using Json = nlohmann::ordered_json;

struct AnalysisOptions {
  LoadOptions load;
  EnumerateOptions paths;
  TestGenOptions tests;
  RenderMode render = RenderMode::Full;
  std::vector<ReferenceEntry> reference;
  /// Coverage suite; when absent the derived test data is used.
  std::optional<std::vector<std::vector<Value>>> suite;
};

struct Analysis {
  std::string file;
  AnalysisOptions options;
  AnalyzedProgram program;
  RecursionAnalysis recursion;
  PathSet paths;
  std::vector<TestCase> cases;
  std::vector<ReferenceCheck> reference;
  std::vector<std::vector<Value>> suite;
  CoverageReport coverage;
  std::vector<DefectExposure> warnings;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline AnalyzedProgram load_program(const std::string& source, const LoadOptions& options) {
  return AnalyzedProgram(parse_source(source), options);
}

/// frontend, flow graphs, recursion, paths, test cases, coverage, warnings.
inline Analysis analyze(const std::string& file, const std::string& source, const AnalysisOptions& options) {
  Analysis a{file, options, load_program(source, options.load), {}, {}, {}, {}, {}, {}, {}};
  a.recursion = analyze_recursion(a.program);
  a.paths = enumerate_paths(a.program, a.recursion, a.program.entry(), options.paths);
  a.cases = derive_test_cases(a.program, a.recursion, a.paths, options.tests);
  a.reference = check_reference(a.cases, options.reference, options.tests.range);
  if (options.suite) {
    a.suite = *options.suite;
  } else {
    for (const auto& c : a.cases)
      if (c.validated) a.suite.push_back(c.data);
  }
  a.coverage = coverage(a.program, a.suite, a.program.entry(), options.tests.step_limit);
  a.warnings = defect_exposure(a.coverage, a.program, a.recursion);
  return a;
}

// -------------------------------------------------------------------- JSON

namespace detail {

inline const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Entry: return "entry";
    case NodeKind::Exit: return "exit";
    case NodeKind::Statement: return "statement";
    case NodeKind::Predicate: return "predicate";
    case NodeKind::CallSuspension: return "call";
  }
  return "?";
}

inline const char* label_name(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::Seq: return "seq";
    case EdgeLabel::True: return "true";
    case EdgeLabel::False: return "false";
  }
  return "?";
}

inline Json edge_json(const FlowEdge& e) { return {{"from", e.from}, {"to", e.to}, {"label", label_name(e.label)}}; }

}  // namespace detail

inline Json graphs_json(const AnalyzedProgram& prog) {
  Json out = Json::array();
  for (const auto& g : prog.graphs()) {
    Json nodes = Json::array();
    for (const auto& n : g.nodes) {
      Json j = {{"id", n.id}, {"kind", detail::kind_name(n.kind)}, {"key", n.key}, {"label", n.label}};
      if (!n.callee.empty()) j["callee"] = n.callee;
      if (n.stub) j["stub"] = true;
      nodes.push_back(std::move(j));
    }
    Json edges = Json::array();
    for (const auto& e : g.edges) edges.push_back(detail::edge_json(e));
    out.push_back({{"function", g.owner},
                   {"entry", g.entry},
                   {"exit", g.exit},
                   {"nodeCount", g.nodes.size()},
                   {"edgeCount", g.edges.size()},
                   {"predicates", g.predicate_count()},
                   {"cyclomaticComplexity", cyclomatic_complexity(g)},
                   {"basisPaths", basis_paths(g)},
                   {"nodes", std::move(nodes)},
                   {"edges", std::move(edges)}});
  }
  return out;
}

inline Json recursion_json(const AnalyzedProgram& prog, const RecursionAnalysis& rec) {
  Json list = Json::array();
  for (const auto& g : prog.graphs()) {
    const RecursionInfo& info = rec.info(g.owner);
    Json bases = Json::array();
    for (const auto& b : info.base_cases) bases.push_back({{"predicate", b.predicate}, {"branch", detail::label_name(b.label)}});
    Json sites = Json::array();
    for (const auto& e : rec.call_graph.edges)
      if (e.caller == g.owner) sites.push_back({{"site", e.site}, {"callee", e.callee}});
    Json j = {{"function", g.owner},         {"class", info.class_name()},
              {"recursive", info.recursive}, {"baseCases", std::move(bases)},
              {"callSites", std::move(sites)}, {"recursiveSites", info.recursive_sites},
              {"nonterminatingRisk", info.nonterminating_risk}};
    if (!info.cycle.empty()) j["cycle"] = info.cycle;
    list.push_back(std::move(j));
  }
  return list;
}

inline Json paths_json(const Analysis& a) {
  Json traces = Json::array();
  for (std::size_t i = 0; i < a.paths.traces.size(); ++i) {
    const PathTrace& p = a.paths.traces[i];
    traces.push_back({{"index", i + 1},
                      {"full", render_trace(p.trace, RenderMode::Full, a.program, a.recursion)},
                      {"paper", render_trace(p.trace, RenderMode::Paper, a.program, a.recursion)},
                      {"activations", p.activation_count()},
                      {"inputs", p.input_names},
                      {"exact", p.exact}});
  }
  return {{"entry", a.program.entry()},
          {"depth", a.paths.depth},
          {"maxPaths", a.options.paths.max_paths},
          {"render", a.options.render == RenderMode::Paper ? "paper" : "full"},
          {"truncated", a.paths.truncated},
          {"dropped", a.paths.dropped},
          {"traces", std::move(traces)}};
}

inline Json tests_json(const std::vector<TestCase>& cases) {
  Json out = Json::array();
  for (const auto& c : cases) {
    Json aspects = Json::array();
    for (const auto& e : c.aspects)
      aspects.push_back({{"site", e.site}, {"caller", e.caller}, {"callee", e.callee}, {"aspect", to_string(e.aspect)}});
    Json j = {{"path", c.path_index + 1},
              {"conditionKind", to_string(c.condition.kind)},
              {"condition", c.condition.text()},
              {"familyCondition", c.family},
              {"inputs", c.input_names},
              {"data", c.data},
              {"validated", c.validated},
              {"aspectTags", c.aspect_tags()},
              {"aspects", std::move(aspects)}};
    if (c.condition.kind == ConditionKind::Empirical) j["witnesses"] = c.condition.witnesses;
    out.push_back(std::move(j));
  }
  return out;
}

inline Json reference_json(const std::vector<ReferenceCheck>& checks) {
  Json out = Json::array();
  for (const auto& r : checks)
    out.push_back({{"path", r.case_index + 1},
                   {"rendered", r.reference.path},
                   {"referenceCondition", r.reference.condition},
                   {"referenceData", r.reference.data},
                   {"conditionAgrees", r.condition_agrees},
                   {"dataSatisfies", r.data_satisfies},
                   {"dataAgrees", r.data_agrees},
                   {"notes", r.notes}});
  return out;
}

inline Json coverage_json(const CoverageReport& r, const std::vector<std::vector<Value>>& suite) {
  Json fns = Json::array();
  for (const auto& f : r.functions) {
    Json edges = Json::array();
    for (const auto& e : f.covered_edges) edges.push_back(detail::edge_json(e));
    fns.push_back({{"function", f.function},
                   {"covered", f.covered},
                   {"uncovered", f.uncovered},
                   {"coveredEdges", std::move(edges)},
                   {"coveredCount", f.covered.size()},
                   {"total", f.total},
                   {"ratio", f.ratio()}});
  }
  Json runs = Json::array();
  for (const auto& run : r.runs) {
    Json j = {{"inputs", run.inputs}, {"full", join_ids(run.trace.node_ids())}, {"outputs", run.trace.outputs}};
    runs.push_back(std::move(j));
  }
  return {{"suite", suite}, {"functions", std::move(fns)}, {"runs", std::move(runs)}};
}

inline Json warnings_json(const std::vector<DefectExposure>& ws) {
  Json out = Json::array();
  for (const auto& w : ws) out.push_back({{"code", w.code}, {"subject", w.subject}, {"message", w.message}});
  return out;
}

inline Json report_json(const Analysis& a) {
  Json classes = Json::object();
  Json nesting = Json::object();
  for (const auto& g : a.program.graphs()) {
    classes[g.owner] = a.recursion.info(g.owner).class_name();
    nesting[g.owner] = a.recursion.aspects.nesting.at(g.owner);
  }
  Json aspects = Json::array();
  for (const auto& e : a.recursion.aspects.entries)
    aspects.push_back({{"site", e.site}, {"caller", e.caller}, {"callee", e.callee}, {"aspect", to_string(e.aspect)}});
  Json functions = Json::array();
  for (const auto& f : a.program.ast().functions) functions.push_back(f.name);
  Json globals = Json::array();
  for (const auto& g : a.program.ast().globals) globals.push_back({{"name", g.name}, {"init", g.init}});

  return {{"tool", "recpath"},
          {"schemaVersion", 1},
          {"program",
           {{"file", a.file},
            {"entry", a.program.entry()},
            {"functions", std::move(functions)},
            {"globals", std::move(globals)},
            {"omitted", a.options.load.omit},
            {"nodeMap", a.options.load.node_map.has_value()}}},
          {"graphs", graphs_json(a.program)},
          {"classes", classes},
          {"recursion", recursion_json(a.program, a.recursion)},
          {"aspects", std::move(aspects)},
          {"nestingLevels", std::move(nesting)},
          {"paths", paths_json(a)},
          {"tests", tests_json(a.cases)},
          {"reference", reference_json(a.reference)},
          {"coverage", coverage_json(a.coverage, a.suite)},
          {"warnings", warnings_json(a.warnings)}};
}

// ------------------------------------------------------------------- human

struct Style {
  bool color = false;
  std::string head(const std::string& s) const { return color ? "\033[1m" + s + "\033[0m" : s; }
  std::string warn(const std::string& s) const { return color ? "\033[33m" + s + "\033[0m" : s; }
};

inline std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string data_text(const TestCase& c) {
  if (c.data.empty()) return c.condition.kind == ConditionKind::Infeasible ? "-" : "()";
  return Condition::render_inputs(c.data);
}

inline std::string paths_text(const Analysis& a, RenderMode mode) {
  std::string out;
  for (std::size_t i = 0; i < a.paths.traces.size(); ++i)
    out += "Path-" + std::to_string(i + 1) + ". " + render_trace(a.paths.traces[i].trace, mode, a.program, a.recursion) + "\n";
  return out;
}

inline std::string tests_text(const std::vector<TestCase>& cases) {
  std::string out;
  for (const auto& c : cases) {
    out += "Path-" + std::to_string(c.path_index + 1) + "  " + to_string(c.condition.kind) + "  " + c.condition.text();
    if (c.family != c.condition.text()) out += "  (family " + c.family + ")";
    out += "  data " + data_text(c);
    const auto tags = c.aspect_tags();
    if (!tags.empty()) {
      out += "  [";
      for (std::size_t i = 0; i < tags.size(); ++i) out += (i ? " " : "") + tags[i];
      out += "]";
    }
    out += "\n";
  }
  return out;
}

inline std::string coverage_text(const CoverageReport& r) {
  std::string out;
  for (const auto& f : r.functions) {
    out += "  " + f.function + "  " + std::to_string(f.covered.size()) + "/" + std::to_string(f.total) + "  " +
           fixed2(f.ratio());
    if (!f.uncovered.empty()) out += "  uncovered " + join_ids(f.uncovered);
    out += "\n";
  }
  return out;
}

inline std::string warnings_text(const std::vector<DefectExposure>& ws, const Style& st) {
  std::string out;
  for (const auto& w : ws) out += st.warn("  " + w.code + "  " + w.subject + ": " + w.message) + "\n";
  return out;
}

inline std::string report_text(const Analysis& a, const Style& st = {}) {
  std::string out;
  out += st.head("program") + " " + a.file + "  entry " + a.program.entry() + "\n";
  if (!a.options.load.omit.empty()) {
    out += "  omitted:";
    for (const auto& o : a.options.load.omit) out += " " + o;
    out += "\n";
  }
  out += "\n" + st.head("graphs") + "\n";
  for (const auto& g : a.program.graphs())
    out += "  " + g.owner + "  nodes " + std::to_string(g.nodes.size()) + "  edges " + std::to_string(g.edges.size()) +
           "  V(G) " + std::to_string(cyclomatic_complexity(g)) + "\n";
  out += "\n" + st.head("recursion") + "\n";
  for (const auto& g : a.program.graphs()) {
    const RecursionInfo& info = a.recursion.info(g.owner);
    out += "  " + g.owner + "  " + info.class_name() + "  nesting " +
           std::to_string(a.recursion.aspects.nesting.at(g.owner));
    if (info.recursive) {
      out += "  base";
      if (info.base_cases.empty()) out += " none";
      for (const auto& b : info.base_cases) out += " " + std::to_string(b.predicate) + ":" + branch_word(b.label);
    }
    out += "\n";
  }
  for (const auto& e : a.recursion.aspects.entries)
    out += "  " + e.caller + " -> " + e.callee + " @" + std::to_string(e.site) + "  " + to_string(e.aspect) + "\n";
  out += "\n" + st.head("paths") + " (depth " + std::to_string(a.paths.depth) +
         (a.paths.truncated ? ", truncated" : "") + ")\n";
  out += paths_text(a, a.options.render);
  out += "\n" + st.head("tests") + "\n" + tests_text(a.cases);
  if (!a.reference.empty()) {
    out += "\n" + st.head("reference") + "\n";
    for (const auto& r : a.reference) {
      out += "  Path-" + std::to_string(r.case_index + 1) + "  reference " + r.reference.condition + " | " +
             Condition::render_inputs(r.reference.data) + "\n";
      for (const auto& n : r.notes) out += st.warn("    discrepancy: " + n) + "\n";
    }
  }
  out += "\n" + st.head("coverage") + "\n" + coverage_text(a.coverage);
  out += "\n" + st.head("warnings") + "\n";
  out += a.warnings.empty() ? "  none\n" : warnings_text(a.warnings, st);
  return out;
}

}  // namespace recpath
