#include <unistd.h>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "recpath/recpath.hpp"

namespace {

using namespace recpath;

struct Settings {
  std::string file;
  bool json = false;
  std::string node_map;
  std::string entry = "main";
  std::vector<std::string> omit;
  int depth = 2;
  std::size_t max_paths = 256;
  std::string render = "full";
  Value range = 16;
  std::size_t step_limit = 100000;
  std::string reference;
  std::string suite;
  bool no_prune = false;
  std::vector<Value> input;
  std::string trace = "off";
  std::string output;
};

bool use_color() {
  const char* env = std::getenv("RECPATH_COLOR");
  if (env && std::string(env) == "0") return false;
  return isatty(STDOUT_FILENO) != 0;
}

RenderMode render_mode(const std::string& s) { return s == "paper" ? RenderMode::Paper : RenderMode::Full; }

LoadOptions load_options(const Settings& s) {
  LoadOptions lo;
  if (!s.node_map.empty()) lo.node_map = NodeMap::parse(read_file(s.node_map));
  lo.omit = s.omit;
  lo.entry = s.entry;
  return lo;
}

std::vector<std::vector<Value>> read_suite(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw IoError("suite '" + path + "': " + e.what());
  }
  if (!j.is_array()) throw IoError("suite '" + path + "': expected an array of {\"inputs\": [...]}");
  std::vector<std::vector<Value>> out;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("inputs") || !item["inputs"].is_array())
      throw IoError("suite '" + path + "': each entry needs an \"inputs\" array");
    std::vector<Value> inputs;
    for (const auto& v : item["inputs"]) {
      if (!v.is_number_integer()) throw IoError("suite '" + path + "': inputs must be integers");
      inputs.push_back(v.get<Value>());
    }
    out.push_back(std::move(inputs));
  }
  return out;
}

AnalysisOptions analysis_options(const Settings& s) {
  AnalysisOptions o;
  o.load = load_options(s);
  o.paths.depth = s.depth;
  o.paths.max_paths = s.max_paths;
  o.paths.prune = !s.no_prune;
  o.tests.range = s.range;
  o.tests.step_limit = s.step_limit;
  o.render = render_mode(s.render);
  if (!s.reference.empty()) o.reference = parse_reference(read_file(s.reference));
  if (!s.suite.empty()) o.suite = read_suite(s.suite);
  return o;
}

int cmd_analyze(const Settings& s) {
  const Analysis a = analyze(s.file, read_file(s.file), analysis_options(s));
  if (s.json)
    std::cout << report_json(a).dump(2) << "\n";
  else
    std::cout << report_text(a, Style{use_color()});
  return 0;
}

int cmd_paths(const Settings& s) {
  const AnalysisOptions o = analysis_options(s);
  const AnalyzedProgram prog = load_program(read_file(s.file), o.load);
  const RecursionAnalysis rec = analyze_recursion(prog);
  const PathSet ps = enumerate_paths(prog, rec, prog.entry(), o.paths);
  if (s.json) {
    Json traces = Json::array();
    for (std::size_t i = 0; i < ps.traces.size(); ++i)
      traces.push_back({{"index", i + 1},
                        {"full", render_trace(ps.traces[i].trace, RenderMode::Full, prog, rec)},
                        {"paper", render_trace(ps.traces[i].trace, RenderMode::Paper, prog, rec)}});
    std::cout << Json{{"entry", prog.entry()},
                      {"depth", ps.depth},
                      {"truncated", ps.truncated},
                      {"dropped", ps.dropped},
                      {"traces", traces}}
                     .dump(2)
              << "\n";
    return 0;
  }
  for (std::size_t i = 0; i < ps.traces.size(); ++i)
    std::cout << "Path-" << i + 1 << ". " << render_trace(ps.traces[i].trace, o.render, prog, rec) << "\n";
  return 0;
}

int cmd_tests(const Settings& s) {
  const Analysis a = analyze(s.file, read_file(s.file), analysis_options(s));
  if (s.json) {
    std::cout << Json{{"tests", tests_json(a.cases)}, {"reference", reference_json(a.reference)}}.dump(2) << "\n";
    return 0;
  }
  const Style st{use_color()};
  for (std::size_t i = 0; i < a.cases.size(); ++i)
    std::cout << "Path-" << i + 1 << ". " << render_trace(a.paths.traces[i].trace, a.options.render, a.program, a.recursion)
              << "\n";
  std::cout << "\n" << tests_text(a.cases);
  for (const auto& r : a.reference)
    for (const auto& n : r.notes) std::cout << st.warn("Path-" + std::to_string(r.case_index + 1) + " discrepancy: " + n) << "\n";
  return 0;
}

int cmd_coverage(const Settings& s) {
  const AnalysisOptions o = analysis_options(s);
  const AnalyzedProgram prog = load_program(read_file(s.file), o.load);
  const RecursionAnalysis rec = analyze_recursion(prog);
  const auto suite = o.suite.value_or(std::vector<std::vector<Value>>{});
  const CoverageReport r = coverage(prog, suite, prog.entry(), s.step_limit);
  const auto warnings = defect_exposure(r, prog, rec);
  if (s.json) {
    std::cout << Json{{"coverage", coverage_json(r, suite)}, {"warnings", warnings_json(warnings)}}.dump(2) << "\n";
    return 0;
  }
  const Style st{use_color()};
  std::cout << coverage_text(r) << warnings_text(warnings, st);
  return 0;
}

int cmd_run(const Settings& s) {
  const AnalysisOptions o = analysis_options(s);
  const AnalyzedProgram prog = load_program(read_file(s.file), o.load);
  ExecConfig cfg;
  cfg.inputs = s.input;
  cfg.step_limit = s.step_limit;
  const ExecutionTrace t = run_program(prog, cfg);
  std::string trace;
  if (s.trace != "off") trace = render_trace(t, render_mode(s.trace), prog, analyze_recursion(prog));
  if (s.json) {
    Json j = {{"outputs", t.outputs}, {"steps", t.step_count}};
    j["result"] = t.result ? Json(*t.result) : Json(nullptr);
    if (s.trace != "off") j["trace"] = trace;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  for (Value v : t.outputs) std::cout << v << "\n";
  if (s.trace != "off") std::cout << trace << "\n";
  return 0;
}

int cmd_dot(const Settings& s) {
  const AnalyzedProgram prog = load_program(read_file(s.file), load_options(s));
  const std::string dot = to_dot(prog.graphs());
  if (s.output.empty()) {
    std::cout << dot;
    return 0;
  }
  std::ofstream out(s.output, std::ios::binary);
  if (!out || !(out << dot)) throw IoError("cannot write '" + s.output + "'");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-based test design for recursive MiniLang programs", "recpath"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_flag("--json", s.json, "Machine-readable output");
  app.add_option("--node-map", s.node_map, "Node numbering sidecar");
  app.add_option("--entry", s.entry, "Entry function");

  auto file = [&](CLI::App* sub) { sub->add_option("file", s.file, "MiniLang source")->required(); };
  auto omit = [&](CLI::App* sub) {
    sub->add_option("--omit", s.omit, "Drop a function or global node id (repeatable)")->allow_extra_args(false);
  };
  auto path_opts = [&](CLI::App* sub) {
    sub->add_option("--depth", s.depth, "Activations of one function per call chain")->check(CLI::PositiveNumber);
    sub->add_option("--max-paths", s.max_paths, "Complete paths to keep")->check(CLI::PositiveNumber);
    sub->add_option("--render", s.render, "Path rendering")->check(CLI::IsMember({"full", "paper"}));
    sub->add_flag("--no-prune", s.no_prune, "Keep paths whose conditions are provably unsatisfiable");
  };
  auto test_opts = [&](CLI::App* sub) {
    sub->add_option("--range", s.range, "Test data search bound")->check(CLI::PositiveNumber);
    sub->add_option("--reference", s.reference, "Reference conditions and data to compare against");
    sub->add_option("--step-limit", s.step_limit, "Interpreter step limit")->check(CLI::PositiveNumber);
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "Full report");
  file(analyze_cmd);
  omit(analyze_cmd);
  path_opts(analyze_cmd);
  test_opts(analyze_cmd);
  analyze_cmd->add_option("--suite", s.suite, "Coverage suite instead of the derived data");

  auto* paths_cmd = app.add_subcommand("paths", "Enumerate interprocedural paths");
  file(paths_cmd);
  omit(paths_cmd);
  path_opts(paths_cmd);

  auto* tests_cmd = app.add_subcommand("tests", "Test conditions and data per path");
  file(tests_cmd);
  omit(tests_cmd);
  path_opts(tests_cmd);
  test_opts(tests_cmd);

  auto* coverage_cmd = app.add_subcommand("coverage", "Suite coverage and warnings");
  file(coverage_cmd);
  omit(coverage_cmd);
  coverage_cmd->add_option("--suite", s.suite, "JSON list of {\"inputs\": [...]}")->required();
  coverage_cmd->add_option("--step-limit", s.step_limit, "Interpreter step limit")->check(CLI::PositiveNumber);

  auto* run_cmd = app.add_subcommand("run", "Execute the program");
  file(run_cmd);
  omit(run_cmd);
  run_cmd->add_option("--input", s.input, "Inputs, comma separated")->delimiter(',')->allow_extra_args(false);
  run_cmd->add_option("--trace", s.trace, "Print the trace")->check(CLI::IsMember({"full", "paper", "off"}));
  run_cmd->add_option("--step-limit", s.step_limit, "Interpreter step limit")->check(CLI::PositiveNumber);

  auto* dot_cmd = app.add_subcommand("dot", "Flow graphs as Graphviz DOT");
  file(dot_cmd);
  omit(dot_cmd);
  dot_cmd->add_option("-o,--output", s.output, "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(s);
    if (paths_cmd->parsed()) return cmd_paths(s);
    if (tests_cmd->parsed()) return cmd_tests(s);
    if (coverage_cmd->parsed()) return cmd_coverage(s);
    if (run_cmd->parsed()) return cmd_run(s);
    if (dot_cmd->parsed()) return cmd_dot(s);
  } catch (const recpath::Error& e) {
    std::cerr << "recpath: " << s.file << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "recpath: " << s.file << ": " << e.what() << "\n";
    return 1;
  }
  return 2;
}
