#pragma once

#include <string>
#include <vector>

#include "recpath/recpath.hpp"

namespace recpath::testing {

inline std::string corpus_path(const std::string& name) { return std::string(RECPATH_CORPUS_DIR) + "/" + name; }

inline std::string corpus_source(const std::string& name) { return read_file(corpus_path(name)); }

inline const std::vector<std::string>& corpus_programs() {
  static const std::vector<std::string> names = {"fig1.mini",  "factorial.mini", "fib.mini", "even_odd.mini",
                                                 "split3.mini", "loopy.mini",     "straight.mini"};
  return names;
}

/// fig1.mini numbered with the shipped sidecar, after optional study edits.
inline AnalyzedProgram fig1(std::vector<std::string> omit = {}) {
  LoadOptions lo;
  lo.node_map = NodeMap::parse(corpus_source("fig1.nodemap"));
  lo.omit = std::move(omit);
  return load_program(corpus_source("fig1.mini"), lo);
}

inline AnalyzedProgram corpus_program(const std::string& name) {
  if (name == "fig1.mini") return fig1();
  return load_program(corpus_source(name), {});
}

/// Checks the FULL-trace well-formedness rules; returns a description of the
/// first violation or an empty string.
inline std::string trace_violation(const AnalyzedProgram& prog, const Trace& t) {
  auto where = [&](std::size_t i) { return "step " + std::to_string(i) + " (node " + std::to_string(t.steps[i].node) + ")"; };
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& s = t.steps[i];
    if (s.activation < 0 || static_cast<std::size_t>(s.activation) >= t.activations.size()) return where(i) + ": bad activation";
    const FlowGraph* g = prog.graph(t.activations[s.activation].function);
    if (!g || !g->has_node(s.node)) return where(i) + ": node not owned by its activation";
  }
  for (std::size_t a = 1; a < t.activations.size(); ++a) {
    const Activation& act = t.activations[a];
    if (act.parent < 0 || static_cast<std::size_t>(act.parent) >= a) return "activation " + std::to_string(a) + ": bad parent";
  }
  if (!t.steps.empty() && t.steps.front().node != prog.graph(t.activations[0].function)->entry) return "does not start at entry";
  std::size_t branch = 0;
  for (std::size_t i = 0; i + 1 < t.steps.size(); ++i) {
    const Step& a = t.steps[i];
    const Step& b = t.steps[i + 1];
    const FlowGraph& ga = *prog.graph(t.activations[a.activation].function);
    const FlowNode& na = ga.node(a.node);
    if (a.activation == b.activation) {
      bool edge = false;
      for (const auto& e : ga.out_edges(a.node)) edge = edge || e.to == b.node;
      if (!edge) return where(i) + " -> " + where(i + 1) + ": not an edge";
      if (na.kind == NodeKind::Predicate) {
        if (branch >= t.branches.size()) return where(i) + ": predicate without a branch record";
        const Branch& br = t.branches[branch++];
        if (br.predicate != a.node || br.activation != a.activation) return where(i) + ": branch record out of order";
        if (ga.successor(a.node, br.label) != b.node) return where(i) + ": successor disagrees with branch label";
      }
      continue;
    }
    const Activation& bact = t.activations[b.activation];
    if (bact.parent == a.activation) {
      const FlowGraph& gb = *prog.graph(bact.function);
      if (na.kind != NodeKind::CallSuspension || na.callee != bact.function || bact.call_site != a.node ||
          b.node != gb.entry)
        return where(i) + " -> " + where(i + 1) + ": illegal call entry";
      continue;
    }
    const Activation& aact = t.activations[a.activation];
    if (aact.parent == b.activation) {
      if (a.node != ga.exit || aact.call_site != b.node) return where(i) + " -> " + where(i + 1) + ": illegal return";
      continue;
    }
    return where(i) + " -> " + where(i + 1) + ": unrelated activations";
  }
  if (branch != t.branches.size()) return "unused branch records";
  return "";
}

// Oracles computed independently of the interpreter.
inline Value factorial_oracle(int n) {
  Value r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline Value sum_of_factorials_oracle(int n) {
  Value total = 0;
  for (int i = 1; i <= n; ++i) total += factorial_oracle(i);
  return total;
}

}  // namespace recpath::testing
