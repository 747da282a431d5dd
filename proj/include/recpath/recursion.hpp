#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "recpath/program.hpp"

namespace recpath {

struct CallEdge {
  std::string caller;
  std::string callee;
  int site = 0;

  friend bool operator==(const CallEdge&, const CallEdge&) = default;
};

struct CallGraph {
  std::vector<std::string> functions;  // source order
  std::vector<CallEdge> edges;         // one per call-suspension node
};

enum class RecursionClass { None, Linear, Binary, NAry, Mutual };

struct BaseCase {
  int predicate = 0;
  EdgeLabel label = EdgeLabel::True;

  friend bool operator==(const BaseCase&, const BaseCase&) = default;
};

struct RecursionInfo {
  std::string function;
  bool recursive = false;
  RecursionClass cls = RecursionClass::None;
  int arity = 0;                         // k for self-recursion (number of recursive sites)
  std::vector<std::string> cycle;        // mutual: members of the cycle, source order
  std::vector<int> recursive_sites;      // call sites whose callee is in the same cycle
  std::vector<BaseCase> base_cases;
  bool nonterminating_risk = false;

  std::string class_name() const {
    switch (cls) {
      case RecursionClass::None: return "none";
      case RecursionClass::Linear: return "linear";
      case RecursionClass::Binary: return "binary";
      case RecursionClass::NAry: return "n-ary(" + std::to_string(arity) + ")";
      case RecursionClass::Mutual: return "mutual";
    }
    return "?";
  }
};

using RecursionInfos = std::map<std::string, RecursionInfo>;

enum class Aspect { First, Second, Self };

inline const char* to_string(Aspect a) {
  switch (a) {
    case Aspect::First: return "aspect-1";
    case Aspect::Second: return "aspect-2";
    case Aspect::Self: return "self";
  }
  return "?";
}

struct AspectEntry {
  int site = 0;
  std::string caller;
  std::string callee;
  Aspect aspect = Aspect::First;
};

struct AspectReport {
  std::vector<AspectEntry> entries;
  std::map<std::string, int> nesting;

  const AspectEntry* at_site(int site) const {
    for (const auto& e : entries)
      if (e.site == site) return &e;
    return nullptr;
  }
};

/// One edge per call-suspension node of the remaining (non-omitted)
/// functions; read/print are intrinsics and never appear.
inline CallGraph build_call_graph(const AnalyzedProgram& prog) {
  CallGraph cg;
  for (const auto& g : prog.graphs()) cg.functions.push_back(g.owner);
  for (const auto& g : prog.graphs()) {
    std::vector<std::pair<int, std::string>> sites = g.call_sites();
    std::sort(sites.begin(), sites.end());
    for (const auto& [site, callee] : sites) cg.edges.push_back({g.owner, callee, site});
  }
  return cg;
}

namespace detail {

// Tarjan's algorithm; components come out in reverse topological order.
inline std::vector<std::vector<std::string>> strongly_connected(const CallGraph& cg) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& e : cg.edges) adj[e.caller].push_back(e.callee);
  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> out;
  int counter = 0;

  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : adj[v]) {
      if (!index.count(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
      } while (w != v);
      out.push_back(std::move(comp));
    }
  };
  for (const auto& f : cg.functions)
    if (!index.count(f)) visit(f);
  return out;
}

}  // namespace detail

/// Recursion classes from the call graph's strongly connected components.
/// Base cases are filled in separately by find_base_cases.
inline RecursionInfos classify_recursion(const CallGraph& cg) {
  std::map<std::string, std::size_t> order;
  for (std::size_t i = 0; i < cg.functions.size(); ++i) order[cg.functions[i]] = i;

  RecursionInfos infos;
  for (auto comp : detail::strongly_connected(cg)) {
    std::sort(comp.begin(), comp.end(), [&](const auto& a, const auto& b) { return order[a] < order[b]; });
    const std::set<std::string> members(comp.begin(), comp.end());
    for (const auto& f : comp) {
      RecursionInfo info;
      info.function = f;
      int self_sites = 0;
      for (const auto& e : cg.edges) {
        if (e.caller != f || !members.count(e.callee)) continue;
        info.recursive_sites.push_back(e.site);
        if (e.callee == f) ++self_sites;
      }
      info.recursive = !info.recursive_sites.empty();
      if (comp.size() >= 2) {
        info.cls = RecursionClass::Mutual;
        info.cycle = comp;
      } else if (self_sites > 0) {
        info.arity = self_sites;
        info.cls = self_sites == 1 ? RecursionClass::Linear
                   : self_sites == 2 ? RecursionClass::Binary
                                     : RecursionClass::NAry;
      }
      infos[f] = std::move(info);
    }
  }
  return infos;
}

namespace detail {

// Nodes reachable from `start` without passing through `blocked`.
inline std::set<int> reachable_without(const FlowGraph& g, int start, int blocked) {
  std::set<int> seen;
  if (start == blocked) return seen;
  std::vector<int> stack{start};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (!seen.insert(v).second) continue;
    for (const auto& e : g.out_edges(v))
      if (e.to != blocked && !seen.count(e.to)) stack.push_back(e.to);
  }
  return seen;
}

}  // namespace detail

/// Nodes dominated by the branch edge (predicate --label--> target): empty
/// when the target is also reachable some other way (a join).
inline std::set<int> branch_region(const FlowGraph& g, int predicate, EdgeLabel label) {
  const int target = g.successor(predicate, label);
  for (const auto& e : g.in_edges(target))
    if (!(e.from == predicate && e.label == label)) return {};
  const std::set<int> reach_all = detail::reachable_without(g, g.entry, -1);
  const std::set<int> reach_blocked = detail::reachable_without(g, g.entry, target);
  std::set<int> region;
  for (int v : reach_all)
    if (!reach_blocked.count(v) && v != g.exit) region.insert(v);
  return region;
}

/// Predicate branches that end the recursion: the region the branch
/// dominates holds no recursive call site and returns (or the branch falls
/// straight to exit).
inline std::vector<BaseCase> find_base_cases(const FlowGraph& g, const RecursionInfo& info) {
  if (!info.recursive) throw NotRecursive(info.function);
  const std::set<int> rec_sites(info.recursive_sites.begin(), info.recursive_sites.end());
  std::vector<BaseCase> out;
  std::vector<int> preds;
  for (const auto& n : g.nodes)
    if (n.kind == NodeKind::Predicate) preds.push_back(n.id);
  std::sort(preds.begin(), preds.end());
  for (int p : preds) {
    for (EdgeLabel label : {EdgeLabel::True, EdgeLabel::False}) {
      const int target = g.successor(p, label);
      const auto region = branch_region(g, p, label);
      bool recursion_free = true;
      bool leaves = target == g.exit;
      for (int v : region) {
        if (rec_sites.count(v)) recursion_free = false;
        for (const auto& e : g.out_edges(v))
          if (e.to == g.exit) leaves = true;
      }
      if (recursion_free && leaves) out.push_back({p, label});
    }
  }
  return out;
}

/// Branches whose dominated region contains a recursive call site.
inline std::vector<BaseCase> find_recursive_branches(const FlowGraph& g, const RecursionInfo& info) {
  const std::set<int> rec_sites(info.recursive_sites.begin(), info.recursive_sites.end());
  std::vector<BaseCase> out;
  for (const auto& n : g.nodes) {
    if (n.kind != NodeKind::Predicate) continue;
    for (EdgeLabel label : {EdgeLabel::True, EdgeLabel::False}) {
      const auto region = branch_region(g, n.id, label);
      if (std::any_of(region.begin(), region.end(), [&](int v) { return rec_sites.count(v) != 0; }))
        out.push_back({n.id, label});
    }
  }
  std::sort(out.begin(), out.end(), [](const BaseCase& a, const BaseCase& b) {
    return std::pair(a.predicate, a.label) < std::pair(b.predicate, b.label);
  });
  return out;
}

/// Tags each call into a recursive module with its calling aspect and
/// computes recursion nesting levels over the condensed call graph.
inline AspectReport detect_aspects(const CallGraph& cg, const RecursionInfos& infos) {
  AspectReport report;
  auto recursive = [&](const std::string& f) {
    auto it = infos.find(f);
    return it != infos.end() && it->second.recursive;
  };
  for (const auto& e : cg.edges) {
    if (!recursive(e.callee)) continue;
    Aspect a = e.caller == e.callee ? Aspect::Self : recursive(e.caller) ? Aspect::Second : Aspect::First;
    report.entries.push_back({e.site, e.caller, e.callee, a});
  }

  const auto comps = detail::strongly_connected(cg);
  std::map<std::string, std::size_t> comp_of;
  for (std::size_t i = 0; i < comps.size(); ++i)
    for (const auto& f : comps[i]) comp_of[f] = i;

  // Tarjan emits callees' components before callers', so one pass suffices.
  std::vector<int> level(comps.size(), 0);
  std::vector<int> below(comps.size(), 0);  // max level reachable strictly below
  for (std::size_t i = 0; i < comps.size(); ++i) {
    int deepest = 0;
    for (const auto& e : cg.edges) {
      if (comp_of[e.caller] != i || comp_of[e.callee] == i) continue;
      const std::size_t j = comp_of[e.callee];
      deepest = std::max({deepest, level[j], below[j]});
    }
    below[i] = deepest;
    const bool rec = recursive(comps[i].front());
    if (rec) {
      // a mutual cycle counts once as a nested recursive level of its own
      const int inner = comps[i].size() >= 2 ? 1 : 0;
      level[i] = 1 + std::max(deepest, inner);
    }
  }
  for (const auto& f : cg.functions) report.nesting[f] = level[comp_of[f]];
  return report;
}

/// Everything the recursion module derives for one program.
struct RecursionAnalysis {
  CallGraph call_graph;
  RecursionInfos infos;
  AspectReport aspects;

  const RecursionInfo& info(const std::string& f) const { return infos.at(f); }
  bool is_recursive(const std::string& f) const {
    auto it = infos.find(f);
    return it != infos.end() && it->second.recursive;
  }
};

inline RecursionAnalysis analyze_recursion(const AnalyzedProgram& prog) {
  RecursionAnalysis out;
  out.call_graph = build_call_graph(prog);
  out.infos = classify_recursion(out.call_graph);
  for (auto& [name, info] : out.infos) {
    if (!info.recursive) continue;
    info.base_cases = find_base_cases(*prog.graph(name), info);
    info.nonterminating_risk = info.base_cases.empty();
  }
  out.aspects = detect_aspects(out.call_graph, out.infos);
  return out;
}

}  // namespace recpath
