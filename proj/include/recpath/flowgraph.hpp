#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "recpath/ast.hpp"
#include "recpath/error.hpp"
#include "recpath/pretty.hpp"

namespace recpath {

enum class NodeKind { Entry, Exit, Statement, Predicate, CallSuspension };
enum class EdgeLabel { Seq, True, False };

inline const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Entry: return "entry";
    case NodeKind::Exit: return "exit";
    case NodeKind::Statement: return "statement";
    case NodeKind::Predicate: return "predicate";
    case NodeKind::CallSuspension: return "call-suspension";
  }
  return "?";
}

inline const char* to_string(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::Seq: return "seq";
    case EdgeLabel::True: return "true";
    case EdgeLabel::False: return "false";
  }
  return "?";
}

struct FlowNode {
  int id = 0;
  NodeKind kind = NodeKind::Statement;
  std::vector<StmtId> stmts;  // statements this node represents, in source order
  std::string label;
  std::string owner;
  std::string key;  // structural key, e.g. "pred0", stable across numbering

  // Call-suspension nodes: the callee, the statement whose evaluation
  // reaches the call, and the call's position in that statement's
  // evaluation order.
  std::string callee;
  StmtId call_stmt = -1;
  int call_index = -1;

  // Branch-begin markers.
  StmtId marker_of = -1;
  bool marker_then = true;

  bool is_return = false;  // last represented statement is a return
  bool stub = false;       // stands for a call into an omitted function
};

struct FlowEdge {
  int from = 0;
  int to = 0;
  EdgeLabel label = EdgeLabel::Seq;

  friend bool operator==(const FlowEdge&, const FlowEdge&) = default;
  friend auto operator<=>(const FlowEdge&, const FlowEdge&) = default;
};

/// Flow Graph Notation graph of a single function.
class FlowGraph {
 public:
  std::string owner;
  std::vector<FlowNode> nodes;
  std::vector<FlowEdge> edges;
  int entry = 0;
  int exit = 0;

  bool has_node(int id) const { return index_.count(id) != 0; }

  const FlowNode& node(int id) const { return nodes.at(index_.at(id)); }
  FlowNode& node(int id) { return nodes.at(index_.at(id)); }

  std::vector<FlowEdge> out_edges(int id) const {
    std::vector<FlowEdge> out;
    for (const auto& e : edges)
      if (e.from == id) out.push_back(e);
    return out;
  }

  std::vector<FlowEdge> in_edges(int id) const {
    std::vector<FlowEdge> out;
    for (const auto& e : edges)
      if (e.to == id) out.push_back(e);
    return out;
  }

  /// Successor along `label`; Seq falls back to the single out-edge.
  int successor(int id, EdgeLabel label = EdgeLabel::Seq) const {
    for (const auto& e : edges)
      if (e.from == id && e.label == label) return e.to;
    throw std::logic_error("node " + std::to_string(id) + " has no " + to_string(label) + " successor");
  }

  std::vector<std::pair<int, std::string>> call_sites() const {
    std::vector<std::pair<int, std::string>> out;
    for (const auto& n : nodes)
      if (n.kind == NodeKind::CallSuspension) out.emplace_back(n.id, n.callee);
    return out;
  }

  int predicate_count() const {
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(),
                                          [](const FlowNode& n) { return n.kind == NodeKind::Predicate; }));
  }

  const FlowNode* find_key(const std::string& key) const {
    for (const auto& n : nodes)
      if (n.key == key) return &n;
    return nullptr;
  }

  void reindex() {
    index_.clear();
    for (std::size_t i = 0; i < nodes.size(); ++i) index_[nodes[i].id] = i;
  }

  /// Rewrites every id through `mapping` (old id -> new id).
  void renumber(const std::map<int, int>& mapping) {
    for (auto& n : nodes) n.id = mapping.at(n.id);
    for (auto& e : edges) {
      e.from = mapping.at(e.from);
      e.to = mapping.at(e.to);
    }
    entry = mapping.at(entry);
    exit = mapping.at(exit);
    reindex();
  }

  /// Removes a single-successor node, redirecting its in-edges to its
  /// successor.
  void splice_out(int id) {
    const int next = successor(id);
    std::vector<FlowEdge> kept;
    for (auto e : edges) {
      if (e.from == id) continue;
      if (e.to == id) e.to = next;
      kept.push_back(e);
    }
    edges = std::move(kept);
    nodes.erase(std::remove_if(nodes.begin(), nodes.end(), [id](const FlowNode& n) { return n.id == id; }),
                nodes.end());
    reindex();
  }

 private:
  std::unordered_map<int, std::size_t> index_;
};

namespace detail {

class GraphBuilder {
 public:
  explicit GraphBuilder(const FuncDef& f) : func_(f) {
    graph_.owner = f.name;
    graph_.entry = add(NodeKind::Entry, "entry", "entry " + f.name);
    graph_.exit = add(NodeKind::Exit, "exit", "exit " + f.name);
  }

  FlowGraph build() {
    std::vector<Pending> pending{{graph_.entry, EdgeLabel::Seq}};
    pending = build_block(func_.body, std::move(pending));
    connect(pending, graph_.exit);
    graph_.reindex();
    return std::move(graph_);
  }

 private:
  struct Pending {
    int from;
    EdgeLabel label;
  };

  const FuncDef& func_;
  FlowGraph graph_;
  int next_id_ = 0;
  std::map<std::string, int> counters_;
  int open_group_ = -1;  // statement node still accepting coalesced statements

  int add(NodeKind kind, const std::string& key_prefix, std::string label) {
    FlowNode n;
    n.id = next_id_++;
    n.kind = kind;
    n.owner = func_.name;
    if (kind == NodeKind::Entry || kind == NodeKind::Exit)
      n.key = key_prefix;
    else
      n.key = key_prefix + std::to_string(counters_[key_prefix]++);
    n.label = std::move(label);
    graph_.nodes.push_back(std::move(n));
    return graph_.nodes.back().id;
  }

  FlowNode& at(int id) { return graph_.nodes[static_cast<std::size_t>(id)]; }

  void connect(const std::vector<Pending>& pending, int to) {
    for (const auto& p : pending) graph_.edges.push_back({p.from, to, p.label});
  }

  static bool is_plain(const Stmt& s) {
    if (s.kind == Stmt::Kind::If) return false;
    return !s.expr || (!contains_call(*s.expr) && !contains_read(*s.expr));
  }

  static bool starts_with_call(const std::vector<Stmt>& body) {
    return !body.empty() && body.front().expr && contains_call(*body.front().expr);
  }

  // Emits the call-suspension chain for `s`; returns the last node.
  int call_chain(const Stmt& s, std::vector<Pending>& pending, bool refs_stmt) {
    const auto calls = calls_of(s);
    int last = -1;
    for (std::size_t k = 0; k < calls.size(); ++k) {
      const std::string label = (calls.size() == 1 && refs_stmt) ? summarize(s) : to_source(*calls[k]);
      const int id = add(NodeKind::CallSuspension, "call", label);
      FlowNode& n = at(id);
      n.callee = calls[k]->callee;
      n.call_stmt = s.id;
      n.call_index = static_cast<int>(k);
      if (k == 0 && refs_stmt) n.stmts.push_back(s.id);
      connect(pending, id);
      pending = {{id, EdgeLabel::Seq}};
      last = id;
    }
    return last;
  }

  std::vector<Pending> build_block(const std::vector<Stmt>& body, std::vector<Pending> pending) {
    for (const auto& s : body) {
      if (is_plain(s)) {
        const bool can_join = open_group_ >= 0 && pending.size() == 1 && pending[0].from == open_group_;
        int id;
        if (can_join) {
          id = open_group_;
          at(id).stmts.push_back(s.id);
          at(id).label += "; " + summarize(s);
        } else {
          id = add(NodeKind::Statement, "stmt", summarize(s));
          at(id).stmts.push_back(s.id);
          connect(pending, id);
          pending = {{id, EdgeLabel::Seq}};
        }
        open_group_ = id;
        if (s.kind == Stmt::Kind::Return) {
          at(id).is_return = true;
          graph_.edges.push_back({id, graph_.exit, EdgeLabel::Seq});
          pending.clear();
          open_group_ = -1;
        }
        continue;
      }

      open_group_ = -1;
      if (s.kind == Stmt::Kind::If) {
        call_chain(s, pending, false);
        const int pred = add(NodeKind::Predicate, "pred", summarize(s));
        at(pred).stmts.push_back(s.id);
        connect(pending, pred);
        std::vector<Pending> then_in{{pred, EdgeLabel::True}};
        std::vector<Pending> else_in{{pred, EdgeLabel::False}};
        auto branch = [&](const std::vector<Stmt>& blk, std::vector<Pending> in, bool then_side) {
          if (starts_with_call(blk)) {
            const int m = add(NodeKind::Statement, "mark", then_side ? "then-begin" : "else-begin");
            at(m).marker_of = s.id;
            at(m).marker_then = then_side;
            connect(in, m);
            in = {{m, EdgeLabel::Seq}};
          }
          open_group_ = -1;
          auto out = build_block(blk, std::move(in));
          open_group_ = -1;
          return out;
        };
        auto then_out = branch(s.then_body, std::move(then_in), true);
        auto else_out = branch(s.else_body, std::move(else_in), false);
        pending = std::move(then_out);
        pending.insert(pending.end(), else_out.begin(), else_out.end());
        continue;
      }

      if (contains_call(*s.expr)) {
        const int last = call_chain(s, pending, true);
        if (s.kind == Stmt::Kind::Return) {
          at(last).is_return = true;
          graph_.edges.push_back({last, graph_.exit, EdgeLabel::Seq});
          pending.clear();
        }
        continue;
      }

      // statement reading input: its own node
      const int id = add(NodeKind::Statement, "stmt", summarize(s));
      at(id).stmts.push_back(s.id);
      connect(pending, id);
      pending = {{id, EdgeLabel::Seq}};
      if (s.kind == Stmt::Kind::Return) {
        at(id).is_return = true;
        graph_.edges.push_back({id, graph_.exit, EdgeLabel::Seq});
        pending.clear();
      }
    }
    return pending;
  }
};

}  // namespace detail

/// Builds the flow graph of one function. Ids are local (0 = entry,
/// 1 = exit, then creation order) until number_nodes assigns global ids.
///
/// Straight-line statements free of calls and read() coalesce into one
/// node; a return closes the group. A statement containing calls becomes
/// one call-suspension node per call, chained in evaluation order. An if
/// yields one predicate node (preceded by the chain of calls in its
/// condition); a branch whose first node would be a call-suspension node
/// starts with a branch-begin marker node.
inline FlowGraph build_flow_graph(const FuncDef& func) { return detail::GraphBuilder(func).build(); }

/// Sidecar override: (function, structural key) -> global id.
struct NodeMap {
  std::map<std::pair<std::string, std::string>, int> entries;

  /// Parses `function.key = id` lines; `#` starts a comment.
  static NodeMap parse(std::string_view text) {
    NodeMap map;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string{};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
      };
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      const auto where = "line " + std::to_string(lineno);
      if (eq == std::string::npos) throw NodeMapError(where + ": expected 'function.key = id'");
      const std::string lhs = trim(line.substr(0, eq));
      const std::string rhs = trim(line.substr(eq + 1));
      const auto dot = lhs.rfind('.');
      if (dot == std::string::npos || dot == 0 || dot + 1 == lhs.size())
        throw NodeMapError(where + ": expected 'function.key' before '='");
      int id = 0;
      try {
        std::size_t used = 0;
        id = std::stoi(rhs, &used);
        if (used != rhs.size()) throw std::invalid_argument(rhs);
      } catch (const std::exception&) {
        throw NodeMapError(where + ": invalid id '" + rhs + "'");
      }
      if (id <= 0) throw NodeMapError(where + ": ids must be positive");
      auto key = std::make_pair(lhs.substr(0, dot), lhs.substr(dot + 1));
      if (map.entries.count(key)) throw NodeMapError(where + ": duplicate entry for " + lhs);
      map.entries[key] = id;
    }
    return map;
  }
};

namespace detail {

// Preorder depth-first walk from entry, true branches before false.
inline std::vector<int> dfs_order(const FlowGraph& g) {
  std::vector<int> order;
  std::set<int> seen;
  std::vector<int> stack{g.entry};
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (!seen.insert(id).second) continue;
    order.push_back(id);
    auto outs = g.out_edges(id);
    // push false first so true is visited first
    std::stable_sort(outs.begin(), outs.end(), [](const FlowEdge& a, const FlowEdge& b) {
      return static_cast<int>(a.label) > static_cast<int>(b.label);
    });
    for (const auto& e : outs)
      if (!seen.count(e.to)) stack.push_back(e.to);
  }
  return order;
}

}  // namespace detail

/// Assigns globally unique ids to graphs built by build_flow_graph (in
/// program source order). Functions named in `override_map` take their ids
/// from it and must be fully covered; the rest are numbered by a
/// deterministic depth-first walk, skipping ids the override already uses.
inline std::vector<FlowGraph> number_nodes(const ProgramAst& program,
                                           const std::optional<NodeMap>& override_map = std::nullopt) {
  std::vector<FlowGraph> graphs;
  graphs.reserve(program.functions.size());
  for (const auto& f : program.functions) graphs.push_back(build_flow_graph(f));

  std::set<int> used;
  std::set<std::string> mapped_functions;
  if (override_map) {
    std::map<int, std::string> seen_ids;
    for (const auto& [key, id] : override_map->entries) {
      const auto& [fn, node_key] = key;
      auto g = std::find_if(graphs.begin(), graphs.end(), [&](const FlowGraph& x) { return x.owner == fn; });
      if (g == graphs.end()) throw NodeMapError("unknown function '" + fn + "'");
      if (!g->find_key(node_key)) throw NodeMapError("unknown node '" + fn + "." + node_key + "'");
      if (auto it = seen_ids.find(id); it != seen_ids.end())
        throw NodeMapError("id " + std::to_string(id) + " assigned to both " + it->second + " and " + fn + "." +
                           node_key);
      seen_ids[id] = fn + "." + node_key;
      used.insert(id);
      mapped_functions.insert(fn);
    }
    for (const auto& fn : mapped_functions) {
      const auto& g = *std::find_if(graphs.begin(), graphs.end(), [&](const FlowGraph& x) { return x.owner == fn; });
      for (const auto& n : g.nodes)
        if (!override_map->entries.count({fn, n.key}))
          throw NodeMapError("node map does not cover '" + fn + "." + n.key + "'");
    }
  }

  int next = 1;
  for (auto& g : graphs) {
    std::map<int, int> mapping;
    if (mapped_functions.count(g.owner)) {
      for (const auto& n : g.nodes) mapping[n.id] = override_map->entries.at({g.owner, n.key});
    } else {
      for (int local : detail::dfs_order(g)) {
        while (used.count(next)) ++next;
        mapping[local] = next;
        used.insert(next);
      }
    }
    g.renumber(mapping);
  }
  return graphs;
}

/// V(G) = E - N + 2.
inline int cyclomatic_complexity(const FlowGraph& g) {
  return static_cast<int>(g.edges.size()) - static_cast<int>(g.nodes.size()) + 2;
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace detail

/// Graphviz rendering: one cluster per function, true/false labels on
/// predicate edges and dashed edges from each call site to its callee's
/// entry (when the callee's graph is in `graphs`).
inline std::string to_dot(const std::vector<FlowGraph>& graphs) {
  std::string out = "// flow graph notation (recpath)\n";
  if (graphs.empty()) return out + "digraph fgn {}\n";
  out += "digraph fgn {\n  node [shape=circle];\n";
  std::map<std::string, int> entries;
  for (const auto& g : graphs) entries[g.owner] = g.entry;
  for (const auto& g : graphs) {
    out += "  subgraph \"cluster_" + detail::dot_escape(g.owner) + "\" {\n";
    out += "    label=\"" + detail::dot_escape(g.owner) + "\";\n";
    for (const auto& n : g.nodes) {
      out += "    n" + std::to_string(n.id) + " [label=\"" + std::to_string(n.id) + "\\n" + to_string(n.kind) +
             "\", tooltip=\"" + detail::dot_escape(n.label) + "\"";
      if (n.kind == NodeKind::Predicate) out += ", shape=diamond";
      out += "];\n";
    }
    for (const auto& e : g.edges) {
      out += "    n" + std::to_string(e.from) + " -> n" + std::to_string(e.to);
      if (e.label != EdgeLabel::Seq) out += std::string(" [label=\"") + to_string(e.label) + "\"]";
      out += ";\n";
    }
    out += "  }\n";
  }
  for (const auto& g : graphs)
    for (const auto& [site, callee] : g.call_sites())
      if (auto it = entries.find(callee); it != entries.end())
        out += "  n" + std::to_string(site) + " -> n" + std::to_string(it->second) + " [style=dashed];\n";
  out += "}\n";
  return out;
}

}  // namespace recpath
