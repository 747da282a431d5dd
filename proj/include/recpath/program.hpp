#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "recpath/ast.hpp"
#include "recpath/error.hpp"
#include "recpath/flowgraph.hpp"

namespace recpath {

/// How execution of one statement shows up in a trace.
struct StmtNodes {
  int node = 0;             // statement/predicate/stub node; 0 if none
  bool emits = false;       // first statement of its node: entering it emits `node`
  std::vector<int> calls;   // call-suspension nodes in evaluation order
  int then_marker = 0;
  int else_marker = 0;
  bool skipped = false;     // omitted: neither executed nor traced
  bool stub = false;        // omitted call: traced as `node`, not executed
};

struct LoadOptions {
  std::optional<NodeMap> node_map;
  /// Function names or global node ids to drop before analysis.
  std::vector<std::string> omit;
  std::string entry = "main";
};

/// A validated program together with its numbered flow graphs, after any
/// study edits. All analyses take one of these.
class AnalyzedProgram {
 public:
  AnalyzedProgram(ProgramAst ast, const LoadOptions& options = {}) : ast_(std::move(ast)) {
    ast_.entry = options.entry;
    graphs_ = number_nodes(ast_, options.node_map);
    for (const auto& item : options.omit) apply_omit(item);
    if (!ast_.find_function(ast_.entry) || omitted_functions_.count(ast_.entry))
      throw ResolveError(ast_.entry, 1, 1, "entry function not found");
    index_statements();
  }

  const ProgramAst& ast() const { return ast_; }
  const std::vector<FlowGraph>& graphs() const { return graphs_; }
  const std::string& entry() const { return ast_.entry; }

  bool is_omitted(const std::string& function) const { return omitted_functions_.count(function) != 0; }

  const FlowGraph* graph(const std::string& function) const {
    for (const auto& g : graphs_)
      if (g.owner == function) return &g;
    return nullptr;
  }

  const FuncDef& function(const std::string& name) const {
    const FuncDef* f = ast_.find_function(name);
    if (!f) throw std::out_of_range("no function '" + name + "'");
    return *f;
  }

  /// The graph owning global node id `id`.
  const FlowGraph& owner_of(int id) const {
    for (const auto& g : graphs_)
      if (g.has_node(id)) return g;
    throw std::out_of_range("no node " + std::to_string(id));
  }

  const FlowNode& node(int id) const { return owner_of(id).node(id); }

  const StmtNodes& stmt_nodes(StmtId id) const { return stmt_nodes_.at(id); }

  const Stmt& stmt(const std::string& function, StmtId id) const {
    const Stmt* s = find_stmt(this->function(function).body, id);
    if (!s) throw std::out_of_range("no statement " + std::to_string(id));
    return *s;
  }

 private:
  ProgramAst ast_;
  std::vector<FlowGraph> graphs_;
  std::set<std::string> omitted_functions_;
  std::set<StmtId> skipped_;
  std::set<StmtId> stubbed_;
  std::map<StmtId, StmtNodes> stmt_nodes_;

  FlowGraph& mutable_owner(int id) {
    for (auto& g : graphs_)
      if (g.has_node(id)) return g;
    throw OmitError("no node with id " + std::to_string(id));
  }

  static bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  }

  void apply_omit(const std::string& item) {
    if (all_digits(item))
      omit_node(std::stoi(item));
    else
      omit_function(item);
  }

  void omit_node(int id) {
    FlowGraph& g = mutable_owner(id);
    const FlowNode n = g.node(id);
    const std::string what = "node " + std::to_string(id);
    if (n.kind == NodeKind::Entry || n.kind == NodeKind::Exit) throw OmitError("cannot omit " + what + " (" + to_string(n.kind) + ")");
    if (n.kind == NodeKind::Predicate) throw OmitError("cannot omit predicate " + what);
    if (n.is_return) throw OmitError("cannot omit return " + what);
    if (n.kind == NodeKind::CallSuspension) {
      const Stmt& s = stmt(g.owner, n.call_stmt);
      if (s.kind == Stmt::Kind::If || calls_of(s).size() != 1)
        throw OmitError("cannot omit " + what + ": its call is one of several in a statement or condition");
    }
    for (StmtId sid : n.stmts) skipped_.insert(sid);
    g.splice_out(id);
  }

  void omit_function(const std::string& name) {
    if (!ast_.find_function(name)) throw OmitError("no function '" + name + "'");
    if (name == ast_.entry) throw OmitError("cannot omit the entry function '" + name + "'");
    omitted_functions_.insert(name);
    graphs_.erase(std::remove_if(graphs_.begin(), graphs_.end(), [&](const FlowGraph& g) { return g.owner == name; }),
                  graphs_.end());
    for (auto& g : graphs_) {
      std::set<StmtId> affected;
      for (const auto& n : g.nodes)
        if (n.kind == NodeKind::CallSuspension && n.callee == name) affected.insert(n.call_stmt);
      for (StmtId sid : affected) {
        const Stmt& s = stmt(g.owner, sid);
        if (s.kind == Stmt::Kind::If || s.kind == Stmt::Kind::Return)
          throw OmitError("cannot omit '" + name + "': it is called from a " +
                          (s.kind == Stmt::Kind::If ? "condition" : "return") + " in '" + g.owner + "'");
        std::vector<int> chain;
        for (const auto& n : g.nodes)
          if (n.kind == NodeKind::CallSuspension && n.call_stmt == sid) chain.push_back(n.id);
        std::sort(chain.begin(), chain.end(),
                  [&](int a, int b) { return g.node(a).call_index < g.node(b).call_index; });
        FlowNode& head = g.node(chain.front());
        head.kind = NodeKind::Statement;
        head.stub = true;
        head.callee.clear();
        head.label = "omitted: " + head.label;
        for (std::size_t k = 1; k < chain.size(); ++k) g.splice_out(chain[k]);
        stubbed_.insert(sid);
      }
    }
  }

  void index_statements() {
    for (const auto& f : ast_.functions) {
      if (omitted_functions_.count(f.name)) continue;
      const FlowGraph& g = *graph(f.name);
      std::vector<const Stmt*> all;
      collect(f.body, all);
      for (const Stmt* s : all) {
        StmtNodes& sn = stmt_nodes_[s->id];
        sn.skipped = skipped_.count(s->id) != 0;
        sn.stub = stubbed_.count(s->id) != 0;
      }
      for (const auto& n : g.nodes) {
        for (std::size_t k = 0; k < n.stmts.size(); ++k) {
          StmtNodes& sn = stmt_nodes_[n.stmts[k]];
          if (n.kind != NodeKind::CallSuspension) {
            sn.node = n.id;
            sn.emits = k == 0;
          }
        }
        if (n.kind == NodeKind::CallSuspension) {
          auto& calls = stmt_nodes_[n.call_stmt].calls;
          if (calls.size() <= static_cast<std::size_t>(n.call_index)) calls.resize(n.call_index + 1, 0);
          calls[n.call_index] = n.id;
        }
        if (n.marker_of >= 0) (n.marker_then ? stmt_nodes_[n.marker_of].then_marker : stmt_nodes_[n.marker_of].else_marker) = n.id;
      }
    }
  }

  static void collect(const std::vector<Stmt>& body, std::vector<const Stmt*>& out) {
    for (const auto& s : body) {
      out.push_back(&s);
      collect(s.then_body, out);
      collect(s.else_body, out);
    }
  }
};

}  // namespace recpath
