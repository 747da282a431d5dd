#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "recpath/program.hpp"
#include "recpath/recursion.hpp"
#include "recpath/symbolic.hpp"
#include "recpath/trace.hpp"

namespace recpath {

/// One complete interprocedural path, with the branch conditions collected
/// along it expressed over the entry inputs (entry parameters first, then
/// read() results in the order the path consumes them).
struct PathTrace {
  Trace trace;
  std::string entry;
  Constraint constraint;
  bool exact = true;  // every branch condition was affine in the inputs
  std::vector<std::string> input_names;
  std::optional<Atom> family;  // first decision taken inside a recursive function

  std::size_t input_count() const { return input_names.size(); }
  const std::vector<Branch>& assumed_branches() const { return trace.branches; }
  std::size_t activation_count() const { return trace.activations.size(); }
};

struct PathSet {
  std::vector<PathTrace> traces;
  int depth = 2;
  bool truncated = false;
  std::size_t dropped = 0;  // partial paths cut by the depth bound
};

struct EnumerateOptions {
  int depth = 2;
  std::size_t max_paths = 256;
  /// Drop branches whose collected conditions are provably unsatisfiable.
  bool prune = true;
};

namespace detail {

/// Symbolic executor that follows flow-graph edges. Statements are
/// evaluated over affine values; at each predicate both branches are
/// explored (true first). Continuation-passing keeps forks independent.
class PathEnumerator {
 public:
  PathEnumerator(const AnalyzedProgram& prog, const RecursionAnalysis& rec, const EnumerateOptions& opt)
      : prog_(prog), rec_(rec), opt_(opt) {}

  PathSet run(const std::string& entry) {
    const FuncDef& f = prog_.function(entry);
    State st;
    for (const auto& g : prog_.ast().globals) st.globals.push_back(Affine::of(g.init));
    std::vector<Affine> args;
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      args.push_back(Affine::input(st.slots++));
      st.names.push_back(f.params[i]);
      st.aliased.push_back(true);
    }
    call(entry, std::move(args), 0, st, [&](State& done, Affine) { finish(done, entry); });

    if (completed_ == 0 && limit_hit_)
      throw LimitError("max-paths " + std::to_string(opt_.max_paths) + " exceeded before any complete path");
    std::stable_sort(result_.traces.begin(), result_.traces.end(),
                     [](const PathTrace& a, const PathTrace& b) { return a.activation_count() < b.activation_count(); });
    result_.depth = opt_.depth;
    result_.dropped = dropped_;
    return std::move(result_);
  }

 private:
  struct Frame {
    const FuncDef* func = nullptr;
    const FlowGraph* graph = nullptr;
    int activation = 0;
    std::vector<Affine> locals;
    Affine last = Affine::of(0);
    Affine ret = Affine::of(0);
    bool returned = false;
    const StmtNodes* stmt = nullptr;  // statement under evaluation
    const Stmt* ast_stmt = nullptr;
    std::size_t next_call = 0;
  };

  struct State {
    Trace trace;
    std::vector<Affine> globals;
    std::vector<Frame> frames;
    std::map<std::string, int> chain;
    Constraint constraint;
    bool exact = true;
    int slots = 0;
    std::vector<std::string> names;
    std::vector<bool> aliased;
    std::optional<Atom> family;
    bool family_done = false;
  };

  using Done = std::function<void(State&, Affine)>;
  using ValueK = std::function<void(State&, Affine)>;
  using CondK = std::function<void(State&, std::optional<Atom>)>;

  const AnalyzedProgram& prog_;
  const RecursionAnalysis& rec_;
  const EnumerateOptions& opt_;
  PathSet result_;
  std::set<std::vector<std::tuple<int, int, int>>> seen_;
  std::size_t completed_ = 0;
  std::size_t dropped_ = 0;
  bool stop_ = false;
  bool limit_hit_ = false;

  static void emit(State& st, int node) { st.trace.steps.push_back({node, st.frames.back().activation}); }

  void finish(State& st, const std::string& entry) {
    std::vector<std::tuple<int, int, int>> key;
    for (const auto& b : st.trace.branches) key.emplace_back(b.activation, b.predicate, static_cast<int>(b.label));
    if (!seen_.insert(key).second) return;
    if (completed_ >= opt_.max_paths) {
      result_.truncated = true;
      stop_ = true;
      return;
    }
    ++completed_;
    PathTrace p;
    p.trace = st.trace;
    p.entry = entry;
    p.constraint = st.constraint;
    p.exact = st.exact;
    p.input_names = st.names;
    p.family = st.family;
    result_.traces.push_back(std::move(p));
  }

  void call(const std::string& name, std::vector<Affine> args, int site, State& st, const Done& done) {
    if (stop_) return;
    if (st.chain[name] >= opt_.depth) {
      result_.truncated = true;
      ++dropped_;
      if (completed_ + dropped_ > opt_.max_paths) limit_hit_ = true;
      if (completed_ == 0 && limit_hit_) stop_ = true;
      if (dropped_ > opt_.max_paths * 64) stop_ = true;
      return;
    }
    ++st.chain[name];
    const FuncDef& f = prog_.function(name);
    Frame fr;
    fr.func = &f;
    fr.graph = prog_.graph(name);
    fr.activation = static_cast<int>(st.trace.activations.size());
    const int parent = st.frames.empty() ? -1 : st.frames.back().activation;
    st.trace.activations.push_back({name, parent, site});
    fr.locals.assign(static_cast<std::size_t>(f.frame_size), Affine::of(0));
    for (std::size_t i = 0; i < args.size(); ++i) fr.locals[i] = std::move(args[i]);
    st.frames.push_back(std::move(fr));
    const FlowGraph& g = *st.frames.back().graph;
    emit(st, g.entry);
    walk(g.successor(g.entry), st, [&, name](State& s, Affine rv) {
      --s.chain[name];
      done(s, std::move(rv));
    });
  }

  void walk(int node, State& st, const Done& done) {
    while (!stop_) {
      Frame& fr = st.frames.back();
      const FlowGraph& g = *fr.graph;
      const FlowNode& n = g.node(node);
      switch (n.kind) {
        case NodeKind::Entry:
          node = g.successor(node);
          continue;
        case NodeKind::Exit: {
          emit(st, node);
          Affine rv = fr.returned ? fr.ret : fr.last;
          st.frames.pop_back();
          done(st, std::move(rv));
          return;
        }
        case NodeKind::Statement:
          emit(st, node);
          if (!n.stub)
            for (StmtId id : n.stmts) exec_simple(prog_.stmt(fr.func->name, id), st);
          node = g.successor(node);
          continue;
        case NodeKind::Predicate: {
          const Stmt& s = prog_.stmt(fr.func->name, n.stmts.front());
          begin_statement(s, st);
          const int pred = node;
          condition(*s.expr, st, [&, pred](State& s2, std::optional<Atom> atom) { branch(pred, s2, atom, done); });
          return;
        }
        case NodeKind::CallSuspension: {
          // first call of a statement: evaluate the whole statement, which
          // walks the rest of its call chain
          const Stmt& s = prog_.stmt(fr.func->name, n.call_stmt);
          const StmtNodes& sn = prog_.stmt_nodes(s.id);
          begin_statement(s, st);
          if (s.kind == Stmt::Kind::If) {
            condition(*s.expr, st, [&](State& s2, std::optional<Atom> atom) { branch(sn.node, s2, atom, done); });
          } else {
            const int after = g.successor(sn.calls.back());
            eval(*s.expr, st, [&, after](State& s2, Affine v) {
              apply(s, s2, std::move(v));
              walk(after, s2, done);
            });
          }
          return;
        }
      }
    }
  }

  void begin_statement(const Stmt& s, State& st) {
    Frame& fr = st.frames.back();
    fr.stmt = &prog_.stmt_nodes(s.id);
    fr.ast_stmt = &s;
    fr.next_call = 0;
  }

  void branch(int pred, State& st, const std::optional<Atom>& atom, const Done& done) {
    emit(st, pred);
    const Frame& fr = st.frames.back();
    const FlowGraph& g = *fr.graph;
    const bool in_recursive = rec_.is_recursive(fr.func->name);
    const int act = fr.activation;
    for (EdgeLabel label : {EdgeLabel::True, EdgeLabel::False}) {
      if (stop_) return;
      State s = label == EdgeLabel::True ? st : std::move(st);
      std::optional<Atom> a;
      if (atom) a = label == EdgeLabel::True ? *atom : atom->negated();
      if (a) {
        if (a->lhs.coeffs.empty()) {
          if (!compare<Value>(a->lhs.constant, a->op, 0)) continue;
        } else {
          s.constraint.atoms.push_back(*a);
          if (opt_.prune && !s.constraint.feasible()) continue;
        }
      } else {
        s.exact = false;
      }
      s.trace.branches.push_back({act, pred, label});
      if (in_recursive && !s.family_done) {
        s.family_done = true;
        if (a && !a->lhs.coeffs.empty()) s.family = a;
      }
      walk(g.successor(pred, label), s, done);
    }
  }

  Affine& var(const VarRef& v, State& st) {
    return v.scope == VarScope::Global ? st.globals[static_cast<std::size_t>(v.slot)]
                                       : st.frames.back().locals[static_cast<std::size_t>(v.slot)];
  }

  void apply(const Stmt& s, State& st, Affine v) {
    Frame& fr = st.frames.back();
    switch (s.kind) {
      case Stmt::Kind::Decl:
      case Stmt::Kind::Assign:
        var(s.target, st) = v;
        st.frames.back().last = std::move(v);
        break;
      case Stmt::Kind::Print:
      case Stmt::Kind::ExprStmt:
        fr.last = std::move(v);
        break;
      case Stmt::Kind::Return:
        fr.ret = std::move(v);
        fr.returned = true;
        break;
      case Stmt::Kind::If:
        break;
    }
  }

  void exec_simple(const Stmt& s, State& st) {
    begin_statement(s, st);
    if (!s.expr) {
      if (s.kind == Stmt::Kind::Return) apply(s, st, Affine::of(0));
      return;
    }
    eval(*s.expr, st, [&](State& s2, Affine v) { apply(s, s2, std::move(v)); });
  }

  static Affine binop(BinOp op, const Affine& l, const Affine& r) {
    switch (op) {
      case BinOp::Add: return l + r;
      case BinOp::Sub: return l - r;
      case BinOp::Mul: return l * r;
      case BinOp::Div: return l / r;
      default:
        if (l.is_constant() && r.is_constant())
          return Affine::of(compare<Value>(l.constant, from_binop(op), r.constant) ? 1 : 0);
        return Affine::unknown();
    }
  }

  void condition(const Expr& e, State& st, const CondK& k) {
    if (e.kind == Expr::Kind::Binary && is_comparison(e.op)) {
      eval(e.args[0], st, [&](State& s, Affine l) {
        eval(e.args[1], s, [&, l](State& s2, Affine r) {
          Affine diff = l - r;
          if (!diff.known) return k(s2, std::nullopt);
          k(s2, Atom{std::move(diff), from_binop(e.op)});
        });
      });
      return;
    }
    eval(e, st, [&](State& s, Affine v) {
      if (!v.known) return k(s, std::nullopt);
      k(s, Atom{std::move(v), CmpOp::Ne});
    });
  }

  void eval(const Expr& e, State& st, const ValueK& k) {
    switch (e.kind) {
      case Expr::Kind::Int:
        return k(st, Affine::of(e.value));
      case Expr::Kind::Var:
        return k(st, var(e.var, st));
      case Expr::Kind::Read: {
        const int slot = st.slots++;
        const Stmt* s = st.frames.back().ast_stmt;
        const bool named = s && (s->kind == Stmt::Kind::Assign || s->kind == Stmt::Kind::Decl) && s->expr &&
                           s->expr->kind == Expr::Kind::Read;
        st.names.push_back(named ? s->target.name : "in" + std::to_string(slot));
        st.aliased.push_back(false);
        return k(st, Affine::input(slot));
      }
      case Expr::Kind::Neg:
        return eval(e.args[0], st, [&](State& s, Affine v) { k(s, -v); });
      case Expr::Kind::Binary:
        return eval(e.args[0], st, [&](State& s, Affine l) {
          eval(e.args[1], s, [&, l](State& s2, Affine r) { k(s2, binop(e.op, l, r)); });
        });
      case Expr::Kind::Call:
        return eval_args(e, 0, st, {}, [&](State& s, std::vector<Affine> args) { invoke(e, s, std::move(args), k); });
    }
  }

  using ArgsK = std::function<void(State&, std::vector<Affine>)>;

  void eval_args(const Expr& e, std::size_t i, State& st, std::vector<Affine> acc, const ArgsK& k) {
    if (i == e.args.size()) return k(st, std::move(acc));
    eval(e.args[i], st, [&, i, acc](State& s, Affine v) {
      auto next = acc;
      next.push_back(std::move(v));
      eval_args(e, i + 1, s, std::move(next), k);
    });
  }

  void invoke(const Expr& e, State& st, std::vector<Affine> args, const ValueK& k) {
    Frame& fr = st.frames.back();
    const int site = fr.stmt->calls.at(fr.next_call++);
    emit(st, site);
    const FuncDef& callee = prog_.function(e.callee);
    for (std::size_t j = 0; j < args.size(); ++j) {
      if (auto slot = args[j].plain_input(); slot && !st.aliased[static_cast<std::size_t>(*slot)]) {
        st.names[static_cast<std::size_t>(*slot)] = callee.params[j];
        st.aliased[static_cast<std::size_t>(*slot)] = true;
      }
    }
    call(e.callee, std::move(args), site, st, [&, site](State& s, Affine rv) {
      emit(s, site);
      k(s, std::move(rv));
    });
  }
};

}  // namespace detail

/// Depth-first enumeration of complete paths from `entry`. A call chain may
/// hold at most `depth` activations of any one function; paths exceeding it
/// are dropped and mark the set truncated. Result order: fewest
/// activations first, ties in exploration order (true branch first).
inline PathSet enumerate_paths(const AnalyzedProgram& prog, const RecursionAnalysis& rec, const std::string& entry,
                               const EnumerateOptions& options = {}) {
  if (options.depth < 1) throw LimitError("depth must be positive");
  if (options.max_paths < 1) throw LimitError("max-paths must be positive");
  return detail::PathEnumerator(prog, rec, options).run(entry);
}

/// Baseline method: the first path takes every true branch; each further
/// path flips one not-yet-flipped decision of an earlier path and takes
/// true branches afterwards. Calls are opaque.
inline std::vector<std::vector<int>> basis_paths(const FlowGraph& g) {
  auto complete = [&](std::vector<int> prefix) {
    int node = prefix.back();
    while (node != g.exit) {
      const FlowNode& n = g.node(node);
      node = g.successor(node, n.kind == NodeKind::Predicate ? EdgeLabel::True : EdgeLabel::Seq);
      prefix.push_back(node);
    }
    return prefix;
  };
  std::vector<std::vector<int>> paths{complete({g.entry})};
  std::set<int> flipped;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto base = paths[i];
    for (std::size_t pos = 0; pos + 1 < base.size(); ++pos) {
      const int v = base[pos];
      if (g.node(v).kind != NodeKind::Predicate || flipped.count(v)) continue;
      flipped.insert(v);
      const EdgeLabel taken = g.successor(v, EdgeLabel::True) == base[pos + 1] ? EdgeLabel::True : EdgeLabel::False;
      std::vector<int> prefix(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
      prefix.push_back(g.successor(v, taken == EdgeLabel::True ? EdgeLabel::False : EdgeLabel::True));
      paths.push_back(complete(std::move(prefix)));
    }
  }
  return paths;
}

enum class RenderMode { Full, Paper };

/// Dash-separated node ids.
///
/// Full: every step as recorded.
/// Paper: a compact convention:
///  - a call-suspension node is repeated on resume only if it is a return;
///  - a recursive function's exit appears only for an activation that took
///    a base-case branch (non-recursive exits always appear);
///  - inside a recursive caller, a call to a different function shows the
///    callee only up to its first call-suspension node;
///  - rendering ends at a node standing for an omitted call.
inline std::string render_trace(const Trace& t, RenderMode mode, const AnalyzedProgram& prog,
                                const RecursionAnalysis& rec) {
  if (mode == RenderMode::Full) return join_ids(t.node_ids());

  const std::size_t n_act = t.activations.size();
  std::vector<bool> base_taken(n_act, false), cut(n_act, false), cut_done(n_act, false), hidden(n_act, false);
  for (const auto& b : t.branches) {
    const auto& fn = t.activations[static_cast<std::size_t>(b.activation)].function;
    if (!rec.is_recursive(fn)) continue;
    for (const auto& bc : rec.info(fn).base_cases)
      if (bc.predicate == b.predicate && bc.label == b.label) base_taken[static_cast<std::size_t>(b.activation)] = true;
  }
  for (std::size_t a = 0; a < n_act; ++a) {
    const auto& act = t.activations[a];
    if (act.parent < 0) continue;
    const auto& parent_fn = t.activations[static_cast<std::size_t>(act.parent)].function;
    cut[a] = rec.is_recursive(parent_fn) && parent_fn != act.function;
  }

  std::vector<int> out;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& step = t.steps[i];
    const auto a = static_cast<std::size_t>(step.activation);
    const auto& act = t.activations[a];
    if (i > 0 && act.parent >= 0 && step.node == prog.graph(act.function)->entry && t.steps[i - 1].activation == act.parent) {
      const auto p = static_cast<std::size_t>(act.parent);
      hidden[a] = hidden[p] || cut_done[p];
    }
    if (hidden[a] || cut_done[a]) continue;
    const FlowNode& n = prog.node(step.node);
    if (n.kind == NodeKind::Exit) {
      if (!rec.is_recursive(act.function) || base_taken[a]) out.push_back(step.node);
      continue;
    }
    if (n.kind == NodeKind::CallSuspension && i > 0 && t.steps[i - 1].activation != step.activation) {
      if (n.is_return) out.push_back(step.node);
      continue;
    }
    out.push_back(step.node);
    if (n.stub) break;
    if (n.kind == NodeKind::CallSuspension && cut[a]) cut_done[a] = true;
  }
  return join_ids(out);
}

}  // namespace recpath
