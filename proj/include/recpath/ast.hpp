#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace recpath {

using Value = std::int64_t;
using StmtId = int;

struct SourcePos {
  int line = 1;
  int column = 1;
};

enum class BinOp { Add, Sub, Mul, Div, Lt, Gt, Le, Ge, Eq, Ne };

inline const char* to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Lt: return "<";
    case BinOp::Gt: return ">";
    case BinOp::Le: return "<=";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
  }
  return "?";
}

inline bool is_comparison(BinOp op) {
  return op != BinOp::Add && op != BinOp::Sub && op != BinOp::Mul && op != BinOp::Div;
}

enum class VarScope { Local, Global };

/// A resolved variable. Locals (parameters included) index the function's
/// frame; globals index ProgramAst::globals.
struct VarRef {
  std::string name;
  VarScope scope = VarScope::Local;
  int slot = -1;
};

struct Expr {
  enum class Kind { Int, Var, Call, Read, Neg, Binary };

  Kind kind = Kind::Int;
  Value value = 0;
  VarRef var;
  std::string callee;
  BinOp op = BinOp::Add;
  std::vector<Expr> args;  // call arguments, Neg operand, or Binary lhs/rhs
  SourcePos pos;
};

struct Stmt {
  enum class Kind { Decl, Assign, If, Return, Print, ExprStmt };

  Kind kind = Kind::ExprStmt;
  StmtId id = -1;
  SourcePos pos;
  VarRef target;             // Decl, Assign
  std::optional<Expr> expr;  // initializer, rhs, condition, return value, printed value
  std::vector<Stmt> then_body;
  std::vector<Stmt> else_body;
  bool has_else = false;
};

struct FuncDef {
  std::string name;
  std::vector<std::string> params;
  std::vector<Stmt> body;
  bool returns_value = true;
  int frame_size = 0;  // params occupy slots [0, params.size())
  SourcePos pos;
};

struct Global {
  std::string name;
  Value init = 0;
};

struct ProgramAst {
  std::vector<Global> globals;
  std::vector<FuncDef> functions;
  std::string entry = "main";

  const FuncDef* find_function(const std::string& name) const {
    for (const auto& f : functions)
      if (f.name == name) return &f;
    return nullptr;
  }

  int global_index(const std::string& name) const {
    for (std::size_t i = 0; i < globals.size(); ++i)
      if (globals[i].name == name) return static_cast<int>(i);
    return -1;
  }
};

// Expression helpers shared by the graph builder, interpreter and enumerator.

inline bool contains_call(const Expr& e) {
  if (e.kind == Expr::Kind::Call) return true;
  for (const auto& a : e.args)
    if (contains_call(a)) return true;
  return false;
}

inline bool contains_read(const Expr& e) {
  if (e.kind == Expr::Kind::Read) return true;
  for (const auto& a : e.args)
    if (contains_read(a)) return true;
  return false;
}

/// Calls in evaluation order: arguments (left to right) before the call
/// that consumes them, left operand before right.
inline void collect_calls(const Expr& e, std::vector<const Expr*>& out) {
  for (const auto& a : e.args) collect_calls(a, out);
  if (e.kind == Expr::Kind::Call) out.push_back(&e);
}

inline std::vector<const Expr*> calls_of(const Stmt& s) {
  std::vector<const Expr*> out;
  if (s.expr) collect_calls(*s.expr, out);
  return out;
}

/// Finds a statement by id anywhere in the function body.
inline const Stmt* find_stmt(const std::vector<Stmt>& body, StmtId id) {
  for (const auto& s : body) {
    if (s.id == id) return &s;
    if (s.kind == Stmt::Kind::If) {
      if (const Stmt* r = find_stmt(s.then_body, id)) return r;
      if (const Stmt* r = find_stmt(s.else_body, id)) return r;
    }
  }
  return nullptr;
}

/// Structural equality: ignores source positions.
inline bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case Expr::Kind::Int:
      if (a.value != b.value) return false;
      break;
    case Expr::Kind::Var:
      if (a.var.name != b.var.name || a.var.scope != b.var.scope || a.var.slot != b.var.slot)
        return false;
      break;
    case Expr::Kind::Call:
      if (a.callee != b.callee) return false;
      break;
    case Expr::Kind::Binary:
      if (a.op != b.op) return false;
      break;
    case Expr::Kind::Read:
    case Expr::Kind::Neg:
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!structurally_equal(a.args[i], b.args[i])) return false;
  return true;
}

inline bool structurally_equal(const std::vector<Stmt>& a, const std::vector<Stmt>& b);

inline bool structurally_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.id != b.id || a.has_else != b.has_else) return false;
  if (a.target.name != b.target.name || a.target.scope != b.target.scope ||
      a.target.slot != b.target.slot)
    return false;
  if (a.expr.has_value() != b.expr.has_value()) return false;
  if (a.expr && !structurally_equal(*a.expr, *b.expr)) return false;
  return structurally_equal(a.then_body, b.then_body) &&
         structurally_equal(a.else_body, b.else_body);
}

inline bool structurally_equal(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!structurally_equal(a[i], b[i])) return false;
  return true;
}

inline bool structurally_equal(const ProgramAst& a, const ProgramAst& b) {
  if (a.entry != b.entry || a.globals.size() != b.globals.size() ||
      a.functions.size() != b.functions.size())
    return false;
  for (std::size_t i = 0; i < a.globals.size(); ++i)
    if (a.globals[i].name != b.globals[i].name || a.globals[i].init != b.globals[i].init)
      return false;
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    const auto& f = a.functions[i];
    const auto& g = b.functions[i];
    if (f.name != g.name || f.params != g.params || f.returns_value != g.returns_value ||
        f.frame_size != g.frame_size || !structurally_equal(f.body, g.body))
      return false;
  }
  return true;
}

}  // namespace recpath
