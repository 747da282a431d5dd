#pragma once

#include <string>

#include "recpath/ast.hpp"

namespace recpath {

namespace detail {

// 0 = comparison, 1 = additive, 2 = multiplicative, 3 = unary/primary
inline int precedence(const Expr& e) {
  if (e.kind != Expr::Kind::Binary) return 3;
  if (is_comparison(e.op)) return 0;
  if (e.op == BinOp::Add || e.op == BinOp::Sub) return 1;
  return 2;
}

inline void print_expr(const Expr& e, int min_prec, std::string& out) {
  const bool paren = precedence(e) < min_prec;
  if (paren) out += '(';
  switch (e.kind) {
    case Expr::Kind::Int:
      out += std::to_string(e.value);
      break;
    case Expr::Kind::Var:
      out += e.var.name;
      break;
    case Expr::Kind::Read:
      out += "read()";
      break;
    case Expr::Kind::Call:
      out += e.callee;
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        print_expr(e.args[i], 0, out);
      }
      out += ')';
      break;
    case Expr::Kind::Neg:
      out += '-';
      print_expr(e.args[0], 3, out);
      break;
    case Expr::Kind::Binary: {
      const int p = precedence(e);
      // comparisons are non-associative; arithmetic is left-associative
      print_expr(e.args[0], p == 0 ? 1 : p, out);
      out += ' ';
      out += to_string(e.op);
      out += ' ';
      print_expr(e.args[1], p + 1, out);
      break;
    }
  }
  if (paren) out += ')';
}

inline void print_block(const std::vector<Stmt>& body, int indent, std::string& out);

inline void print_stmt(const Stmt& s, int indent, std::string& out) {
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  switch (s.kind) {
    case Stmt::Kind::Decl:
      out += "int " + s.target.name;
      if (s.expr) {
        out += " = ";
        print_expr(*s.expr, 0, out);
      }
      out += ";\n";
      break;
    case Stmt::Kind::Assign:
      out += s.target.name + " = ";
      print_expr(*s.expr, 0, out);
      out += ";\n";
      break;
    case Stmt::Kind::Return:
      out += "return";
      if (s.expr) {
        out += ' ';
        print_expr(*s.expr, 0, out);
      }
      out += ";\n";
      break;
    case Stmt::Kind::Print:
      out += "print(";
      print_expr(*s.expr, 0, out);
      out += ");\n";
      break;
    case Stmt::Kind::ExprStmt:
      print_expr(*s.expr, 0, out);
      out += ";\n";
      break;
    case Stmt::Kind::If:
      out += "if (";
      print_expr(*s.expr, 0, out);
      out += ") {\n";
      print_block(s.then_body, indent + 1, out);
      out.append(static_cast<std::size_t>(indent) * 2, ' ');
      out += '}';
      if (s.has_else) {
        out += " else {\n";
        print_block(s.else_body, indent + 1, out);
        out.append(static_cast<std::size_t>(indent) * 2, ' ');
        out += '}';
      }
      out += '\n';
      break;
  }
}

inline void print_block(const std::vector<Stmt>& body, int indent, std::string& out) {
  for (const auto& s : body) print_stmt(s, indent, out);
}

}  // namespace detail

inline std::string to_source(const Expr& e) {
  std::string out;
  detail::print_expr(e, 0, out);
  return out;
}

/// One-line rendering of a statement header, used for flow-graph labels.
/// If statements render as their condition only.
inline std::string summarize(const Stmt& s) {
  if (s.kind == Stmt::Kind::If) return to_source(*s.expr);
  std::string out;
  detail::print_stmt(s, 0, out);
  while (!out.empty() && (out.back() == '\n' || out.back() == ';')) out.pop_back();
  return out;
}

inline std::string pretty_print(const ProgramAst& prog) {
  std::string out;
  for (const auto& g : prog.globals) out += "int " + g.name + " = " + std::to_string(g.init) + ";\n";
  for (const auto& f : prog.functions) {
    if (!out.empty()) out += '\n';
    out += (f.returns_value ? "int " : "void ") + f.name + "(";
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i) out += ", ";
      out += "int " + f.params[i];
    }
    out += ") {\n";
    detail::print_block(f.body, 1, out);
    out += "}\n";
  }
  return out;
}

}  // namespace recpath
