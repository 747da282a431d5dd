#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "recpath/ast.hpp"
#include "recpath/error.hpp"
#include "recpath/lexer.hpp"

namespace recpath {

namespace detail {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

  ProgramAst parse_program() {
    ProgramAst prog;
    while (!at_end()) {
      const Token& type = peek();
      if (!type.is(TokenKind::Keyword, "int") && !type.is(TokenKind::Keyword, "void"))
        fail("'int' or 'void'");
      const bool is_void = type.lexeme == "void";
      const Token& name_tok = peek(1);
      if (name_tok.kind != TokenKind::Identifier) {
        ++pos_;
        fail("identifier");
      }
      if (!is_void && !peek(2).is(TokenKind::Punctuation, "(")) {
        prog.globals.push_back(parse_global());
        global_pos_.push_back({name_tok.line, name_tok.column});
      } else {
        prog.functions.push_back(parse_function());
      }
    }
    return prog;
  }

  std::vector<SourcePos> global_pos_;

 private:
  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
  StmtId next_stmt_ = 0;

  bool at_end() const { return pos_ >= toks_.size(); }

  const Token& peek(std::size_t ahead = 0) const {
    static const Token eof{TokenKind::Punctuation, "<end of input>", 0, 0};
    if (pos_ + ahead >= toks_.size()) {
      if (toks_.empty()) return eof;
      static thread_local Token end_tok;
      end_tok = toks_.back();
      end_tok.lexeme = "<end of input>";
      end_tok.column += static_cast<int>(toks_.back().lexeme.size());
      return end_tok;
    }
    return toks_[pos_ + ahead];
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    throw ParseError(t.line == 0 ? 1 : t.line, t.column == 0 ? 1 : t.column, expected, t.lexeme);
  }

  bool accept(TokenKind kind, std::string_view text) {
    if (!at_end() && peek().is(kind, text)) {
      ++pos_;
      return true;
    }
    return false;
  }

  const Token& expect(TokenKind kind, std::string_view text) {
    if (at_end() || !peek().is(kind, text)) fail("'" + std::string(text) + "'");
    return toks_[pos_++];
  }

  const Token& expect_ident() {
    if (at_end() || peek().kind != TokenKind::Identifier) fail("identifier");
    return toks_[pos_++];
  }

  Value expect_int() {
    if (at_end() || peek().kind != TokenKind::IntLiteral) fail("integer literal");
    return std::stoll(toks_[pos_++].lexeme);
  }

  Global parse_global() {
    expect(TokenKind::Keyword, "int");
    Global g;
    g.name = expect_ident().lexeme;
    if (accept(TokenKind::Operator, "=")) {
      const bool negative = accept(TokenKind::Operator, "-");
      g.init = expect_int();
      if (negative) g.init = -g.init;
    }
    expect(TokenKind::Punctuation, ";");
    return g;
  }

  FuncDef parse_function() {
    FuncDef f;
    const Token& type = toks_[pos_++];
    f.returns_value = type.lexeme == "int";
    const Token& name = expect_ident();
    f.name = name.lexeme;
    f.pos = {name.line, name.column};
    expect(TokenKind::Punctuation, "(");
    if (!accept(TokenKind::Punctuation, ")")) {
      do {
        expect(TokenKind::Keyword, "int");
        f.params.push_back(expect_ident().lexeme);
      } while (accept(TokenKind::Punctuation, ","));
      expect(TokenKind::Punctuation, ")");
    }
    f.body = parse_block();
    return f;
  }

  std::vector<Stmt> parse_block() {
    expect(TokenKind::Punctuation, "{");
    std::vector<Stmt> body;
    while (!accept(TokenKind::Punctuation, "}")) {
      if (at_end()) fail("'}'");
      body.push_back(parse_stmt());
    }
    return body;
  }

  Stmt parse_stmt() {
    const Token& t = peek();
    Stmt s;
    s.pos = {t.line, t.column};
    s.id = next_stmt_++;
    if (t.is(TokenKind::Keyword, "int")) {
      ++pos_;
      s.kind = Stmt::Kind::Decl;
      const Token& name = expect_ident();
      s.target.name = name.lexeme;
      if (accept(TokenKind::Operator, "=")) s.expr = parse_expr();
      expect(TokenKind::Punctuation, ";");
    } else if (t.is(TokenKind::Keyword, "if")) {
      ++pos_;
      s.kind = Stmt::Kind::If;
      expect(TokenKind::Punctuation, "(");
      s.expr = parse_expr();
      expect(TokenKind::Punctuation, ")");
      s.then_body = parse_block();
      if (accept(TokenKind::Keyword, "else")) {
        s.has_else = true;
        s.else_body = parse_block();
      }
    } else if (t.is(TokenKind::Keyword, "return")) {
      ++pos_;
      s.kind = Stmt::Kind::Return;
      if (!peek().is(TokenKind::Punctuation, ";")) s.expr = parse_expr();
      expect(TokenKind::Punctuation, ";");
    } else if (t.is(TokenKind::Keyword, "print")) {
      ++pos_;
      s.kind = Stmt::Kind::Print;
      expect(TokenKind::Punctuation, "(");
      s.expr = parse_expr();
      expect(TokenKind::Punctuation, ")");
      expect(TokenKind::Punctuation, ";");
    } else if (t.kind == TokenKind::Identifier && peek(1).is(TokenKind::Operator, "=")) {
      s.kind = Stmt::Kind::Assign;
      s.target.name = t.lexeme;
      pos_ += 2;
      s.expr = parse_expr();
      expect(TokenKind::Punctuation, ";");
    } else {
      s.kind = Stmt::Kind::ExprStmt;
      s.expr = parse_expr();
      expect(TokenKind::Punctuation, ";");
    }
    return s;
  }

  static std::optional<BinOp> comparison(const Token& t) {
    if (t.kind != TokenKind::Operator) return std::nullopt;
    if (t.lexeme == "<") return BinOp::Lt;
    if (t.lexeme == ">") return BinOp::Gt;
    if (t.lexeme == "<=") return BinOp::Le;
    if (t.lexeme == ">=") return BinOp::Ge;
    if (t.lexeme == "==") return BinOp::Eq;
    if (t.lexeme == "!=") return BinOp::Ne;
    return std::nullopt;
  }

  static Expr binary(BinOp op, Expr lhs, Expr rhs, SourcePos pos) {
    Expr e;
    e.kind = Expr::Kind::Binary;
    e.op = op;
    e.pos = pos;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
  }

  Expr parse_expr() {
    Expr lhs = parse_add();
    if (!at_end()) {
      if (auto op = comparison(peek())) {
        const Token& t = toks_[pos_++];
        Expr rhs = parse_add();
        return binary(*op, std::move(lhs), std::move(rhs), {t.line, t.column});
      }
    }
    return lhs;
  }

  Expr parse_add() {
    Expr lhs = parse_mul();
    while (!at_end() && (peek().is(TokenKind::Operator, "+") || peek().is(TokenKind::Operator, "-"))) {
      const Token& t = toks_[pos_++];
      Expr rhs = parse_mul();
      lhs = binary(t.lexeme == "+" ? BinOp::Add : BinOp::Sub, std::move(lhs), std::move(rhs),
                   {t.line, t.column});
    }
    return lhs;
  }

  Expr parse_mul() {
    Expr lhs = parse_unary();
    while (!at_end() && (peek().is(TokenKind::Operator, "*") || peek().is(TokenKind::Operator, "/"))) {
      const Token& t = toks_[pos_++];
      Expr rhs = parse_unary();
      lhs = binary(t.lexeme == "*" ? BinOp::Mul : BinOp::Div, std::move(lhs), std::move(rhs),
                   {t.line, t.column});
    }
    return lhs;
  }

  Expr parse_unary() {
    if (at_end()) fail("expression");
    const Token& t = peek();
    Expr e;
    e.pos = {t.line, t.column};
    if (t.is(TokenKind::Operator, "-")) {
      ++pos_;
      e.kind = Expr::Kind::Neg;
      e.args.push_back(parse_unary());
      return e;
    }
    if (t.kind == TokenKind::IntLiteral) {
      e.kind = Expr::Kind::Int;
      e.value = expect_int();
      return e;
    }
    if (t.is(TokenKind::Keyword, "read")) {
      ++pos_;
      expect(TokenKind::Punctuation, "(");
      expect(TokenKind::Punctuation, ")");
      e.kind = Expr::Kind::Read;
      return e;
    }
    if (t.kind == TokenKind::Identifier) {
      ++pos_;
      if (accept(TokenKind::Punctuation, "(")) {
        e.kind = Expr::Kind::Call;
        e.callee = t.lexeme;
        if (!accept(TokenKind::Punctuation, ")")) {
          do {
            e.args.push_back(parse_expr());
          } while (accept(TokenKind::Punctuation, ","));
          expect(TokenKind::Punctuation, ")");
        }
      } else {
        e.kind = Expr::Kind::Var;
        e.var.name = t.lexeme;
      }
      return e;
    }
    if (t.is(TokenKind::Punctuation, "(")) {
      ++pos_;
      Expr inner = parse_expr();
      expect(TokenKind::Punctuation, ")");
      return inner;
    }
    fail("expression");
  }
};

/// Binds identifiers to frame slots or globals, checks arities, name
/// clashes and unreachable statements.
class Resolver {
 public:
  Resolver(ProgramAst& prog, const std::vector<SourcePos>& global_pos)
      : prog_(prog), global_pos_(global_pos) {}

  void run() {
    std::map<std::string, bool> seen;
    for (std::size_t i = 0; i < prog_.globals.size(); ++i) {
      const auto& g = prog_.globals[i];
      if (seen.count(g.name)) throw DuplicateError(g.name, global_pos_[i].line, global_pos_[i].column);
      seen[g.name] = true;
    }
    for (const auto& f : prog_.functions) {
      if (seen.count(f.name)) throw DuplicateError(f.name, f.pos.line, f.pos.column);
      seen[f.name] = true;
    }
    for (auto& f : prog_.functions) resolve_function(f);
  }

 private:
  ProgramAst& prog_;
  const std::vector<SourcePos>& global_pos_;
  std::vector<std::map<std::string, int>> scopes_;
  FuncDef* current_ = nullptr;

  int lookup_local(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return found->second;
    }
    return -1;
  }

  void declare(const std::string& name, SourcePos pos) {
    if (lookup_local(name) >= 0 || prog_.find_function(name))
      throw DuplicateError(name, pos.line, pos.column);
    scopes_.back()[name] = current_->frame_size++;
  }

  void resolve_function(FuncDef& f) {
    current_ = &f;
    f.frame_size = 0;
    scopes_.clear();
    scopes_.emplace_back();
    for (const auto& p : f.params) declare(p, f.pos);
    resolve_block(f.body);
    scopes_.clear();
  }

  static bool terminates(const Stmt& s) {
    if (s.kind == Stmt::Kind::Return) return true;
    if (s.kind == Stmt::Kind::If && s.has_else)
      return block_terminates(s.then_body) && block_terminates(s.else_body);
    return false;
  }

  static bool block_terminates(const std::vector<Stmt>& body) {
    return !body.empty() && terminates(body.back());
  }

  void resolve_block(std::vector<Stmt>& body) {
    scopes_.emplace_back();
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (i > 0 && terminates(body[i - 1]))
        throw ParseError(body[i].pos.line, body[i].pos.column, "'}' after terminating statement",
                         "unreachable statement");
      resolve_stmt(body[i]);
    }
    scopes_.pop_back();
  }

  void resolve_target(VarRef& v, SourcePos pos) {
    const int slot = lookup_local(v.name);
    if (slot >= 0) {
      v.scope = VarScope::Local;
      v.slot = slot;
      return;
    }
    const int g = prog_.global_index(v.name);
    if (g >= 0) {
      v.scope = VarScope::Global;
      v.slot = g;
      return;
    }
    if (prog_.find_function(v.name)) throw ResolveError(v.name, pos.line, pos.column, "function used as variable");
    throw ResolveError(v.name, pos.line, pos.column, "unresolved identifier");
  }

  void resolve_stmt(Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::Decl:
        if (s.expr) resolve_expr(*s.expr);
        declare(s.target.name, s.pos);
        resolve_target(s.target, s.pos);
        break;
      case Stmt::Kind::Assign:
        resolve_expr(*s.expr);
        resolve_target(s.target, s.pos);
        break;
      case Stmt::Kind::If:
        resolve_expr(*s.expr);
        resolve_block(s.then_body);
        resolve_block(s.else_body);
        break;
      case Stmt::Kind::Return:
      case Stmt::Kind::Print:
      case Stmt::Kind::ExprStmt:
        if (s.expr) resolve_expr(*s.expr);
        break;
    }
  }

  void resolve_expr(Expr& e) {
    for (auto& a : e.args) resolve_expr(a);
    if (e.kind == Expr::Kind::Var) {
      resolve_target(e.var, e.pos);
    } else if (e.kind == Expr::Kind::Call) {
      const FuncDef* callee = prog_.find_function(e.callee);
      if (!callee) throw ResolveError(e.callee, e.pos.line, e.pos.column, "undefined function");
      if (callee->params.size() != e.args.size())
        throw ResolveError(e.callee, e.pos.line, e.pos.column,
                           "expected " + std::to_string(callee->params.size()) + " argument(s) in call to");
    }
  }
};

}  // namespace detail

/// Parses and validates a token stream. Statement ids are assigned in
/// source order, starting at 0.
inline ProgramAst parse(const std::vector<Token>& tokens) {
  detail::Parser parser(tokens);
  ProgramAst prog = parser.parse_program();
  detail::Resolver(prog, parser.global_pos_).run();
  return prog;
}

inline ProgramAst parse_source(std::string_view source) { return parse(tokenize(source)); }

}  // namespace recpath
