#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "recpath/program.hpp"
#include "recpath/trace.hpp"

namespace recpath {

struct ExecConfig {
  std::vector<Value> inputs;  // entry parameters first, then values for read()
  std::size_t step_limit = 100000;
  std::size_t call_depth_limit = 4000;  // bounds native stack use; reported as StepLimitExceeded
};

struct ExecutionTrace : Trace {
  std::vector<Value> outputs;
  std::optional<Value> result;
  std::size_t step_count = 0;
};

namespace detail {

inline void check_overflow(bool overflow, int node, const char* what) {
  if (overflow) throw RuntimeError(ErrorKind::ArithmeticOverflow, node, std::string("overflow in ") + what);
}

/// Tree-walking evaluator over the AST. Node emission goes through the
/// statement index only; control flow never consults the graphs.
class Interpreter {
 public:
  Interpreter(const AnalyzedProgram& prog, const ExecConfig& config) : prog_(prog), config_(config) {
    for (const auto& g : prog.ast().globals) globals_.push_back(g.init);
  }

  Value call(const std::string& name, const std::vector<Value>& args, int call_site, int parent) {
    const FuncDef& f = prog_.function(name);
    if (args.size() != f.params.size())
      throw RuntimeError(ErrorKind::Arity, 0,
                         "'" + name + "' takes " + std::to_string(f.params.size()) + " argument(s), got " +
                             std::to_string(args.size()));
    if (++depth_ > config_.call_depth_limit)
      throw RuntimeError(ErrorKind::StepLimitExceeded, call_site,
                         "call depth limit " + std::to_string(config_.call_depth_limit) + " exceeded");
    const FlowGraph& g = *prog_.graph(name);
    const int act = static_cast<int>(trace_.activations.size());
    trace_.activations.push_back({name, parent, call_site});

    Frame frame;
    frame.activation = act;
    frame.locals.assign(static_cast<std::size_t>(f.frame_size), 0);
    for (std::size_t i = 0; i < args.size(); ++i) frame.locals[i] = args[i];

    emit(g.entry, act);
    exec_block(f.body, frame);
    emit(g.exit, act);
    --depth_;
    return frame.returned ? frame.ret : frame.last;
  }

  ExecutionTrace take() { return std::move(trace_); }
  ExecutionTrace& trace() { return trace_; }

  Value next_input(int node) {
    if (input_pos_ >= config_.inputs.size())
      throw RuntimeError(ErrorKind::InputExhausted, node, "read() with no remaining input");
    return config_.inputs[input_pos_++];
  }

  std::size_t inputs_used() const { return input_pos_; }
  void skip_inputs(std::size_t n) { input_pos_ += n; }

 private:
  struct Frame {
    int activation = 0;
    std::vector<Value> locals;
    Value last = 0;
    Value ret = 0;
    bool returned = false;
    const std::vector<int>* calls = nullptr;  // call nodes of the statement being evaluated
    std::size_t next_call = 0;
    int node = 0;  // current node, for error attribution
  };

  const AnalyzedProgram& prog_;
  const ExecConfig& config_;
  std::vector<Value> globals_;
  ExecutionTrace trace_;
  std::size_t input_pos_ = 0;
  std::size_t depth_ = 0;

  void emit(int node, int act) {
    if (++trace_.step_count > config_.step_limit)
      throw RuntimeError(ErrorKind::StepLimitExceeded, node,
                         "step limit " + std::to_string(config_.step_limit) + " exceeded");
    trace_.steps.push_back({node, act});
  }

  Value& var(const VarRef& v, Frame& fr) {
    return v.scope == VarScope::Global ? globals_[static_cast<std::size_t>(v.slot)]
                                       : fr.locals[static_cast<std::size_t>(v.slot)];
  }

  void exec_block(const std::vector<Stmt>& body, Frame& fr) {
    for (const auto& s : body) {
      exec_stmt(s, fr);
      if (fr.returned) return;
    }
  }

  void exec_stmt(const Stmt& s, Frame& fr) {
    const StmtNodes& sn = prog_.stmt_nodes(s.id);
    if (sn.skipped) return;
    if (sn.node && (sn.emits || sn.stub) && s.kind != Stmt::Kind::If) {
      emit(sn.node, fr.activation);
      fr.node = sn.node;
    }
    if (sn.stub) return;
    fr.calls = &sn.calls;
    fr.next_call = 0;

    switch (s.kind) {
      case Stmt::Kind::Decl:
        if (s.expr) fr.last = var(s.target, fr) = eval(*s.expr, fr);
        break;
      case Stmt::Kind::Assign:
        fr.last = var(s.target, fr) = eval(*s.expr, fr);
        break;
      case Stmt::Kind::Print: {
        const Value v = eval(*s.expr, fr);
        trace_.outputs.push_back(v);
        fr.last = v;
        break;
      }
      case Stmt::Kind::ExprStmt:
        fr.last = eval(*s.expr, fr);
        break;
      case Stmt::Kind::Return:
        fr.ret = s.expr ? eval(*s.expr, fr) : 0;
        fr.returned = true;
        break;
      case Stmt::Kind::If: {
        const bool taken = eval(*s.expr, fr) != 0;
        emit(sn.node, fr.activation);
        fr.node = sn.node;
        trace_.branches.push_back({fr.activation, sn.node, taken ? EdgeLabel::True : EdgeLabel::False});
        const int marker = taken ? sn.then_marker : sn.else_marker;
        if (marker) emit(marker, fr.activation);
        exec_block(taken ? s.then_body : s.else_body, fr);
        break;
      }
    }
  }

  Value eval(const Expr& e, Frame& fr) {
    switch (e.kind) {
      case Expr::Kind::Int:
        return e.value;
      case Expr::Kind::Var:
        return var(e.var, fr);
      case Expr::Kind::Read:
        return next_input(fr.node);
      case Expr::Kind::Neg: {
        const Value v = eval(e.args[0], fr);
        Value r = 0;
        check_overflow(__builtin_sub_overflow(Value{0}, v, &r), fr.node, "negation");
        return r;
      }
      case Expr::Kind::Binary: {
        const Value a = eval(e.args[0], fr);
        const Value b = eval(e.args[1], fr);
        Value r = 0;
        switch (e.op) {
          case BinOp::Add:
            check_overflow(__builtin_add_overflow(a, b, &r), fr.node, "addition");
            return r;
          case BinOp::Sub:
            check_overflow(__builtin_sub_overflow(a, b, &r), fr.node, "subtraction");
            return r;
          case BinOp::Mul:
            check_overflow(__builtin_mul_overflow(a, b, &r), fr.node, "multiplication");
            return r;
          case BinOp::Div:
            if (b == 0) throw RuntimeError(ErrorKind::DivideByZero, fr.node, "division by zero");
            if (a == std::numeric_limits<Value>::min() && b == -1)
              throw RuntimeError(ErrorKind::ArithmeticOverflow, fr.node, "overflow in division");
            return a / b;
          case BinOp::Lt: return a < b;
          case BinOp::Gt: return a > b;
          case BinOp::Le: return a <= b;
          case BinOp::Ge: return a >= b;
          case BinOp::Eq: return a == b;
          case BinOp::Ne: return a != b;
        }
        return 0;
      }
      case Expr::Kind::Call: {
        std::vector<Value> args;
        args.reserve(e.args.size());
        for (const auto& a : e.args) args.push_back(eval(a, fr));
        const std::vector<int>* calls = fr.calls;
        const std::size_t k = fr.next_call;
        const int site = (*calls).at(k);
        emit(site, fr.activation);
        const Value v = call(e.callee, args, site, fr.activation);
        emit(site, fr.activation);
        fr.calls = calls;
        fr.next_call = k + 1;
        fr.node = site;
        return v;
      }
    }
    return 0;
  }
};

}  // namespace detail

/// Runs `name` with its parameters taken from the first inputs; read()
/// consumes the rest in order. result is absent for a void function.
inline ExecutionTrace run_function(const AnalyzedProgram& prog, const std::string& name,
                                   const ExecConfig& config = {}) {
  if (!prog.ast().find_function(name) || prog.is_omitted(name))
    throw ResolveError(name, 1, 1, "undefined function");
  const FuncDef& f = prog.function(name);
  if (config.inputs.size() < f.params.size())
    throw RuntimeError(ErrorKind::InputExhausted, 0,
                       "'" + f.name + "' needs " + std::to_string(f.params.size()) + " input(s)");
  detail::Interpreter interp(prog, config);
  std::vector<Value> args(config.inputs.begin(), config.inputs.begin() + static_cast<std::ptrdiff_t>(f.params.size()));
  interp.skip_inputs(args.size());
  const Value v = interp.call(f.name, args, 0, -1);
  ExecutionTrace out = interp.take();
  if (f.returns_value) out.result = v;
  return out;
}

inline ExecutionTrace run_program(const AnalyzedProgram& prog, const ExecConfig& config = {}) {
  return run_function(prog, prog.entry(), config);
}

/// Evaluates one function with freshly initialized globals.
inline std::pair<Value, ExecutionTrace> call_function(const AnalyzedProgram& prog, const std::string& name,
                                                      const std::vector<Value>& args, const ExecConfig& config = {}) {
  if (!prog.ast().find_function(name) || prog.is_omitted(name))
    throw ResolveError(name, 1, 1, "undefined function");
  detail::Interpreter interp(prog, config);
  const Value v = interp.call(name, args, 0, -1);
  ExecutionTrace out = interp.take();
  out.result = v;
  return {v, std::move(out)};
}

}  // namespace recpath
