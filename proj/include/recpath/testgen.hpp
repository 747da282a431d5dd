#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "recpath/interp.hpp"
#include "recpath/paths.hpp"
#include "recpath/recursion.hpp"
#include "recpath/symbolic.hpp"

namespace recpath {

enum class ConditionKind { Symbolic, Empirical, Infeasible };

inline const char* to_string(ConditionKind k) {
  switch (k) {
    case ConditionKind::Symbolic: return "symbolic";
    case ConditionKind::Empirical: return "empirical";
    case ConditionKind::Infeasible: return "infeasible";
  }
  return "?";
}

struct Condition {
  ConditionKind kind = ConditionKind::Infeasible;
  Constraint constraint;  // symbolic only
  std::vector<std::string> names;
  std::vector<std::vector<Value>> witnesses;  // empirical only

  bool satisfied_by(const std::vector<Value>& inputs) const {
    switch (kind) {
      case ConditionKind::Symbolic: return constraint.satisfied_by(inputs);
      case ConditionKind::Empirical: return std::find(witnesses.begin(), witnesses.end(), inputs) != witnesses.end();
      case ConditionKind::Infeasible: return false;
    }
    return false;
  }

  std::string text() const {
    switch (kind) {
      case ConditionKind::Symbolic: return render_constraint(constraint, names);
      case ConditionKind::Empirical: {
        constexpr std::size_t shown = 8;
        std::string out = "witnesses {";
        for (std::size_t i = 0; i < witnesses.size() && i < shown; ++i) {
          if (i) out += ", ";
          out += render_inputs(witnesses[i]);
        }
        if (witnesses.size() > shown) out += ", ... " + std::to_string(witnesses.size()) + " in total";
        return out + "}";
      }
      case ConditionKind::Infeasible: return "infeasible";
    }
    return "?";
  }

  static std::string render_inputs(const std::vector<Value>& v) {
    if (v.size() == 1) return std::to_string(v[0]);
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ", ";
      out += std::to_string(v[i]);
    }
    return out + ")";
  }
};

struct TestGenOptions {
  Value range = 16;
  std::size_t step_limit = 100000;
  std::size_t max_box_points = 35937;  // 33^3: [-16, 16] for three inputs
};

namespace detail {

inline ExecConfig exec_config(const std::vector<Value>& inputs, const TestGenOptions& opt) {
  ExecConfig c;
  c.inputs = inputs;
  c.step_limit = opt.step_limit;
  return c;
}

/// True iff running `inputs` from the path's entry reproduces its FULL trace.
inline bool reproduces(const AnalyzedProgram& prog, const PathTrace& path, const std::vector<Value>& inputs,
                       const TestGenOptions& opt) {
  try {
    const ExecutionTrace t = run_function(prog, path.entry, exec_config(inputs, opt));
    return t.same_shape(path.trace);
  } catch (const RuntimeError&) {
    return false;
  }
}

// Search order for one value: smallest magnitude first, non-negative first on ties.
inline std::vector<Value> value_order(Value range) {
  std::vector<Value> out{0};
  for (Value m = 1; m <= range; ++m) {
    out.push_back(m);
    out.push_back(-m);
  }
  return out;
}

// Every vector in [-range, range]^k, ordered by total magnitude, then
// element-wise by the single-value order.
inline std::vector<std::vector<Value>> box(std::size_t k, Value range) {
  const auto order = value_order(range);
  std::vector<std::vector<Value>> out{{}};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::vector<Value>> next;
    next.reserve(out.size() * order.size());
    for (const auto& prefix : out)
      for (Value v : order) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    out = std::move(next);
  }
  auto rank = [](Value v) { return v >= 0 ? 2 * v : -2 * v + 1; };
  std::stable_sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    Value sa = 0, sb = 0;
    for (Value v : a) sa += std::abs(v);
    for (Value v : b) sb += std::abs(v);
    if (sa != sb) return sa < sb;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return rank(a[i]) < rank(b[i]);
    return false;
  });
  return out;
}

// Widest per-input bound not above `range` whose box has at most `cap` points.
inline Value box_range(std::size_t k, Value range, std::size_t cap) {
  auto points = [&](Value r) {
    double n = 1;
    for (std::size_t i = 0; i < k; ++i) n *= static_cast<double>(2 * r + 1);
    return n;
  };
  Value r = range;
  while (r > 0 && points(r) > static_cast<double>(cap)) --r;
  return r;
}

}  // namespace detail

/// Brute force over the input box: every input whose FULL trace equals the path's.
inline Condition empirical_condition(const AnalyzedProgram& prog, const PathTrace& path, const TestGenOptions& opt = {}) {
  Condition c;
  c.names = path.input_names;
  const Value r = detail::box_range(path.input_count(), opt.range, opt.max_box_points);
  for (const auto& inputs : detail::box(path.input_count(), r))
    if (detail::reproduces(prog, path, inputs, opt)) c.witnesses.push_back(inputs);
  c.kind = c.witnesses.empty() ? ConditionKind::Infeasible : ConditionKind::Empirical;
  return c;
}

/// Symbolic when every collected decision is an affine comparison of one
/// entry input with a constant; otherwise decided by running the
/// interpreter over the search range.
inline Condition path_condition(const PathTrace& path, const AnalyzedProgram& prog, const TestGenOptions& opt = {}) {
  if (path.exact && path.constraint.single_variable()) {
    Condition c;
    c.names = path.input_names;
    c.kind = path.constraint.feasible() ? ConditionKind::Symbolic : ConditionKind::Infeasible;
    if (c.kind == ConditionKind::Symbolic) c.constraint = path.constraint;
    return c;
  }
  return empirical_condition(prog, path, opt);
}

/// First satisfying input vector in search order, or nothing.
inline std::optional<std::vector<Value>> find_test_data(const Condition& c, Value range) {
  const std::size_t k = c.names.size();
  switch (c.kind) {
    case ConditionKind::Infeasible:
      return std::nullopt;
    case ConditionKind::Empirical:
      // witnesses are already in search order
      for (const auto& w : c.witnesses)
        if (std::all_of(w.begin(), w.end(), [&](Value v) { return v >= -range && v <= range; })) return w;
      return std::nullopt;
    case ConditionKind::Symbolic:
      break;
  }
  if (c.constraint.single_variable()) {
    // atoms are independent per input: choose each one separately
    std::vector<Value> out(k, 0);
    const auto order = detail::value_order(range);
    for (std::size_t slot = 0; slot < k; ++slot) {
      Constraint only;
      for (const auto& a : c.constraint.atoms)
        if (a.single_slot() == static_cast<int>(slot)) only.atoms.push_back(a);
      bool found = false;
      for (Value v : order) {
        out[slot] = v;
        if (only.satisfied_by(out)) {
          found = true;
          break;
        }
      }
      if (!found) return std::nullopt;
    }
    if (!c.constraint.satisfied_by(out)) return std::nullopt;
    return out;
  }
  for (const auto& v : detail::box(k, detail::box_range(k, range, TestGenOptions{}.max_box_points)))
    if (c.satisfied_by(v)) return v;
  return std::nullopt;
}

struct TestCase {
  std::size_t path_index = 0;
  Condition condition;
  std::string family;  // predicate of the first recursion decision; the condition itself otherwise
  std::optional<Constraint> family_constraint;
  std::vector<Value> data;  // empty iff infeasible (or no inputs)
  bool validated = false;
  std::vector<AspectEntry> aspects;  // call sites into recursive modules used by the path
  std::string full;
  std::string paper;
  std::vector<std::string> input_names;

  bool in_family(const std::vector<Value>& inputs) const {
    return family_constraint ? family_constraint->satisfied_by(inputs) : condition.satisfied_by(inputs);
  }

  std::vector<std::string> aspect_tags() const {
    std::vector<std::string> out;
    for (const auto& a : aspects) {
      const std::string t = to_string(a.aspect);
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    }
    return out;
  }
};


/// One case per path. Data is checked by execution; a mismatch demotes the
/// condition to the empirical one.
inline std::vector<TestCase> derive_test_cases(const AnalyzedProgram& prog, const RecursionAnalysis& rec,
                                               const PathSet& paths, const TestGenOptions& opt = {}) {
  std::vector<TestCase> out;
  for (std::size_t i = 0; i < paths.traces.size(); ++i) {
    const PathTrace& p = paths.traces[i];
    TestCase tc;
    tc.path_index = i;
    tc.input_names = p.input_names;
    tc.condition = path_condition(p, prog, opt);
    auto data = find_test_data(tc.condition, opt.range);
    if (data && detail::reproduces(prog, p, *data, opt)) {
      tc.validated = true;
    } else if (tc.condition.kind == ConditionKind::Symbolic) {
      tc.condition = empirical_condition(prog, p, opt);
      data = find_test_data(tc.condition, opt.range);
      tc.validated = data.has_value();
    }
    if (data && tc.validated) tc.data = *data;
    if (tc.condition.kind != ConditionKind::Infeasible && p.family) {
      tc.family_constraint = Constraint{{*p.family}};
      tc.family = render_constraint(*tc.family_constraint, p.input_names);
    } else if (tc.condition.kind == ConditionKind::Symbolic) {
      tc.family_constraint = tc.condition.constraint;
      tc.family = tc.condition.text();
    } else {
      tc.family = tc.condition.text();
    }
    std::set<int> sites;
    for (const auto& a : p.trace.activations) {
      if (a.call_site == 0 || !sites.insert(a.call_site).second) continue;
      if (const AspectEntry* e = rec.aspects.at_site(a.call_site)) tc.aspects.push_back(*e);
    }
    std::sort(tc.aspects.begin(), tc.aspects.end(), [](const auto& a, const auto& b) { return a.site < b.site; });
    tc.full = render_trace(p.trace, RenderMode::Full, prog, rec);
    tc.paper = render_trace(p.trace, RenderMode::Paper, prog, rec);
    out.push_back(std::move(tc));
  }
  return out;
}

// ---------------------------------------------------------------- coverage

struct FunctionCoverage {
  std::string function;
  std::vector<int> covered;
  std::vector<int> uncovered;
  std::vector<FlowEdge> covered_edges;
  std::size_t total = 0;

  double ratio() const { return total == 0 ? 0.0 : static_cast<double>(covered.size()) / static_cast<double>(total); }
};

struct CaseRun {
  std::vector<Value> inputs;
  ExecutionTrace trace;
};

struct DefectExposure {
  std::string code;
  std::string subject;
  std::string message;
};

struct CoverageReport {
  std::vector<FunctionCoverage> functions;
  std::vector<CaseRun> runs;
  std::set<std::pair<int, EdgeLabel>> taken;  // branch edges taken by any run
  std::vector<DefectExposure> warnings;

  const FunctionCoverage& function(const std::string& f) const {
    for (const auto& fc : functions)
      if (fc.function == f) return fc;
    throw ResolveError(f, 1, 1, "no coverage entry");
  }
};

/// Runs every suite input from `entry` and unions visited nodes and edges
/// per function.
inline CoverageReport coverage(const AnalyzedProgram& prog, const std::vector<std::vector<Value>>& suite,
                               const std::string& entry, std::size_t step_limit = 100000) {
  CoverageReport r;
  std::map<std::string, std::set<int>> nodes;
  std::map<std::string, std::set<FlowEdge>> edges;
  for (std::size_t k = 0; k < suite.size(); ++k) {
    ExecConfig cfg;
    cfg.inputs = suite[k];
    cfg.step_limit = step_limit;
    ExecutionTrace t;
    try {
      t = run_function(prog, entry, cfg);
    } catch (const RuntimeError& e) {
      throw RuntimeError(e.kind(), e.node(),
                         "test case " + std::to_string(k + 1) + " (inputs " + Condition::render_inputs(suite[k]) +
                             "): " + e.detail());
    }
    std::map<int, int> last;  // activation -> previous node of its own sequence
    for (const auto& s : t.steps) {
      const std::string& fn = t.activations[static_cast<std::size_t>(s.activation)].function;
      nodes[fn].insert(s.node);
      auto it = last.find(s.activation);
      if (it != last.end() && it->second != s.node)
        for (const auto& e : prog.graph(fn)->out_edges(it->second))
          if (e.to == s.node) edges[fn].insert(e);
      last[s.activation] = s.node;
    }
    for (const auto& b : t.branches) r.taken.insert({b.predicate, b.label});
    r.runs.push_back({suite[k], std::move(t)});
  }
  for (const auto& g : prog.graphs()) {
    FunctionCoverage fc;
    fc.function = g.owner;
    fc.total = g.nodes.size();
    for (const auto& n : g.nodes) (nodes[g.owner].count(n.id) ? fc.covered : fc.uncovered).push_back(n.id);
    std::sort(fc.covered.begin(), fc.covered.end());
    std::sort(fc.uncovered.begin(), fc.uncovered.end());
    fc.covered_edges.assign(edges[g.owner].begin(), edges[g.owner].end());
    r.functions.push_back(std::move(fc));
  }
  return r;
}

inline const char* branch_word(EdgeLabel l) { return l == EdgeLabel::False ? "false" : "true"; }

/// W1 a recursive function never runs (subsumes W2/W3 for it); W2 a base
/// case branch never taken; W3 a recursive branch never taken; W4 a
/// recursive caller is the only way into a recursive callee, so its base
/// case is reachable only inside that expansion; W5 nesting level >= 2.
inline std::vector<DefectExposure> defect_exposure(const CoverageReport& report, const AnalyzedProgram& prog,
                                                   const RecursionAnalysis& rec) {
  std::vector<DefectExposure> out;
  for (const auto& g : prog.graphs()) {
    const std::string& f = g.owner;
    if (!rec.is_recursive(f)) continue;
    const RecursionInfo& info = rec.info(f);
    if (report.function(f).covered.empty()) {
      out.push_back({"W1-recursive-module-unexecuted", f, "recursive module '" + f + "' is never executed"});
      continue;
    }
    for (const auto& b : info.base_cases)
      if (!report.taken.count({b.predicate, b.label}))
        out.push_back({"W2-base-case-unexecuted", f,
                       "base case " + std::to_string(b.predicate) + ":" + branch_word(b.label) + " of '" + f +
                           "' is never taken"});
    for (const auto& b : find_recursive_branches(g, info))
      if (!report.taken.count({b.predicate, b.label}))
        out.push_back({"W3-recursive-branch-unexecuted", f,
                       "recursive branch " + std::to_string(b.predicate) + ":" + branch_word(b.label) + " of '" + f +
                           "' is never taken"});
  }
  for (const auto& e : rec.aspects.entries) {
    if (e.aspect != Aspect::Second) continue;
    const bool direct = std::any_of(rec.aspects.entries.begin(), rec.aspects.entries.end(), [&](const AspectEntry& o) {
      return o.callee == e.callee && o.aspect == Aspect::First;
    });
    if (direct) continue;
    out.push_back({"W4-aspect2-transitive-base", e.caller + "->" + e.callee + "@" + std::to_string(e.site),
                   "base case of '" + e.callee + "' is reached only through recursive caller '" + e.caller +
                       "' at node " + std::to_string(e.site)});
  }
  for (const auto& g : prog.graphs()) {
    auto it = rec.aspects.nesting.find(g.owner);
    if (it != rec.aspects.nesting.end() && it->second >= 2)
      out.push_back({"W5-nesting-level-high", g.owner,
                     "recursion nesting level of '" + g.owner + "' is " + std::to_string(it->second)});
  }
  return out;
}

// -------------------------------------------------------- reference values

/// An expected result for one path: `path = condition | data`.
struct ReferenceEntry {
  std::string path;
  std::string condition;
  std::vector<Value> data;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace detail

inline std::vector<ReferenceEntry> parse_reference(const std::string& text) {
  std::vector<ReferenceEntry> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = detail::trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const auto bar = body.find('|');
    if (eq == std::string::npos || bar == std::string::npos || bar < eq)
      throw IoError("reference line " + std::to_string(lineno) + ": expected 'path = condition | data'");
    ReferenceEntry e;
    e.path = detail::trim(body.substr(0, eq));
    e.condition = detail::trim(body.substr(eq + 1, bar - eq - 1));
    std::istringstream ds(body.substr(bar + 1));
    std::string tok;
    while (std::getline(ds, tok, ',')) {
      tok = detail::trim(tok);
      if (tok.empty()) continue;
      try {
        std::size_t used = 0;
        e.data.push_back(std::stoll(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw IoError("reference line " + std::to_string(lineno) + ": bad data value '" + tok + "'");
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

/// Parses `x op c [&& y op d ...]` over the given input names.
inline Constraint parse_condition(const std::string& text, const std::vector<std::string>& names) {
  Constraint c;
  std::string rest = text;
  for (const std::string sep : {"∧", "&&"}) {
    std::string::size_type pos;
    while ((pos = rest.find(sep)) != std::string::npos) rest.replace(pos, sep.size(), ";");
  }
  std::istringstream parts(rest);
  std::string part;
  static const std::vector<std::pair<std::string, CmpOp>> ops = {
      {"<=", CmpOp::Le}, {">=", CmpOp::Ge}, {"!=", CmpOp::Ne}, {"==", CmpOp::Eq}, {"≤", CmpOp::Le},
      {"≥", CmpOp::Ge},  {"≠", CmpOp::Ne},  {"<", CmpOp::Lt},  {">", CmpOp::Gt},  {"=", CmpOp::Eq}};
  while (std::getline(parts, part, ';')) {
    part = detail::trim(part);
    if (part.empty() || part == "true") continue;
    bool done = false;
    for (const auto& [sym, op] : ops) {
      const auto at = part.find(sym);
      if (at == std::string::npos) continue;
      const std::string lhs = detail::trim(part.substr(0, at));
      const std::string rhs = detail::trim(part.substr(at + sym.size()));
      const auto it = std::find(names.begin(), names.end(), lhs);
      if (it == names.end()) throw IoError("condition '" + text + "': unknown input '" + lhs + "'");
      Value k = 0;
      try {
        std::size_t used = 0;
        k = std::stoll(rhs, &used);
        if (used != rhs.size()) throw std::invalid_argument(rhs);
      } catch (const std::exception&) {
        throw IoError("condition '" + text + "': bad constant '" + rhs + "'");
      }
      c.atoms.push_back({Affine::input(static_cast<int>(it - names.begin())) - Affine::of(k), op});
      done = true;
      break;
    }
    if (!done) throw IoError("condition '" + text + "': no comparison in '" + part + "'");
  }
  return c;
}

struct ReferenceCheck {
  std::size_t case_index = 0;
  ReferenceEntry reference;
  bool condition_agrees = false;  // same satisfying inputs as the family condition, over the range
  bool data_satisfies = false;    // reference data meets the reference condition
  bool data_agrees = false;
  std::vector<std::string> notes;
};

/// Compares cases against reference values, matched by paper-mode path.
inline std::vector<ReferenceCheck> check_reference(const std::vector<TestCase>& cases,
                                                   const std::vector<ReferenceEntry>& refs, Value range) {
  std::vector<ReferenceCheck> out;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const TestCase& tc = cases[i];
    for (const auto& ref : refs) {
      if (ref.path != tc.paper) continue;
      ReferenceCheck rc;
      rc.case_index = i;
      rc.reference = ref;
      const Constraint expected = parse_condition(ref.condition, tc.input_names);
      rc.condition_agrees = true;
      for (const auto& v : detail::box(tc.input_names.size(), detail::box_range(tc.input_names.size(), range, 35937)))
          if (expected.satisfied_by(v) != tc.in_family(v)) {
            rc.condition_agrees = false;
            break;
          }
      rc.data_satisfies = ref.data.size() == tc.input_names.size() && expected.satisfied_by(ref.data);
      rc.data_agrees = ref.data == tc.data;
      if (!rc.condition_agrees)
        rc.notes.push_back("derived " + tc.family + " differs from reference " + ref.condition);
      if (!rc.data_satisfies)
        rc.notes.push_back("reference data " + Condition::render_inputs(ref.data) +
                           " does not satisfy reference condition " + ref.condition);
      if (!rc.data_agrees)
        rc.notes.push_back("derived data " + Condition::render_inputs(tc.data) + " differs from reference data " +
                           Condition::render_inputs(ref.data));
      out.push_back(std::move(rc));
    }
  }
  return out;
}

}  // namespace recpath
