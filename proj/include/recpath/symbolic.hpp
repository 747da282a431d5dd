#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "recpath/ast.hpp"

namespace recpath {

enum class CmpOp { Lt, Le, Gt, Ge, Eq, Ne };

inline const char* to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "≤";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return "≥";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "≠";
  }
  return "?";
}

inline CmpOp negate(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Ge: return CmpOp::Lt;
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
  }
  return op;
}

inline CmpOp from_binop(BinOp op) {
  switch (op) {
    case BinOp::Lt: return CmpOp::Lt;
    case BinOp::Le: return CmpOp::Le;
    case BinOp::Gt: return CmpOp::Gt;
    case BinOp::Ge: return CmpOp::Ge;
    case BinOp::Eq: return CmpOp::Eq;
    default: return CmpOp::Ne;
  }
}

template <typename T>
bool compare(T lhs, CmpOp op, T rhs) {
  switch (op) {
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Gt: return lhs > rhs;
    case CmpOp::Ge: return lhs >= rhs;
    case CmpOp::Eq: return lhs == rhs;
    case CmpOp::Ne: return lhs != rhs;
  }
  return false;
}

/// constant + sum(coeff[slot] * input[slot]), or unknown. Arithmetic that
/// overflows or leaves the affine fragment yields unknown.
struct Affine {
  bool known = true;
  Value constant = 0;
  std::map<int, Value> coeffs;  // input slot -> non-zero coefficient

  static Affine unknown() {
    Affine a;
    a.known = false;
    return a;
  }
  static Affine of(Value v) {
    Affine a;
    a.constant = v;
    return a;
  }
  static Affine input(int slot) {
    Affine a;
    a.coeffs[slot] = 1;
    return a;
  }

  bool is_constant() const { return known && coeffs.empty(); }

  /// The slot if this is exactly one input with coefficient 1 and no offset.
  std::optional<int> plain_input() const {
    if (known && constant == 0 && coeffs.size() == 1 && coeffs.begin()->second == 1) return coeffs.begin()->first;
    return std::nullopt;
  }

  friend Affine operator+(const Affine& a, const Affine& b) {
    if (!a.known || !b.known) return unknown();
    Affine r = a;
    if (__builtin_add_overflow(a.constant, b.constant, &r.constant)) return unknown();
    for (const auto& [slot, c] : b.coeffs) {
      Value sum = 0;
      if (__builtin_add_overflow(r.coeffs[slot], c, &sum)) return unknown();
      if (sum == 0)
        r.coeffs.erase(slot);
      else
        r.coeffs[slot] = sum;
    }
    return r;
  }

  Affine scaled(Value k) const {
    if (!known) return unknown();
    Affine r;
    if (__builtin_mul_overflow(constant, k, &r.constant)) return unknown();
    if (k == 0) return r;
    for (const auto& [slot, c] : coeffs) {
      Value v = 0;
      if (__builtin_mul_overflow(c, k, &v)) return unknown();
      r.coeffs[slot] = v;
    }
    return r;
  }

  friend Affine operator-(const Affine& a) {
    if (a.known && a.constant == std::numeric_limits<Value>::min()) return unknown();
    return a.scaled(-1);
  }
  friend Affine operator-(const Affine& a, const Affine& b) { return a + (-b); }

  friend Affine operator*(const Affine& a, const Affine& b) {
    if (!a.known || !b.known) return unknown();
    if (a.is_constant()) return b.scaled(a.constant);
    if (b.is_constant()) return a.scaled(b.constant);
    return unknown();
  }

  friend Affine operator/(const Affine& a, const Affine& b) {
    if (!a.is_constant() || !b.is_constant() || b.constant == 0) return unknown();
    if (a.constant == std::numeric_limits<Value>::min() && b.constant == -1) return unknown();
    return of(a.constant / b.constant);
  }

  Value evaluate(const std::vector<Value>& inputs) const {
    __int128 acc = constant;
    for (const auto& [slot, c] : coeffs) acc += static_cast<__int128>(c) * inputs.at(static_cast<std::size_t>(slot));
    return static_cast<Value>(acc);
  }
};

/// (lhs op 0) with lhs affine over inputs.
struct Atom {
  Affine lhs;
  CmpOp op = CmpOp::Ne;

  Atom negated() const { return {lhs, negate(op)}; }

  bool satisfied_by(const std::vector<Value>& inputs) const {
    __int128 acc = lhs.constant;
    for (const auto& [slot, c] : lhs.coeffs)
      acc += static_cast<__int128>(c) * inputs.at(static_cast<std::size_t>(slot));
    return compare<__int128>(acc, op, 0);
  }

  std::optional<int> single_slot() const {
    if (lhs.coeffs.size() == 1) return lhs.coeffs.begin()->first;
    return std::nullopt;
  }
};

/// Normalized single-input bound: input op bound.
struct Bound {
  int slot = 0;
  CmpOp op = CmpOp::Eq;
  __int128 bound = 0;
  bool empty = false;  // no integer satisfies it (a*x = k with a not dividing k)
  bool always = false; // every integer satisfies it
};

namespace detail {

inline __int128 floor_div(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline __int128 ceil_div(__int128 a, __int128 b) { return -floor_div(-a, b); }

}  // namespace detail

/// Solves a*x + c op 0 for integer x. Comparisons with |a| = 1 keep their
/// operator; others become <= / >= bounds.
inline Bound solve(const Atom& atom) {
  const int slot = atom.lhs.coeffs.begin()->first;
  __int128 a = atom.lhs.coeffs.begin()->second;
  __int128 k = -static_cast<__int128>(atom.lhs.constant);
  CmpOp op = atom.op;
  if (a < 0) {
    a = -a;
    k = -k;
    switch (op) {
      case CmpOp::Lt: op = CmpOp::Gt; break;
      case CmpOp::Le: op = CmpOp::Ge; break;
      case CmpOp::Gt: op = CmpOp::Lt; break;
      case CmpOp::Ge: op = CmpOp::Le; break;
      default: break;
    }
  }
  Bound b;
  b.slot = slot;
  b.op = op;
  if (a == 1) {
    b.bound = k;
    return b;
  }
  switch (op) {
    case CmpOp::Lt: b.op = CmpOp::Le; b.bound = detail::floor_div(k - 1, a); break;
    case CmpOp::Le: b.bound = detail::floor_div(k, a); break;
    case CmpOp::Gt: b.op = CmpOp::Ge; b.bound = detail::floor_div(k, a) + 1; break;
    case CmpOp::Ge: b.bound = detail::ceil_div(k, a); break;
    case CmpOp::Eq:
      if (k % a != 0) b.empty = true;
      b.bound = k / a;
      break;
    case CmpOp::Ne:
      if (k % a != 0) b.always = true;
      b.bound = k / a;
      break;
  }
  return b;
}

/// Feasible integer set of one input: [lo, hi] minus `excluded`.
struct Interval {
  __int128 lo = std::numeric_limits<Value>::min();
  __int128 hi = std::numeric_limits<Value>::max();
  std::set<__int128> excluded;
  bool empty = false;

  void add(const Bound& b) {
    if (b.empty) {
      empty = true;
      return;
    }
    if (b.always) return;
    switch (b.op) {
      case CmpOp::Lt: hi = std::min(hi, b.bound - 1); break;
      case CmpOp::Le: hi = std::min(hi, b.bound); break;
      case CmpOp::Gt: lo = std::max(lo, b.bound + 1); break;
      case CmpOp::Ge: lo = std::max(lo, b.bound); break;
      case CmpOp::Eq:
        lo = std::max(lo, b.bound);
        hi = std::min(hi, b.bound);
        break;
      case CmpOp::Ne: excluded.insert(b.bound); break;
    }
  }

  bool contains(__int128 v) const { return !empty && v >= lo && v <= hi && !excluded.count(v); }

  bool is_empty() const {
    if (empty || lo > hi) return true;
    const __int128 width = hi - lo + 1;
    if (width > static_cast<__int128>(excluded.size())) return false;
    for (__int128 v = lo; v <= hi; ++v)
      if (!excluded.count(v)) return false;
    return true;
  }
};

/// Conjunction of atoms over entry inputs.
struct Constraint {
  std::vector<Atom> atoms;

  /// False only if provably unsatisfiable: a constant atom fails or some
  /// input's single-variable bounds leave no integer. Atoms over several
  /// inputs are not reasoned about.
  bool feasible() const {
    std::map<int, Interval> per_slot;
    for (const auto& a : atoms) {
      if (a.lhs.coeffs.empty()) {
        if (!compare<Value>(a.lhs.constant, a.op, 0)) return false;
        continue;
      }
      if (auto slot = a.single_slot()) per_slot[*slot].add(solve(a));
    }
    for (const auto& [slot, iv] : per_slot)
      if (iv.is_empty()) return false;
    return true;
  }

  bool single_variable() const {
    return std::all_of(atoms.begin(), atoms.end(), [](const Atom& a) { return a.lhs.coeffs.size() <= 1; });
  }

  bool satisfied_by(const std::vector<Value>& inputs) const {
    return std::all_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return a.satisfied_by(inputs); });
  }
};

inline std::string to_string_i128(__int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  std::string s;
  while (v != 0) {
    int d = static_cast<int>(v % 10);
    if (d < 0) d = -d;
    s.insert(s.begin(), static_cast<char>('0' + d));
    v /= 10;
  }
  return neg ? "-" + s : s;
}

inline std::string render_bound(const std::string& name, const Bound& b) {
  if (b.empty) return "false";
  if (b.always) return "true";
  return name + " " + to_string(b.op) + " " + to_string_i128(b.bound);
}

/// Human-readable condition over named inputs. Single-variable atoms are
/// reduced per input: a point interval prints as `n = c`, otherwise the
/// atoms that determine the final bounds print in their original form.
inline std::string render_constraint(const Constraint& c, const std::vector<std::string>& names) {
  std::vector<std::string> parts;
  std::map<int, std::vector<Bound>> per_slot;
  for (const auto& a : c.atoms) {
    if (a.lhs.coeffs.empty()) {
      if (!compare<Value>(a.lhs.constant, a.op, 0)) return "false";
      continue;
    }
    if (auto slot = a.single_slot()) per_slot[*slot].push_back(solve(a));
  }
  auto name_of = [&](int slot) {
    return static_cast<std::size_t>(slot) < names.size() ? names[static_cast<std::size_t>(slot)]
                                                          : "in" + std::to_string(slot);
  };
  for (const auto& [slot, bounds] : per_slot) {
    Interval iv;
    for (const auto& b : bounds) iv.add(b);
    const std::string name = name_of(slot);
    if (iv.is_empty()) return "false";
    if (iv.lo == iv.hi) {
      parts.push_back(name + " = " + to_string_i128(iv.lo));
      continue;
    }
    const Bound* lower = nullptr;
    const Bound* upper = nullptr;
    for (const auto& b : bounds) {
      Interval probe;
      probe.add(b);
      if (probe.lo == iv.lo && probe.lo != std::numeric_limits<Value>::min() && !lower) lower = &b;
      if (probe.hi == iv.hi && probe.hi != std::numeric_limits<Value>::max() && !upper) upper = &b;
    }
    if (lower && upper && lower == upper) {
      parts.push_back(render_bound(name, *lower));
    } else if (lower && upper) {
      parts.push_back(to_string_i128(iv.lo) + " ≤ " + name + " ≤ " + to_string_i128(iv.hi));
    } else {
      if (lower) parts.push_back(render_bound(name, *lower));
      if (upper) parts.push_back(render_bound(name, *upper));
    }
    for (auto v : iv.excluded)
      if (v >= iv.lo && v <= iv.hi) parts.push_back(name + " ≠ " + to_string_i128(v));
  }
  for (const auto& a : c.atoms) {
    if (a.lhs.coeffs.size() <= 1) continue;
    std::string term;
    for (const auto& [slot, coef] : a.lhs.coeffs) {
      if (!term.empty()) term += coef < 0 ? " - " : " + ";
      else if (coef < 0) term += "-";
      const Value mag = coef < 0 ? -coef : coef;
      if (mag != 1) term += std::to_string(mag) + "*";
      term += name_of(slot);
    }
    if (a.lhs.constant != 0)
      term += (a.lhs.constant < 0 ? " - " : " + ") + to_string_i128(a.lhs.constant < 0 ? -static_cast<__int128>(a.lhs.constant) : a.lhs.constant);
    parts.push_back(term + " " + to_string(a.op) + " 0");
  }
  if (parts.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " ∧ ";
    out += parts[i];
  }
  return out;
}

}  // namespace recpath
