#pragma once

#include <string>
#include <vector>

#include "recpath/flowgraph.hpp"

namespace recpath {

struct Activation {
  std::string function;
  int parent = -1;     // activation id of the caller; -1 for the root
  int call_site = 0;   // caller's call-suspension node; 0 for the root

  friend bool operator==(const Activation&, const Activation&) = default;
};

struct Step {
  int node = 0;
  int activation = 0;

  friend bool operator==(const Step&, const Step&) = default;
};

/// A branch decision taken at a predicate node.
struct Branch {
  int activation = 0;
  int predicate = 0;
  EdgeLabel label = EdgeLabel::True;

  friend bool operator==(const Branch&, const Branch&) = default;
};

/// An interprocedural node sequence in FULL convention: every visited node,
/// call-suspension nodes re-emitted on resume, exit emitted on every return.
struct Trace {
  std::vector<Step> steps;
  std::vector<Activation> activations;
  std::vector<Branch> branches;

  /// Same execution shape: identical steps and activation tree.
  bool same_shape(const Trace& other) const {
    return steps == other.steps && activations == other.activations;
  }

  std::vector<int> node_ids() const {
    std::vector<int> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.node);
    return out;
  }
};

inline std::string join_ids(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace recpath
