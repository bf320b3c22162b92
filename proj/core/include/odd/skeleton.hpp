#pragma once

#include <string>
#include <utility>
#include <vector>

namespace odd {

// Layer-width specification of the diagram search space: widths[l] internal
// nodes at depth l, plus one terminal per class. widths[0] must be 1 (the
// root) and each layer can at most double, since every node has two
// out-arcs.
struct Skeleton {
  std::vector<int> widths;
  int n_classes = 2;

  int depth() const { return static_cast<int>(widths.size()); }
  int n_internal() const;
  bool is_tree() const;  // widths are exactly 1, 2, 4, ..., 2^(D-1)

  void validate() const;  // throws "invalid skeleton: ..." on violation

  std::string to_string() const;  // "1-2-4-8"
  static Skeleton parse(const std::string& text, int n_classes);
};

// The skeleton expanded into a concrete indexed DAG. Internal nodes are
// numbered 0..n_internal-1 by increasing layer (root = 0); terminals follow,
// one per class in class-id order. Every internal node in layer l < D-1 has
// arcs to all of layer l+1 and to every terminal ("long arcs"); the last
// internal layer connects to terminals only.
struct GraphTopology {
  Skeleton skeleton;
  std::vector<std::vector<int>> layers;  // internal node ids per layer
  std::vector<int> layer_of;             // internal node id -> layer
  std::vector<std::vector<int>> succ;    // internal node id -> successors, ascending
  std::vector<std::vector<int>> pred;    // node id (internal + terminal) -> predecessors

  int n_internal() const { return static_cast<int>(layer_of.size()); }
  int n_classes() const { return skeleton.n_classes; }
  int n_nodes() const { return n_internal() + n_classes(); }
  int depth() const { return static_cast<int>(layers.size()); }

  bool is_terminal(int v) const { return v >= n_internal(); }
  int terminal_for_class(int c) const { return n_internal() + c; }
  int class_of_terminal(int v) const { return v - n_internal(); }

  int n_arcs() const;
};

GraphTopology build_graph(const Skeleton& sk);

// Canonical complete-binary-tree children within the same index scheme:
// result[u] = (left, right) for every internal node; the last layer maps to
// (-1, -1). Only valid for tree skeletons.
std::vector<std::pair<int, int>> tree_arcs(const Skeleton& sk);

// The four preset width profiles used by the experiment harness.
const std::vector<std::string>& skeleton_presets();

}  // namespace odd
