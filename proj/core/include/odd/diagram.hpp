#pragma once

#include <span>
#include <string>
#include <vector>

#include "odd/dataset.hpp"
#include "odd/skeleton.hpp"

namespace odd {

struct Hyperplane {
  std::vector<double> a;  // coefficients in [-1,1]^d
  double b = 0.0;         // offset in [-1,1]
};

// The trained classifier: a subset of active internal nodes, one negative and
// one positive out-arc each, a splitting hyperplane per active node, and the
// per-class terminals from the topology. Inactive nodes carry no arcs.
struct DecisionDiagram {
  GraphTopology topology;
  std::vector<bool> active;        // internal nodes; root always true
  std::vector<int> neg_arc;        // internal node -> target, -1 when inactive
  std::vector<int> pos_arc;
  std::vector<Hyperplane> planes;  // internal node -> hyperplane
  double epsilon = 1e-4;           // training margin, serialized with the model

  int n_active() const;  // active internal nodes

  // Structural checks: root active, every active node has both arcs and a
  // hyperplane of the right dimension, every arc target is an active node or
  // a terminal. Throws "invalid model: ..." on violation.
  void validate(int expected_dim = -1) const;

  // True when every active node's arcs satisfy neg target <= pos target.
  // Holds for heuristic output and symmetry-broken solves; tree-mode solves
  // may order arcs freely (the ordering rows are dropped there).
  bool has_ordered_arcs() const;
};

struct PredictionTrace {
  struct Step {
    int node;
    bool positive;  // side taken at this node
  };
  std::vector<Step> visited;
  int terminal = -1;
  int class_id = -1;
};

// Route x from the root: at node v take the positive side iff a.x >= b.
PredictionTrace predict(const DecisionDiagram& dd, std::span<const double> x);

// Fraction of samples whose prediction matches class_id.
double evaluate(const DecisionDiagram& dd, const Dataset& ds);

// Per-node visit counts over the dataset (internal + terminal nodes).
// The root count equals ds.size().
std::vector<long> fragmentation(const DecisionDiagram& dd, const Dataset& ds);

// Misclassification share plus node regularization:
//   (1/n) * #mistakes + (alpha/(K-1)) * (active internal nodes - 1)
// where K is the internal-node count of the topology; the second term is 0
// when K = 1.
double objective_value(const DecisionDiagram& dd, const Dataset& ds, double alpha);

// Graphviz rendering of the active structure; arcs labeled -/+. When a
// dataset is given, node labels include routed sample counts.
std::string to_dot(const DecisionDiagram& dd, const Dataset* ds = nullptr);

std::string diagram_to_json_text(const DecisionDiagram& dd);
DecisionDiagram diagram_from_json_text(const std::string& text);
void save_diagram(const DecisionDiagram& dd, const std::string& path);
DecisionDiagram load_diagram(const std::string& path);

}  // namespace odd
