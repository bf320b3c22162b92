#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "odd/dataset.hpp"
#include "odd/diagram.hpp"
#include "odd/rng.hpp"
#include "odd/skeleton.hpp"

namespace odd {

// A group of samples travelling together through the diagram under
// construction.
struct Flow {
  std::vector<int> sample_ids;     // ascending
  std::vector<long> histogram;     // per class

  int size() const { return static_cast<int>(sample_ids.size()); }
  bool pure() const;
  int majority_class() const;      // ties -> lowest class id; empty -> 0

  static Flow of(const Dataset& ds, std::vector<int> ids);
};

struct HeuristicConfig {
  double time_budget_s = 60.0;
  double feature_fraction = 0.6;   // share of features sampled per split
  std::uint64_t seed = 0;
  double alpha = 0.0;
  int max_starts = 0;              // > 0: run exactly this many restarts and
                                   // ignore the wall clock (deterministic)
  bool tree_mode = false;          // build trees: canonical children, no merging
};

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
  bool valid = false;  // false when no candidate threshold exists
};

double entropy_bits(const std::vector<long>& histogram);

// Best threshold split of `flow` over the allowed features, maximizing
// information gain. Candidate thresholds are midpoints of consecutive
// distinct values; ties break toward the lower feature index, then the lower
// threshold. Children are x_j >= b (positive) vs x_j < b (negative).
SplitChoice best_univariate_split(const Flow& flow, const Dataset& ds,
                                  std::span<const int> allowed_features);

// Merge flows pairwise until at most target_width remain, each time picking
// the pair with the smallest weighted-entropy increase
//   delta = |f1 u f2| * H(f1 u f2) - |f1| * H(f1) - |f2| * H(f2),
// ties toward the lowest index pair.
std::vector<Flow> greedy_merge(std::vector<Flow> flows, int target_width);

// One top-down construction pass: split each surviving flow at its layer
// node over a fresh random feature subset of ceil(feature_fraction * d)
// features; pure child flows take a long arc to their class terminal;
// the rest are merged down to the next layer's width (plain mode) or routed
// to canonical children (tree mode); flows leaving the last layer go to
// their majority-class terminal.
DecisionDiagram construct_once(const Dataset& ds, const GraphTopology& topo,
                               const HeuristicConfig& cfg, Rng& rng);

// Deactivate nodes whose arcs both point at terminals whenever rerouting
// their parents straight to the node's majority terminal strictly improves
// the objective; repeats until a fixed point. With enforce_arc_order, parents
// whose arcs fall out of neg <= pos order get their hyperplane flipped
// (exact for midpoint thresholds); tree-mode callers disable this to keep
// canonical children on their sides.
DecisionDiagram bottom_up_prune(DecisionDiagram dd, const Dataset& ds, double alpha,
                                bool enforce_arc_order = true);

struct HeuristicResult {
  DecisionDiagram diagram;
  double objective = 0.0;
  int starts = 0;
};

// Repeated construct + prune keeping the lowest-objective diagram. Runs
// max_starts iterations when set, otherwise until time_budget_s elapses;
// always completes at least one start.
HeuristicResult multi_start(const Dataset& ds, const GraphTopology& topo,
                            const HeuristicConfig& cfg);

}  // namespace odd
