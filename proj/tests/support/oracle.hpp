#pragma once

// Brute-force optimum for the (1,2) skeleton with univariate splits on a
// binary dataset: enumerates every admissible topology (ordered root arc
// pair without coinciding targets, per-active-node terminal assignment) and
// every realizable predicate per node (all-to-negative, all-to-positive, or
// a midpoint threshold on one feature). Any hyperplane in the model's
// feasible set routes each sample set exactly like one of these predicates,
// so the minimum over the enumeration equals the model's optimal objective.

#include <algorithm>
#include <limits>
#include <vector>

#include "odd/dataset.hpp"

namespace oracle {

struct Predicate {
  // kind 0: everything negative, 1: everything positive, 2: x[j] >= theta
  int kind = 0;
  int feature = 0;
  double theta = 0.0;

  bool positive(const std::vector<double>& x) const {
    if (kind == 0) return false;
    if (kind == 1) return true;
    return x[static_cast<std::size_t>(feature)] >= theta;
  }
};

inline std::vector<Predicate> predicates(const odd::Dataset& ds) {
  std::vector<Predicate> out;
  out.push_back({0, 0, 0.0});
  out.push_back({1, 0, 0.0});
  for (int j = 0; j < ds.dimension(); ++j) {
    std::vector<double> values;
    for (int i = 0; i < ds.size(); ++i)
      values.push_back(ds.sample(i).features[static_cast<std::size_t>(j)]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
      out.push_back({2, j, (values[k] + values[k + 1]) / 2.0});
  }
  return out;
}

struct Result {
  double objective = std::numeric_limits<double>::infinity();
  int mistakes = 0;
  int active_internal = 0;  // nodes 1 and 2; the root does not count
};

// Targets: 1, 2 are the layer-1 nodes; 3, 4 are the class-0/class-1
// terminals. All 12 ordered (neg, pos) root pairs without coincidence.
inline Result best_12_skeleton(const odd::Dataset& ds, double alpha) {
  const std::vector<Predicate> preds = predicates(ds);
  const int n = ds.size();

  Result best;
  for (int neg = 1; neg <= 4; ++neg) {
    for (int pos = 1; pos <= 4; ++pos) {
      if (neg == pos) continue;
      const bool use1 = neg == 1 || pos == 1;
      const bool use2 = neg == 2 || pos == 2;
      const int active = (use1 ? 1 : 0) + (use2 ? 1 : 0);

      // child terminal choices: index 0 -> (neg=3, pos=4), 1 -> swapped
      for (int assign1 = 0; assign1 < (use1 ? 2 : 1); ++assign1) {
        for (int assign2 = 0; assign2 < (use2 ? 2 : 1); ++assign2) {
          for (const Predicate& p0 : preds) {
            for (std::size_t q1 = 0; q1 < (use1 ? preds.size() : 1); ++q1) {
              for (std::size_t q2 = 0; q2 < (use2 ? preds.size() : 1); ++q2) {
                int mistakes = 0;
                for (int i = 0; i < n; ++i) {
                  const auto& x = ds.sample(i).features;
                  int at = p0.positive(x) ? pos : neg;
                  if (at == 1)
                    at = (preds[q1].positive(x) ? 1 - assign1 : assign1) + 3;
                  else if (at == 2)
                    at = (preds[q2].positive(x) ? 1 - assign2 : assign2) + 3;
                  if (at - 3 != ds.sample(i).class_id) ++mistakes;
                }
                // three internal nodes -> regularizer alpha/2 per active
                // non-root node
                const double objective =
                    static_cast<double>(mistakes) / n + alpha / 2.0 * active;
                if (objective < best.objective) {
                  best.objective = objective;
                  best.mistakes = mistakes;
                  best.active_internal = active;
                }
              }
            }
          }
        }
      }
    }
  }
  return best;
}

}  // namespace oracle
