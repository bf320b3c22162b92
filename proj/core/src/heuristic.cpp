#include "odd/heuristic.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace odd {

bool Flow::pure() const {
  int nonzero = 0;
  for (long c : histogram) nonzero += c > 0 ? 1 : 0;
  return nonzero <= 1;
}

int Flow::majority_class() const {
  int best = 0;
  long best_count = -1;
  for (std::size_t c = 0; c < histogram.size(); ++c) {
    if (histogram[c] > best_count) {  // strict: ties stay at the lowest id
      best_count = histogram[c];
      best = static_cast<int>(c);
    }
  }
  return best;
}

Flow Flow::of(const Dataset& ds, std::vector<int> ids) {
  Flow f;
  f.histogram.assign(static_cast<std::size_t>(ds.n_classes()), 0);
  for (int i : ids) ++f.histogram[static_cast<std::size_t>(ds.sample(i).class_id)];
  f.sample_ids = std::move(ids);
  return f;
}

double entropy_bits(const std::vector<long>& histogram) {
  long total = 0;
  for (long c : histogram) total += c;
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (long c : histogram) {
    if (c <= 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

SplitChoice best_univariate_split(const Flow& flow, const Dataset& ds,
                                  std::span<const int> allowed_features) {
  SplitChoice best;
  const int n = flow.size();
  if (n == 0) return best;
  const double h0 = entropy_bits(flow.histogram);

  std::vector<std::pair<double, int>> column(static_cast<std::size_t>(n));
  std::vector<long> left(static_cast<std::size_t>(ds.n_classes()));
  for (int j : allowed_features) {
    for (std::size_t k = 0; k < column.size(); ++k) {
      const auto& s = ds.sample(flow.sample_ids[k]);
      column[k] = {s.features[static_cast<std::size_t>(j)], s.class_id};
    }
    std::sort(column.begin(), column.end());

    std::fill(left.begin(), left.end(), 0);
    std::vector<long> right = flow.histogram;
    for (int k = 0; k < n - 1; ++k) {
      const auto sk = static_cast<std::size_t>(k);
      ++left[static_cast<std::size_t>(column[sk].second)];
      --right[static_cast<std::size_t>(column[sk].second)];
      if (column[sk].first == column[sk + 1].first) continue;
      const double threshold = 0.5 * (column[sk].first + column[sk + 1].first);
      const double weighted =
          ((k + 1) * entropy_bits(left) + (n - k - 1) * entropy_bits(right)) / n;
      const double gain = h0 - weighted;
      // Strict improvement keeps the first (lowest feature, lowest
      // threshold) candidate on ties.
      if (!best.valid || gain > best.gain + 1e-12) {
        best = {j, threshold, gain, true};
      }
    }
  }
  if (best.valid && best.gain < 0) best.gain = 0;  // guard fp noise on pure flows
  return best;
}

namespace {

// Merged-entropy increase of joining two flows.
double merge_cost(const Flow& f1, const Flow& f2) {
  std::vector<long> merged = f1.histogram;
  for (std::size_t c = 0; c < merged.size(); ++c) merged[c] += f2.histogram[c];
  const long n1 = f1.size(), n2 = f2.size();
  return static_cast<double>(n1 + n2) * entropy_bits(merged) -
         static_cast<double>(n1) * entropy_bits(f1.histogram) -
         static_cast<double>(n2) * entropy_bits(f2.histogram);
}

// Group indices of `flows` into at most target_width clusters with the
// greedy lowest-cost pair rule; group order follows the lowest member index.
std::vector<std::vector<int>> merge_groups(const std::vector<Flow>& flows,
                                           int target_width) {
  std::vector<std::vector<int>> groups;
  std::vector<Flow> merged;
  for (std::size_t i = 0; i < flows.size(); ++i) {
    groups.push_back({static_cast<int>(i)});
    merged.push_back(flows[i]);
  }
  while (static_cast<int>(merged.size()) > target_width) {
    int best_i = 0, best_j = 1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
      for (std::size_t j = i + 1; j < merged.size(); ++j) {
        const double cost = merge_cost(merged[i], merged[j]);
        if (cost < best_cost - 1e-12) {  // strict: ties keep the lowest pair
          best_cost = cost;
          best_i = static_cast<int>(i);
          best_j = static_cast<int>(j);
        }
      }
    }
    auto& into = merged[static_cast<std::size_t>(best_i)];
    const auto& from = merged[static_cast<std::size_t>(best_j)];
    into.sample_ids.insert(into.sample_ids.end(), from.sample_ids.begin(),
                           from.sample_ids.end());
    std::sort(into.sample_ids.begin(), into.sample_ids.end());
    for (std::size_t c = 0; c < into.histogram.size(); ++c)
      into.histogram[c] += from.histogram[c];
    groups[static_cast<std::size_t>(best_i)].insert(
        groups[static_cast<std::size_t>(best_i)].end(),
        groups[static_cast<std::size_t>(best_j)].begin(),
        groups[static_cast<std::size_t>(best_j)].end());
    merged.erase(merged.begin() + best_j);
    groups.erase(groups.begin() + best_j);
  }
  return groups;
}

Hyperplane unit_plane(int dim, int feature, double threshold) {
  Hyperplane p;
  p.a.assign(static_cast<std::size_t>(dim), 0.0);
  p.a[static_cast<std::size_t>(feature)] = 1.0;
  p.b = threshold;
  return p;
}

void flip_plane(DecisionDiagram& dd, int u) {
  auto& plane = dd.planes[static_cast<std::size_t>(u)];
  for (double& aj : plane.a) aj = -aj;
  plane.b = -plane.b;
  std::swap(dd.neg_arc[static_cast<std::size_t>(u)],
            dd.pos_arc[static_cast<std::size_t>(u)]);
}

// Restore neg <= pos arc order by flipping hyperplanes. Exact for midpoint
// thresholds: no training sample sits on the boundary.
void order_arcs(DecisionDiagram& dd) {
  for (int u = 0; u < dd.topology.n_internal(); ++u) {
    const auto su = static_cast<std::size_t>(u);
    if (dd.active[su] && dd.neg_arc[su] > dd.pos_arc[su]) flip_plane(dd, u);
  }
}

}  // namespace

std::vector<Flow> greedy_merge(std::vector<Flow> flows, int target_width) {
  if (target_width < 1) throw std::runtime_error("greedy_merge: target width must be >= 1");
  if (static_cast<int>(flows.size()) <= target_width) return flows;
  const auto groups = merge_groups(flows, target_width);
  std::vector<Flow> result;
  result.reserve(groups.size());
  for (const auto& group : groups) {
    std::vector<int> ids;
    for (int g : group) {
      ids.insert(ids.end(), flows[static_cast<std::size_t>(g)].sample_ids.begin(),
                 flows[static_cast<std::size_t>(g)].sample_ids.end());
    }
    std::sort(ids.begin(), ids.end());
    Flow f;
    f.histogram.assign(flows.front().histogram.size(), 0);
    for (int g : group) {
      const auto& h = flows[static_cast<std::size_t>(g)].histogram;
      for (std::size_t c = 0; c < h.size(); ++c) f.histogram[c] += h[c];
    }
    f.sample_ids = std::move(ids);
    result.push_back(std::move(f));
  }
  return result;
}

DecisionDiagram construct_once(const Dataset& ds, const GraphTopology& topo,
                               const HeuristicConfig& cfg, Rng& rng) {
  if (ds.size() == 0) throw std::runtime_error("construct_once: empty dataset");
  const int dim = ds.dimension();
  const int depth = topo.depth();
  const int subset_size =
      std::clamp(static_cast<int>(std::ceil(cfg.feature_fraction * dim)), 1, dim);

  std::vector<std::pair<int, int>> children;
  if (cfg.tree_mode) children = tree_arcs(topo.skeleton);

  DecisionDiagram dd;
  dd.topology = topo;
  dd.epsilon = 1e-4;
  const int k = topo.n_internal();
  dd.active.assign(static_cast<std::size_t>(k), false);
  dd.neg_arc.assign(static_cast<std::size_t>(k), -1);
  dd.pos_arc.assign(static_cast<std::size_t>(k), -1);
  dd.planes.resize(static_cast<std::size_t>(k));

  std::vector<int> all_ids(static_cast<std::size_t>(ds.size()));
  for (int i = 0; i < ds.size(); ++i) all_ids[static_cast<std::size_t>(i)] = i;

  // One flow per active node of the current layer, in node order.
  struct Assigned {
    int node;
    Flow flow;
  };
  std::vector<Assigned> current;
  current.push_back({0, Flow::of(ds, std::move(all_ids))});

  // Impure flows waiting for a next-layer node, with the arcs feeding them.
  struct Pending {
    Flow flow;
    std::vector<std::pair<int, bool>> inbound;  // (node, positive side)
  };

  for (int l = 0; l < depth; ++l) {
    std::vector<Pending> pending;
    const bool last_layer = l + 1 == depth;

    for (auto& [u, flow] : current) {
      if (flow.size() == 0) continue;  // node stays inactive
      dd.active[static_cast<std::size_t>(u)] = true;
      const auto su = static_cast<std::size_t>(u);

      const std::vector<int> subset = rng.sample(dim, subset_size);
      const SplitChoice split = flow.pure()
                                    ? SplitChoice{}
                                    : best_univariate_split(flow, ds, subset);
      if (!split.valid) {
        // Pure or unsplittable flow: the node still needs both arcs; route
        // everything to the majority terminal through a vacuous split.
        const int t = topo.terminal_for_class(flow.majority_class());
        dd.planes[su] = unit_plane(dim, 0, 0.5);
        dd.neg_arc[su] = t;
        dd.pos_arc[su] = t;
        continue;
      }
      dd.planes[su] = unit_plane(dim, split.feature, split.threshold);

      std::vector<int> neg_ids, pos_ids;
      for (int i : flow.sample_ids) {
        const double x =
            ds.sample(i).features[static_cast<std::size_t>(split.feature)];
        (x >= split.threshold ? pos_ids : neg_ids).push_back(i);
      }
      for (const bool positive : {false, true}) {
        Flow side = Flow::of(ds, positive ? std::move(pos_ids) : std::move(neg_ids));
        int* arc = positive ? &dd.pos_arc[su] : &dd.neg_arc[su];
        if (side.size() == 0) {
          *arc = topo.terminal_for_class(flow.majority_class());
        } else if (side.pure() || last_layer) {
          *arc = topo.terminal_for_class(side.majority_class());
        } else if (cfg.tree_mode) {
          const auto [left, right] = children[su];
          *arc = positive ? right : left;
          pending.push_back({std::move(side), {{u, positive}}});
        } else {
          pending.push_back({std::move(side), {{u, positive}}});
        }
      }
    }

    if (last_layer) break;
    std::vector<Assigned> next;
    const auto& next_nodes = topo.layers[static_cast<std::size_t>(l + 1)];

    if (cfg.tree_mode) {
      // Arc targets are already canonical; just hand each flow to its node.
      for (auto& p : pending) {
        const auto [parent, positive] = p.inbound.front();
        const auto [left, right] = children[static_cast<std::size_t>(parent)];
        next.push_back({positive ? right : left, std::move(p.flow)});
      }
      std::sort(next.begin(), next.end(),
                [](const Assigned& a, const Assigned& b) { return a.node < b.node; });
    } else {
      std::vector<Flow> flows;
      flows.reserve(pending.size());
      for (auto& p : pending) flows.push_back(std::move(p.flow));
      std::vector<std::vector<int>> groups;
      if (!flows.empty()) {
        groups = merge_groups(flows, static_cast<int>(next_nodes.size()));
      }
      for (std::size_t g = 0; g < groups.size(); ++g) {
        const int node = next_nodes[g];
        std::vector<int> ids;
        for (int member : groups[g]) {
          const auto& mf = flows[static_cast<std::size_t>(member)];
          ids.insert(ids.end(), mf.sample_ids.begin(), mf.sample_ids.end());
          for (auto [parent, positive] : pending[static_cast<std::size_t>(member)].inbound) {
            (positive ? dd.pos_arc : dd.neg_arc)[static_cast<std::size_t>(parent)] = node;
          }
        }
        std::sort(ids.begin(), ids.end());
        next.push_back({node, Flow::of(ds, std::move(ids))});
      }
    }
    current = std::move(next);
    if (current.empty()) break;  // every flow already reached a terminal
  }

  if (!cfg.tree_mode) order_arcs(dd);
  dd.validate(dim);
  return dd;
}

DecisionDiagram bottom_up_prune(DecisionDiagram dd, const Dataset& ds, double alpha,
                                bool enforce_arc_order) {
  const int k = dd.topology.n_internal();
  double current = objective_value(dd, ds, alpha);

  bool changed = true;
  while (changed) {
    changed = false;
    // Majority class of the samples routed through each node.
    std::vector<std::vector<long>> reach(
        static_cast<std::size_t>(k),
        std::vector<long>(static_cast<std::size_t>(dd.topology.n_classes()), 0));
    for (const auto& s : ds.samples()) {
      for (const auto& step : predict(dd, s.features).visited)
        ++reach[static_cast<std::size_t>(step.node)][static_cast<std::size_t>(s.class_id)];
    }

    for (int u = k - 1; u >= 1; --u) {
      const auto su = static_cast<std::size_t>(u);
      if (!dd.active[su]) continue;
      if (!dd.topology.is_terminal(dd.neg_arc[su]) ||
          !dd.topology.is_terminal(dd.pos_arc[su]))
        continue;

      Flow proxy;
      proxy.histogram = reach[su];
      const int target = dd.topology.terminal_for_class(proxy.majority_class());

      DecisionDiagram candidate = dd;
      candidate.active[su] = false;
      candidate.neg_arc[su] = -1;
      candidate.pos_arc[su] = -1;
      candidate.planes[su] = Hyperplane{};
      for (int p = 0; p < k; ++p) {
        const auto sp = static_cast<std::size_t>(p);
        if (!candidate.active[sp]) continue;
        if (candidate.neg_arc[sp] == u) candidate.neg_arc[sp] = target;
        if (candidate.pos_arc[sp] == u) candidate.pos_arc[sp] = target;
      }
      if (enforce_arc_order) order_arcs(candidate);

      const double trial = objective_value(candidate, ds, alpha);
      if (trial < current - 1e-12) {
        dd = std::move(candidate);
        current = trial;
        changed = true;
        break;  // recompute reach counts before the next candidate
      }
    }
  }
  return dd;
}

HeuristicResult multi_start(const Dataset& ds, const GraphTopology& topo,
                            const HeuristicConfig& cfg) {
  if (cfg.feature_fraction <= 0 || cfg.feature_fraction > 1)
    throw std::runtime_error("multi_start: feature_fraction must be in (0,1]");
  const auto started = std::chrono::steady_clock::now();
  auto elapsed_s = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
        .count();
  };

  HeuristicResult best;
  for (int k = 0;; ++k) {
    Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(k));
    DecisionDiagram dd = construct_once(ds, topo, cfg, rng);
    dd = bottom_up_prune(std::move(dd), ds, cfg.alpha, !cfg.tree_mode);
    const double objective = objective_value(dd, ds, cfg.alpha);
    if (k == 0 || objective < best.objective - 1e-12) {
      best.diagram = std::move(dd);
      best.objective = objective;
    }
    best.starts = k + 1;
    if (cfg.max_starts > 0) {
      if (k + 1 >= cfg.max_starts) break;
    } else if (elapsed_s() >= cfg.time_budget_s) {
      break;
    }
  }
  return best;
}

}  // namespace odd
