#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "odd/dataset.hpp"
#include "odd/skeleton.hpp"

namespace odd {

enum class VarKind { binary, continuous };
enum class Sense { le, eq, ge };

struct Variable {
  VarKind kind = VarKind::continuous;
  double lower = 0.0;
  double upper = 1.0;
  std::string name;
};

struct LinearTerm {
  int var = -1;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense = Sense::le;
  double rhs = 0.0;
};

// Solver-neutral minimization model. Variables and constraints keep their
// declaration order, which fixes the emitted column/row order.
class MilpModel {
 public:
  int add_variable(VarKind kind, double lower, double upper, std::string name);
  void add_constraint(std::string name, std::vector<LinearTerm> terms, Sense sense,
                      double rhs);
  void set_objective(std::vector<LinearTerm> terms);
  void fix_variable(int var, double value);  // tightens bounds to [value, value]

  // Upper bound on acceptable objective values; emitted as an extra
  // constraint row so any LP/MPS-reading solver honors it.
  void set_cutoff(double value) { cutoff_ = value; }
  const std::optional<double>& cutoff() const { return cutoff_; }

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<LinearTerm>& objective() const { return objective_; }

  void validate() const;  // every term references a declared variable, etc.

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<LinearTerm> objective_;
  std::optional<double> cutoff_;
};

// Restriction packs layered onto the base model.
struct FairnessSpec {
  std::vector<int> group1;  // sample ids
  std::vector<int> group2;
  double xi = 0.8;          // four-fifths rule by default
  int positive_class = 1;
};

struct PackConfig {
  std::optional<double> stability_min_samples;
  std::optional<int> parsimony_max_nodes;
  std::optional<FairnessSpec> fairness;
  bool tree = false;  // ODT mode: internal arcs fixed to the canonical tree

  bool restricts_objective() const {
    return stability_min_samples.has_value() || parsimony_max_nodes.has_value() ||
           fairness.has_value();
  }
};

enum class SplitMode { multivariate, univariate };

struct ModelConfig {
  double alpha = 0.1;
  SplitMode split_mode = SplitMode::univariate;
  double epsilon = 1e-4;
  // Optional cost-sensitive penalty, size n x |C|; default is 0/1 mismatch.
  std::optional<std::vector<std::vector<double>>> penalty;
  bool symmetry_breaking = true;  // arc-ordering + in-degree-ordering rows
  PackConfig packs;
};

// Map from formulation roles to variable ids. Lookups with a non-existent
// arc/node throw; every id returned is valid for the paired model.
class VarIndex {
 public:
  int d(int u) const;
  int yneg(int u, int v) const;
  int ypos(int u, int v) const;
  int a(int v, int j) const;
  int b(int v) const;
  int e(int v, int j) const;  // univariate mode only
  int lambda(int i, int l) const;
  int wneg(int i, int u) const;
  int wpos(int i, int u) const;
  int zneg(int i, int u, int v) const;
  int zpos(int i, int u, int v) const;
  int wleaf(int i, int t) const;  // t = terminal node id

  bool has_arc(int u, int v) const;

  int n_samples() const { return n_; }
  int n_internal() const { return n_internal_; }
  int depth() const { return depth_; }
  int dimension() const { return dim_; }
  int n_terminals() const { return n_terminals_; }
  bool univariate() const { return !e_.empty(); }

  // Role-based counts backing the variable-count checks: lambda variables
  // are the only sample-indexed binaries (n * D of them); y counts arcs
  // twice; free activations exclude the bound-fixed root.
  int count_lambda() const;
  int count_y() const;
  int count_e() const;
  int count_free_d() const { return n_internal_ - 1; }

 private:
  friend struct ModelBuilder;
  int arc_pos(int u, int v) const;  // position of v within succ(u)

  int n_ = 0, n_internal_ = 0, depth_ = 0, dim_ = 0, n_terminals_ = 0;
  std::vector<std::vector<int>> succ_;     // copy of topology successor lists
  std::vector<int> d_;                     // [u]
  std::vector<std::vector<int>> yneg_;     // [u][arc]
  std::vector<std::vector<int>> ypos_;
  std::vector<std::vector<int>> a_;        // [u][j]
  std::vector<int> b_;                     // [u]
  std::vector<std::vector<int>> e_;        // [u][j], univariate only
  std::vector<std::vector<int>> lambda_;   // [l][i]
  std::vector<std::vector<int>> wneg_;     // [u][i]
  std::vector<std::vector<int>> wpos_;
  std::vector<std::vector<std::vector<int>>> zneg_;  // [u][arc][i]
  std::vector<std::vector<std::vector<int>>> zpos_;
  std::vector<std::vector<int>> wleaf_;    // [class][i]
};

struct BuiltModel {
  MilpModel model;
  VarIndex index;
};

// Instantiate the full flow formulation over the topology: flow conservation
// with a unit source at the root, per-layer side indicators, topology
// degree/linking rows, optional arc-ordering and in-degree-ordering rows,
// big-M hyperplane bands (M = d+1+eps multivariate, 2+eps univariate),
// single-feature selection in univariate mode, terminal leaf flows, and the
// objective (1/n) sum penalty * wleaf + (alpha/(K-1)) * sum d. Packs from
// cfg.packs are applied on top.
BuiltModel build_model(const Dataset& ds, const GraphTopology& topo,
                       const ModelConfig& cfg);

// Individual packs (also reachable through cfg.packs).
void add_fairness(MilpModel& model, const VarIndex& idx, std::span<const int> g1,
                  std::span<const int> g2, double xi, int positive_class = 1);

struct LinearExpr {
  std::vector<LinearTerm> terms;
  double constant = 0.0;
};

// Group-level counts as linear expressions over leaf flows: positives,
// false positives (true class != positive class routed to the positive
// terminal), false negatives (positive-class samples routed elsewhere).
struct FairnessExpressions {
  LinearExpr positives;
  LinearExpr false_positives;
  LinearExpr false_negatives;
};
FairnessExpressions fairness_expressions(const VarIndex& idx, const Dataset& ds,
                                         std::span<const int> g, int positive_class = 1);

void add_parsimony(MilpModel& model, const VarIndex& idx, int max_nodes);

// Minimum routed-sample count at every active non-root internal node; the
// root always carries all n samples. S > n forces all other nodes inactive
// (a warning is printed, the row is still added).
void add_stability(MilpModel& model, const VarIndex& idx, double min_samples);

// ODT restriction: zero out internal arcs that do not match the canonical
// tree children; long arcs to terminals stay free so nodes can deactivate.
void fix_tree_topology(MilpModel& model, const VarIndex& idx,
                       const std::vector<std::pair<int, int>>& tree);

// Deterministic text in CPLEX-style LP / free MPS form; same model, same
// bytes. Coefficients carry 12 significant digits.
std::string emit_lp(const MilpModel& model);
std::string emit_mps(const MilpModel& model);

}  // namespace odd
