#include "odd/milp.hpp"

#include <algorithm>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace odd {

int MilpModel::add_variable(VarKind kind, double lower, double upper, std::string name) {
  if (kind == VarKind::binary && (lower < 0.0 || upper > 1.0))
    throw std::runtime_error("binary variable bounds outside [0,1]: " + name);
  variables_.push_back({kind, lower, upper, std::move(name)});
  return static_cast<int>(variables_.size()) - 1;
}

void MilpModel::add_constraint(std::string name, std::vector<LinearTerm> terms,
                               Sense sense, double rhs) {
  constraints_.push_back({std::move(name), std::move(terms), sense, rhs});
}

void MilpModel::set_objective(std::vector<LinearTerm> terms) {
  objective_ = std::move(terms);
}

void MilpModel::fix_variable(int var, double value) {
  auto& v = variables_.at(static_cast<std::size_t>(var));
  v.lower = value;
  v.upper = value;
}

void MilpModel::validate() const {
  const int n = static_cast<int>(variables_.size());
  std::unordered_set<std::string> names;
  for (const auto& v : variables_) {
    if (v.name.empty()) throw std::runtime_error("model: unnamed variable");
    if (!names.insert(v.name).second)
      throw std::runtime_error("model: duplicate variable name " + v.name);
    if (v.lower > v.upper)
      throw std::runtime_error("model: inverted bounds on " + v.name);
  }
  auto check_terms = [n](const std::vector<LinearTerm>& terms, const std::string& where) {
    for (const auto& t : terms) {
      if (t.var < 0 || t.var >= n)
        throw std::runtime_error("model: term references undeclared variable in " + where);
    }
  };
  check_terms(objective_, "objective");
  for (const auto& c : constraints_) check_terms(c.terms, c.name);
}

// ---- variable index ----

namespace {

[[noreturn]] void no_such(const char* what) {
  throw std::runtime_error(std::string("VarIndex: no such ") + what);
}

}  // namespace

int VarIndex::arc_pos(int u, int v) const {
  const auto& succ = succ_.at(static_cast<std::size_t>(u));
  const auto it = std::lower_bound(succ.begin(), succ.end(), v);
  if (it == succ.end() || *it != v) no_such("arc");
  return static_cast<int>(it - succ.begin());
}

bool VarIndex::has_arc(int u, int v) const {
  if (u < 0 || u >= n_internal_) return false;
  const auto& succ = succ_[static_cast<std::size_t>(u)];
  return std::binary_search(succ.begin(), succ.end(), v);
}

int VarIndex::d(int u) const { return d_.at(static_cast<std::size_t>(u)); }
int VarIndex::yneg(int u, int v) const {
  return yneg_.at(static_cast<std::size_t>(u))[static_cast<std::size_t>(arc_pos(u, v))];
}
int VarIndex::ypos(int u, int v) const {
  return ypos_.at(static_cast<std::size_t>(u))[static_cast<std::size_t>(arc_pos(u, v))];
}
int VarIndex::a(int v, int j) const {
  return a_.at(static_cast<std::size_t>(v)).at(static_cast<std::size_t>(j));
}
int VarIndex::b(int v) const { return b_.at(static_cast<std::size_t>(v)); }
int VarIndex::e(int v, int j) const {
  if (e_.empty()) no_such("feature selector (multivariate mode)");
  return e_.at(static_cast<std::size_t>(v)).at(static_cast<std::size_t>(j));
}
int VarIndex::lambda(int i, int l) const {
  return lambda_.at(static_cast<std::size_t>(l)).at(static_cast<std::size_t>(i));
}
int VarIndex::wneg(int i, int u) const {
  return wneg_.at(static_cast<std::size_t>(u)).at(static_cast<std::size_t>(i));
}
int VarIndex::wpos(int i, int u) const {
  return wpos_.at(static_cast<std::size_t>(u)).at(static_cast<std::size_t>(i));
}
int VarIndex::zneg(int i, int u, int v) const {
  return zneg_.at(static_cast<std::size_t>(u))[static_cast<std::size_t>(arc_pos(u, v))]
      .at(static_cast<std::size_t>(i));
}
int VarIndex::zpos(int i, int u, int v) const {
  return zpos_.at(static_cast<std::size_t>(u))[static_cast<std::size_t>(arc_pos(u, v))]
      .at(static_cast<std::size_t>(i));
}
int VarIndex::wleaf(int i, int t) const {
  const int c = t - n_internal_;
  if (c < 0 || c >= n_terminals_) no_such("terminal");
  return wleaf_.at(static_cast<std::size_t>(c)).at(static_cast<std::size_t>(i));
}

int VarIndex::count_lambda() const { return n_ * depth_; }
int VarIndex::count_y() const {
  int total = 0;
  for (const auto& row : yneg_) total += static_cast<int>(row.size());
  return 2 * total;
}
int VarIndex::count_e() const {
  return static_cast<int>(e_.size()) * dim_;
}

// ---- builder ----

struct ModelBuilder {
  const Dataset& ds;
  const GraphTopology& topo;
  const ModelConfig& cfg;
  MilpModel model;
  VarIndex idx;

  int n, dim, K, D, C;
  double bigM;

  ModelBuilder(const Dataset& ds_, const GraphTopology& topo_, const ModelConfig& cfg_)
      : ds(ds_), topo(topo_), cfg(cfg_) {
    n = ds.size();
    dim = ds.dimension();
    K = topo.n_internal();
    D = topo.depth();
    C = topo.n_classes();
    bigM = (cfg.split_mode == SplitMode::univariate ? 2.0 : dim + 1.0) + cfg.epsilon;
  }

  static std::string nm(const char* role, int i) {
    return std::string(role) + "_" + std::to_string(i);
  }
  static std::string nm(const char* role, int i, int j) {
    return std::string(role) + "_" + std::to_string(i) + "_" + std::to_string(j);
  }
  static std::string nm(const char* role, int i, int j, int k) {
    return std::string(role) + "_" + std::to_string(i) + "_" + std::to_string(j) + "_" +
           std::to_string(k);
  }

  double x(int i, int j) const {
    return ds.sample(i).features[static_cast<std::size_t>(j)];
  }

  double penalty(int i, int c) const {
    if (cfg.penalty) {
      return (*cfg.penalty)[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    }
    return ds.sample(i).class_id == c ? 0.0 : 1.0;
  }

  void declare_variables() {
    idx.n_ = n;
    idx.n_internal_ = K;
    idx.depth_ = D;
    idx.dim_ = dim;
    idx.n_terminals_ = C;
    idx.succ_ = topo.succ;

    // Node activations; the root is pinned on.
    idx.d_.resize(static_cast<std::size_t>(K));
    for (int u = 0; u < K; ++u) {
      const double lo = u == 0 ? 1.0 : 0.0;
      idx.d_[static_cast<std::size_t>(u)] =
          model.add_variable(VarKind::binary, lo, 1.0, nm("d", u));
    }
    // Arc booleans, one negative + one positive per topology arc.
    idx.yneg_.resize(static_cast<std::size_t>(K));
    idx.ypos_.resize(static_cast<std::size_t>(K));
    for (int u = 0; u < K; ++u) {
      for (int v : topo.succ[static_cast<std::size_t>(u)]) {
        idx.yneg_[static_cast<std::size_t>(u)].push_back(
            model.add_variable(VarKind::binary, 0.0, 1.0, nm("yneg", u, v)));
        idx.ypos_[static_cast<std::size_t>(u)].push_back(
            model.add_variable(VarKind::binary, 0.0, 1.0, nm("ypos", u, v)));
      }
    }
    // Hyperplanes, plus single-feature selectors in univariate mode.
    idx.a_.resize(static_cast<std::size_t>(K));
    idx.b_.resize(static_cast<std::size_t>(K));
    if (cfg.split_mode == SplitMode::univariate)
      idx.e_.resize(static_cast<std::size_t>(K));
    for (int v = 0; v < K; ++v) {
      for (int j = 0; j < dim; ++j) {
        idx.a_[static_cast<std::size_t>(v)].push_back(
            model.add_variable(VarKind::continuous, -1.0, 1.0, nm("a", v, j)));
      }
      idx.b_[static_cast<std::size_t>(v)] =
          model.add_variable(VarKind::continuous, -1.0, 1.0, nm("b", v));
      if (cfg.split_mode == SplitMode::univariate) {
        for (int j = 0; j < dim; ++j) {
          idx.e_[static_cast<std::size_t>(v)].push_back(
              model.add_variable(VarKind::binary, 0.0, 1.0, nm("e", v, j)));
        }
      }
    }
    // Per-layer side indicators: the only sample-indexed binaries.
    idx.lambda_.resize(static_cast<std::size_t>(D));
    for (int l = 0; l < D; ++l) {
      for (int i = 0; i < n; ++i) {
        idx.lambda_[static_cast<std::size_t>(l)].push_back(
            model.add_variable(VarKind::binary, 0.0, 1.0, nm("lam", i, l)));
      }
    }
    // Sample flows through nodes and arcs; continuous by design, binary by
    // the integrality property.
    idx.wneg_.resize(static_cast<std::size_t>(K));
    idx.wpos_.resize(static_cast<std::size_t>(K));
    for (int u = 0; u < K; ++u) {
      for (int i = 0; i < n; ++i) {
        idx.wneg_[static_cast<std::size_t>(u)].push_back(
            model.add_variable(VarKind::continuous, 0.0, 1.0, nm("wneg", i, u)));
        idx.wpos_[static_cast<std::size_t>(u)].push_back(
            model.add_variable(VarKind::continuous, 0.0, 1.0, nm("wpos", i, u)));
      }
    }
    idx.zneg_.resize(static_cast<std::size_t>(K));
    idx.zpos_.resize(static_cast<std::size_t>(K));
    for (int u = 0; u < K; ++u) {
      const auto& succ = topo.succ[static_cast<std::size_t>(u)];
      idx.zneg_[static_cast<std::size_t>(u)].resize(succ.size());
      idx.zpos_[static_cast<std::size_t>(u)].resize(succ.size());
      for (std::size_t p = 0; p < succ.size(); ++p) {
        for (int i = 0; i < n; ++i) {
          idx.zneg_[static_cast<std::size_t>(u)][p].push_back(model.add_variable(
              VarKind::continuous, 0.0, 1.0, nm("zneg", i, u, succ[p])));
          idx.zpos_[static_cast<std::size_t>(u)][p].push_back(model.add_variable(
              VarKind::continuous, 0.0, 1.0, nm("zpos", i, u, succ[p])));
        }
      }
    }
    idx.wleaf_.resize(static_cast<std::size_t>(C));
    for (int c = 0; c < C; ++c) {
      const int t = topo.terminal_for_class(c);
      for (int i = 0; i < n; ++i) {
        idx.wleaf_[static_cast<std::size_t>(c)].push_back(
            model.add_variable(VarKind::continuous, 0.0, 1.0, nm("wleaf", i, t)));
      }
    }
  }

  // Predecessors are always internal nodes (terminals have no out-arcs).
  const std::vector<int>& internal_pred(int v) const {
    return topo.pred[static_cast<std::size_t>(v)];
  }

  void flow_conservation() {
    // Unit source at the root; elsewhere inbound arc flow feeds the node.
    for (int v = 0; v < K; ++v) {
      for (int i = 0; i < n; ++i) {
        std::vector<LinearTerm> terms;
        terms.push_back({idx.wneg(i, v), 1.0});
        terms.push_back({idx.wpos(i, v), 1.0});
        for (int u : internal_pred(v)) {
          terms.push_back({idx.zneg(i, u, v), -1.0});
          terms.push_back({idx.zpos(i, u, v), -1.0});
        }
        model.add_constraint(nm("flow", i, v), std::move(terms), Sense::eq,
                             v == 0 ? 1.0 : 0.0);
      }
    }
  }

  void flow_splitting() {
    // A node's side flow continues on exactly one outgoing arc.
    for (int u = 0; u < K; ++u) {
      for (int i = 0; i < n; ++i) {
        std::vector<LinearTerm> neg{{idx.wneg(i, u), 1.0}};
        std::vector<LinearTerm> pos{{idx.wpos(i, u), 1.0}};
        for (int v : topo.succ[static_cast<std::size_t>(u)]) {
          neg.push_back({idx.zneg(i, u, v), -1.0});
          pos.push_back({idx.zpos(i, u, v), -1.0});
        }
        model.add_constraint(nm("outneg", i, u), std::move(neg), Sense::eq, 0.0);
        model.add_constraint(nm("outpos", i, u), std::move(pos), Sense::eq, 0.0);
      }
    }
  }

  void lambda_linking() {
    // One side indicator per layer: a sample in layer l is on the negative
    // side of its node iff lambda = 0.
    for (int l = 0; l < D; ++l) {
      for (int i = 0; i < n; ++i) {
        std::vector<LinearTerm> neg, pos;
        for (int u : topo.layers[static_cast<std::size_t>(l)]) {
          neg.push_back({idx.wneg(i, u), 1.0});
          pos.push_back({idx.wpos(i, u), 1.0});
        }
        neg.push_back({idx.lambda(i, l), 1.0});   // sum wneg + lam <= 1
        pos.push_back({idx.lambda(i, l), -1.0});  // sum wpos - lam <= 0
        model.add_constraint(nm("lamneg", i, l), std::move(neg), Sense::le, 1.0);
        model.add_constraint(nm("lampos", i, l), std::move(pos), Sense::le, 0.0);
      }
    }
  }

  void topology_degrees() {
    // An active node has exactly one negative and one positive out-arc.
    for (int u = 0; u < K; ++u) {
      std::vector<LinearTerm> neg{{idx.d(u), -1.0}};
      std::vector<LinearTerm> pos{{idx.d(u), -1.0}};
      for (int v : topo.succ[static_cast<std::size_t>(u)]) {
        neg.push_back({idx.yneg(u, v), 1.0});
        pos.push_back({idx.ypos(u, v), 1.0});
      }
      model.add_constraint(nm("degneg", u), std::move(neg), Sense::eq, 0.0);
      model.add_constraint(nm("degpos", u), std::move(pos), Sense::eq, 0.0);
    }
    // Non-root nodes activate only when some arc reaches them.
    for (int v = 1; v < K; ++v) {
      std::vector<LinearTerm> terms{{idx.d(v), 1.0}};
      for (int u : internal_pred(v)) {
        terms.push_back({idx.yneg(u, v), -1.0});
        terms.push_back({idx.ypos(u, v), -1.0});
      }
      model.add_constraint(nm("indeg", v), std::move(terms), Sense::le, 0.0);
    }
    // Arcs only reach active targets, and a node's two arcs never share a
    // target (for terminals, d is pinned to 1 and the row caps the pair).
    for (int u = 0; u < K; ++u) {
      for (int v : topo.succ[static_cast<std::size_t>(u)]) {
        std::vector<LinearTerm> terms{{idx.yneg(u, v), 1.0}, {idx.ypos(u, v), 1.0}};
        double rhs = 0.0;
        if (topo.is_terminal(v)) {
          rhs = 1.0;  // d for terminals is identically 1
        } else {
          terms.push_back({idx.d(v), -1.0});
        }
        model.add_constraint(nm("arcact", u, v), std::move(terms), Sense::le, rhs);
      }
    }
  }

  void arc_flow_linking() {
    // Flow can only use arcs that exist.
    for (int u = 0; u < K; ++u) {
      for (int v : topo.succ[static_cast<std::size_t>(u)]) {
        for (int i = 0; i < n; ++i) {
          model.add_constraint(nm("zcapneg", i, u, v),
                               {{idx.zneg(i, u, v), 1.0}, {idx.yneg(u, v), -1.0}},
                               Sense::le, 0.0);
          model.add_constraint(nm("zcappos", i, u, v),
                               {{idx.zpos(i, u, v), 1.0}, {idx.ypos(u, v), -1.0}},
                               Sense::le, 0.0);
        }
      }
    }
  }

  void symmetry_rows() {
    // A negative arc to v forbids positive arcs to any target up to v,
    // ordering the two arc targets.
    for (int u = 0; u < K; ++u) {
      for (int v : topo.succ[static_cast<std::size_t>(u)]) {
        std::vector<LinearTerm> terms{{idx.yneg(u, v), 1.0}};
        for (int w : topo.succ[static_cast<std::size_t>(u)]) {
          if (w > v) break;
          terms.push_back({idx.ypos(u, w), 1.0});
        }
        model.add_constraint(nm("sym", u, v), std::move(terms), Sense::le, 1.0);
      }
    }
    // Within layers 2..D-1, in-degrees weakly decrease with the node index.
    for (int l = 2; l < D; ++l) {
      const auto& nodes = topo.layers[static_cast<std::size_t>(l)];
      for (std::size_t p = 0; p + 1 < nodes.size(); ++p) {
        const int u = nodes[p], v = nodes[p + 1];
        std::vector<LinearTerm> terms;
        for (int q : internal_pred(u)) {
          terms.push_back({idx.yneg(q, u), 1.0});
          terms.push_back({idx.ypos(q, u), 1.0});
        }
        for (int q : internal_pred(v)) {
          terms.push_back({idx.yneg(q, v), -1.0});
          terms.push_back({idx.ypos(q, v), -1.0});
        }
        model.add_constraint(nm("inorder", l, u), std::move(terms), Sense::ge, 0.0);
      }
    }
  }

  void hyperplane_bands() {
    // Big-M form of the side indicators: a sample on the negative side sits
    // at least epsilon below the plane, one on the positive side at or above
    // it.
    for (int v = 0; v < K; ++v) {
      for (int i = 0; i < n; ++i) {
        std::vector<LinearTerm> neg, pos;
        for (int j = 0; j < dim; ++j) {
          const double xij = x(i, j);
          if (xij != 0.0) {
            neg.push_back({idx.a(v, j), xij});
            pos.push_back({idx.a(v, j), xij});
          }
        }
        neg.push_back({idx.b(v), -1.0});
        neg.push_back({idx.wneg(i, v), bigM});
        model.add_constraint(nm("bandneg", i, v), std::move(neg), Sense::le,
                             bigM - cfg.epsilon);
        pos.push_back({idx.b(v), -1.0});
        pos.push_back({idx.wpos(i, v), -bigM});
        model.add_constraint(nm("bandpos", i, v), std::move(pos), Sense::ge, -bigM);
      }
    }
  }

  void univariate_rows() {
    // Each split may use exactly one feature: e picks it and boxes a.
    for (int v = 0; v < K; ++v) {
      std::vector<LinearTerm> sel;
      for (int j = 0; j < dim; ++j) sel.push_back({idx.e(v, j), 1.0});
      model.add_constraint(nm("esel", v), std::move(sel), Sense::eq, 1.0);
      for (int j = 0; j < dim; ++j) {
        model.add_constraint(nm("elo", v, j),
                             {{idx.a(v, j), 1.0}, {idx.e(v, j), 1.0}}, Sense::ge, 0.0);
        model.add_constraint(nm("ehi", v, j),
                             {{idx.a(v, j), 1.0}, {idx.e(v, j), -1.0}}, Sense::le, 0.0);
      }
    }
  }

  void leaf_flows() {
    // Terminal leaf flow aggregates every arc arriving at that terminal.
    for (int c = 0; c < C; ++c) {
      const int t = topo.terminal_for_class(c);
      for (int i = 0; i < n; ++i) {
        std::vector<LinearTerm> terms{{idx.wleaf(i, t), 1.0}};
        for (int u : topo.pred[static_cast<std::size_t>(t)]) {
          terms.push_back({idx.zneg(i, u, t), -1.0});
          terms.push_back({idx.zpos(i, u, t), -1.0});
        }
        model.add_constraint(nm("leaf", i, t), std::move(terms), Sense::eq, 0.0);
      }
    }
  }

  void objective() {
    std::vector<LinearTerm> terms;
    for (int c = 0; c < C; ++c) {
      const int t = topo.terminal_for_class(c);
      for (int i = 0; i < n; ++i) {
        const double coef = penalty(i, c) / n;
        if (coef != 0.0) terms.push_back({idx.wleaf(i, t), coef});
      }
    }
    if (cfg.alpha != 0.0 && K > 1) {
      const double coef = cfg.alpha / (K - 1);
      for (int v = 1; v < K; ++v) terms.push_back({idx.d(v), coef});
    }
    model.set_objective(std::move(terms));
  }

  void apply_packs() {
    const auto& packs = cfg.packs;
    if (packs.stability_min_samples) {
      add_stability(model, idx, *packs.stability_min_samples);
    }
    if (packs.parsimony_max_nodes) {
      add_parsimony(model, idx, *packs.parsimony_max_nodes);
    }
    if (packs.fairness) {
      const auto& f = *packs.fairness;
      add_fairness(model, idx, f.group1, f.group2, f.xi, f.positive_class);
    }
    if (packs.tree) {
      fix_tree_topology(model, idx, tree_arcs(topo.skeleton));
    }
  }

  BuiltModel build() {
    declare_variables();
    flow_conservation();
    flow_splitting();
    lambda_linking();
    topology_degrees();
    arc_flow_linking();
    if (cfg.symmetry_breaking && !cfg.packs.tree) symmetry_rows();
    hyperplane_bands();
    if (cfg.split_mode == SplitMode::univariate) univariate_rows();
    leaf_flows();
    objective();
    apply_packs();
    model.validate();
    return BuiltModel{std::move(model), std::move(idx)};
  }
};

BuiltModel build_model(const Dataset& ds, const GraphTopology& topo,
                       const ModelConfig& cfg) {
  if (ds.size() == 0) throw std::runtime_error("build_model: empty dataset");
  if (ds.dimension() == 0) throw std::runtime_error("build_model: no features");
  if (topo.n_internal() < 1) throw std::runtime_error("build_model: empty topology");
  if (ds.n_classes() != topo.n_classes())
    throw std::runtime_error("build_model: dataset classes do not match the topology");
  if (cfg.alpha < 0) throw std::runtime_error("build_model: alpha must be >= 0");
  if (cfg.epsilon <= 0) throw std::runtime_error("build_model: epsilon must be > 0");
  for (const auto& s : ds.samples()) {
    for (double v : s.features) {
      if (v < -1e-9 || v > 1.0 + 1e-9)
        throw std::runtime_error("build_model: features must be normalized to [0,1]");
    }
  }
  if (cfg.penalty) {
    if (cfg.penalty->size() != static_cast<std::size_t>(ds.size()))
      throw std::runtime_error("build_model: penalty rows != sample count");
    for (const auto& row : *cfg.penalty) {
      if (row.size() != static_cast<std::size_t>(ds.n_classes()))
        throw std::runtime_error("build_model: penalty columns != class count");
    }
  }
  return ModelBuilder(ds, topo, cfg).build();
}

void add_fairness(MilpModel& model, const VarIndex& idx, std::span<const int> g1,
                  std::span<const int> g2, double xi, int positive_class) {
  if (idx.n_terminals() != 2)
    throw std::runtime_error("fairness pack requires binary classification");
  if (positive_class < 0 || positive_class > 1)
    throw std::runtime_error("fairness pack: positive class must be 0 or 1");
  const int t = idx.n_internal() + positive_class;
  std::vector<LinearTerm> terms;
  for (int i : g1) terms.push_back({idx.wleaf(i, t), 1.0});
  for (int i : g2) terms.push_back({idx.wleaf(i, t), -xi});
  model.add_constraint("fairness", std::move(terms), Sense::ge, 0.0);
}

FairnessExpressions fairness_expressions(const VarIndex& idx, const Dataset& ds,
                                         std::span<const int> g, int positive_class) {
  if (idx.n_terminals() != 2)
    throw std::runtime_error("fairness pack requires binary classification");
  const int t = idx.n_internal() + positive_class;
  FairnessExpressions out;
  for (int i : g) {
    out.positives.terms.push_back({idx.wleaf(i, t), 1.0});
    if (ds.sample(i).class_id != positive_class) {
      out.false_positives.terms.push_back({idx.wleaf(i, t), 1.0});
    } else {
      // 1 - wleaf per positive-class member routed elsewhere.
      out.false_negatives.terms.push_back({idx.wleaf(i, t), -1.0});
      out.false_negatives.constant += 1.0;
    }
  }
  return out;
}

void add_parsimony(MilpModel& model, const VarIndex& idx, int max_nodes) {
  if (max_nodes < 1) throw std::runtime_error("parsimony pack: max_nodes must be >= 1");
  std::vector<LinearTerm> terms;
  for (int u = 0; u < idx.n_internal(); ++u) terms.push_back({idx.d(u), 1.0});
  model.add_constraint("parsimony", std::move(terms), Sense::le,
                       static_cast<double>(max_nodes));
}

void add_stability(MilpModel& model, const VarIndex& idx, double min_samples) {
  if (min_samples < 0)
    throw std::runtime_error("stability pack: minimum sample count must be >= 0");
  if (min_samples > idx.n_samples()) {
    std::cerr << "warning: stability minimum " << min_samples << " exceeds the "
              << idx.n_samples() << " training samples; all non-root nodes are forced off\n";
  }
  const int K = idx.n_internal();
  for (int v = 1; v < K; ++v) {
    std::vector<LinearTerm> terms;
    for (int u = 0; u < K; ++u) {
      if (!idx.has_arc(u, v)) continue;
      for (int i = 0; i < idx.n_samples(); ++i) {
        terms.push_back({idx.zneg(i, u, v), 1.0});
        terms.push_back({idx.zpos(i, u, v), 1.0});
      }
    }
    terms.push_back({idx.d(v), -min_samples});
    model.add_constraint(ModelBuilder::nm("stab", v), std::move(terms), Sense::ge, 0.0);
  }
}

void fix_tree_topology(MilpModel& model, const VarIndex& idx,
                       const std::vector<std::pair<int, int>>& tree) {
  if (static_cast<int>(tree.size()) != idx.n_internal())
    throw std::runtime_error("fix_tree_topology: children map does not match the model");
  const int K = idx.n_internal();
  for (int u = 0; u < K; ++u) {
    const auto [left, right] = tree[static_cast<std::size_t>(u)];
    for (int v = 0; v < K; ++v) {
      if (!idx.has_arc(u, v)) continue;
      if (v != left) model.fix_variable(idx.yneg(u, v), 0.0);
      if (v != right) model.fix_variable(idx.ypos(u, v), 0.0);
    }
  }
}

}  // namespace odd
