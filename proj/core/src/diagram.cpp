#include "odd/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "nlohmann/json.hpp"

namespace odd {

int DecisionDiagram::n_active() const {
  int count = 0;
  for (bool a : active) count += a ? 1 : 0;
  return count;
}

bool DecisionDiagram::has_ordered_arcs() const {
  for (int u = 0; u < topology.n_internal(); ++u) {
    if (active[static_cast<std::size_t>(u)] &&
        neg_arc[static_cast<std::size_t>(u)] > pos_arc[static_cast<std::size_t>(u)])
      return false;
  }
  return true;
}

void DecisionDiagram::validate(int expected_dim) const {
  const int k = topology.n_internal();
  if (static_cast<int>(active.size()) != k || static_cast<int>(neg_arc.size()) != k ||
      static_cast<int>(pos_arc.size()) != k || static_cast<int>(planes.size()) != k)
    throw std::runtime_error("invalid model: structure arrays do not match the topology");
  if (k == 0 || !active[0]) throw std::runtime_error("invalid model: root is not active");

  for (int u = 0; u < k; ++u) {
    const auto su = static_cast<std::size_t>(u);
    if (!active[su]) {
      if (neg_arc[su] != -1 || pos_arc[su] != -1)
        throw std::runtime_error("invalid model: inactive node carries arcs");
      continue;
    }
    for (int target : {neg_arc[su], pos_arc[su]}) {
      if (target < 0)
        throw std::runtime_error("invalid model: active node missing an arc");
      const auto& succ = topology.succ[su];
      if (!std::binary_search(succ.begin(), succ.end(), target))
        throw std::runtime_error("invalid model: arc target not a topology successor");
      if (!topology.is_terminal(target) && !active[static_cast<std::size_t>(target)])
        throw std::runtime_error("invalid model: arc points at an inactive node");
    }
    if (expected_dim >= 0 &&
        static_cast<int>(planes[su].a.size()) != expected_dim)
      throw std::runtime_error("invalid model: hyperplane dimension mismatch");
  }
}

PredictionTrace predict(const DecisionDiagram& dd, std::span<const double> x) {
  if (dd.topology.n_internal() == 0 || dd.active.empty() || !dd.active[0])
    throw std::runtime_error("invalid model: root is not active");

  PredictionTrace trace;
  int node = 0;
  for (int hops = 0; hops <= dd.topology.depth(); ++hops) {
    const auto& plane = dd.planes[static_cast<std::size_t>(node)];
    if (plane.a.size() != x.size())
      throw std::runtime_error("invalid model: input dimension mismatch");
    double dot = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) dot += plane.a[j] * x[j];
    const bool positive = dot >= plane.b;  // boundary resolves positive
    trace.visited.push_back({node, positive});
    node = positive ? dd.pos_arc[static_cast<std::size_t>(node)]
                    : dd.neg_arc[static_cast<std::size_t>(node)];
    if (node < 0) throw std::runtime_error("invalid model: missing arc on route");
    if (dd.topology.is_terminal(node)) {
      trace.terminal = node;
      trace.class_id = dd.topology.class_of_terminal(node);
      return trace;
    }
  }
  throw std::runtime_error("invalid model: route exceeded the diagram depth");
}

double evaluate(const DecisionDiagram& dd, const Dataset& ds) {
  if (ds.size() == 0) return 0.0;
  int hits = 0;
  for (const auto& s : ds.samples()) {
    if (predict(dd, s.features).class_id == s.class_id) ++hits;
  }
  return static_cast<double>(hits) / ds.size();
}

std::vector<long> fragmentation(const DecisionDiagram& dd, const Dataset& ds) {
  std::vector<long> counts(static_cast<std::size_t>(dd.topology.n_nodes()), 0);
  for (const auto& s : ds.samples()) {
    const PredictionTrace trace = predict(dd, s.features);
    for (const auto& step : trace.visited) ++counts[static_cast<std::size_t>(step.node)];
    ++counts[static_cast<std::size_t>(trace.terminal)];
  }
  return counts;
}

double objective_value(const DecisionDiagram& dd, const Dataset& ds, double alpha) {
  const int n = ds.size();
  int mistakes = 0;
  for (const auto& s : ds.samples()) {
    if (predict(dd, s.features).class_id != s.class_id) ++mistakes;
  }
  const int k = dd.topology.n_internal();
  double reg = 0.0;
  if (k > 1) reg = alpha * (dd.n_active() - 1) / static_cast<double>(k - 1);
  return (n > 0 ? static_cast<double>(mistakes) / n : 0.0) + reg;
}

namespace {

std::string plane_label(const Hyperplane& plane, const std::vector<std::string>* names) {
  std::ostringstream out;
  int nonzero = 0;
  int last_j = -1;
  for (std::size_t j = 0; j < plane.a.size(); ++j) {
    if (plane.a[j] != 0.0) {
      ++nonzero;
      last_j = static_cast<int>(j);
    }
  }
  auto fname = [&](int j) {
    if (names) return (*names)[static_cast<std::size_t>(j)];
    return "x" + std::to_string(j);
  };
  if (nonzero == 1) {
    const double aj = plane.a[static_cast<std::size_t>(last_j)];
    if (aj > 0) {
      out << fname(last_j) << " >= " << plane.b / aj;
    } else {
      out << fname(last_j) << " <= " << plane.b / aj;
    }
  } else if (nonzero == 0) {
    out << (plane.b <= 0 ? "always +" : "always -");
  } else {
    bool first = true;
    for (std::size_t j = 0; j < plane.a.size(); ++j) {
      if (plane.a[j] == 0.0) continue;
      if (!first) out << (plane.a[j] >= 0 ? " + " : " - ");
      else if (plane.a[j] < 0) out << "-";
      out << std::abs(plane.a[j]) << " " << fname(static_cast<int>(j));
      first = false;
    }
    out << " >= " << plane.b;
  }
  return out.str();
}

}  // namespace

std::string to_dot(const DecisionDiagram& dd, const Dataset* ds) {
  dd.validate();
  std::vector<long> counts;
  if (ds) counts = fragmentation(dd, *ds);

  std::ostringstream out;
  out << "digraph decision_diagram {\n";
  out << "  rankdir=TB;\n";
  out << "  node [shape=box, fontname=\"Helvetica\"];\n";
  const std::vector<std::string>* names = ds ? &ds->feature_names() : nullptr;
  for (int u = 0; u < dd.topology.n_internal(); ++u) {
    if (!dd.active[static_cast<std::size_t>(u)]) continue;
    out << "  n" << u << " [label=\"#" << u << "\\n"
        << plane_label(dd.planes[static_cast<std::size_t>(u)], names);
    if (ds) out << "\\nsamples: " << counts[static_cast<std::size_t>(u)];
    out << "\"];\n";
  }
  for (int c = 0; c < dd.topology.n_classes(); ++c) {
    const int t = dd.topology.terminal_for_class(c);
    out << "  n" << t << " [shape=oval, label=\"class "
        << (ds ? ds->class_names()[static_cast<std::size_t>(c)] : std::to_string(c));
    if (ds) out << "\\nsamples: " << counts[static_cast<std::size_t>(t)];
    out << "\"];\n";
  }
  for (int u = 0; u < dd.topology.n_internal(); ++u) {
    if (!dd.active[static_cast<std::size_t>(u)]) continue;
    out << "  n" << u << " -> n" << dd.neg_arc[static_cast<std::size_t>(u)]
        << " [label=\"-\", style=dashed];\n";
    out << "  n" << u << " -> n" << dd.pos_arc[static_cast<std::size_t>(u)]
        << " [label=\"+\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string diagram_to_json_text(const DecisionDiagram& dd) {
  dd.validate();
  nlohmann::json doc;
  doc["skeleton"] = dd.topology.skeleton.to_string();
  doc["epsilon"] = dd.epsilon;
  auto& nodes = doc["nodes"] = nlohmann::json::array();
  for (int u = 0; u < dd.topology.n_internal(); ++u) {
    const auto su = static_cast<std::size_t>(u);
    if (!dd.active[su]) continue;
    nodes.push_back({{"id", u},
                     {"a", dd.planes[su].a},
                     {"b", dd.planes[su].b},
                     {"neg", dd.neg_arc[su]},
                     {"pos", dd.pos_arc[su]}});
  }
  auto& terminals = doc["terminals"] = nlohmann::json::array();
  for (int c = 0; c < dd.topology.n_classes(); ++c)
    terminals.push_back({{"id", dd.topology.terminal_for_class(c)}, {"class", c}});
  return doc.dump(2) + "\n";
}

DecisionDiagram diagram_from_json_text(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  const int n_classes = static_cast<int>(doc.at("terminals").size());
  const Skeleton sk = Skeleton::parse(doc.at("skeleton").get<std::string>(), n_classes);

  DecisionDiagram dd;
  dd.topology = build_graph(sk);
  dd.epsilon = doc.at("epsilon").get<double>();
  const int k = dd.topology.n_internal();
  dd.active.assign(static_cast<std::size_t>(k), false);
  dd.neg_arc.assign(static_cast<std::size_t>(k), -1);
  dd.pos_arc.assign(static_cast<std::size_t>(k), -1);
  dd.planes.resize(static_cast<std::size_t>(k));
  for (const auto& node : doc.at("nodes")) {
    const int u = node.at("id").get<int>();
    if (u < 0 || u >= k) throw std::runtime_error("invalid model: node id out of range");
    const auto su = static_cast<std::size_t>(u);
    dd.active[su] = true;
    dd.planes[su].a = node.at("a").get<std::vector<double>>();
    dd.planes[su].b = node.at("b").get<double>();
    dd.neg_arc[su] = node.at("neg").get<int>();
    dd.pos_arc[su] = node.at("pos").get<int>();
  }
  dd.validate();
  return dd;
}

void save_diagram(const DecisionDiagram& dd, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << diagram_to_json_text(dd);
}

DecisionDiagram load_diagram(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return diagram_from_json_text(buf.str());
}

}  // namespace odd
