#include "odd/skeleton.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace odd {

int Skeleton::n_internal() const {
  return std::accumulate(widths.begin(), widths.end(), 0);
}

bool Skeleton::is_tree() const {
  int expect = 1;
  for (int w : widths) {
    if (w != expect) return false;
    if (expect <= (1 << 29)) expect *= 2;
  }
  return !widths.empty();
}

void Skeleton::validate() const {
  if (widths.empty()) throw std::runtime_error("invalid skeleton: no layers");
  if (widths.front() != 1)
    throw std::runtime_error("invalid skeleton: first layer width must be 1");
  for (std::size_t l = 0; l < widths.size(); ++l) {
    if (widths[l] <= 0) throw std::runtime_error("invalid skeleton: nonpositive width");
    if (l + 1 < widths.size() && widths[l + 1] > 2 * widths[l]) {
      std::ostringstream msg;
      msg << "invalid skeleton: layer " << l + 1 << " width " << widths[l + 1]
          << " exceeds twice the previous width " << widths[l];
      throw std::runtime_error(msg.str());
    }
  }
  if (n_classes < 2) throw std::runtime_error("invalid skeleton: need at least 2 classes");
}

std::string Skeleton::to_string() const {
  std::ostringstream out;
  for (std::size_t l = 0; l < widths.size(); ++l) {
    if (l) out << '-';
    out << widths[l];
  }
  return out.str();
}

Skeleton Skeleton::parse(const std::string& text, int n_classes) {
  Skeleton sk;
  sk.n_classes = n_classes;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, '-')) {
    try {
      std::size_t used = 0;
      int w = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      sk.widths.push_back(w);
    } catch (const std::exception&) {
      throw std::runtime_error("invalid skeleton: cannot parse width '" + token +
                               "' in '" + text + "'");
    }
  }
  sk.validate();
  return sk;
}

int GraphTopology::n_arcs() const {
  int total = 0;
  for (const auto& s : succ) total += static_cast<int>(s.size());
  return total;
}

GraphTopology build_graph(const Skeleton& sk) {
  sk.validate();
  GraphTopology topo;
  topo.skeleton = sk;

  const int depth = sk.depth();
  int next_id = 0;
  topo.layers.resize(static_cast<std::size_t>(depth));
  for (int l = 0; l < depth; ++l) {
    for (int k = 0; k < sk.widths[static_cast<std::size_t>(l)]; ++k) {
      topo.layers[static_cast<std::size_t>(l)].push_back(next_id);
      topo.layer_of.push_back(l);
      ++next_id;
    }
  }
  const int n_internal = next_id;
  const int n_nodes = n_internal + sk.n_classes;

  topo.succ.resize(static_cast<std::size_t>(n_internal));
  topo.pred.resize(static_cast<std::size_t>(n_nodes));
  for (int l = 0; l < depth; ++l) {
    for (int u : topo.layers[static_cast<std::size_t>(l)]) {
      auto& out = topo.succ[static_cast<std::size_t>(u)];
      if (l + 1 < depth) {
        for (int v : topo.layers[static_cast<std::size_t>(l + 1)]) out.push_back(v);
      }
      for (int c = 0; c < sk.n_classes; ++c) out.push_back(n_internal + c);
      for (int v : out) topo.pred[static_cast<std::size_t>(v)].push_back(u);
    }
  }
  return topo;
}

std::vector<std::pair<int, int>> tree_arcs(const Skeleton& sk) {
  if (!sk.is_tree())
    throw std::runtime_error("not a tree skeleton: " + sk.to_string());
  std::vector<std::pair<int, int>> children(
      static_cast<std::size_t>(sk.n_internal()), {-1, -1});
  // Heap order: the k-th node of layer l has children 2k and 2k+1 of layer
  // l+1, with ids offset by the layer start.
  int layer_start = 0;
  for (int l = 0; l + 1 < sk.depth(); ++l) {
    const int w = sk.widths[static_cast<std::size_t>(l)];
    const int next_start = layer_start + w;
    for (int k = 0; k < w; ++k) {
      children[static_cast<std::size_t>(layer_start + k)] = {next_start + 2 * k,
                                                             next_start + 2 * k + 1};
    }
    layer_start = next_start;
  }
  return children;
}

const std::vector<std::string>& skeleton_presets() {
  static const std::vector<std::string> presets = {
      "1-2-4-8", "1-2-4-4-4", "1-2-3-3-3-3", "1-2-2-2-2-2-2-2"};
  return presets;
}

}  // namespace odd
