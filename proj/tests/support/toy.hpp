#pragma once

// Small generated datasets for oracle comparisons and property tests.
// Feature values sit on a 0.05 grid so midpoint thresholds keep a margin
// far above the hyperplane band width.

#include <string>
#include <vector>

#include "odd/dataset.hpp"
#include "odd/rng.hpp"

namespace toy {

inline odd::Dataset make(const std::vector<std::vector<double>>& xs,
                         const std::vector<int>& ys) {
  std::vector<odd::Sample> samples;
  for (std::size_t i = 0; i < xs.size(); ++i) samples.push_back({xs[i], ys[i]});
  const std::size_t d = xs.empty() ? 0 : xs.front().size();
  std::vector<std::string> features;
  for (std::size_t j = 0; j < d; ++j) features.push_back("x" + std::to_string(j));
  int n_classes = 0;
  for (int y : ys) n_classes = std::max(n_classes, y + 1);
  std::vector<std::string> classes;
  for (int c = 0; c < n_classes; ++c) classes.push_back("c" + std::to_string(c));
  return odd::Dataset(std::move(samples), std::move(features), std::move(classes));
}

// Random binary toy with n in [4,12], d in [1,2], grid-valued features.
inline odd::Dataset random_binary(odd::Rng& rng) {
  const int n = 4 + static_cast<int>(rng.below(9));
  const int d = 1 + static_cast<int>(rng.below(2));
  std::vector<std::vector<double>> xs;
  std::vector<int> ys;
  for (int i = 0; i < n; ++i) {
    std::vector<double> x;
    for (int j = 0; j < d; ++j) x.push_back(0.05 * static_cast<double>(rng.below(21)));
    xs.push_back(std::move(x));
    ys.push_back(static_cast<int>(rng.below(2)));
  }
  ys[0] = 0;  // both classes always present
  ys[1] = 1;
  return make(xs, ys);
}

// XOR corners: no single univariate split classifies better than 75%.
inline odd::Dataset xor_corners() {
  return make({{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}}, {0, 1, 1, 0});
}

// Linearly separable two-cluster set, perfectly solvable at depth 1.
inline odd::Dataset two_clusters(int per_side = 4) {
  std::vector<std::vector<double>> xs;
  std::vector<int> ys;
  for (int i = 0; i < per_side; ++i) {
    xs.push_back({0.05 + 0.05 * i, 0.2});
    ys.push_back(0);
    xs.push_back({0.7 + 0.05 * i, 0.8});
    ys.push_back(1);
  }
  return make(xs, ys);
}

// Three stripes over one feature; needs two thresholds for zero error.
inline odd::Dataset stripes() {
  std::vector<std::vector<double>> xs;
  std::vector<int> ys;
  for (int i = 0; i < 4; ++i) {
    xs.push_back({0.05 * i});
    ys.push_back(0);
    xs.push_back({0.4 + 0.05 * i});
    ys.push_back(1);
    xs.push_back({0.8 + 0.05 * i});
    ys.push_back(0);
  }
  return make(xs, ys);
}

}  // namespace toy
