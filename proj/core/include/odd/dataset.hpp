#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace odd {

struct Sample {
  std::vector<double> features;
  int class_id = 0;
};

// Per-feature (min, max) recorded when normalizing; applied to unseen data.
struct FeatureRange {
  double min = 0.0;
  double max = 1.0;
};

class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Sample> samples, std::vector<std::string> feature_names,
          std::vector<std::string> class_names,
          std::vector<FeatureRange> normalization = {});

  int size() const { return static_cast<int>(samples_.size()); }
  int dimension() const { return static_cast<int>(feature_names_.size()); }
  int n_classes() const { return static_cast<int>(class_names_.size()); }

  const Sample& sample(int i) const { return samples_[static_cast<std::size_t>(i)]; }
  const std::vector<Sample>& samples() const { return samples_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::string>& class_names() const { return class_names_; }
  const std::vector<FeatureRange>& normalization() const { return normalization_; }
  bool is_normalized() const { return !normalization_.empty(); }

  std::vector<int> class_histogram() const;

  // CSV with a header row; the class column is removed from the features.
  // Columns listed in `categorical` are one-hot encoded (category order =
  // first appearance); any other column must parse as a number. Class ids
  // are assigned in first-appearance order.
  static Dataset load_csv(const std::string& path, const std::string& class_column,
                          const std::vector<std::string>& categorical = {});

  static Dataset load_json(const std::string& path);
  void save_json(const std::string& path) const;
  std::string to_json_text() const;
  static Dataset from_json_text(const std::string& text);

 private:
  std::vector<Sample> samples_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> class_names_;
  std::vector<FeatureRange> normalization_;  // empty until normalize()
};

struct SplitSpec {
  double train = 0.5;
  double validation = 0.25;
  double test = 0.25;
  std::uint64_t seed = 0;

  void validate() const;  // proportions >= 0 and summing to 1
};

struct SplitResult {
  Dataset train;
  Dataset validation;
  Dataset test;
};

// Min-max scale every feature into [0,1], recording the raw ranges.
// Constant features map to 0. Idempotent.
Dataset normalize(const Dataset& ds);

// Apply previously recorded ranges to unseen data; results clamped to [0,1].
Dataset apply_normalization(const Dataset& ds, const std::vector<FeatureRange>& ranges);

// Seeded shuffle, then sizes floor(p_train*n), floor(p_val*n), remainder.
SplitResult split(const Dataset& ds, const SplitSpec& spec);

// Seeded uniform subsample without replacement (returns ds when n <= max_n).
Dataset subsample(const Dataset& ds, int max_n, std::uint64_t seed);

}  // namespace odd
