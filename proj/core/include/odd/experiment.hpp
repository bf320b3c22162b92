#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "odd/dataset.hpp"
#include "odd/solve.hpp"

namespace odd {

enum class TrainMode { odd, odt };

std::string to_string(TrainMode m);
std::string to_string(SplitMode m);

// Hyperparameter sweep: every (seed, skeleton, alpha, split_mode)
// combination is trained once per mode.
struct GridSpec {
  std::vector<double> alphas = {0.01, 0.1, 0.2, 0.5, 1.0};
  std::vector<std::string> skeletons;  // width strings; default = presets
  std::vector<SplitMode> split_modes = {SplitMode::univariate};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  TrainMode mode = TrainMode::odd;

  void validate() const;
};

struct RunRecord {
  std::string dataset;
  std::uint64_t seed = 0;
  std::string skeleton;
  double alpha = 0.0;
  SplitMode split_mode = SplitMode::univariate;
  TrainMode mode = TrainMode::odd;
  std::string status;
  double train_accuracy = 0.0;
  double validation_accuracy = 0.0;
  double test_accuracy = 0.0;
  double objective = 0.0;
  double heuristic_objective = 0.0;
  int active_nodes = 0;
  double runtime_s = 0.0;  // excluded from CSV output (not reproducible)
  bool improved_over_heuristic = false;
  bool proven_optimal = false;
};

// Shared knobs of every harness entry point.
struct HarnessConfig {
  HeuristicConfig heuristic;
  SolveConfig solve;
  SplitSpec proportions;        // seed is overwritten per grid seed
  int max_samples = 1500;       // larger datasets are subsampled
  std::uint64_t subsample_seed = 0;
  int workers = 0;              // 0: hardware concurrency
  double epsilon = 1e-4;
};

struct GridResult {
  std::vector<RunRecord> records;          // all cells, sorted by key
  std::vector<RunRecord> winners;          // one per seed (validation-best)
  double mean_test_accuracy = 0.0;         // over winners
  std::vector<DecisionDiagram> winner_diagrams;  // aligned with winners
};

// Full sweep: per seed, split train/validation/test, normalize on train,
// train every combination, pick the validation-accuracy winner (ties toward
// higher alpha, then earlier skeleton in grid order), and average the
// winners' test accuracy.
GridResult grid_search(const Dataset& ds, const GridSpec& grid, const HarnessConfig& cfg,
                       const std::string& dataset_name);

struct StabilityRow {
  SplitMode split_mode;
  double fraction = 0.0;   // of the training-set size
  double min_samples = 0.0;
  std::string status;
  double objective = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

// Re-train one configuration with the minimum-flow pack at
// S = fraction * n_train for each fraction.
std::vector<StabilityRow> stability_sweep(const Dataset& ds,
                                          const std::vector<double>& fractions,
                                          const std::string& skeleton, double alpha,
                                          const std::vector<SplitMode>& split_modes,
                                          std::uint64_t seed, const HarnessConfig& cfg);

struct CompareCell {
  TrainMode mode;
  SplitMode split_mode;
  double mean_test_accuracy = 0.0;
};

struct CompareResult {
  std::vector<CompareCell> cells;  // odt/odd x multi/uni
  double odt_average = 0.0;
  double odd_average = 0.0;
  // Fragmentation profiles (node -> routed training samples) of the first
  // seed's winners, for structure inspection.
  std::vector<std::pair<std::string, std::vector<long>>> fragmentation_profiles;
};

// Same grid in tree mode and diagram mode, both split modes.
CompareResult compare_odd_odt(const Dataset& ds, const GridSpec& grid,
                              const HarnessConfig& cfg, const std::string& dataset_name);

// CSV writers; fixed column order, fixed float formatting, no volatile
// fields, so identical runs produce identical bytes.
std::string records_to_csv(const std::vector<RunRecord>& records);
std::string stability_to_csv(const std::vector<StabilityRow>& rows);
std::string compare_to_csv(const CompareResult& result, const std::string& dataset_name);
void write_text_file(const std::string& path, const std::string& content);

// JSON summary of the same records; includes runtimes (which the CSVs omit).
std::string records_to_json(const std::vector<RunRecord>& records);

}  // namespace odd
