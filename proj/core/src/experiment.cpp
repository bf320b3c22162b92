#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "odd/experiment.hpp"

namespace odd {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string general(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct Fold {
  Dataset train;
  Dataset validation;
  Dataset test;
};

// One fold per grid seed: subsample (recorded seed), split, normalize on the
// training part only, and map the held-out parts through the same ranges.
Fold prepare_fold(const Dataset& ds, const HarnessConfig& cfg, std::uint64_t seed) {
  Dataset base = ds;
  if (cfg.max_samples > 0 && ds.size() > cfg.max_samples)
    base = subsample(ds, cfg.max_samples, cfg.subsample_seed);
  SplitSpec sp = cfg.proportions;
  sp.seed = seed;
  SplitResult parts = split(base, sp);
  Fold fold;
  fold.train = normalize(parts.train);
  fold.validation = apply_normalization(parts.validation, fold.train.normalization());
  fold.test = apply_normalization(parts.test, fold.train.normalization());
  return fold;
}

RunRecord run_cell(const Fold& fold, const std::string& dataset_name, std::uint64_t seed,
                   const std::string& skeleton_text, double alpha, SplitMode split_mode,
                   TrainMode mode, const HarnessConfig& cfg,
                   std::optional<DecisionDiagram>* diagram_out) {
  const Skeleton sk = Skeleton::parse(skeleton_text, fold.train.n_classes());
  const GraphTopology topo = build_graph(sk);

  ModelConfig mc;
  mc.alpha = alpha;
  mc.split_mode = split_mode;
  mc.epsilon = cfg.epsilon;
  mc.packs.tree = mode == TrainMode::odt;

  HeuristicConfig hc = cfg.heuristic;
  hc.seed = seed;

  const SolveReport rep = train_pipeline(fold.train, topo, mc, hc, cfg.solve);

  RunRecord rec;
  rec.dataset = dataset_name;
  rec.seed = seed;
  rec.skeleton = skeleton_text;
  rec.alpha = alpha;
  rec.split_mode = split_mode;
  rec.mode = mode;
  rec.status = to_string(rep.status);
  rec.train_accuracy = rep.train_accuracy;
  rec.objective = rep.objective.value_or(0.0);
  rec.heuristic_objective = rep.heuristic_objective;
  rec.active_nodes = rep.active_nodes;
  rec.runtime_s = rep.runtime_s;
  rec.improved_over_heuristic = rep.improved_over_heuristic;
  rec.proven_optimal = rep.proven_optimal;
  if (rep.diagram) {
    rec.validation_accuracy = evaluate(*rep.diagram, fold.validation);
    rec.test_accuracy = evaluate(*rep.diagram, fold.test);
    if (diagram_out) *diagram_out = *rep.diagram;
  }
  return rec;
}

}  // namespace

std::string to_string(TrainMode m) { return m == TrainMode::odt ? "odt" : "odd"; }

std::string to_string(SplitMode m) {
  return m == SplitMode::univariate ? "univariate" : "multivariate";
}

void GridSpec::validate() const {
  if (alphas.empty() || split_modes.empty() || seeds.empty())
    throw std::invalid_argument("grid: alphas, split_modes and seeds must be nonempty");
  for (double a : alphas)
    if (!(a >= 0.0)) throw std::invalid_argument("grid: alpha must be >= 0");
}

GridResult grid_search(const Dataset& ds, const GridSpec& grid, const HarnessConfig& cfg,
                       const std::string& dataset_name) {
  grid.validate();
  const std::vector<std::string>& skeletons =
      grid.skeletons.empty() ? skeleton_presets() : grid.skeletons;
  if (grid.mode == TrainMode::odt) {
    for (const auto& text : skeletons) {
      if (!Skeleton::parse(text, ds.n_classes()).is_tree())
        throw std::invalid_argument("grid: odt mode requires tree skeletons, got " + text);
    }
  }

  std::vector<Fold> folds;
  folds.reserve(grid.seeds.size());
  for (std::uint64_t seed : grid.seeds) folds.push_back(prepare_fold(ds, cfg, seed));

  struct Job {
    std::size_t seed_i, sk_i, alpha_i, sm_i;
  };
  std::vector<Job> jobs;
  for (std::size_t s = 0; s < grid.seeds.size(); ++s)
    for (std::size_t k = 0; k < skeletons.size(); ++k)
      for (std::size_t a = 0; a < grid.alphas.size(); ++a)
        for (std::size_t m = 0; m < grid.split_modes.size(); ++m)
          jobs.push_back({s, k, a, m});

  std::vector<RunRecord> records(jobs.size());
  std::vector<std::optional<DecisionDiagram>> diagrams(jobs.size());

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  const auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      if (first_error) return;  // drain fast once something broke
      const Job& job = jobs[j];
      try {
        records[j] = run_cell(folds[job.seed_i], dataset_name, grid.seeds[job.seed_i],
                              skeletons[job.sk_i], grid.alphas[job.alpha_i],
                              grid.split_modes[job.sm_i], grid.mode, cfg, &diagrams[j]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t n_workers =
      std::min(jobs.size(), static_cast<std::size_t>(
                                cfg.workers > 0 ? cfg.workers : (hw > 0 ? hw : 1)));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w + 1 < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  GridResult result;
  result.records = records;

  // Winner per seed: best validation accuracy; ties prefer the simpler model
  // (higher alpha, then the earlier skeleton in grid order).
  const std::size_t cells_per_seed =
      skeletons.size() * grid.alphas.size() * grid.split_modes.size();
  double test_sum = 0.0;
  for (std::size_t s = 0; s < grid.seeds.size(); ++s) {
    std::size_t best = s * cells_per_seed;
    for (std::size_t j = best + 1; j < (s + 1) * cells_per_seed; ++j) {
      const RunRecord& cand = records[j];
      const RunRecord& cur = records[best];
      if (cand.validation_accuracy > cur.validation_accuracy) {
        best = j;
      } else if (cand.validation_accuracy == cur.validation_accuracy) {
        if (cand.alpha > cur.alpha) {
          best = j;
        } else if (cand.alpha == cur.alpha && jobs[j].sk_i < jobs[best].sk_i) {
          best = j;
        }
      }
    }
    result.winners.push_back(records[best]);
    result.winner_diagrams.push_back(diagrams[best] ? *diagrams[best] : DecisionDiagram{});
    test_sum += records[best].test_accuracy;
  }
  result.mean_test_accuracy = grid.seeds.empty() ? 0.0 : test_sum / grid.seeds.size();
  return result;
}

std::vector<StabilityRow> stability_sweep(const Dataset& ds,
                                          const std::vector<double>& fractions,
                                          const std::string& skeleton, double alpha,
                                          const std::vector<SplitMode>& split_modes,
                                          std::uint64_t seed, const HarnessConfig& cfg) {
  if (fractions.empty() || split_modes.empty())
    throw std::invalid_argument("stability sweep: fractions and split modes required");
  const Fold fold = prepare_fold(ds, cfg, seed);
  const Skeleton sk = Skeleton::parse(skeleton, fold.train.n_classes());
  const GraphTopology topo = build_graph(sk);

  std::vector<StabilityRow> rows;
  for (SplitMode sm : split_modes) {
    for (double fraction : fractions) {
      if (fraction < 0.0)
        throw std::invalid_argument("stability sweep: fractions must be >= 0");
      const double S = fraction * fold.train.size();
      ModelConfig mc;
      mc.alpha = alpha;
      mc.split_mode = sm;
      mc.epsilon = cfg.epsilon;
      if (S > 0.0) mc.packs.stability_min_samples = S;

      HeuristicConfig hc = cfg.heuristic;
      hc.seed = seed;
      const SolveReport rep = train_pipeline(fold.train, topo, mc, hc, cfg.solve);

      StabilityRow row;
      row.split_mode = sm;
      row.fraction = fraction;
      row.min_samples = S;
      row.status = to_string(rep.status);
      row.objective = rep.objective.value_or(0.0);
      row.train_accuracy = rep.train_accuracy;
      if (rep.diagram) row.test_accuracy = evaluate(*rep.diagram, fold.test);
      rows.push_back(row);
    }
  }
  return rows;
}

CompareResult compare_odd_odt(const Dataset& ds, const GridSpec& grid,
                              const HarnessConfig& cfg, const std::string& dataset_name) {
  const std::vector<std::string>& all_skeletons =
      grid.skeletons.empty() ? skeleton_presets() : grid.skeletons;
  std::vector<std::string> tree_skeletons;
  for (const auto& text : all_skeletons)
    if (Skeleton::parse(text, ds.n_classes()).is_tree()) tree_skeletons.push_back(text);
  if (tree_skeletons.empty())
    throw std::invalid_argument("compare: the grid contains no tree skeleton");

  CompareResult result;
  double odt_sum = 0.0, odd_sum = 0.0;
  int odt_count = 0, odd_count = 0;
  for (TrainMode mode : {TrainMode::odt, TrainMode::odd}) {
    for (SplitMode sm : grid.split_modes) {
      GridSpec sub = grid;
      sub.mode = mode;
      sub.split_modes = {sm};
      sub.skeletons = mode == TrainMode::odt ? tree_skeletons : all_skeletons;
      const GridResult gr = grid_search(ds, sub, cfg, dataset_name);

      CompareCell cell;
      cell.mode = mode;
      cell.split_mode = sm;
      cell.mean_test_accuracy = gr.mean_test_accuracy;
      result.cells.push_back(cell);
      if (mode == TrainMode::odt) {
        odt_sum += gr.mean_test_accuracy;
        ++odt_count;
      } else {
        odd_sum += gr.mean_test_accuracy;
        ++odd_count;
      }

      if (!gr.winner_diagrams.empty() && !gr.winner_diagrams.front().active.empty()) {
        const Fold fold = prepare_fold(ds, cfg, grid.seeds.front());
        result.fragmentation_profiles.emplace_back(
            to_string(mode) + "_" + to_string(sm),
            fragmentation(gr.winner_diagrams.front(), fold.train));
      }
    }
  }
  if (odt_count > 0) result.odt_average = odt_sum / odt_count;
  if (odd_count > 0) result.odd_average = odd_sum / odd_count;
  return result;
}

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << "dataset,seed,skeleton,alpha,split_mode,mode,status,train_accuracy,"
         "validation_accuracy,test_accuracy,objective,heuristic_objective,"
         "active_nodes,improved_over_heuristic,proven_optimal\n";
  for (const RunRecord& r : records) {
    out << r.dataset << ',' << r.seed << ',' << r.skeleton << ',' << general(r.alpha)
        << ',' << to_string(r.split_mode) << ',' << to_string(r.mode) << ',' << r.status
        << ',' << fixed6(r.train_accuracy) << ',' << fixed6(r.validation_accuracy) << ','
        << fixed6(r.test_accuracy) << ',' << fixed6(r.objective) << ','
        << fixed6(r.heuristic_objective) << ',' << r.active_nodes << ','
        << (r.improved_over_heuristic ? 1 : 0) << ',' << (r.proven_optimal ? 1 : 0)
        << '\n';
  }
  return out.str();
}

std::string stability_to_csv(const std::vector<StabilityRow>& rows) {
  std::ostringstream out;
  out << "split_mode,fraction,min_samples,status,objective,train_accuracy,test_accuracy\n";
  for (const StabilityRow& r : rows) {
    out << to_string(r.split_mode) << ',' << general(r.fraction) << ','
        << fixed6(r.min_samples) << ',' << r.status << ',' << fixed6(r.objective) << ','
        << fixed6(r.train_accuracy) << ',' << fixed6(r.test_accuracy) << '\n';
  }
  return out.str();
}

std::string compare_to_csv(const CompareResult& result, const std::string& dataset_name) {
  std::ostringstream out;
  out << "dataset";
  for (const CompareCell& c : result.cells)
    out << ',' << to_string(c.mode) << '_' << to_string(c.split_mode);
  out << ",odt_average,odd_average\n";
  out << dataset_name;
  for (const CompareCell& c : result.cells) out << ',' << fixed6(c.mean_test_accuracy);
  out << ',' << fixed6(result.odt_average) << ',' << fixed6(result.odd_average) << '\n';
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw std::runtime_error("cannot write " + path);
}

std::string records_to_json(const std::vector<RunRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const RunRecord& r : records) {
    arr.push_back({{"dataset", r.dataset},
                   {"seed", r.seed},
                   {"skeleton", r.skeleton},
                   {"alpha", r.alpha},
                   {"split_mode", to_string(r.split_mode)},
                   {"mode", to_string(r.mode)},
                   {"status", r.status},
                   {"train_accuracy", r.train_accuracy},
                   {"validation_accuracy", r.validation_accuracy},
                   {"test_accuracy", r.test_accuracy},
                   {"objective", r.objective},
                   {"heuristic_objective", r.heuristic_objective},
                   {"active_nodes", r.active_nodes},
                   {"runtime_s", r.runtime_s},
                   {"improved_over_heuristic", r.improved_over_heuristic},
                   {"proven_optimal", r.proven_optimal}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace odd
