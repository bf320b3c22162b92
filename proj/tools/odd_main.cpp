// Command-line front end: train/predict/evaluate plus the experiment
// harness (grid, stability sweep, ODD-vs-ODT comparison) and raw model
// emission for solver debugging.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "odd/experiment.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Thrown when the failure is the solver's, not the user's (exit code 2).
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// Default class column: the last column of the header row.
std::string last_header_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path);
  const std::size_t comma = line.find_last_of(',');
  std::string name = comma == std::string::npos ? line : line.substr(comma + 1);
  name = trim(name);
  if (name.size() >= 2 && name.front() == '"' && name.back() == '"')
    name = name.substr(1, name.size() - 2);
  if (name.empty()) throw std::runtime_error("dataset header has an empty last column");
  return name;
}

struct DataOpts {
  std::string path;
  std::string class_column;
  std::vector<std::string> categorical;
};

void add_data_options(CLI::App* cmd, DataOpts& opts) {
  cmd->add_option("--data", opts.path, "dataset CSV with a header row")->required();
  cmd->add_option("--class-column", opts.class_column,
                  "label column name (default: last column)");
  cmd->add_option("--categorical", opts.categorical,
                  "columns to one-hot encode (repeat or comma-separate)")
      ->delimiter(',');
}

odd::Dataset load_data(const DataOpts& opts) {
  const std::string cls =
      opts.class_column.empty() ? last_header_column(opts.path) : opts.class_column;
  return odd::Dataset::load_csv(opts.path, cls, opts.categorical);
}

odd::SplitMode parse_split_mode(const std::string& text) {
  if (text == "univariate") return odd::SplitMode::univariate;
  if (text == "multivariate") return odd::SplitMode::multivariate;
  throw CLI::ValidationError("--split-mode",
                             "expected 'univariate' or 'multivariate', got '" + text + "'");
}

std::vector<odd::SplitMode> parse_split_modes(const std::vector<std::string>& texts) {
  std::vector<odd::SplitMode> out;
  for (const auto& t : texts) out.push_back(parse_split_mode(t));
  return out;
}

odd::SplitSpec parse_proportions(const std::vector<double>& parts) {
  if (parts.size() != 3)
    throw CLI::ValidationError("--split", "expected three proportions, e.g. 0.5,0.25,0.25");
  odd::SplitSpec sp;
  sp.train = parts[0];
  sp.validation = parts[1];
  sp.test = parts[2];
  sp.validate();
  return sp;
}

struct HeurOpts {
  double seconds = 60.0;
  int max_starts = 0;
  double feature_fraction = 0.6;
};

void add_heuristic_options(CLI::App* cmd, HeurOpts& opts) {
  cmd->add_option("--heuristic-seconds", opts.seconds, "greedy multi-start time budget");
  cmd->add_option("--max-starts", opts.max_starts,
                  "exact number of greedy starts (0: fill the time budget)");
  cmd->add_option("--feature-fraction", opts.feature_fraction,
                  "feature subsample fraction per greedy split");
}

odd::HeuristicConfig to_heuristic_config(const HeurOpts& opts, std::uint64_t seed) {
  odd::HeuristicConfig hc;
  hc.time_budget_s = opts.seconds;
  hc.max_starts = opts.max_starts;
  hc.feature_fraction = opts.feature_fraction;
  hc.seed = seed;
  return hc;
}

struct SolverOpts {
  std::string command;
  double time_limit = 600.0;
  double mip_gap = 0.0;
  std::string format = "lp";
  std::string work_dir;
  bool keep_files = false;
};

void add_solver_options(CLI::App* cmd, SolverOpts& opts) {
  cmd->add_option("--solver-cmd", opts.command,
                  "solver command template with {model_file} {time_limit} "
                  "{solution_file} (default: ODD_SOLVER_CMD, then PATH probe)");
  cmd->add_option("--time-limit", opts.time_limit, "per-solve limit in seconds");
  cmd->add_option("--mip-gap", opts.mip_gap, "relative gap passed via {mip_gap}");
  cmd->add_option("--format", opts.format, "model file format: lp or mps")
      ->check(CLI::IsMember({"lp", "mps"}));
  cmd->add_option("--work-dir", opts.work_dir, "keep solver files in this directory");
  cmd->add_flag("--keep-files", opts.keep_files, "do not delete temporary solver files");
}

odd::SolveConfig to_solve_config(const SolverOpts& opts) {
  odd::SolveConfig sc;
  sc.solver_command = opts.command;
  sc.time_limit_s = opts.time_limit;
  sc.mip_gap = opts.mip_gap;
  sc.model_format = opts.format;
  sc.work_dir = opts.work_dir;
  sc.keep_files = opts.keep_files;
  return sc;
}

struct PackOpts {
  bool tree = false;
  double stability = -1.0;
  int parsimony = 0;
  std::string fairness_column;
  double fairness_threshold = 0.5;
  double fairness_xi = 0.8;
  int fairness_positive_class = 1;
};

void add_pack_options(CLI::App* cmd, PackOpts& opts) {
  cmd->add_flag("--tree", opts.tree, "restrict to the canonical tree topology (ODT)");
  cmd->add_option("--stability", opts.stability,
                  "minimum routed training samples per active internal node");
  cmd->add_option("--parsimony", opts.parsimony, "maximum number of active internal nodes");
  cmd->add_option("--fairness-column", opts.fairness_column,
                  "feature splitting samples into two groups for demographic parity");
  cmd->add_option("--fairness-threshold", opts.fairness_threshold,
                  "group 1 = samples with raw feature value >= threshold");
  cmd->add_option("--fairness-xi", opts.fairness_xi, "parity ratio (four-fifths: 0.8)");
  cmd->add_option("--fairness-positive-class", opts.fairness_positive_class,
                  "class id counted as the positive outcome");
}

// Groups come from raw (pre-normalization) feature values of the training set.
void apply_packs(odd::ModelConfig& mc, const PackOpts& opts, const odd::Dataset& raw_train) {
  mc.packs.tree = opts.tree;
  if (opts.stability >= 0.0) mc.packs.stability_min_samples = opts.stability;
  if (opts.parsimony > 0) mc.packs.parsimony_max_nodes = opts.parsimony;
  if (!opts.fairness_column.empty()) {
    const auto& names = raw_train.feature_names();
    int col = -1;
    for (std::size_t j = 0; j < names.size(); ++j)
      if (names[j] == opts.fairness_column) col = static_cast<int>(j);
    if (col < 0)
      throw std::runtime_error("fairness column '" + opts.fairness_column +
                               "' is not a feature of the dataset");
    odd::FairnessSpec spec;
    spec.xi = opts.fairness_xi;
    spec.positive_class = opts.fairness_positive_class;
    for (int i = 0; i < raw_train.size(); ++i) {
      const double v = raw_train.sample(i).features[static_cast<std::size_t>(col)];
      (v >= opts.fairness_threshold ? spec.group1 : spec.group2).push_back(i);
    }
    if (spec.group1.empty() || spec.group2.empty())
      throw std::runtime_error("fairness threshold leaves one group empty");
    mc.packs.fairness = std::move(spec);
  }
}

// Model files bundle the diagram with the feature/class metadata and the
// normalization ranges needed to route raw inputs.
void save_model_file(const std::string& path, const odd::DecisionDiagram& dd,
                     const odd::Dataset& normalized_train) {
  json doc;
  doc["diagram"] = json::parse(odd::diagram_to_json_text(dd));
  doc["feature_names"] = normalized_train.feature_names();
  doc["class_names"] = normalized_train.class_names();
  json ranges = json::array();
  for (const auto& r : normalized_train.normalization())
    ranges.push_back({r.min, r.max});
  doc["normalization"] = std::move(ranges);
  odd::write_text_file(path, doc.dump(2) + "\n");
}

struct LoadedModel {
  odd::DecisionDiagram diagram;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;
  std::vector<odd::FeatureRange> normalization;
};

LoadedModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const json doc = json::parse(buf.str());

  LoadedModel m;
  if (doc.contains("diagram")) {
    m.diagram = odd::diagram_from_json_text(doc.at("diagram").dump());
    if (doc.contains("feature_names"))
      m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    if (doc.contains("class_names"))
      m.class_names = doc.at("class_names").get<std::vector<std::string>>();
    if (doc.contains("normalization")) {
      for (const auto& r : doc.at("normalization"))
        m.normalization.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
    }
  } else {
    m.diagram = odd::diagram_from_json_text(buf.str());  // bare diagram file
  }
  return m;
}

odd::Dataset normalized_for_model(const LoadedModel& m, const odd::Dataset& raw) {
  if (!m.feature_names.empty() && raw.feature_names() != m.feature_names)
    throw std::runtime_error("dataset features do not match the model's feature list");
  return m.normalization.empty() ? raw : odd::apply_normalization(raw, m.normalization);
}

void write_or_print(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    odd::write_text_file(out_path, content);
  }
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

json report_to_json(const odd::SolveReport& rep) {
  json doc;
  doc["status"] = odd::to_string(rep.status);
  if (rep.objective) doc["objective"] = *rep.objective;
  doc["best_bound"] = rep.best_bound;
  doc["gap"] = rep.gap;
  doc["runtime_s"] = rep.runtime_s;
  doc["heuristic_objective"] = rep.heuristic_objective;
  doc["improved_over_heuristic"] = rep.improved_over_heuristic;
  doc["proven_optimal"] = rep.proven_optimal;
  doc["train_accuracy"] = rep.train_accuracy;
  doc["active_nodes"] = rep.active_nodes;
  doc["audit"] = {{"integrality_ok", rep.audit.integrality_ok},
                  {"routing_ok", rep.audit.routing_ok},
                  {"objective_match", rep.audit.objective_match}};
  if (!rep.message.empty()) doc["message"] = rep.message;
  return doc;
}

// ---------------------------------------------------------------- train ----

struct TrainArgs {
  DataOpts data;
  std::string skeleton = "1-2-4-8";
  double alpha = 0.1;
  std::string split_mode = "univariate";
  std::uint64_t seed = 1;
  double epsilon = 1e-4;
  std::vector<double> split;  // empty: train on the whole file
  PackOpts packs;
  HeurOpts heur;
  SolverOpts solver;
  std::string out = "model.json";
  std::string report;
};

int run_train(const TrainArgs& args) {
  const odd::Dataset raw = load_data(args.data);

  odd::Dataset raw_train = raw;
  std::optional<odd::SplitResult> parts;
  if (!args.split.empty()) {
    odd::SplitSpec sp = parse_proportions(args.split);
    sp.seed = args.seed;
    parts = odd::split(raw, sp);
    raw_train = parts->train;
  }
  const odd::Dataset train = odd::normalize(raw_train);

  odd::ModelConfig mc;
  mc.alpha = args.alpha;
  mc.split_mode = parse_split_mode(args.split_mode);
  mc.epsilon = args.epsilon;
  apply_packs(mc, args.packs, raw_train);

  const odd::Skeleton sk = odd::Skeleton::parse(args.skeleton, train.n_classes());
  const odd::GraphTopology topo = odd::build_graph(sk);

  const odd::SolveReport rep = odd::train_pipeline(
      train, topo, mc, to_heuristic_config(args.heur, args.seed),
      to_solve_config(args.solver));

  json report = report_to_json(rep);
  if (rep.diagram && parts) {
    const auto ranges = train.normalization();
    report["validation_accuracy"] =
        odd::evaluate(*rep.diagram, odd::apply_normalization(parts->validation, ranges));
    report["test_accuracy"] =
        odd::evaluate(*rep.diagram, odd::apply_normalization(parts->test, ranges));
  }
  const std::string report_path =
      args.report.empty()
          ? (fs::path(args.out).parent_path() / "report.json").string()
          : args.report;
  odd::write_text_file(report_path, report.dump(2) + "\n");

  if (rep.status == odd::SolveStatus::error)
    throw SolverError(rep.message.empty() ? "solver failed" : rep.message);

  if (rep.diagram) save_model_file(args.out, *rep.diagram, train);

  std::cout << "status " << odd::to_string(rep.status) << "\n";
  if (rep.objective) std::cout << "objective " << fixed6(*rep.objective) << "\n";
  std::cout << "heuristic_objective " << fixed6(rep.heuristic_objective) << "\n"
            << "train_accuracy " << fixed6(rep.train_accuracy) << "\n"
            << "active_nodes " << rep.active_nodes << "\n";
  if (rep.diagram) std::cout << "model " << args.out << "\n";
  std::cout << "report " << report_path << "\n";
  return 0;
}

// ------------------------------------------------- predict / evaluate ----

int run_predict(const std::string& model_path, const DataOpts& data,
                const std::string& out) {
  const LoadedModel m = load_model_file(model_path);
  const odd::Dataset ds = normalized_for_model(m, load_data(data));
  std::ostringstream csv;
  csv << "index,prediction\n";
  for (int i = 0; i < ds.size(); ++i) {
    const odd::PredictionTrace trace = odd::predict(m.diagram, ds.sample(i).features);
    const std::string label = !m.class_names.empty()
                                  ? m.class_names[static_cast<std::size_t>(trace.class_id)]
                                  : ds.class_names()[static_cast<std::size_t>(trace.class_id)];
    csv << i << ',' << label << '\n';
  }
  write_or_print(out, csv.str());
  return 0;
}

int run_evaluate(const std::string& model_path, const DataOpts& data,
                 const std::string& out) {
  const LoadedModel m = load_model_file(model_path);
  const odd::Dataset ds = normalized_for_model(m, load_data(data));
  const double acc = odd::evaluate(m.diagram, ds);
  const int mistakes =
      ds.size() - static_cast<int>(std::lround(acc * ds.size()));
  std::ostringstream text;
  text << "accuracy " << fixed6(acc) << "\n"
       << "samples " << ds.size() << "\n"
       << "mistakes " << mistakes << "\n";
  write_or_print(out, text.str());
  return 0;
}

int run_export_dot(const std::string& model_path, const DataOpts& data,
                   const std::string& out) {
  const LoadedModel m = load_model_file(model_path);
  if (data.path.empty()) {
    write_or_print(out, odd::to_dot(m.diagram));
  } else {
    const odd::Dataset ds = normalized_for_model(m, load_data(data));
    write_or_print(out, odd::to_dot(m.diagram, &ds));
  }
  return 0;
}

// ----------------------------------------------------------- emit-model ----

struct EmitArgs {
  DataOpts data;
  std::string skeleton = "1-2-4-8";
  double alpha = 0.1;
  std::string split_mode = "univariate";
  double epsilon = 1e-4;
  PackOpts packs;
  std::string format = "lp";
  double cutoff = 0.0;
  bool has_cutoff = false;
  std::string out;
};

int run_emit_model(const EmitArgs& args) {
  const odd::Dataset raw = load_data(args.data);
  const odd::Dataset train = odd::normalize(raw);

  odd::ModelConfig mc;
  mc.alpha = args.alpha;
  mc.split_mode = parse_split_mode(args.split_mode);
  mc.epsilon = args.epsilon;
  apply_packs(mc, args.packs, raw);

  const odd::Skeleton sk = odd::Skeleton::parse(args.skeleton, train.n_classes());
  odd::BuiltModel built = odd::build_model(train, odd::build_graph(sk), mc);
  if (args.has_cutoff) built.model.set_cutoff(args.cutoff);

  write_or_print(args.out, args.format == "lp" ? odd::emit_lp(built.model)
                                               : odd::emit_mps(built.model));
  return 0;
}

// ---------------------------------------------------------------- grid ----

struct HarnessArgs {
  std::vector<double> split = {0.5, 0.25, 0.25};
  int max_samples = 1500;
  std::uint64_t subsample_seed = 0;
  int workers = 0;
  double epsilon = 1e-4;
  HeurOpts heur;
  SolverOpts solver;
};

void add_harness_options(CLI::App* cmd, HarnessArgs& args) {
  cmd->add_option("--split", args.split, "train,validation,test proportions")
      ->delimiter(',');
  cmd->add_option("--max-samples", args.max_samples,
                  "subsample larger datasets to this many rows");
  cmd->add_option("--subsample-seed", args.subsample_seed, "seed for the subsample");
  cmd->add_option("--workers", args.workers, "parallel solves (0: hardware threads)");
  cmd->add_option("--epsilon", args.epsilon, "hyperplane band width");
  add_heuristic_options(cmd, args.heur);
  add_solver_options(cmd, args.solver);
}

odd::HarnessConfig to_harness_config(const HarnessArgs& args) {
  odd::HarnessConfig cfg;
  cfg.proportions = parse_proportions(args.split);
  cfg.max_samples = args.max_samples;
  cfg.subsample_seed = args.subsample_seed;
  cfg.workers = args.workers;
  cfg.epsilon = args.epsilon;
  cfg.heuristic = to_heuristic_config(args.heur, 0);
  cfg.solve = to_solve_config(args.solver);
  return cfg;
}

struct GridArgs {
  DataOpts data;
  std::vector<double> alphas = {0.01, 0.1, 0.2, 0.5, 1.0};
  std::vector<std::string> skeletons;
  std::vector<std::string> split_modes = {"univariate"};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::string mode = "odd";
  HarnessArgs harness;
  std::string out_dir = ".";
};

int run_grid(const GridArgs& args) {
  const odd::Dataset ds = load_data(args.data);

  odd::GridSpec grid;
  grid.alphas = args.alphas;
  grid.skeletons = args.skeletons;
  grid.split_modes = parse_split_modes(args.split_modes);
  grid.seeds = args.seeds;
  if (args.mode == "odd") {
    grid.mode = odd::TrainMode::odd;
  } else if (args.mode == "odt") {
    grid.mode = odd::TrainMode::odt;
  } else {
    throw CLI::ValidationError("--mode", "expected 'odd' or 'odt'");
  }

  const std::string name = fs::path(args.data.path).stem().string();
  const odd::GridResult result =
      odd::grid_search(ds, grid, to_harness_config(args.harness), name);

  fs::create_directories(args.out_dir);
  const fs::path dir(args.out_dir);
  odd::write_text_file((dir / "records.csv").string(),
                       odd::records_to_csv(result.records));
  odd::write_text_file((dir / "winners.csv").string(),
                       odd::records_to_csv(result.winners));
  odd::write_text_file((dir / "records.json").string(),
                       odd::records_to_json(result.records));
  for (std::size_t s = 0; s < result.winners.size(); ++s) {
    const odd::DecisionDiagram& dd = result.winner_diagrams[s];
    if (dd.active.empty()) continue;
    const std::string stem = "winner_seed" + std::to_string(result.winners[s].seed);
    odd::save_diagram(dd, (dir / (stem + ".json")).string());
    odd::write_text_file((dir / (stem + ".dot")).string(), odd::to_dot(dd));
  }
  std::cout << "mean_test_accuracy " << fixed6(result.mean_test_accuracy) << "\n"
            << "records " << (dir / "records.csv").string() << "\n";
  return 0;
}

// ------------------------------------------------------ stability sweep ----

struct SweepArgs {
  DataOpts data;
  std::vector<double> fractions = {0.05, 0.10, 0.15, 0.20};
  std::string skeleton = "1-2-4-8";
  double alpha = 0.1;
  std::vector<std::string> split_modes = {"univariate"};
  std::uint64_t seed = 1;
  HarnessArgs harness;
  std::string out;
};

int run_sweep(const SweepArgs& args) {
  const odd::Dataset ds = load_data(args.data);
  const auto rows = odd::stability_sweep(ds, args.fractions, args.skeleton, args.alpha,
                                         parse_split_modes(args.split_modes), args.seed,
                                         to_harness_config(args.harness));
  write_or_print(args.out, odd::stability_to_csv(rows));
  return 0;
}

// -------------------------------------------------------------- compare ----

struct CompareArgs {
  DataOpts data;
  std::vector<double> alphas = {0.01, 0.1, 0.2, 0.5, 1.0};
  std::vector<std::string> skeletons;
  std::vector<std::string> split_modes = {"multivariate", "univariate"};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  HarnessArgs harness;
  std::string out;
  std::string fragmentation_out;
};

int run_compare(const CompareArgs& args) {
  const odd::Dataset ds = load_data(args.data);

  odd::GridSpec grid;
  grid.alphas = args.alphas;
  grid.skeletons = args.skeletons;
  grid.split_modes = parse_split_modes(args.split_modes);
  grid.seeds = args.seeds;

  const std::string name = fs::path(args.data.path).stem().string();
  const odd::CompareResult result =
      odd::compare_odd_odt(ds, grid, to_harness_config(args.harness), name);
  write_or_print(args.out, odd::compare_to_csv(result, name));

  if (!args.fragmentation_out.empty()) {
    std::ostringstream csv;
    csv << "model,node,samples\n";
    for (const auto& [label, counts] : result.fragmentation_profiles)
      for (std::size_t v = 0; v < counts.size(); ++v)
        csv << label << ',' << v << ',' << counts[v] << '\n';
    odd::write_text_file(args.fragmentation_out, csv.str());
  }
  std::cout << "odt_average " << fixed6(result.odt_average) << "\n"
            << "odd_average " << fixed6(result.odd_average) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decision-diagram classifier trainer (MILP + greedy heuristic)"};
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train one model on a dataset");
  add_data_options(train, train_args.data);
  train->add_option("--skeleton", train_args.skeleton, "layer widths, e.g. 1-2-4-8");
  train->add_option("--alpha", train_args.alpha, "node-count regularization weight");
  train->add_option("--split-mode", train_args.split_mode, "univariate or multivariate");
  train->add_option("--seed", train_args.seed, "seed for heuristic and splits");
  train->add_option("--epsilon", train_args.epsilon, "hyperplane band width");
  train->add_option("--split", train_args.split,
                    "hold out validation/test parts, e.g. 0.5,0.25,0.25 "
                    "(default: train on the whole file)")
      ->delimiter(',');
  add_pack_options(train, train_args.packs);
  add_heuristic_options(train, train_args.heur);
  add_solver_options(train, train_args.solver);
  train->add_option("--out", train_args.out, "model output path");
  train->add_option("--report", train_args.report,
                    "report output path (default: report.json next to the model)");

  std::string model_path, io_out;
  DataOpts io_data;
  CLI::App* predict = app.add_subcommand("predict", "route a CSV through a saved model");
  predict->add_option("--model", model_path, "model file from train")->required();
  add_data_options(predict, io_data);
  predict->add_option("--out", io_out, "predictions CSV (default: stdout)");

  CLI::App* evaluate = app.add_subcommand("evaluate", "accuracy of a model on labeled data");
  evaluate->add_option("--model", model_path, "model file from train")->required();
  add_data_options(evaluate, io_data);
  evaluate->add_option("--out", io_out, "report text (default: stdout)");

  DataOpts dot_data;  // optional for annotation
  CLI::App* export_dot = app.add_subcommand("export-dot", "write the model as Graphviz DOT");
  export_dot->add_option("--model", model_path, "model file from train")->required();
  export_dot->add_option("--data", dot_data.path, "annotate nodes with routed sample counts");
  export_dot->add_option("--class-column", dot_data.class_column,
                         "label column name (default: last column)");
  export_dot->add_option("--categorical", dot_data.categorical,
                         "columns to one-hot encode")
      ->delimiter(',');
  export_dot->add_option("--out", io_out, "DOT output path (default: stdout)");

  EmitArgs emit_args;
  CLI::App* emit = app.add_subcommand("emit-model", "write the MILP without solving");
  add_data_options(emit, emit_args.data);
  emit->add_option("--skeleton", emit_args.skeleton, "layer widths, e.g. 1-2-4-8");
  emit->add_option("--alpha", emit_args.alpha, "node-count regularization weight");
  emit->add_option("--split-mode", emit_args.split_mode, "univariate or multivariate");
  emit->add_option("--epsilon", emit_args.epsilon, "hyperplane band width");
  add_pack_options(emit, emit_args.packs);
  emit->add_option("--format", emit_args.format, "lp or mps")
      ->check(CLI::IsMember({"lp", "mps"}));
  CLI::Option* cutoff_opt =
      emit->add_option("--cutoff", emit_args.cutoff, "objective upper-bound row");
  emit->add_option("--out", emit_args.out, "output path (default: stdout)");

  GridArgs grid_args;
  CLI::App* grid = app.add_subcommand("grid", "hyperparameter sweep with winner selection");
  add_data_options(grid, grid_args.data);
  grid->add_option("--alphas", grid_args.alphas, "comma-separated alpha grid")
      ->delimiter(',');
  grid->add_option("--skeletons", grid_args.skeletons,
                   "comma-separated skeletons (default: presets)")
      ->delimiter(',');
  grid->add_option("--split-modes", grid_args.split_modes, "univariate,multivariate")
      ->delimiter(',');
  grid->add_option("--seeds", grid_args.seeds, "comma-separated seeds")->delimiter(',');
  grid->add_option("--mode", grid_args.mode, "odd or odt");
  add_harness_options(grid, grid_args.harness);
  grid->add_option("--out-dir", grid_args.out_dir, "directory for CSV/JSON/DOT outputs");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("stability-sweep",
                                       "re-train across minimum-flow thresholds");
  add_data_options(sweep, sweep_args.data);
  sweep->add_option("--fractions", sweep_args.fractions,
                    "thresholds as fractions of the training size")
      ->delimiter(',');
  sweep->add_option("--skeleton", sweep_args.skeleton, "layer widths");
  sweep->add_option("--alpha", sweep_args.alpha, "regularization weight");
  sweep->add_option("--split-modes", sweep_args.split_modes, "univariate,multivariate")
      ->delimiter(',');
  sweep->add_option("--seed", sweep_args.seed, "split/heuristic seed");
  add_harness_options(sweep, sweep_args.harness);
  sweep->add_option("--out", sweep_args.out, "CSV output (default: stdout)");

  CompareArgs compare_args;
  CLI::App* compare = app.add_subcommand("compare", "diagram vs tree mode on one dataset");
  add_data_options(compare, compare_args.data);
  compare->add_option("--alphas", compare_args.alphas, "comma-separated alpha grid")
      ->delimiter(',');
  compare->add_option("--skeletons", compare_args.skeletons,
                      "comma-separated skeletons (default: presets)")
      ->delimiter(',');
  compare->add_option("--split-modes", compare_args.split_modes,
                      "univariate,multivariate")
      ->delimiter(',');
  compare->add_option("--seeds", compare_args.seeds, "comma-separated seeds")
      ->delimiter(',');
  add_harness_options(compare, compare_args.harness);
  compare->add_option("--out", compare_args.out, "comparison CSV (default: stdout)");
  compare->add_option("--fragmentation-out", compare_args.fragmentation_out,
                      "per-node routed-sample CSV for the winning models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*train) return run_train(train_args);
    if (*predict) return run_predict(model_path, io_data, io_out);
    if (*evaluate) return run_evaluate(model_path, io_data, io_out);
    if (*export_dot) return run_export_dot(model_path, dot_data, io_out);
    if (*emit) {
      emit_args.has_cutoff = cutoff_opt->count() > 0;
      return run_emit_model(emit_args);
    }
    if (*grid) return run_grid(grid_args);
    if (*sweep) return run_sweep(sweep_args);
    if (*compare) return run_compare(compare_args);
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
