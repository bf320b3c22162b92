#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "odd/solve.hpp"

namespace fs = std::filesystem;

namespace odd {

namespace {

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string replace_all(std::string text, const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(key, pos)) != std::string::npos) {
    text.replace(pos, key.size(), value);
    pos += value.size();
  }
  return text;
}

bool in_path(const std::string& exe) {
  const char* path = std::getenv("PATH");
  if (!path) return false;
  std::istringstream in(path);
  std::string dir;
  while (std::getline(in, dir, ':')) {
    if (dir.empty()) continue;
    const fs::path candidate = fs::path(dir) / exe;
    std::error_code ec;
    if (fs::is_regular_file(candidate, ec) && ::access(candidate.c_str(), X_OK) == 0)
      return true;
  }
  return false;
}

std::string resolve_command(const SolveConfig& cfg) {
  if (!cfg.solver_command.empty()) return cfg.solver_command;
  return default_solver_command();
}

std::string read_file_tail(const fs::path& p, std::size_t max_bytes) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "";
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (text.size() > max_bytes) text.erase(0, text.size() - max_bytes);
  return text;
}

// Variable names follow the builder's role_index convention; the audit and
// decoder rely on it to find values in the solver's solution map.
std::string vname(const char* role, int i) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s_%d", role, i);
  return buf;
}
std::string vname(const char* role, int i, int j) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s_%d_%d", role, i, j);
  return buf;
}

double value_of(const RawSolution& raw, const std::string& name) {
  const auto it = raw.values.find(name);
  return it == raw.values.end() ? 0.0 : it->second;  // solvers may omit zeros
}

}  // namespace

std::string default_solver_command() {
  if (const char* env = std::getenv("ODD_SOLVER_CMD"); env && *env) return env;
  if (in_path("highs"))
    return "highs --random_seed 0 --time_limit {time_limit} "
           "--solution_file {solution_file} {model_file}";
  if (in_path("cbc"))
    return "cbc {model_file} -seconds {time_limit} -solve -solution {solution_file}";
  if (in_path("scip"))
    return "scip -c \"read {model_file}\" -c \"set limits time {time_limit}\" "
           "-c optimize -c \"write solution {solution_file}\" -c quit";
  if (in_path("gurobi_cl"))
    return "gurobi_cl TimeLimit={time_limit} ResultFile={solution_file} {model_file}";
  return "";
}

bool solver_available(const SolveConfig& cfg) { return !resolve_command(cfg).empty(); }

RawSolution invoke(const MilpModel& model, const SolveConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  RawSolution out;
  const std::string command = resolve_command(cfg);
  if (command.empty()) {
    out.status = RawSolution::Status::error;
    out.log_tail =
        "no MILP solver configured: set ODD_SOLVER_CMD or put highs/cbc/scip/"
        "gurobi_cl on PATH";
    return out;
  }
  if (cfg.model_format != "lp" && cfg.model_format != "mps")
    throw std::runtime_error("invoke: model_format must be 'lp' or 'mps', got '" +
                             cfg.model_format + "'");
  if (cfg.time_limit_s <= 0.0) throw std::runtime_error("invoke: time limit must be > 0");
  model.validate();

  fs::path dir;
  bool own_dir = false;
  if (cfg.work_dir.empty()) {
    std::string tmpl = (fs::temp_directory_path() / "odd-solve-XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (!::mkdtemp(buf.data())) throw std::runtime_error("invoke: cannot create temp dir");
    dir = buf.data();
    own_dir = true;
  } else {
    dir = cfg.work_dir;
    fs::create_directories(dir);
  }
  const fs::path model_path = dir / ("model." + cfg.model_format);
  const fs::path sol_path = dir / "solution.sol";
  const fs::path log_path = dir / "solver.log";

  {
    std::ofstream f(model_path, std::ios::binary);
    f << (cfg.model_format == "lp" ? emit_lp(model) : emit_mps(model));
    if (!f) throw std::runtime_error("invoke: cannot write " + model_path.string());
  }
  std::error_code ec;
  fs::remove(sol_path, ec);

  std::string cmd = command;
  cmd = replace_all(cmd, "{model_file}", model_path.string());
  cmd = replace_all(cmd, "{solution_file}", sol_path.string());
  cmd = replace_all(cmd, "{time_limit}", fmt_num(cfg.time_limit_s));
  cmd = replace_all(cmd, "{threads}", std::to_string(cfg.threads));
  cmd = replace_all(cmd, "{mip_gap}", fmt_num(cfg.mip_gap));
  const std::string full = "( " + cmd + " ) > " + log_path.string() + " 2>&1";

  const int rc = std::system(full.c_str());
  out.runtime_s = elapsed();
  const std::string log = read_file_tail(log_path, 4000);

  const auto cleanup = [&] {
    if (own_dir && !cfg.keep_files) {
      std::error_code rm;
      fs::remove_all(dir, rm);
    }
  };

  if (!fs::exists(sol_path)) {
    out.status = RawSolution::Status::error;
    std::string why = "solver produced no solution file";
    if (rc == -1) {
      why += " (failed to launch shell)";
    } else if (WIFEXITED(rc) && WEXITSTATUS(rc) != 0) {
      why += " (exit code " + std::to_string(WEXITSTATUS(rc)) + ")";
    } else if (WIFSIGNALED(rc)) {
      why += " (killed by signal " + std::to_string(WTERMSIG(rc)) + ")";
    }
    out.log_tail = why + "\n" + log;
    cleanup();
    return out;
  }

  std::string sol_text;
  {
    std::ifstream f(sol_path, std::ios::binary);
    std::ostringstream buf;
    buf << f.rdbuf();
    sol_text = buf.str();
  }
  try {
    const double runtime = out.runtime_s;
    out = parse_solution_text(sol_text, log);
    out.runtime_s = runtime;
  } catch (const std::exception& e) {
    out.status = RawSolution::Status::error;
    out.has_values = false;
    out.log_tail = std::string(e.what()) + "\n" + log;
  }
  cleanup();
  return out;
}

DecisionDiagram decode(const RawSolution& raw, const VarIndex& idx,
                       const GraphTopology& topo, const ModelConfig& cfg) {
  if (!raw.has_values) throw std::runtime_error("corrupt solution: no variable values");
  const int K = idx.n_internal();
  const int dim = idx.dimension();

  DecisionDiagram dd;
  dd.topology = topo;
  dd.epsilon = cfg.epsilon;
  dd.active.assign(static_cast<std::size_t>(K), false);
  dd.neg_arc.assign(static_cast<std::size_t>(K), -1);
  dd.pos_arc.assign(static_cast<std::size_t>(K), -1);
  dd.planes.resize(static_cast<std::size_t>(K));

  for (int u = 0; u < K; ++u) {
    if (value_of(raw, vname("d", u)) <= 0.5) continue;
    dd.active[static_cast<std::size_t>(u)] = true;
    int neg = -1, pos = -1;
    for (int v : topo.succ[static_cast<std::size_t>(u)]) {
      if (value_of(raw, vname("yneg", u, v)) > 0.5) {
        if (neg != -1)
          throw std::runtime_error("corrupt solution: node " + std::to_string(u) +
                                   " has two negative arcs");
        neg = v;
      }
      if (value_of(raw, vname("ypos", u, v)) > 0.5) {
        if (pos != -1)
          throw std::runtime_error("corrupt solution: node " + std::to_string(u) +
                                   " has two positive arcs");
        pos = v;
      }
    }
    if (neg == -1 || pos == -1)
      throw std::runtime_error("corrupt solution: active node " + std::to_string(u) +
                               " is missing an outgoing arc");
    dd.neg_arc[static_cast<std::size_t>(u)] = neg;
    dd.pos_arc[static_cast<std::size_t>(u)] = pos;
    Hyperplane& h = dd.planes[static_cast<std::size_t>(u)];
    h.a.resize(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j)
      h.a[static_cast<std::size_t>(j)] = value_of(raw, vname("a", u, j));
    h.b = value_of(raw, vname("b", u));
  }

  try {
    dd.validate(dim);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("corrupt solution: ") + e.what());
  }
  return dd;
}

namespace {

// Routing rule consistent with any eps-feasible band assignment: solutions
// may park a sample exactly on a.x = b (positive side boundary), which exact
// >= routing classifies correctly but naive recomputation could flip through
// rounding; eps/2 is unambiguous because the band leaves no mass there.
int route_with_band(const DecisionDiagram& dd, std::span<const double> x, double eps,
                    double tol, bool* band_ok, std::string* detail) {
  const GraphTopology& topo = dd.topology;
  int v = 0;
  int hops = 0;
  while (!topo.is_terminal(v)) {
    if (++hops > topo.depth() + 1)
      throw std::runtime_error("corrupt solution: routing cycle at node " +
                               std::to_string(v));
    const Hyperplane& h = dd.planes[static_cast<std::size_t>(v)];
    double dot = 0.0;
    for (std::size_t j = 0; j < h.a.size(); ++j) dot += h.a[j] * x[j];
    if (dot > h.b - eps + tol && dot < h.b - tol && *band_ok) {
      *band_ok = false;
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "node %d: a.x = %.12g falls inside the open band (b = %.12g, eps = %g)",
                    v, dot, h.b, eps);
      *detail = buf;
    }
    v = dot >= h.b - eps / 2
            ? dd.pos_arc[static_cast<std::size_t>(v)]
            : dd.neg_arc[static_cast<std::size_t>(v)];
  }
  return v;
}

double penalty_of(const ModelConfig& cfg, const Dataset& ds, int i, int c) {
  if (cfg.penalty)
    return (*cfg.penalty)[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
  return ds.sample(i).class_id == c ? 0.0 : 1.0;
}

}  // namespace

AuditResult audit(const RawSolution& raw, const VarIndex& idx, const DecisionDiagram& dd,
                  const Dataset& ds, const ModelConfig& cfg, double tol) {
  AuditResult res;
  res.integrality_ok = true;
  res.routing_ok = true;
  res.objective_match = true;
  const auto note = [&](bool& flag, const std::string& what) {
    flag = false;
    if (res.detail.empty()) res.detail = what;
  };

  // (a) every flow variable the solver reported must sit on {0,1}
  for (const auto& [name, value] : raw.values) {
    const std::size_t us = name.find('_');
    if (us == std::string::npos) continue;
    const std::string role = name.substr(0, us);
    if (role != "lam" && role != "wneg" && role != "wpos" && role != "zneg" &&
        role != "zpos" && role != "wleaf")
      continue;
    const double r = std::round(value);
    if (std::abs(value - r) > tol || (r != 0.0 && r != 1.0)) {
      note(res.integrality_ok, name + " = " + fmt_num(value) + " is not binary");
      break;
    }
  }

  // (b) re-route every sample and compare with the solver's leaf flows
  const int n = ds.size();
  const int C = idx.n_terminals();
  const double eps = cfg.epsilon;
  double penalty_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    bool band_ok = true;
    std::string band_detail;
    const int t = route_with_band(dd, ds.sample(i).features, eps, tol, &band_ok,
                                  &band_detail);
    if (!band_ok)
      note(res.routing_ok, "sample " + std::to_string(i) + ": " + band_detail);
    for (int c = 0; c < C; ++c) {
      const int term = dd.topology.terminal_for_class(c);
      const double expected = term == t ? 1.0 : 0.0;
      const double got = value_of(raw, vname("wleaf", i, term));
      if (std::abs(got - expected) > tol) {
        note(res.routing_ok, "sample " + std::to_string(i) + " routes to terminal " +
                                 std::to_string(t) + " but wleaf_" + std::to_string(i) +
                                 "_" + std::to_string(term) + " = " + fmt_num(got));
        break;
      }
    }
    penalty_sum += penalty_of(cfg, ds, i, dd.topology.class_of_terminal(t));
  }

  // (c) objective recomputed from the routed terminals and active count
  const int K = idx.n_internal();
  double recomputed = penalty_sum / n;
  if (cfg.alpha != 0.0 && K > 1)
    recomputed += cfg.alpha / (K - 1) * (dd.n_active() - 1);
  if (std::abs(recomputed - raw.objective) > tol)
    note(res.objective_match, "objective recomputes to " + fmt_num(recomputed) +
                                  ", solver reported " + fmt_num(raw.objective));
  return res;
}

AuditResult audit_diagram(const DecisionDiagram& dd, const Dataset& ds, double alpha,
                          double claimed_objective, double tol) {
  AuditResult res;
  res.integrality_ok = true;  // nothing fractional to check without solver output
  res.routing_ok = true;
  res.objective_match = true;
  try {
    for (int i = 0; i < ds.size(); ++i) predict(dd, ds.sample(i).features);
  } catch (const std::exception& e) {
    res.routing_ok = false;
    res.detail = e.what();
    return res;
  }
  const double recomputed = objective_value(dd, ds, alpha);
  if (std::abs(recomputed - claimed_objective) > tol) {
    res.objective_match = false;
    res.detail = "objective recomputes to " + fmt_num(recomputed) + ", claimed " +
                 fmt_num(claimed_objective);
  }
  return res;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::feasible: return "feasible";
    case SolveStatus::cutoff_no_improvement: return "cutoff_no_improvement";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::timeout_no_solution: return "timeout_no_solution";
    case SolveStatus::error: return "error";
  }
  return "error";
}

SolveReport train_pipeline(const Dataset& ds, const GraphTopology& topo,
                           const ModelConfig& model_cfg, const HeuristicConfig& heur_cfg,
                           const SolveConfig& solve_cfg) {
  HeuristicConfig hc = heur_cfg;
  hc.alpha = model_cfg.alpha;
  hc.tree_mode = model_cfg.packs.tree;
  HeuristicResult heur = multi_start(ds, topo, hc);
  heur.diagram.epsilon = model_cfg.epsilon;

  BuiltModel built = build_model(ds, topo, model_cfg);
  // Packs restrict the feasible region in ways the heuristic ignores, so its
  // objective is not a valid bound there.
  const bool use_cutoff = !model_cfg.packs.restricts_objective();
  if (use_cutoff) built.model.set_cutoff(heur.objective);

  const RawSolution raw = invoke(built.model, solve_cfg);

  SolveReport rep;
  rep.heuristic_objective = heur.objective;
  rep.runtime_s = raw.runtime_s;
  rep.best_bound = raw.best_bound;

  const auto fill_from = [&](const DecisionDiagram& dd) {
    rep.train_accuracy = evaluate(dd, ds);
    rep.active_nodes = dd.n_active();
  };
  const auto return_heuristic = [&](bool proven) {
    rep.status = SolveStatus::cutoff_no_improvement;
    rep.objective = heur.objective;
    rep.proven_optimal = proven;
    rep.improved_over_heuristic = false;
    rep.audit = audit_diagram(heur.diagram, ds, model_cfg.alpha, heur.objective);
    if (!rep.audit.ok())
      throw std::runtime_error("heuristic self-check failed: " + rep.audit.detail);
    rep.diagram = heur.diagram;
    fill_from(heur.diagram);
  };

  switch (raw.status) {
    case RawSolution::Status::error:
      rep.status = SolveStatus::error;
      rep.message = raw.log_tail;
      return rep;

    case RawSolution::Status::infeasible:
      if (use_cutoff) {
        // The cutoff row is the only way the base model can be infeasible:
        // nothing beats the heuristic, which is therefore optimal.
        return_heuristic(true);
      } else {
        rep.status = SolveStatus::infeasible;
        rep.message = "restricted model is infeasible";
      }
      return rep;

    case RawSolution::Status::no_solution:
      if (use_cutoff) {
        return_heuristic(false);
      } else {
        rep.status = SolveStatus::timeout_no_solution;
        rep.message = "no incumbent within the time limit";
      }
      return rep;

    case RawSolution::Status::optimal:
    case RawSolution::Status::feasible_limit:
      break;
  }

  const bool proven = raw.status == RawSolution::Status::optimal;
  if (use_cutoff && raw.objective >= heur.objective - 1e-9) {
    // Solver hit the cutoff without strictly improving on the seed.
    return_heuristic(proven);
    return rep;
  }

  DecisionDiagram dd = decode(raw, built.index, topo, model_cfg);
  rep.audit = audit(raw, built.index, dd, ds, model_cfg, solve_cfg.integrality_tol);
  if (!rep.audit.ok())
    throw std::runtime_error("solution audit failed (flow integrality/routing guarantee): " +
                             rep.audit.detail);
  rep.status = proven ? SolveStatus::optimal : SolveStatus::feasible;
  rep.objective = raw.objective;
  rep.proven_optimal = proven;
  rep.improved_over_heuristic = raw.objective < heur.objective - 1e-9;
  rep.gap = 0.0;
  if (!proven && raw.objective != 0.0)
    rep.gap = std::abs(raw.objective - raw.best_bound) /
              std::max(1.0, std::abs(raw.objective));
  rep.diagram = std::move(dd);
  fill_from(*rep.diagram);
  return rep;
}

}  // namespace odd
