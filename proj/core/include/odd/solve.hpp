#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "odd/dataset.hpp"
#include "odd/diagram.hpp"
#include "odd/heuristic.hpp"
#include "odd/milp.hpp"

namespace odd {

// How to reach the external MILP solver. The command is a template with
// {model_file}, {time_limit} and {solution_file} placeholders; when empty,
// the ODD_SOLVER_CMD environment variable is used, then a PATH probe for
// known solvers (highs, cbc, scip, gurobi_cl).
struct SolveConfig {
  std::string solver_command;
  double time_limit_s = 600.0;
  double mip_gap = 0.0;
  int threads = 1;
  double integrality_tol = 1e-6;
  std::string model_format = "lp";  // or "mps"
  std::string work_dir;             // empty: fresh temp dir per solve
  bool keep_files = false;
};

std::string default_solver_command();
bool solver_available(const SolveConfig& cfg);

// Raw outcome of one subprocess run, before decoding.
struct RawSolution {
  enum class Status { optimal, feasible_limit, infeasible, no_solution, error };
  Status status = Status::error;
  bool has_values = false;
  double objective = 0.0;
  double best_bound = 0.0;
  std::map<std::string, double> values;  // variable name -> value
  std::string dialect;                   // which solution format was detected
  std::string log_tail;                  // last chunk of solver output
  double runtime_s = 0.0;
};

RawSolution invoke(const MilpModel& model, const SolveConfig& cfg);

// Parse a solution file; dialect detected from content (HiGHS, CBC, SCIP,
// Gurobi conventions). exit_code and log come from the subprocess.
RawSolution parse_solution_text(const std::string& text, const std::string& log);

// Rebuild the diagram from d/y/a/b values (0.5 rounding for booleans).
// Throws "corrupt solution" when the rounded topology is inconsistent.
DecisionDiagram decode(const RawSolution& raw, const VarIndex& idx,
                       const GraphTopology& topo, const ModelConfig& cfg);

struct AuditResult {
  bool integrality_ok = false;  // all w/z/wleaf/lambda near {0,1}
  bool routing_ok = false;      // re-routed paths match the solver's leaf flows
  bool objective_match = false; // recomputed objective equals the solver's
  std::string detail;           // first discrepancy, for diagnostics

  bool ok() const { return integrality_ok && routing_ok && objective_match; }
};

// Independent verification of a decoded solution: integrality of the flow
// variables, re-routing every training sample through the diagram and
// checking it lands where the solver's leaf flows say (with the hyperplane
// band a.x <= b-eps+tol or a.x >= b-tol respected at every visited node),
// and recomputation of the objective from the routed terminals.
AuditResult audit(const RawSolution& raw, const VarIndex& idx, const DecisionDiagram& dd,
                  const Dataset& ds, const ModelConfig& cfg, double tol = 1e-6);

// Partial audit for diagrams without solver output (heuristic results):
// routing consistency and objective recomputation only.
AuditResult audit_diagram(const DecisionDiagram& dd, const Dataset& ds, double alpha,
                          double claimed_objective, double tol = 1e-6);

enum class SolveStatus {
  optimal,                // proven optimal below the cutoff
  feasible,               // improved incumbent, optimality not proven
  cutoff_no_improvement,  // solver found nothing below the heuristic value
  infeasible,             // restricted model has no solution (packs)
  timeout_no_solution,    // limit hit with no incumbent and no cutoff fallback
  error,                  // solver missing or crashed
};

std::string to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::error;
  std::optional<double> objective;
  double best_bound = 0.0;
  double gap = 0.0;
  double runtime_s = 0.0;
  std::optional<DecisionDiagram> diagram;
  AuditResult audit;
  double heuristic_objective = 0.0;
  bool improved_over_heuristic = false;
  bool proven_optimal = false;
  double train_accuracy = 0.0;
  int active_nodes = 0;
  std::string message;  // populated on error statuses
};

// Two-step training: multi-start heuristic, then the MILP seeded with the
// heuristic objective as a cutoff (dropped when packs restrict the feasible
// region, since the heuristic ignores packs). Falls back to the heuristic
// diagram when the solver cannot improve on it. Decoded solutions are always
// audited; an audit failure throws.
SolveReport train_pipeline(const Dataset& ds, const GraphTopology& topo,
                           const ModelConfig& model_cfg, const HeuristicConfig& heur_cfg,
                           const SolveConfig& solve_cfg);

}  // namespace odd
