#include <cctype>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "odd/solve.hpp"

namespace odd {

namespace {

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Scan a log for "<label> <number>" and return the number (HiGHS prints the
// dual bound this way in its solving report).
bool find_labeled_number(const std::string& log, const std::string& label, double& out) {
  std::size_t pos = log.rfind(label);
  if (pos == std::string::npos) return false;
  std::istringstream in(log.substr(pos + label.size()));
  std::string token;
  if (!(in >> token)) return false;
  return parse_double(token, out);
}

RawSolution parse_highs(const std::vector<std::string>& lines, const std::string& log) {
  RawSolution out;
  out.dialect = "highs";
  std::string status_text;
  std::size_t k = 0;
  for (; k < lines.size(); ++k) {
    if (lines[k] == "Model status" && k + 1 < lines.size()) {
      status_text = lowercase(lines[k + 1]);
      break;
    }
  }
  for (; k < lines.size(); ++k) {
    if (lines[k].rfind("# Primal solution values", 0) == 0) break;
  }
  if (k + 1 < lines.size() && lines[k + 1] != "None") {
    out.has_values = true;
    for (std::size_t i = k + 2; i < lines.size(); ++i) {
      const auto& line = lines[i];
      if (line.rfind("# Rows", 0) == 0 || line.rfind("# Dual", 0) == 0 ||
          line.rfind("# Basis", 0) == 0)
        break;
      if (line.rfind("Objective", 0) == 0) {
        const auto t = tokens(line);
        if (t.size() >= 2) parse_double(t[1], out.objective);
        continue;
      }
      if (line.empty() || line[0] == '#') continue;
      const auto t = tokens(line);
      double value = 0.0;
      if (t.size() == 2 && parse_double(t[1], value)) out.values[t[0]] = value;
    }
  }

  if (status_text == "optimal") {
    out.status = RawSolution::Status::optimal;
  } else if (status_text == "infeasible") {
    out.status = RawSolution::Status::infeasible;
  } else if (out.has_values) {
    out.status = RawSolution::Status::feasible_limit;  // limit reached with incumbent
  } else {
    out.status = RawSolution::Status::no_solution;
  }
  find_labeled_number(log, "Dual bound", out.best_bound);
  return out;
}

RawSolution parse_cbc(const std::vector<std::string>& lines, const std::string&) {
  RawSolution out;
  out.dialect = "cbc";
  const std::string header = lowercase(lines.empty() ? "" : lines.front());
  if (header.rfind("optimal", 0) == 0) {
    out.status = RawSolution::Status::optimal;
  } else if (header.find("infeasible") != std::string::npos) {
    out.status = RawSolution::Status::infeasible;
  } else if (header.rfind("stopped", 0) == 0) {
    out.status = RawSolution::Status::feasible_limit;
  } else {
    out.status = RawSolution::Status::no_solution;
  }
  const std::size_t obj_pos = header.find("objective value");
  if (obj_pos != std::string::npos) {
    const auto t = tokens(header.substr(obj_pos + 15));
    if (!t.empty()) parse_double(t.front(), out.objective);
  }
  if (out.status == RawSolution::Status::infeasible) return out;

  // Rows: <index> <name> <value> [<reduced cost>]
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto t = tokens(lines[i]);
    if (t.size() < 3) continue;
    double value = 0.0;
    if (parse_double(t[2], value)) {
      out.values[t[1]] = value;
      out.has_values = true;
    }
  }
  if (!out.has_values && out.status == RawSolution::Status::feasible_limit)
    out.status = RawSolution::Status::no_solution;
  return out;
}

RawSolution parse_scip(const std::vector<std::string>& lines, const std::string&) {
  RawSolution out;
  out.dialect = "scip";
  for (const auto& line : lines) {
    if (line.rfind("solution status:", 0) == 0) {
      const std::string s = lowercase(line.substr(16));
      if (s.find("optimal") != std::string::npos) {
        out.status = RawSolution::Status::optimal;
      } else if (s.find("infeasible") != std::string::npos) {
        out.status = RawSolution::Status::infeasible;
      } else if (s.find("no solution") != std::string::npos) {
        out.status = RawSolution::Status::no_solution;
      } else {
        out.status = RawSolution::Status::feasible_limit;
      }
      continue;
    }
    if (line.rfind("objective value:", 0) == 0) {
      const auto t = tokens(line.substr(16));
      if (!t.empty() && parse_double(t.front(), out.objective)) out.has_values = true;
      continue;
    }
    const auto t = tokens(line);
    if (t.size() >= 2) {
      double value = 0.0;
      if (parse_double(t[1], value)) out.values[t[0]] = value;  // zeros are omitted
    }
  }
  if (out.status == RawSolution::Status::infeasible ||
      out.status == RawSolution::Status::no_solution)
    out.has_values = false;
  return out;
}

RawSolution parse_gurobi(const std::vector<std::string>& lines, const std::string& log) {
  RawSolution out;
  out.dialect = "gurobi";
  for (const auto& line : lines) {
    if (line.rfind("# Objective value", 0) == 0) {
      const std::size_t eq = line.find('=');
      if (eq != std::string::npos) {
        const auto t = tokens(line.substr(eq + 1));
        if (!t.empty()) parse_double(t.front(), out.objective);
      }
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    const auto t = tokens(line);
    if (t.size() == 2) {
      double value = 0.0;
      if (parse_double(t[1], value)) {
        out.values[t[0]] = value;
        out.has_values = true;
      }
    }
  }
  // The result file carries no status; the log does.
  const std::string l = lowercase(log);
  if (l.find("optimal solution found") != std::string::npos) {
    out.status = RawSolution::Status::optimal;
  } else if (l.find("infeasible") != std::string::npos && !out.has_values) {
    out.status = RawSolution::Status::infeasible;
  } else if (out.has_values) {
    out.status = RawSolution::Status::feasible_limit;
  } else {
    out.status = RawSolution::Status::no_solution;
  }
  find_labeled_number(log, "Best bound", out.best_bound);
  return out;
}

}  // namespace

RawSolution parse_solution_text(const std::string& text, const std::string& log) {
  const auto lines = split_lines(text);
  std::string first;
  for (const auto& line : lines) {
    if (!line.empty()) {
      first = line;
      break;
    }
  }
  RawSolution out;
  if (lines.empty() || first.empty()) {
    out.status = RawSolution::Status::no_solution;
    out.dialect = "empty";
    out.log_tail = log;
    return out;
  }

  if (first == "Model status") {
    out = parse_highs(lines, log);
  } else if (first.rfind("# Objective value", 0) == 0) {
    out = parse_gurobi(lines, log);
  } else if (text.find("solution status:") != std::string::npos) {
    out = parse_scip(lines, log);
  } else {
    const std::string header = lowercase(first);
    if (header.find("objective value") != std::string::npos ||
        header.rfind("optimal", 0) == 0 || header.rfind("infeasible", 0) == 0 ||
        header.rfind("integer infeasible", 0) == 0 || header.rfind("stopped", 0) == 0) {
      out = parse_cbc(lines, log);
    } else {
      throw std::runtime_error("unrecognized solution-file format (first line: '" + first +
                               "')");
    }
  }
  out.log_tail = log;
  return out;
}

}  // namespace odd
