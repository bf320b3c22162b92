#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "odd/milp.hpp"

namespace odd {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

const char* lp_sense(Sense s) {
  switch (s) {
    case Sense::le: return "<=";
    case Sense::eq: return "=";
    case Sense::ge: return ">=";
  }
  return "=";
}

// Append one "coef name" fragment with explicit sign, wrapping lines so no
// solver's reader chokes on very long rows.
void append_term(std::string& line, std::ostringstream& out, double coef,
                 const std::string& name, bool first) {
  std::string piece;
  if (first) {
    piece = (coef < 0 ? "-" : "") + fmt(coef < 0 ? -coef : coef) + " " + name;
  } else {
    piece = (coef < 0 ? " - " : " + ") + fmt(coef < 0 ? -coef : coef) + " " + name;
  }
  if (line.size() + piece.size() > 200) {
    out << line << "\n";
    line = "   ";
  }
  line += piece;
}

void emit_expression(std::ostringstream& out, const std::string& label,
                     const std::vector<LinearTerm>& terms, const MilpModel& model,
                     const char* tail) {
  std::string line = " " + label;
  if (terms.empty()) {
    // Degenerate but syntactically required: reference some variable.
    line += " 0 " + model.variables().front().name;
  }
  bool first = true;
  for (const auto& t : terms) {
    append_term(line, out, t.coef, model.variables()[static_cast<std::size_t>(t.var)].name,
                first);
    first = false;
  }
  line += tail;
  out << line << "\n";
}

}  // namespace

std::string emit_lp(const MilpModel& model) {
  model.validate();
  if (model.variables().empty()) throw std::runtime_error("emit_lp: model has no variables");

  std::ostringstream out;
  out << "\\ decision-diagram training model\n";
  out << "\\ variables: " << model.variables().size()
      << " constraints: " << model.constraints().size() << "\n";
  out << "Minimize\n";
  emit_expression(out, "obj:", model.objective(), model, "");

  out << "Subject To\n";
  for (const auto& c : model.constraints()) {
    std::string tail = std::string(" ") + lp_sense(c.sense) + " " + fmt(c.rhs);
    emit_expression(out, c.name + ":", c.terms, model, tail.c_str());
  }
  if (model.cutoff()) {
    std::string tail = " <= " + fmt(*model.cutoff());
    emit_expression(out, "cutoff_bound:", model.objective(), model, tail.c_str());
  }

  out << "Bounds\n";
  for (const auto& v : model.variables()) {
    if (v.lower == v.upper) {
      out << " " << v.name << " = " << fmt(v.lower) << "\n";
    } else if (v.kind == VarKind::binary) {
      continue;  // plain binaries are fully described by the Binaries section
    } else if (v.lower == 0.0) {
      out << " " << v.name << " <= " << fmt(v.upper) << "\n";
    } else {
      out << " " << fmt(v.lower) << " <= " << v.name << " <= " << fmt(v.upper) << "\n";
    }
  }

  bool any_binary = false;
  for (const auto& v : model.variables()) any_binary |= v.kind == VarKind::binary;
  if (any_binary) {
    out << "Binaries\n";
    std::string line;
    for (const auto& v : model.variables()) {
      if (v.kind != VarKind::binary) continue;
      if (line.size() + v.name.size() + 1 > 200) {
        out << line << "\n";
        line.clear();
      }
      line += " " + v.name;
    }
    if (!line.empty()) out << line << "\n";
  }
  out << "End\n";
  return out.str();
}

std::string emit_mps(const MilpModel& model) {
  model.validate();
  if (model.variables().empty()) throw std::runtime_error("emit_mps: model has no variables");

  const auto& vars = model.variables();
  const auto& rows = model.constraints();
  const bool with_cutoff = model.cutoff().has_value();

  // Transpose into column-major entries; the objective is row "obj" and the
  // optional cutoff row duplicates its terms.
  struct Entry {
    std::string row;
    double coef;
  };
  std::vector<std::vector<Entry>> columns(vars.size());
  for (const auto& t : model.objective()) {
    columns[static_cast<std::size_t>(t.var)].push_back({"obj", t.coef});
    if (with_cutoff)
      columns[static_cast<std::size_t>(t.var)].push_back({"cutoff_bound", t.coef});
  }
  for (const auto& c : rows) {
    for (const auto& t : c.terms)
      columns[static_cast<std::size_t>(t.var)].push_back({c.name, t.coef});
  }

  std::ostringstream out;
  out << "* decision-diagram training model\n";
  out << "NAME odd_model\n";
  out << "ROWS\n";
  out << " N obj\n";
  auto row_kind = [](Sense s) {
    switch (s) {
      case Sense::le: return 'L';
      case Sense::eq: return 'E';
      case Sense::ge: return 'G';
    }
    return 'E';
  };
  for (const auto& c : rows) out << " " << row_kind(c.sense) << " " << c.name << "\n";
  if (with_cutoff) out << " L cutoff_bound\n";

  out << "COLUMNS\n";
  bool in_integer_block = false;
  int marker = 0;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const bool is_int = vars[v].kind == VarKind::binary;
    if (is_int != in_integer_block) {
      out << " MARKER" << marker++ << " 'MARKER' "
          << (is_int ? "'INTORG'" : "'INTEND'") << "\n";
      in_integer_block = is_int;
    }
    if (columns[v].empty()) {
      // Keep every declared variable present in the file.
      out << " " << vars[v].name << " obj 0\n";
      continue;
    }
    for (const auto& entry : columns[v])
      out << " " << vars[v].name << " " << entry.row << " " << fmt(entry.coef) << "\n";
  }
  if (in_integer_block) out << " MARKER" << marker++ << " 'MARKER' 'INTEND'\n";

  out << "RHS\n";
  for (const auto& c : rows) {
    if (c.rhs != 0.0) out << " rhs " << c.name << " " << fmt(c.rhs) << "\n";
  }
  if (with_cutoff) out << " rhs cutoff_bound " << fmt(*model.cutoff()) << "\n";

  out << "BOUNDS\n";
  for (const auto& v : vars) {
    if (v.lower == v.upper) {
      out << " FX bnd " << v.name << " " << fmt(v.lower) << "\n";
    } else if (v.kind == VarKind::binary) {
      out << " BV bnd " << v.name << "\n";
    } else {
      if (v.lower != 0.0) out << " LO bnd " << v.name << " " << fmt(v.lower) << "\n";
      out << " UP bnd " << v.name << " " << fmt(v.upper) << "\n";
    }
  }
  out << "ENDATA\n";
  return out.str();
}

}  // namespace odd
