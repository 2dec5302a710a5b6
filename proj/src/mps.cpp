#include "spacelog/mps.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "spacelog/error.hpp"
#include "spacelog/io.hpp"

namespace spacelog {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sanitize(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    out.push_back(ok ? c : '_');
  }
  return out;
}

std::string join_ids(const std::vector<int>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += '_';
    s += std::to_string(ids[i]);
  }
  return s;
}

const char* kObjRow = "COST";

}  // namespace

std::vector<std::string> mps_row_names(const MilpModel& model) {
  if (!model.row_names.empty()) return model.row_names;
  std::vector<std::string> out;
  out.reserve(model.row_meta.size());
  for (std::size_t i = 0; i < model.row_meta.size(); ++i) {
    const RowMeta& m = model.row_meta[i];
    std::string s = "R" + std::to_string(i);
    switch (m.family) {
      case RowFamily::kMassBalance:
        s += "_mb_n" + std::to_string(m.node) + "_t" + std::to_string(m.step) + "_k" + join_ids(m.commodities);
        break;
      case RowFamily::kConcurrency:
        s += "_cc_a" + std::to_string(m.arc) + "_" + m.label;
        break;
      case RowFamily::kGeneric:
        if (!m.label.empty()) s += "_" + m.label;
        break;
    }
    out.push_back(sanitize(s));
  }
  return out;
}

std::vector<std::string> mps_column_names(const MilpModel& model) {
  if (!model.col_names.empty()) return model.col_names;
  std::vector<std::string> out;
  out.reserve(model.col_meta.size());
  for (std::size_t j = 0; j < model.col_meta.size(); ++j) {
    const ColumnMeta& m = model.col_meta[j];
    std::string s = "C" + std::to_string(j);
    switch (m.kind) {
      case ColumnKind::kCommodity: s += "_a" + std::to_string(m.arc) + "_k" + join_ids(m.commodities); break;
      case ColumnKind::kPackage: s += "_a" + std::to_string(m.arc) + "_p" + join_ids(m.commodities); break;
      case ColumnKind::kBundle: s += "_a" + std::to_string(m.arc) + "_b_" + m.label; break;
      case ColumnKind::kGeneric:
        if (!m.label.empty()) s += "_" + m.label;
        break;
    }
    out.push_back(sanitize(s));
  }
  return out;
}

std::string export_mps(const MilpModel& model) {
  model.check_shape();
  const auto rn = mps_row_names(model);
  const auto cn = mps_column_names(model);
  std::ostringstream o;
  o << "NAME " << sanitize(model.name.empty() ? "model" : model.name) << "\n";
  o << "ROWS\n";
  o << " N " << kObjRow << "\n";
  for (int i = 0; i < model.rows(); ++i) {
    const char* t = model.sense[static_cast<std::size_t>(i)] == RowSense::kLe   ? "L"
                    : model.sense[static_cast<std::size_t>(i)] == RowSense::kGe ? "G"
                                                                                 : "E";
    o << " " << t << " " << rn[static_cast<std::size_t>(i)] << "\n";
  }
  o << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < model.cols(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const bool integer = model.is_integer[uj] != 0;
    if (integer != in_int) {
      o << " MARKER" << marker++ << " 'MARKER' " << (integer ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = integer;
    }
    const std::string& name = cn[uj];
    bool any = false;
    if (model.objective[uj] != 0.0) {
      o << " " << name << " " << kObjRow << " " << fmt(model.objective[uj]) << "\n";
      any = true;
    }
    for (SparseMatrix::InnerIterator it(model.a, j); it; ++it) {
      o << " " << name << " " << rn[static_cast<std::size_t>(it.row())] << " " << fmt(it.value()) << "\n";
      any = true;
    }
    if (!any) o << " " << name << " " << kObjRow << " 0\n";
  }
  if (in_int) o << " MARKER" << marker++ << " 'MARKER' 'INTEND'\n";
  o << "RHS\n";
  if (model.objective_offset != 0.0) o << " RHS " << kObjRow << " " << fmt(-model.objective_offset) << "\n";
  for (int i = 0; i < model.rows(); ++i) {
    const double b = model.rhs[static_cast<std::size_t>(i)];
    if (b != 0.0) o << " RHS " << rn[static_cast<std::size_t>(i)] << " " << fmt(b) << "\n";
  }
  o << "BOUNDS\n";
  for (int j = 0; j < model.cols(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const double l = model.lower[uj], u = model.upper[uj];
    const std::string& name = cn[uj];
    if (l == u) {
      o << " FX BND " << name << " " << fmt(l) << "\n";
      continue;
    }
    if (l == -kInf) {
      o << " MI BND " << name << "\n";
    } else if (l != 0.0) {
      o << " LO BND " << name << " " << fmt(l) << "\n";
    }
    if (u != kInf) {
      o << " UP BND " << name << " " << fmt(u) << "\n";
    } else if (model.is_integer[uj]) {
      o << " PL BND " << name << "\n";
    }
  }
  o << "ENDATA\n";
  return o.str();
}

void export_mps(const MilpModel& model, const std::filesystem::path& destination) {
  write_file_atomic(destination, export_mps(model));
}

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error(Errc::kParseError, "MPS line " + std::to_string(line) + ": " + what);
}

double number(const std::string& s, int line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') fail(line, "bad number '" + s + "'");
  return v;
}

}  // namespace

MilpModel parse_mps(const std::string& text) {
  enum class Sec { kNone, kRows, kColumns, kRhs, kBounds, kEnd };
  Sec sec = Sec::kNone;
  MilpModel m;
  std::string obj_name;
  std::unordered_map<std::string, int> row_index, col_index;
  std::vector<Eigen::Triplet<double>> trip;
  bool in_int = false;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw.empty() || raw[0] == '*') continue;
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const bool header = raw[0] != ' ' && raw[0] != '\t';
    if (header) {
      const std::string& h = tok[0];
      if (h == "NAME") {
        m.name = tok.size() > 1 ? tok[1] : "";
      } else if (h == "ROWS") {
        sec = Sec::kRows;
      } else if (h == "COLUMNS") {
        sec = Sec::kColumns;
      } else if (h == "RHS") {
        sec = Sec::kRhs;
      } else if (h == "BOUNDS") {
        sec = Sec::kBounds;
      } else if (h == "ENDATA") {
        sec = Sec::kEnd;
        break;
      } else {
        fail(line_no, "unsupported section " + h);
      }
      continue;
    }
    switch (sec) {
      case Sec::kRows: {
        if (tok.size() != 2) fail(line_no, "ROWS entry needs type and name");
        const std::string& t = tok[0];
        if (t == "N") {
          if (!obj_name.empty()) fail(line_no, "second objective row");
          obj_name = tok[1];
          break;
        }
        RowSense s;
        if (t == "L") s = RowSense::kLe;
        else if (t == "G") s = RowSense::kGe;
        else if (t == "E") s = RowSense::kEq;
        else fail(line_no, "unknown row type " + t);
        if (!row_index.emplace(tok[1], m.rows()).second) fail(line_no, "duplicate row " + tok[1]);
        m.sense.push_back(s);
        m.rhs.push_back(0.0);
        m.row_names.push_back(tok[1]);
        break;
      }
      case Sec::kColumns: {
        if (tok.size() == 3 && tok[1] == "'MARKER'") {
          if (tok[2] == "'INTORG'") in_int = true;
          else if (tok[2] == "'INTEND'") in_int = false;
          else fail(line_no, "unknown marker");
          break;
        }
        if (tok.size() != 3 && tok.size() != 5) fail(line_no, "COLUMNS entry malformed");
        auto [it, fresh] = col_index.emplace(tok[0], m.cols());
        const int j = it->second;
        if (fresh) {
          m.objective.push_back(0.0);
          m.lower.push_back(0.0);
          m.upper.push_back(kInf);
          m.is_integer.push_back(in_int ? 1 : 0);
          m.col_names.push_back(tok[0]);
        } else if (j != m.cols() - 1) {
          fail(line_no, "column " + tok[0] + " is not contiguous");
        }
        for (std::size_t p = 1; p + 1 < tok.size(); p += 2) {
          const double v = number(tok[p + 1], line_no);
          if (tok[p] == obj_name) {
            m.objective[static_cast<std::size_t>(j)] = v;
            continue;
          }
          auto r = row_index.find(tok[p]);
          if (r == row_index.end()) fail(line_no, "unknown row " + tok[p]);
          if (v != 0.0) trip.emplace_back(r->second, j, v);
        }
        break;
      }
      case Sec::kRhs: {
        if (tok.size() != 3 && tok.size() != 5) fail(line_no, "RHS entry malformed");
        for (std::size_t p = 1; p + 1 < tok.size(); p += 2) {
          const double v = number(tok[p + 1], line_no);
          if (tok[p] == obj_name) {
            m.objective_offset = -v;
            continue;
          }
          auto r = row_index.find(tok[p]);
          if (r == row_index.end()) fail(line_no, "unknown row " + tok[p]);
          m.rhs[static_cast<std::size_t>(r->second)] = v;
        }
        break;
      }
      case Sec::kBounds: {
        if (tok.size() < 3) fail(line_no, "BOUNDS entry malformed");
        auto c = col_index.find(tok[2]);
        if (c == col_index.end()) fail(line_no, "unknown column " + tok[2]);
        const auto j = static_cast<std::size_t>(c->second);
        const std::string& t = tok[0];
        const bool needs_value = t == "UP" || t == "LO" || t == "FX";
        if (needs_value && tok.size() != 4) fail(line_no, t + " bound needs a value");
        if (t == "UP") m.upper[j] = number(tok[3], line_no);
        else if (t == "LO") m.lower[j] = number(tok[3], line_no);
        else if (t == "FX") m.lower[j] = m.upper[j] = number(tok[3], line_no);
        else if (t == "MI") m.lower[j] = -kInf;
        else if (t == "PL") m.upper[j] = kInf;
        else if (t == "FR") { m.lower[j] = -kInf; m.upper[j] = kInf; }
        else fail(line_no, "unsupported bound type " + t);
        break;
      }
      case Sec::kNone:
      case Sec::kEnd:
        fail(line_no, "data outside a section");
    }
  }
  if (sec != Sec::kEnd) throw Error(Errc::kParseError, "MPS input lacks ENDATA");
  m.a.resize(m.rows(), m.cols());
  m.a.setFromTriplets(trip.begin(), trip.end());
  m.a.makeCompressed();
  m.row_meta.assign(static_cast<std::size_t>(m.rows()), RowMeta{});
  m.col_meta.assign(static_cast<std::size_t>(m.cols()), ColumnMeta{});
  for (std::size_t j = 0; j < m.lower.size(); ++j) {
    if (m.lower[j] > m.upper[j]) throw Error(Errc::kParseError, "column " + m.col_names[j] + " has crossed bounds");
  }
  return m;
}

MilpModel load_mps(const std::filesystem::path& path) { return parse_mps(read_file(path)); }

}  // namespace spacelog
