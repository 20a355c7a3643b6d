#include "pdqp/qps_reader.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "pdqp/errors.hpp"

namespace pdqp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Section { None, Name, Rows, Columns, Rhs, Bounds, QuadObj, EndData };

struct RowRec {
  char kind;  // 'N', 'G', 'L', 'E'
  std::size_t index = 0;       // index among constraint rows; unused for N
  bool is_objective = false;   // only the first N row
};

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_number(const std::string& tok, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw ParseError("qps: bad numeric literal '" + tok + "'", line_no);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("qps: bad numeric literal '" + tok + "'", line_no);
  }
}

}  // namespace

QpInstance parse_qps(std::istream& in) {
  std::unordered_map<std::string, RowRec> rows;
  std::vector<std::string> constraint_names;  // file order
  std::unordered_map<std::string, std::size_t> cols;
  std::vector<std::string> col_names;
  std::string objective_name;
  bool have_objective = false;

  // (row, col) -> value for A and c; duplicates are rejected.
  std::map<std::pair<std::size_t, std::size_t>, double> a_entries;
  std::vector<double> obj_coeff;   // by column index
  std::vector<bool> obj_seen;      // duplicate detection for objective entries
  std::map<std::pair<std::size_t, std::size_t>, double> q_entries;
  std::unordered_map<std::string, double> rhs_values;
  struct BoundRec { std::string type; std::size_t col; double value; std::size_t line; };
  std::vector<BoundRec> bounds;

  auto col_index = [&](const std::string& name, std::size_t line_no) -> std::size_t {
    auto it = cols.find(name);
    if (it != cols.end()) return it->second;
    // COLUMNS introduces variables in order of first appearance; any other
    // section must reference an existing one.
    throw ParseError("qps: unknown column '" + name + "'", line_no);
  };

  Section section = Section::None;
  bool saw_endata = false;
  std::string line;
  std::size_t line_no = 0;
  std::string problem_name;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '*') continue;
    const bool is_header = !std::isspace(static_cast<unsigned char>(line[0]));
    auto toks = tokenize(line);
    if (toks.empty()) continue;

    if (is_header) {
      const std::string& kw = toks[0];
      if (kw == "NAME") {
        section = Section::Name;
        if (toks.size() > 1) problem_name = toks[1];
      } else if (kw == "ROWS") {
        section = Section::Rows;
      } else if (kw == "COLUMNS") {
        section = Section::Columns;
      } else if (kw == "RHS") {
        section = Section::Rhs;
      } else if (kw == "BOUNDS") {
        section = Section::Bounds;
      } else if (kw == "QUADOBJ" || kw == "QMATRIX") {
        section = Section::QuadObj;
      } else if (kw == "ENDATA") {
        saw_endata = true;
        break;
      } else {
        throw ParseError("qps: unknown section '" + kw + "'", line_no);
      }
      continue;
    }

    switch (section) {
      case Section::Rows: {
        if (toks.size() != 2) throw ParseError("qps: ROWS line needs 'KIND NAME'", line_no);
        const std::string& kind = toks[0];
        const std::string& name = toks[1];
        if (rows.count(name)) throw ParseError("qps: duplicate row '" + name + "'", line_no);
        if (kind == "N") {
          RowRec rec{'N'};
          if (!have_objective) {
            rec.is_objective = true;
            objective_name = name;
            have_objective = true;
          }
          rows.emplace(name, rec);
        } else if (kind == "G" || kind == "L" || kind == "E") {
          RowRec rec{kind[0]};
          rec.index = constraint_names.size();
          rows.emplace(name, rec);
          constraint_names.push_back(name);
        } else {
          throw ParseError("qps: unknown row kind '" + kind + "'", line_no);
        }
        break;
      }
      case Section::Columns: {
        if (toks.size() >= 3 && toks[1] == "'MARKER'")
          throw ParseError("qps: integer markers are not supported", line_no);
        if (toks.size() != 3 && toks.size() != 5)
          throw ParseError("qps: COLUMNS line needs 'COL ROW VAL [ROW VAL]'", line_no);
        const std::string& col_name = toks[0];
        auto it = cols.find(col_name);
        std::size_t col;
        if (it == cols.end()) {
          col = col_names.size();
          cols.emplace(col_name, col);
          col_names.push_back(col_name);
          obj_coeff.push_back(0.0);
          obj_seen.push_back(false);
        } else {
          col = it->second;
        }
        for (std::size_t t = 1; t + 1 < toks.size(); t += 2) {
          const std::string& row_name = toks[t];
          const double v = parse_number(toks[t + 1], line_no);
          auto rit = rows.find(row_name);
          if (rit == rows.end()) throw ParseError("qps: unknown row '" + row_name + "'", line_no);
          const RowRec& rec = rit->second;
          if (rec.kind == 'N') {
            if (!rec.is_objective) continue;  // secondary free row, value ignored
            if (obj_seen[col])
              throw ParseError("qps: duplicate objective entry for '" + col_name + "'", line_no);
            obj_coeff[col] = v;
            obj_seen[col] = true;
          } else {
            auto key = std::make_pair(rec.index, col);
            if (!a_entries.emplace(key, v).second)
              throw ParseError("qps: duplicate matrix entry (" + row_name + ", " + col_name + ")",
                               line_no);
          }
        }
        break;
      }
      case Section::Rhs: {
        if (toks.size() != 3 && toks.size() != 5)
          throw ParseError("qps: RHS line needs 'NAME ROW VAL [ROW VAL]'", line_no);
        for (std::size_t t = 1; t + 1 < toks.size(); t += 2) {
          const std::string& row_name = toks[t];
          const double v = parse_number(toks[t + 1], line_no);
          auto rit = rows.find(row_name);
          if (rit == rows.end()) throw ParseError("qps: unknown row '" + row_name + "'", line_no);
          if (rit->second.kind == 'N') continue;  // objective constant, not modeled
          if (!rhs_values.emplace(row_name, v).second)
            throw ParseError("qps: duplicate RHS for row '" + row_name + "'", line_no);
        }
        break;
      }
      case Section::Bounds: {
        const std::string& type = toks[0];
        const bool needs_value = (type == "LO" || type == "UP" || type == "FX");
        const bool no_value = (type == "FR" || type == "MI" || type == "PL");
        if (!needs_value && !no_value)
          throw ParseError("qps: unsupported bound type '" + type + "'", line_no);
        if (toks.size() != (needs_value ? 4u : 3u))
          throw ParseError("qps: BOUNDS line needs 'TYPE NAME COL [VAL]'", line_no);
        const std::size_t col = col_index(toks[2], line_no);
        const double v = needs_value ? parse_number(toks[3], line_no) : 0.0;
        bounds.push_back({type, col, v, line_no});
        break;
      }
      case Section::QuadObj: {
        if (toks.size() != 3)
          throw ParseError("qps: QUADOBJ line needs 'COL COL VAL'", line_no);
        const std::size_t i = col_index(toks[0], line_no);
        const std::size_t j = col_index(toks[1], line_no);
        const double v = parse_number(toks[2], line_no);
        if (!q_entries.emplace(std::make_pair(i, j), v).second)
          throw ParseError("qps: duplicate matrix entry (" + toks[0] + ", " + toks[1] + ")",
                           line_no);
        if (i != j) {
          if (!q_entries.emplace(std::make_pair(j, i), v).second)
            throw ParseError("qps: duplicate matrix entry (" + toks[0] + ", " + toks[1] + ")",
                             line_no);
        }
        break;
      }
      case Section::Name:
      case Section::None:
        throw ParseError("qps: data before a section header", line_no);
      case Section::EndData:
        break;
    }
  }
  if (!saw_endata) throw ParseError("qps: missing ENDATA", line_no);

  const std::size_t n = col_names.size();
  const std::size_t m = constraint_names.size();

  QpInstance inst;
  inst.name = problem_name;
  inst.n = n;
  inst.m = m;
  inst.linear = obj_coeff;
  inst.lower.assign(n, 0.0);
  inst.upper.assign(n, kInf);
  inst.rhs.assign(m, 0.0);
  inst.row_kind.assign(m, RowKind::InequalityGeq);

  std::vector<bool> negate(m, false);
  for (std::size_t r = 0; r < m; ++r) {
    const RowRec& rec = rows.at(constraint_names[r]);
    if (rec.kind == 'E') inst.row_kind[r] = RowKind::Equality;
    else inst.row_kind[r] = RowKind::InequalityGeq;
    negate[r] = (rec.kind == 'L');
  }
  for (const auto& [name, v] : rhs_values) {
    const RowRec& rec = rows.at(name);
    inst.rhs[rec.index] = negate[rec.index] ? -v : v;
  }

  std::vector<std::tuple<std::size_t, std::size_t, double>> a_triplets;
  a_triplets.reserve(a_entries.size());
  for (const auto& [key, v] : a_entries)
    a_triplets.emplace_back(key.first, key.second, negate[key.first] ? -v : v);
  inst.constraints = SparseMatrix::from_triplets(m, n, a_triplets);

  std::vector<std::tuple<std::size_t, std::size_t, double>> q_triplets;
  q_triplets.reserve(q_entries.size());
  for (const auto& [key, v] : q_entries) q_triplets.emplace_back(key.first, key.second, v);
  inst.quad = SparseMatrix::from_triplets(n, n, q_triplets);

  for (const BoundRec& b : bounds) {
    if (b.type == "LO") inst.lower[b.col] = b.value;
    else if (b.type == "UP") inst.upper[b.col] = b.value;
    else if (b.type == "FX") { inst.lower[b.col] = b.value; inst.upper[b.col] = b.value; }
    else if (b.type == "FR") { inst.lower[b.col] = -kInf; inst.upper[b.col] = kInf; }
    else if (b.type == "MI") inst.lower[b.col] = -kInf;
    else if (b.type == "PL") inst.upper[b.col] = kInf;
  }

  try {
    inst.finalize();
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("qps: invalid instance: ") + e.what());
  }
  return inst;
}

QpInstance parse_qps(const std::string& text) {
  std::istringstream ss(text);
  return parse_qps(ss);
}

QpInstance parse_qps_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("qps: cannot open '" + path + "'");
  return parse_qps(f);
}

}  // namespace pdqp
