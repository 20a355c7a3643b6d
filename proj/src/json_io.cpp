#include "pdqp/json_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "pdqp/errors.hpp"
#include "pdqp/qps_reader.hpp"

namespace pdqp {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ordered_json bounds_to_json(const std::vector<double>& v) {
  ordered_json arr = ordered_json::array();
  for (double x : v) {
    if (x == kInf) arr.push_back("inf");
    else if (x == -kInf) arr.push_back("-inf");
    else arr.push_back(x);
  }
  return arr;
}

std::vector<double> bounds_from_json(const ordered_json& arr) {
  std::vector<double> v;
  v.reserve(arr.size());
  for (const auto& e : arr) {
    if (e.is_string()) {
      const std::string s = e.get<std::string>();
      if (s == "inf") v.push_back(kInf);
      else if (s == "-inf") v.push_back(-kInf);
      else throw ParseError("json: bad bound sentinel '" + s + "'");
    } else if (e.is_number()) {
      v.push_back(e.get<double>());
    } else {
      throw ParseError("json: bound entries must be numbers or inf sentinels");
    }
  }
  return v;
}

ordered_json matrix_to_json(const SparseMatrix& m) {
  ordered_json j;
  j["nrows"] = m.nrows;
  j["ncols"] = m.ncols;
  j["row_offsets"] = m.row_offsets;
  j["col_indices"] = m.col_indices;
  j["values"] = m.values;
  return j;
}

SparseMatrix matrix_from_json(const ordered_json& j) {
  SparseMatrix m;
  m.nrows = j.at("nrows").get<std::size_t>();
  m.ncols = j.at("ncols").get<std::size_t>();
  m.row_offsets = j.at("row_offsets").get<std::vector<std::size_t>>();
  m.col_indices = j.at("col_indices").get<std::vector<std::size_t>>();
  m.values = j.at("values").get<std::vector<double>>();
  return m;
}

ordered_json parse_document(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("json: ") + e.what());
  }
}

}  // namespace

std::string write_instance_json(const QpInstance& inst) {
  ordered_json j;
  j["format"] = "pdqp-instance";
  j["version"] = 1;
  j["name"] = inst.name;
  j["n"] = inst.n;
  j["m"] = inst.m;
  j["Q"] = matrix_to_json(inst.quad);
  j["c"] = inst.linear;
  j["A"] = matrix_to_json(inst.constraints);
  j["b"] = inst.rhs;
  j["l"] = bounds_to_json(inst.lower);
  j["u"] = bounds_to_json(inst.upper);
  std::string kinds(inst.m, 'G');
  for (std::size_t i = 0; i < inst.m; ++i)
    kinds[i] = inst.row_kind[i] == RowKind::Equality ? 'E' : 'G';
  j["row_kind"] = kinds;
  return j.dump();
}

QpInstance read_instance_json(const std::string& text) {
  const ordered_json j = parse_document(text);
  try {
    if (j.at("format").get<std::string>() != "pdqp-instance")
      throw ParseError("json: not a pdqp-instance document");
    QpInstance inst;
    inst.name = j.at("name").get<std::string>();
    inst.n = j.at("n").get<std::size_t>();
    inst.m = j.at("m").get<std::size_t>();
    inst.quad = matrix_from_json(j.at("Q"));
    inst.linear = j.at("c").get<std::vector<double>>();
    inst.constraints = matrix_from_json(j.at("A"));
    inst.rhs = j.at("b").get<std::vector<double>>();
    inst.lower = bounds_from_json(j.at("l"));
    inst.upper = bounds_from_json(j.at("u"));
    const std::string kinds = j.at("row_kind").get<std::string>();
    if (kinds.size() != inst.m) throw ParseError("json: row_kind length mismatch");
    inst.row_kind.resize(inst.m);
    for (std::size_t i = 0; i < inst.m; ++i) {
      if (kinds[i] == 'E') inst.row_kind[i] = RowKind::Equality;
      else if (kinds[i] == 'G') inst.row_kind[i] = RowKind::InequalityGeq;
      else throw ParseError("json: bad row kind character");
    }
    inst.finalize();
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("json: ") + e.what());
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("json: invalid instance: ") + e.what());
  }
}

std::string write_point_json(const PrimalDualPoint& p) {
  ordered_json j;
  j["format"] = "pdqp-point";
  j["x"] = p.x;
  j["y"] = p.y;
  return j.dump();
}

PrimalDualPoint read_point_json(const std::string& text) {
  const ordered_json j = parse_document(text);
  try {
    PrimalDualPoint p;
    p.x = j.at("x").get<std::vector<double>>();
    p.y = j.at("y").get<std::vector<double>>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("json: ") + e.what());
  }
}

GeneratorConfig read_generator_config_json(const std::string& text) {
  const ordered_json j = parse_document(text);
  try {
    GeneratorConfig cfg;
    cfg.n = j.at("n").get<std::size_t>();
    cfg.m = j.at("m").get<std::size_t>();
    cfg.density = j.at("density").get<double>();
    cfg.feasibility = j.at("feasibility").get<double>();
    auto dist = [&](const char* key, NormalDist fallback) {
      if (!j.contains(key)) return fallback;
      return NormalDist{j.at(key).at("mean").get<double>(), j.at(key).at("stddev").get<double>()};
    };
    cfg.quad_diag = dist("quad_diag", cfg.quad_diag);
    cfg.linear_cost = dist("linear_cost", cfg.linear_cost);
    cfg.constraint_coeff = dist("constraint_coeff", cfg.constraint_coeff);
    if (j.contains("upper_bound")) cfg.upper_bound = j.at("upper_bound").get<double>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("json: ") + e.what());
  } catch (const ContractViolation& e) {
    throw ParseError(std::string("json: invalid generator config: ") + e.what());
  }
}

std::string write_generator_config_json(const GeneratorConfig& cfg) {
  ordered_json j;
  j["n"] = cfg.n;
  j["m"] = cfg.m;
  j["density"] = cfg.density;
  j["feasibility"] = cfg.feasibility;
  j["quad_diag"] = {{"mean", cfg.quad_diag.mean}, {"stddev", cfg.quad_diag.stddev}};
  j["linear_cost"] = {{"mean", cfg.linear_cost.mean}, {"stddev", cfg.linear_cost.stddev}};
  j["constraint_coeff"] = {{"mean", cfg.constraint_coeff.mean},
                           {"stddev", cfg.constraint_coeff.stddev}};
  j["upper_bound"] = cfg.upper_bound;
  j["seed"] = cfg.seed;
  return j.dump();
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << content;
  if (!f) throw ParseError("write failed for '" + path + "'");
}

QpInstance load_instance_file(const std::string& path) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return read_instance_json(read_text_file(path));
  return parse_qps_file(path);
}

void save_instance_file(const QpInstance& inst, const std::string& path) {
  write_text_file(path, write_instance_json(inst));
}

}  // namespace pdqp
