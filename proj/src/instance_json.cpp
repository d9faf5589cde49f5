#include "admmlab/instance_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "admmlab/errors.hpp"

namespace admmlab {

using nlohmann::json;

namespace {

Vector read_vector(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string("instance: '") + what + "' must be an array");
  Vector v;
  for (const auto& e : j) {
    if (!e.is_number()) throw InvalidInput(std::string("instance: '") + what + "' holds a non-number");
    v.push_back(e.get<double>());
  }
  return v;
}

Matrix read_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw InvalidInput(std::string("instance: '") + what + "' must be a nonempty array of rows");
  std::vector<Vector> rows;
  for (const auto& r : j) rows.push_back(read_vector(r, what));
  try {
    return Matrix::from_rows(rows);
  } catch (const InvalidInput&) {
    throw InvalidInput(std::string("instance: '") + what + "' has ragged rows");
  }
}

std::vector<PlqFunction> read_side(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string("instance: '") + what + "' must be an array");
  std::vector<PlqFunction> out;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("pieces"))
      throw InvalidInput(std::string("instance: entries of '") + what + "' need 'pieces'");
    const double q = e.value("q", 0.0);
    std::vector<AffinePiece> pieces;
    for (const auto& pc : e.at("pieces")) {
      if (!pc.is_array() || pc.size() != 2)
        throw InvalidInput("instance: each piece must be [slope, intercept]");
      pieces.push_back({pc[0].get<double>(), pc[1].get<double>()});
    }
    out.emplace_back(q, std::move(pieces));
  }
  return out;
}

json write_side(const SideFunction& h) {
  const auto* fs = side_plq(h);
  if (!fs) throw InvalidInput("instance_to_json: oracle sides cannot be serialized");
  json arr = json::array();
  for (const auto& p : *fs) {
    json pieces = json::array();
    for (const auto& pc : p.pieces()) pieces.push_back({pc.slope, pc.intercept});
    arr.push_back({{"q", p.q()}, {"pieces", pieces}});
  }
  return arr;
}

json write_matrix(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(Vector(m.row(i).begin(), m.row(i).end()));
  return rows;
}

}  // namespace

InstanceFile parse_instance_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("instance: JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw InvalidInput("instance: top level must be an object");
  for (const char* key : {"f", "g", "A", "B", "b"})
    if (!j.contains(key)) throw InvalidInput(std::string("instance: missing '") + key + "'");
  try {
    InstanceFile inst;
    inst.problem.f = read_side(j["f"], "f");
    inst.problem.g = read_side(j["g"], "g");
    inst.problem.A = read_matrix(j["A"], "A");
    inst.problem.B = read_matrix(j["B"], "B");
    inst.problem.b = read_vector(j["b"], "b");
    inst.problem.validate();
    if (j.contains("lambda0")) inst.lambda0 = read_vector(j["lambda0"], "lambda0");
    if (j.contains("z0")) inst.z0 = read_vector(j["z0"], "z0");
    if (j.contains("optimal")) {
      const json& o = j["optimal"];
      OptimalPair opt;
      opt.x_star = read_vector(o.at("x"), "optimal.x");
      opt.z_star = read_vector(o.at("z"), "optimal.z");
      opt.lambda_star = read_vector(o.at("lambda"), "optimal.lambda");
      opt.f_star = o.value("f", side_value(inst.problem.f, opt.x_star));
      opt.g_star = o.value("g", side_value(inst.problem.g, opt.z_star));
      inst.optimal = std::move(opt);
    }
    return inst;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("instance: ") + e.what());
  }
}

InstanceFile load_instance_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance_json(ss.str());
}

std::string instance_to_json(const InstanceFile& inst) {
  json j;
  j["f"] = write_side(inst.problem.f);
  j["g"] = write_side(inst.problem.g);
  j["A"] = write_matrix(inst.problem.A);
  j["B"] = write_matrix(inst.problem.B);
  j["b"] = inst.problem.b;
  if (inst.lambda0) j["lambda0"] = *inst.lambda0;
  if (inst.z0) j["z0"] = *inst.z0;
  if (inst.optimal) {
    j["optimal"] = {{"x", inst.optimal->x_star},      {"z", inst.optimal->z_star},
                    {"lambda", inst.optimal->lambda_star}, {"f", inst.optimal->f_star},
                    {"g", inst.optimal->g_star}};
  }
  return j.dump(2);
}

}  // namespace admmlab
