#include "mpqp/problem_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mpqp/errors.hpp"

namespace mpqp {

namespace {

using json = nlohmann::ordered_json;

std::size_t require_count(const json& doc, const char* field) {
  if (!doc.contains(field)) throw ParseError(std::string("missing field \"") + field + "\"");
  const auto& v = doc.at(field);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ParseError(std::string("field \"") + field + "\" must be a nonnegative integer");
  return v.get<std::size_t>();
}

Matrix require_matrix(const json& doc, const char* field, std::size_t rows, std::size_t cols) {
  if (!doc.contains(field)) throw ParseError(std::string("missing field \"") + field + "\"");
  const auto& v = doc.at(field);
  if (!v.is_array()) throw ParseError(std::string("field \"") + field + "\" must be an array of rows");
  if (v.size() != rows)
    throw ParseError(std::string("field \"") + field + "\": expected " + std::to_string(rows) +
                     " rows, got " + std::to_string(v.size()));
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& r = v.at(i);
    if (!r.is_array() || r.size() != cols)
      throw ParseError(std::string("field \"") + field + "\" row " + std::to_string(i + 1) +
                       ": expected " + std::to_string(cols) + " entries");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!r.at(j).is_number())
        throw ParseError(std::string("field \"") + field + "\" row " + std::to_string(i + 1) +
                         ": entries must be numbers");
      m(i, j) = r.at(j).get<double>();
    }
  }
  if (!m.all_finite()) throw ParseError(std::string("field \"") + field + "\" has non-finite entries");
  return m;
}

Vector require_vector(const json& doc, const char* field, std::size_t len) {
  if (!doc.contains(field)) throw ParseError(std::string("missing field \"") + field + "\"");
  const auto& v = doc.at(field);
  if (!v.is_array() || v.size() != len)
    throw ParseError(std::string("field \"") + field + "\": expected " + std::to_string(len) +
                     " entries");
  Vector out(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (!v.at(i).is_number())
      throw ParseError(std::string("field \"") + field + "\": entries must be numbers");
    out[i] = v.at(i).get<double>();
  }
  if (!all_finite(out)) throw ParseError(std::string("field \"") + field + "\" has non-finite entries");
  return out;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

Problem load_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("problem document must be a JSON object");

  const std::size_t s = require_count(doc, "s");
  const std::size_t m = require_count(doc, "m");
  const std::size_t n = require_count(doc, "n");
  if (s == 0) throw ParseError("field \"s\" must be positive");
  if (n == 0) throw ParseError("field \"n\" must be positive");

  Matrix H = require_matrix(doc, "H", s, s);
  Matrix G = require_matrix(doc, "G", m, m == 0 ? 0 : s);
  Vector W = require_vector(doc, "W", m);
  Matrix S = require_matrix(doc, "S", m, m == 0 ? 0 : n);
  if (m == 0) {
    G = Matrix(0, s);
    S = Matrix(0, n);
  }
  return Problem(std::move(H), std::move(G), std::move(W), std::move(S));
}

Problem load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_problem(ss.str());
}

std::string save_problem(const Problem& p) {
  json doc;
  doc["s"] = p.num_vars();
  doc["m"] = p.num_constraints();
  doc["n"] = p.num_params();
  doc["H"] = matrix_to_json(p.H());
  doc["G"] = matrix_to_json(p.G());
  doc["W"] = p.W();
  doc["S"] = matrix_to_json(p.S());
  return doc.dump(2) + "\n";
}

}  // namespace mpqp
