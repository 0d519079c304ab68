#include "smoothdiv/operators_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace smoothdiv {

namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

RealMatrix parse_real_grid(const json& rows, const std::string& field, const std::string& origin) {
  if (!rows.is_array() || rows.empty())
    throw ParseError(origin + ": field '" + field + "' must be a non-empty array of rows");
  const std::size_t ncols = rows[0].is_array() ? rows[0].size() : 0;
  if (ncols == 0) throw ParseError(origin + ": field '" + field + "' rows must be non-empty arrays");
  RealMatrix m(rows.size(), ncols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != ncols)
      throw ParseError(origin + ": field '" + field + "' row " + std::to_string(i) + " has inconsistent length");
    for (std::size_t j = 0; j < ncols; ++j) {
      if (!rows[i][j].is_number())
        throw ParseError(origin + ": field '" + field + "' entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ") is not a number");
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j].get<double>();
    }
  }
  return m;
}

Matrix matrix_from_json(const json& j, const std::string& origin) {
  if (!j.is_object()) throw ParseError(origin + ": operator must be a JSON object");
  if (!j.contains("re")) throw ParseError(origin + ": missing field 're'");
  RealMatrix re = parse_real_grid(j.at("re"), "re", origin);
  RealMatrix im = RealMatrix::Zero(re.rows(), re.cols());
  if (j.contains("im")) {
    im = parse_real_grid(j.at("im"), "im", origin);
    if (im.rows() != re.rows() || im.cols() != re.cols())
      throw ParseError(origin + ": field 'im' shape differs from 're'");
  }
  if (j.contains("dim")) {
    if (!j.at("dim").is_number_integer()) throw ParseError(origin + ": field 'dim' must be an integer");
    const int dim = j.at("dim").get<int>();
    if (dim != re.rows() || dim != re.cols())
      throw ParseError(origin + ": field 'dim' (" + std::to_string(dim) + ") disagrees with 're' shape");
  }
  return re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
}

json matrix_to_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ir = json::array();
    for (int j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  json j{{"re", re}, {"im", im}};
  if (m.rows() == m.cols()) j["dim"] = m.rows();
  return j;
}

} // namespace

Matrix load_operator_json(const std::string& path) { return matrix_from_json(parse_file(path), path); }

Matrix operator_from_json_string(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(origin + ": invalid JSON: " + e.what());
  }
  return matrix_from_json(j, origin);
}

void save_operator_json(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << matrix_to_json(m).dump(2) << "\n";
}

std::string operator_to_json_string(const Matrix& m) { return matrix_to_json(m).dump(); }

QuantumChannel load_channel_json(const std::string& path) {
  json j = parse_file(path);
  if (!j.contains("kraus") || !j.at("kraus").is_array() || j.at("kraus").empty())
    throw ParseError(path + ": missing or empty field 'kraus'");
  std::vector<Matrix> kraus;
  for (std::size_t k = 0; k < j.at("kraus").size(); ++k)
    kraus.push_back(matrix_from_json(j.at("kraus")[k], path + ":kraus[" + std::to_string(k) + "]"));
  return QuantumChannel(std::move(kraus));
}

void save_channel_json(const std::string& path, const QuantumChannel& n) {
  json arr = json::array();
  for (const auto& k : n.kraus()) arr.push_back(matrix_to_json(k));
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << json{{"kraus", arr}}.dump(2) << "\n";
}

} // namespace smoothdiv
