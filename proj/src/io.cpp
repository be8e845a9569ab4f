#include "sepscope/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sepscope {

namespace {

Complex parse_complex(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw InvalidInput("complex entries must be [re, im] pairs");
  return {e[0].get<double>(), e[1].get<double>()};
}

CVector parse_complex_vector(const Json& j) {
  if (!j.is_array()) throw InvalidInput("expected an array of [re, im] pairs");
  CVector v(Eigen::Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(Eigen::Index(i)) = parse_complex(j[i]);
  return v;
}

Dims parse_dims(const Json& j) {
  if (!j.is_object() || !j.contains("dims"))
    throw InvalidInput("operator JSON needs a \"dims\" field");
  const Json& d = j["dims"];
  if (!d.is_array() || d.size() != 2 || !d[0].is_number_integer() ||
      !d[1].is_number_integer())
    throw InvalidInput("\"dims\" must be [M, N] integers");
  const Dims dims{d[0].get<int>(), d[1].get<int>()};
  if (dims.m < 2 || dims.n < 2) throw InvalidDimension("dims must be at least 2");
  if (dims.m > 64 || dims.n > 64) throw InvalidDimension("dims too large");
  return dims;
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write(std::ostringstream& os, const Json& j, int indent, int depth) {
  const std::string pad = indent >= 0 ? std::string(std::size_t(indent) * (depth + 1), ' ') : "";
  const std::string end_pad = indent >= 0 ? std::string(std::size_t(indent) * depth, ' ') : "";
  const char* nl = indent >= 0 ? "\n" : "";
  const char* sep = indent >= 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << Json(it.key()).dump() << sep;
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << end_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars, or of short scalar arrays, stay on one line.
      bool flat = true;
      for (const auto& e : j) {
        if (e.is_object()) flat = false;
        if (e.is_array())
          for (const auto& x : e)
            if (x.is_structured()) flat = false;
      }
      if (flat || indent < 0) {
        os << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << (indent >= 0 ? ", " : ",");
          write(os, j[i], -1, 0);
        }
        os << ']';
        return;
      }
      os << '[' << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',' << nl;
        os << pad;
        write(os, j[i], indent, depth + 1);
      }
      os << nl << end_pad << ']';
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

HermitianOp parse_operator(const Json& j) {
  const Dims dims = parse_dims(j);
  if (!j.contains("matrix") || !j["matrix"].is_array())
    throw InvalidInput("operator JSON needs a \"matrix\" array");
  const Json& rows = j["matrix"];
  const int d = dims.total();
  if (int(rows.size()) != d) throw DimensionMismatch("matrix row count differs from M*N");
  CMatrix m(d, d);
  for (int r = 0; r < d; ++r) {
    if (!rows[r].is_array() || int(rows[r].size()) != d)
      throw DimensionMismatch("matrix row length differs from M*N");
    for (int c = 0; c < d; ++c) m(r, c) = parse_complex(rows[r][c]);
  }
  return {dims, m};
}

DensityMatrix parse_state(const Json& j) { return DensityMatrix(parse_operator(j)); }

SeparableCertificate parse_certificate(const Json& j) {
  if (!j.is_object() || !j.contains("precisionBits") || !j.contains("terms"))
    throw InvalidInput("certificate JSON needs precisionBits and terms");
  if (!j["precisionBits"].is_number_integer())
    throw InvalidInput("precisionBits must be an integer");
  SeparableCertificate c;
  c.precisionBits = j["precisionBits"].get<int>();
  if (!j["terms"].is_array()) throw InvalidInput("terms must be an array");
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("p") || !t.contains("alpha") || !t.contains("beta") ||
        !t["p"].is_number())
      throw InvalidInput("certificate term needs p, alpha, beta");
    c.terms.push_back({t["p"].get<double>(), parse_complex_vector(t["alpha"]),
                       parse_complex_vector(t["beta"])});
  }
  return c;
}

Json complex_vector_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(Json::array({v(i).real(), v(i).imag()}));
  return out;
}

Json complex_matrix_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json operator_json(const HermitianOp& a) {
  Json j = Json::object();
  j["dims"] = Json::array({a.dims().m, a.dims().n});
  j["matrix"] = complex_matrix_json(a.matrix());
  return j;
}

Json real_vector_json(const RVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  write(os, j, indent, 0);
  return os.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace sepscope
