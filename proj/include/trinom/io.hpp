#pragma once

// File formats. A system file is JSON with the exponent vector of each
// equation as an inner list:
//
//   {"n":2,"omega":[[4,0],[0,4]],"sigma":[[2,1],[1,2]]}
//
// i.e. "omega"[i] is the column omega^(i).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "trinom/errors.hpp"
#include "trinom/intlinalg.hpp"
#include "trinom/rational.hpp"
#include "trinom/systems.hpp"

namespace trinom::io {

using json = nlohmann::json;

inline IntegerMatrix matrix_from_json(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) throw validation_error("io", std::string("missing array '") + key + "'");
  const auto& cols = j[key];
  const std::size_t n = cols.size();
  if (n == 0) throw validation_error("io", std::string("'") + key + "' is empty");
  std::vector<std::vector<Integer>> columns;
  for (const auto& c : cols) {
    if (!c.is_array() || c.size() != n)
      throw validation_error("io", std::string("'") + key + "' must be " + std::to_string(n) + " lists of length " +
                                       std::to_string(n));
    std::vector<Integer> col;
    for (const auto& v : c) {
      if (!v.is_number_integer()) throw validation_error("io", std::string("'") + key + "' entries must be integers");
      col.emplace_back(v.get<std::int64_t>());
    }
    columns.push_back(std::move(col));
  }
  return IntegerMatrix::from_columns(columns);
}

inline json matrix_to_json(const IntegerMatrix& m) {
  json cols = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json c = json::array();
    for (std::size_t r = 0; r < m.size(); ++r) c.push_back(static_cast<std::int64_t>(m(r, i)));
    cols.push_back(std::move(c));
  }
  return cols;
}

inline TrinomialSystem parse_system(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw validation_error("io", std::string("system file is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw validation_error("io", "system file must hold a JSON object");
  for (auto& [k, v] : j.items())
    if (k != "n" && k != "omega" && k != "sigma") throw validation_error("io", "unknown key '" + k + "' in system file");
  auto omega = matrix_from_json(j, "omega");
  auto sigma = matrix_from_json(j, "sigma");
  if (omega.size() != sigma.size()) throw validation_error("io", "omega and sigma differ in size");
  if (j.contains("n") && (!j["n"].is_number_integer() || j["n"].get<std::int64_t>() != static_cast<std::int64_t>(omega.size())))
    throw validation_error("io", "'n' does not match the matrices");
  return TrinomialSystem(omega, sigma);
}

/// Canonical form: keys sorted, no whitespace, trailing newline.
inline std::string serialize_system(const TrinomialSystem& sys) {
  json j;
  j["n"] = sys.n();
  j["omega"] = matrix_to_json(sys.omega());
  j["sigma"] = matrix_to_json(sys.sigma());
  return j.dump() + "\n";
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("io", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// (re, im) with 17 significant digits
inline std::string format_complex(Complex z) {
  return "(" + format_double(z.real()) + ", " + format_double(z.imag()) + ")";
}

/// CSV field: quoted when it contains a comma or quote.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Parses "1.5", "-2i", "0.3+0.4i", "1e-3-2e-1i".
inline Complex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s += c;
  if (s.empty()) throw validation_error("io", "empty complex number");
  auto number = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(t, &pos);
    } catch (const std::exception&) {
      throw validation_error("io", "bad number '" + std::string(text) + "'");
    }
    if (pos != t.size()) throw validation_error("io", "bad number '" + std::string(text) + "'");
    return v;
  };
  if (s.back() != 'i' && s.back() != 'j') return {number(s), 0.0};
  s.pop_back();
  // split at the last sign that is not part of an exponent
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E')
      return {number(s.substr(0, k)), number(s.substr(k))};
  }
  return {0.0, number(s)};
}

inline ComplexVector parse_complex_list(std::string_view text) {
  ComplexVector out;
  std::string s(text);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
  if (out.empty()) throw validation_error("io", "empty list");
  return out;
}

inline std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (auto z : parse_complex_list(text)) {
    if (z.imag() != 0.0) throw validation_error("io", "expected real numbers in '" + std::string(text) + "'");
    out.push_back(z.real());
  }
  return out;
}

inline std::string rational_list(const RationalVector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + "]";
}

/// Row-major nested list of exact entries.
template <class T>
std::string matrix_text(const Matrix<T>& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) s += ",";
      if constexpr (std::is_same_v<T, Integer>)
        s += m(i, j).str();
      else
        s += to_string(m(i, j));
    }
    s += "]";
  }
  return s + "]";
}

}  // namespace trinom::io
