#include "system_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "turingrad/errors.hpp"
#include "turingrad/radialpde.hpp"

namespace turingrad::cli {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key) {
  if (!obj.is_object()) throw ParseError("system document must be a JSON object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing key \"" + key + "\"");
  return *it;
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ParseError("field " + field + " must be a number");
  return v.get<double>();
}

const json& array_of(const json& v, std::size_t len, const std::string& field) {
  if (!v.is_array() || v.size() != len) {
    throw ParseError("field " + field + " must be an array of length " + std::to_string(len));
  }
  return v;
}

Mat2 matrix(const json& v, const std::string& field) {
  array_of(v, 2, field);
  Mat2 m;
  for (int i = 0; i < 2; ++i) {
    const std::string row = field + "[" + std::to_string(i) + "]";
    array_of(v[i], 2, row);
    for (int j = 0; j < 2; ++j) m(i, j) = number(v[i][j], row + "[" + std::to_string(j) + "]");
  }
  return m;
}

json matrix_json(const Mat2& m) {
  return json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
}

} // namespace

ParsedSystem parse_system_json(const json& doc, std::optional<double> nu_override) {
  ParsedSystem out;
  if (doc.is_object() && doc.contains("model")) {
    const json& model = doc["model"];
    if (!model.is_string() || model.get<std::string>() != "swift_hohenberg") {
      throw ParseError("field model: only \"swift_hohenberg\" is known");
    }
    const double nu = nu_override ? *nu_override : number(require(doc, "nu"), "nu");
    if (!std::isfinite(nu)) throw ValidationError("field nu is not finite");
    out.system = sh_as_rd(nu);
    out.nu = nu;
    return out;
  }
  if (nu_override) throw ValidationError("--nu applies only to swift_hohenberg model documents");

  RDSystem& s = out.system;
  s.M1 = matrix(require(doc, "M1"), "M1");
  s.M2 = matrix(require(doc, "M2"), "M2");
  const json& q = array_of(require(doc, "Q"), 2, "Q");
  const json& c = array_of(require(doc, "C"), 2, "C");
  for (int k = 0; k < 2; ++k) {
    const std::string qk = "Q[" + std::to_string(k) + "]";
    s.Q[k] = matrix(q[k], qk);
    const std::string ck = "C[" + std::to_string(k) + "]";
    array_of(c[k], 2, ck);
    for (int i = 0; i < 2; ++i) s.C[k][i] = matrix(c[k][i], ck + "[" + std::to_string(i) + "]");
  }
  if (!s.all_finite()) throw ValidationError("system contains non-finite entries");
  out.symmetrization = s.symmetrize();
  return out;
}

LoadedSystem parse_system_file(const std::string& path, std::optional<double> nu_override,
                               std::ostream& warn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open system file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const json::out_of_range& e) {
    throw ValidationError(path + ": non-finite number (" + e.what() + ")");
  }
  ParsedSystem parsed = parse_system_json(doc, nu_override);
  if (parsed.symmetrization > 0.0) {
    warn << "warning: " << path << ": asymmetric Q/C symmetrised (largest change "
         << parsed.symmetrization << ")\n";
  }
  LoadedSystem out;
  out.system = parsed.system;
  out.nu = parsed.nu;
  out.source = path;
  std::string hashed = text;
  if (nu_override) hashed += "\nnu=" + std::to_string(*nu_override);
  out.hash = hash_hex(fnv1a(hashed));
  return out;
}

LoadedSystem builtin_system(double nu) {
  if (!std::isfinite(nu)) throw ValidationError("nu is not finite");
  LoadedSystem out;
  out.system = sh_as_rd(nu);
  out.nu = nu;
  out.source = "builtin:swift_hohenberg";
  out.hash = hash_hex(fnv1a(system_to_json(out.system).dump()));
  return out;
}

json system_to_json(const RDSystem& s) {
  json doc;
  doc["M1"] = matrix_json(s.M1);
  doc["M2"] = matrix_json(s.M2);
  doc["Q"] = json::array({matrix_json(s.Q[0]), matrix_json(s.Q[1])});
  json c = json::array();
  for (int k = 0; k < 2; ++k) c.push_back(json::array({matrix_json(s.C[k][0]), matrix_json(s.C[k][1])}));
  doc["C"] = c;
  return doc;
}

void write_system_file(const std::string& path, const RDSystem& system) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << system_to_json(system).dump(2) << '\n';
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace turingrad::cli
