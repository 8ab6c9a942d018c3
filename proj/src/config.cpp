#include "qrad/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "qrad/errors.hpp"

namespace qrad {

namespace {

using nlohmann::json;

const char* const kDomains[] = {"disk", "superellipse", "hexagon", "square"};

json to_j(const ExperimentConfig& c) {
  json j;
  j["pair"] = {{"domain", c.pair.domain}, {"A", {c.pair.A.a, c.pair.A.b, c.pair.A.c, c.pair.A.d}}};
  j["deltas"] = c.deltas;
  j["grid"] = {{"N", c.grid.N}, {"L", c.grid.L}, {"center", {c.grid.center.x, c.grid.center.y}}};
  j["family"] = {{"name", c.family.name}, {"random_members", c.family.random_members}};
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["params"] = json::object();
  for (const auto& [k, v] : c.params) j["params"][k] = v;
  return j;
}

template <class T>
void read(const json& j, const char* key, T& dst, std::vector<std::string>& errors, const std::string& path) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    errors.push_back(path + key + ": wrong type");
  }
}

}  // namespace

double ExperimentConfig::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() || it->second.empty() ? fallback : it->second.front();
}

std::vector<double> ExperimentConfig::param_list(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  const Mat2 &p = a.pair.A, &q = b.pair.A;
  return a.pair.domain == b.pair.domain && p.a == q.a && p.b == q.b && p.c == q.c && p.d == q.d &&
         a.deltas == b.deltas && a.grid.N == b.grid.N && a.grid.L == b.grid.L && a.grid.center.x == b.grid.center.x &&
         a.grid.center.y == b.grid.center.y && a.family.name == b.family.name &&
         a.family.random_members == b.family.random_members && a.seed == b.seed && a.out == b.out &&
         a.params == b.params;
}

void validate(const ExperimentConfig& c) {
  std::vector<std::string> errors;
  bool known = false;
  for (const char* d : kDomains) known = known || c.pair.domain == d;
  if (!known) errors.push_back("pair.domain: unknown domain '" + c.pair.domain + "'");
  const Mat2& A = c.pair.A;
  if (!(std::isfinite(A.a) && std::isfinite(A.b) && std::isfinite(A.c) && std::isfinite(A.d)))
    errors.push_back("pair.A: entries must be finite");
  if (c.deltas.empty()) errors.push_back("deltas: must not be empty");
  for (double d : c.deltas)
    if (!(d > 0.0 && d < 0.25)) {
      errors.push_back("deltas: every value must lie in (0, 1/4)");
      break;
    }
  if (c.grid.N < 8 || (c.grid.N & (c.grid.N - 1)) != 0) errors.push_back("grid.N: must be a power of two >= 8");
  if (!(c.grid.L > 0.0 && std::isfinite(c.grid.L))) errors.push_back("grid.L: must be positive");
  if (c.family.name != "std" && c.family.name != "gaussian" && c.family.name != "random" && c.family.name != "focusing")
    errors.push_back("family.name: must be std, gaussian, random or focusing");
  if (c.family.random_members < 0) errors.push_back("family.random_members: must be nonnegative");
  if (c.out.empty()) errors.push_back("out: must not be empty");
  for (const auto& [k, v] : c.params)
    for (double x : v)
      if (!std::isfinite(x)) {
        errors.push_back("params." + k + ": values must be finite");
        break;
      }
  if (errors.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& e : errors) msg += "\n  " + e;
  fail(ErrorKind::Configuration, msg);
}

std::string to_json(const ExperimentConfig& c) { return to_j(c).dump(2); }

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Configuration, std::string("invalid configuration: not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::Configuration, "invalid configuration: top level must be an object");
  ExperimentConfig c;
  std::vector<std::string> errors;
  for (const auto& [k, v] : j.items())
    if (k != "pair" && k != "deltas" && k != "grid" && k != "family" && k != "seed" && k != "out" && k != "params")
      errors.push_back(k + ": unknown field");
  if (j.contains("pair")) {
    const json& p = j["pair"];
    read(p, "domain", c.pair.domain, errors, "pair.");
    if (p.contains("A")) {
      std::vector<double> a;
      read(p, "A", a, errors, "pair.");
      if (a.size() == 4) c.pair.A = Mat2(a[0], a[1], a[2], a[3]);
      else errors.push_back("pair.A: expected four entries in row-major order");
    }
  }
  read(j, "deltas", c.deltas, errors, "");
  if (j.contains("grid")) {
    const json& g = j["grid"];
    read(g, "N", c.grid.N, errors, "grid.");
    read(g, "L", c.grid.L, errors, "grid.");
    if (g.contains("center")) {
      std::vector<double> v;
      read(g, "center", v, errors, "grid.");
      if (v.size() == 2) c.grid.center = {v[0], v[1]};
      else errors.push_back("grid.center: expected two entries");
    }
  }
  if (j.contains("family")) {
    read(j["family"], "name", c.family.name, errors, "family.");
    read(j["family"], "random_members", c.family.random_members, errors, "family.");
  }
  read(j, "seed", c.seed, errors, "");
  read(j, "out", c.out, errors, "");
  if (j.contains("params")) {
    if (!j["params"].is_object()) {
      errors.push_back("params: must be an object");
    } else {
      for (const auto& [k, v] : j["params"].items()) {
        try {
          c.params[k] = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
        } catch (const json::exception&) {
          errors.push_back("params." + k + ": expected a number or a list of numbers");
        }
      }
    }
  }
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    fail(ErrorKind::Configuration, msg);
  }
  c.family.seed = c.seed;
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Configuration, "cannot read configuration file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string text = to_j(c).dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int k = 0; k < len; ++k) os << std::hex << std::setw(2) << std::setfill('0') << int(md[k]);
  return os.str();
}

CompatiblePair make_pair(const PairSpec& spec) {
  return check_compatibility(builtin_domain(spec.domain), DilationGroup(spec.A));
}

}  // namespace qrad
