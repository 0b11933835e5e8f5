#include "shockdev/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/json_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "shockdev/errors.hpp"

extern char** environ;

namespace shockdev {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"eos", {"kind", "k", "table", "rho_ref", "h_ref"}},
      {"cusp", {"kappa", "lambda", "alpha0", "beta0", "r0", "alpha_ddot0", "dbeta_dt0", "xi"}},
      {"model", {"degree"}},
      {"solver",
       {"eps", "n", "tol_inner", "tol_outer", "max_inner", "max_outer", "max_retries", "v_floor",
        "seed_y_slope"}},
      {"output", {"grid_csv", "shock_csv", "report"}},
      {"check", {"seed"}},
  };
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value))
    throw ConfigError("'" + key + "' is not a finite number: '" + text + "'");
  return value;
}

long long to_integer(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("'" + key + "' is not an integer: '" + text + "'");
  return value;
}

int to_int(const std::string& key, const std::string& text) {
  const long long v = to_integer(key, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError("'" + key + "' is out of range");
  return static_cast<int>(v);
}

// SHOCKDEV_SOLVER_EPS -> ("solver", "eps"). Section names contain no
// underscore, so the first one separates section from key.
void apply_environment(pt::ptree& tree, const EnvMap& env) {
  const std::string prefix = "SHOCKDEV_";
  for (const auto& [name, value] : env) {
    if (name.rfind(prefix, 0) != 0) continue;
    const std::string rest = lower(name.substr(prefix.size()));
    const auto sep = rest.find('_');
    if (sep == std::string::npos) throw ConfigError("environment override '" + name + "' names no key");
    const std::string section = rest.substr(0, sep);
    const std::string key = rest.substr(sep + 1);
    const auto it = schema().find(section);
    if (it == schema().end() || !it->second.count(key))
      throw ConfigError("unknown environment override '" + name + "'");
    tree.put(pt::ptree::path_type(section + "/" + key, '/'), value);
  }
}

SolverConfig from_tree(const pt::ptree& tree) {
  SolverConfig cfg;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty() && body.empty())
      throw ConfigError("top-level key '" + section + "' is outside any section");
    if (section == "overrides") {
      for (const auto& [key, value] : body) cfg.overrides[key] = to_double(key, value.data());
      continue;
    }
    const auto known = schema().find(section);
    if (known == schema().end()) throw ConfigError("unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
      if (!known->second.count(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
      if (!node.empty()) throw ConfigError("'" + section + "." + key + "' must be a scalar");
    }
  }

  auto get = [&](const std::string& section, const std::string& key) -> std::optional<std::string> {
    auto node = tree.get_child_optional(pt::ptree::path_type(section + "/" + key, '/'));
    if (!node) return std::nullopt;
    return node->data();
  };
  auto num = [&](const char* section, const char* key, double& out) {
    if (auto s = get(section, key)) out = to_double(std::string(section) + "." + key, *s);
  };
  auto integer = [&](const char* section, const char* key, int& out) {
    if (auto s = get(section, key)) out = to_int(std::string(section) + "." + key, *s);
  };
  auto text = [&](const char* section, const char* key, std::string& out) {
    if (auto s = get(section, key)) out = trim(*s);
  };

  text("eos", "kind", cfg.eos.kind);
  cfg.eos.kind = lower(cfg.eos.kind);
  num("eos", "k", cfg.eos.k);
  text("eos", "table", cfg.eos.table);
  num("eos", "rho_ref", cfg.eos.rho_ref);
  num("eos", "h_ref", cfg.eos.h_ref);

  num("cusp", "kappa", cfg.cusp.kappa);
  num("cusp", "lambda", cfg.cusp.lambda);
  num("cusp", "alpha0", cfg.cusp.alpha0);
  num("cusp", "beta0", cfg.cusp.beta0);
  num("cusp", "r0", cfg.cusp.r0);
  num("cusp", "alpha_ddot0", cfg.cusp.alpha_ddot0);
  num("cusp", "dbeta_dt0", cfg.cusp.dbeta_dt0);
  num("cusp", "xi", cfg.cusp.xi);

  integer("model", "degree", cfg.degree);

  num("solver", "eps", cfg.eps);
  integer("solver", "n", cfg.n);
  num("solver", "tol_inner", cfg.tol_inner);
  num("solver", "tol_outer", cfg.tol_outer);
  integer("solver", "max_inner", cfg.max_inner);
  integer("solver", "max_outer", cfg.max_outer);
  integer("solver", "max_retries", cfg.max_retries);
  num("solver", "v_floor", cfg.v_floor);
  num("solver", "seed_y_slope", cfg.seed_y_slope);

  text("output", "grid_csv", cfg.grid_csv);
  text("output", "shock_csv", cfg.shock_csv);
  text("output", "report", cfg.report);

  if (auto s = get("check", "seed")) {
    const long long seed = to_integer("check.seed", *s);
    if (seed < 0) throw ConfigError("check.seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  return cfg;
}

}  // namespace

EosPtr SolverConfig::make_eos() const {
  if (eos.kind == "radiation") return std::make_shared<RadiationEos>(eos.rho_ref, eos.h_ref);
  if (eos.kind == "poly2") return std::make_shared<Poly2Eos>(eos.k, eos.rho_ref, eos.h_ref);
  if (eos.kind == "table") {
    if (eos.table.empty()) throw ConfigError("eos.kind = table needs eos.table");
    return TableEos::from_file(eos.table, eos.rho_ref, eos.h_ref);
  }
  throw ConfigError("unknown eos.kind '" + eos.kind + "'");
}

ShockConfig SolverConfig::shock_config() const {
  ShockConfig sc;
  sc.cusp = cusp;
  sc.eos = make_eos();
  sc.degree = degree;
  sc.overrides = overrides;
  sc.eps = eps;
  sc.n = n;
  sc.inner.tol_inner = tol_inner;
  sc.inner.max_iter = max_inner;
  sc.inner.v_floor_fraction = v_floor;
  sc.tol_outer = tol_outer;
  sc.max_outer = max_outer;
  sc.max_retries = max_retries;
  sc.seed_y_slope = seed_y_slope;
  return sc;
}

void validate(const SolverConfig& cfg) {
  const double mach = std::numeric_limits<double>::epsilon();
  if (!(cfg.eps > 0)) throw ConfigError("solver.eps must be positive");
  if (cfg.n < 4) throw ConfigError("solver.n must be at least 4");
  if (!(cfg.tol_inner > mach)) throw ConfigError("solver.tol_inner must exceed machine epsilon");
  if (!(cfg.tol_outer > mach)) throw ConfigError("solver.tol_outer must exceed machine epsilon");
  if (cfg.max_inner < 1 || cfg.max_outer < 1) throw ConfigError("iteration caps must be positive");
  if (cfg.max_retries < 0) throw ConfigError("solver.max_retries must be non-negative");
  if (!(cfg.v_floor >= 0)) throw ConfigError("solver.v_floor must be non-negative");
  if (cfg.degree < 4) throw ConfigError("model.degree must be at least 4");
  if (!(cfg.cusp.kappa > 0) || !(cfg.cusp.lambda > 0)) throw ConfigError("cusp.kappa and cusp.lambda must be positive");
  if (cfg.eos.kind != "radiation" && cfg.eos.kind != "poly2" && cfg.eos.kind != "table")
    throw ConfigError("unknown eos.kind '" + cfg.eos.kind + "'");
  for (const std::string* name : {&cfg.grid_csv, &cfg.shock_csv, &cfg.report})
    if (name->empty()) throw ConfigError("output file names must be non-empty");
  try {
    cfg.make_eos();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("equation of state rejected: ") + e.what());
  }
}

SolverConfig parse_config(std::istream& is, ConfigFormat format, const EnvMap& env) {
  pt::ptree tree;
  try {
    if (format == ConfigFormat::json)
      pt::read_json(is, tree);
    else
      pt::read_ini(is, tree);
  } catch (const pt::file_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  apply_environment(tree, env);
  SolverConfig cfg = from_tree(tree);
  validate(cfg);
  return cfg;
}

SolverConfig load_config(const std::string& path, const EnvMap& env) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string body = buf.str();
  const auto first = body.find_first_not_of(" \t\r\n");
  const bool json = (path.size() >= 5 && path.substr(path.size() - 5) == ".json") ||
                    (first != std::string::npos && body[first] == '{');
  std::istringstream is(body);
  return parse_config(is, json ? ConfigFormat::json : ConfigFormat::ini, env);
}

SolverConfig load_config(const std::string& path) { return load_config(path, process_environment()); }

EnvMap process_environment() {
  EnvMap env;
  for (char** e = environ; e && *e; ++e) {
    const std::string entry(*e);
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    if (entry.rfind("SHOCKDEV_", 0) == 0) env[entry.substr(0, eq)] = entry.substr(eq + 1);
  }
  return env;
}

}  // namespace shockdev
