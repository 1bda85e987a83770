#include "nilspec/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>

namespace nilspec {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || !std::isfinite(d)) throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
  return d;
}

std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long d = 0;
  try {
    if (!v.empty() && v[0] != '-') d = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ConfigError("config key '" + key + "': not a non-negative integer: '" + v + "'");
  return d;
}

}  // namespace

SGrid SGrid::parse(const std::string& spec) {
  SGrid g;
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(trim(p));
  if (parts.size() != 3) throw ConfigError("s-grid must look like lo:hi:n, got '" + spec + "'");
  g.lo = to_double("s", parts[0]);
  g.hi = to_double("s", parts[1]);
  g.n = static_cast<std::size_t>(to_uint("s", parts[2]));
  if (!(g.lo > 0.0) || !(g.hi > g.lo) || g.n < 2)
    throw ConfigError("s-grid must satisfy 0 < lo < hi and n >= 2, got '" + spec + "'");
  return g;
}

std::vector<double> SGrid::values() const { return geometric_grid(lo, hi, n); }

std::string SGrid::to_string() const { return fmt(lo) + ":" + fmt(hi) + ":" + std::to_string(n); }

void RunConfig::validate() const {
  if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
  if (!(points_per_wavelength > 0.0)) throw ConfigError("points_per_wavelength must be positive");
  if (!(dual_epsilon > 0.0)) throw ConfigError("dual_epsilon must be positive");
  if (max_points < 3) throw ConfigError("max_points must be at least 3");
  if (threads == 0) throw ConfigError("threads must be at least 1");
  if (!(s_grid.lo > 0.0) || !(s_grid.hi > s_grid.lo) || s_grid.n < 2)
    throw ConfigError("s-grid must be strictly increasing with at least two points");
  for (std::size_t n : nodes)
    if (n == 0) throw ConfigError("quadrature node counts must be positive");
}

SolverConfig RunConfig::solver() const {
  SolverConfig s;
  s.kappa = kappa;
  s.tol = tol;
  s.points_per_wavelength = points_per_wavelength;
  s.max_points = max_points;
  return s;
}

QuadratureSpec RunConfig::quadrature() const {
  QuadratureSpec q = default_quadrature(group);
  if (!nodes.empty()) {
    if (nodes.size() == 1)
      q.nodes.assign(q.nodes.size(), nodes[0]);
    else if (nodes.size() == q.nodes.size())
      q.nodes = nodes;
    else
      throw ConfigError("nodes: give one count or one per axis (" + std::to_string(q.nodes.size()) + ")");
  }
  q.rule = rule;
  return q;
}

std::map<std::string, std::string> RunConfig::entries() const {
  std::map<std::string, std::string> m;
  m["group"] = std::string(group_name(group));
  if (!command.empty()) m["command"] = command;
  m["s"] = s_grid.to_string();
  std::string ns;
  for (std::size_t k = 0; k < nodes.size(); ++k) ns += (k ? "," : "") + std::to_string(nodes[k]);
  m["nodes"] = ns.empty() ? "default" : ns;
  m["rule"] = quad_rule_name(rule);
  m["method"] = trace_method_name(method);
  m["kappa"] = fmt(kappa);
  m["tol"] = fmt(tol);
  m["points_per_wavelength"] = fmt(points_per_wavelength);
  m["max_points"] = std::to_string(max_points);
  m["dual_epsilon"] = fmt(dual_epsilon);
  m["output"] = output.empty() ? "-" : output;
  m["threads"] = std::to_string(threads);
  m["seed"] = std::to_string(seed);
  return m;
}

std::string RunConfig::provenance(const std::string& prefix) const {
  std::ostringstream os;
  for (const auto& [k, v] : entries()) os << prefix << k << " = " << v << '\n';
  return os.str();
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = line;
    bool quoted = false;
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (body[i] == '"') quoted = !quoted;
      if (body[i] == '#' && !quoted) {
        body.resize(i);
        break;
      }
    }
    body = trim(body);
    if (body.empty() || body.front() == '[') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(body.substr(0, eq));
    std::string val = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"') val = val.substr(1, val.size() - 2);
    kv[key] = val;
  }
  return kv;
}

void apply_entries(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) {
    if (k == "group") {
      try {
        cfg.group = parse_group(v);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
    } else if (k == "command") {
      cfg.command = v;
    } else if (k == "s" || k == "s_grid") {
      cfg.s_grid = SGrid::parse(v);
    } else if (k == "nodes") {
      cfg.nodes.clear();
      if (v == "default") continue;
      std::stringstream ss(v);
      for (std::string p; std::getline(ss, p, ',');) cfg.nodes.push_back(static_cast<std::size_t>(to_uint(k, trim(p))));
    } else if (k == "rule") {
      try {
        cfg.rule = parse_quad_rule(v);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
    } else if (k == "method") {
      try {
        cfg.method = parse_trace_method(v);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
    } else if (k == "kappa") {
      cfg.kappa = to_double(k, v);
    } else if (k == "tol") {
      cfg.tol = to_double(k, v);
    } else if (k == "points_per_wavelength") {
      cfg.points_per_wavelength = to_double(k, v);
    } else if (k == "max_points" || k == "max_n") {
      cfg.max_points = static_cast<std::size_t>(to_uint(k, v));
    } else if (k == "dual_epsilon") {
      cfg.dual_epsilon = to_double(k, v);
    } else if (k == "output") {
      cfg.output = v == "-" ? "" : v;
    } else if (k == "threads") {
      cfg.threads = static_cast<unsigned>(to_uint(k, v));
    } else if (k == "seed") {
      cfg.seed = to_uint(k, v);
    } else {
      throw ConfigError("unknown config key '" + k + "'");
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  apply_entries(cfg, parse_key_values(in));
}

std::optional<std::string> config_path_from_env() {
  const char* p = std::getenv("NILSPEC_CONFIG");
  if (p == nullptr || *p == '\0') return std::nullopt;
  return std::string(p);
}

}  // namespace nilspec
