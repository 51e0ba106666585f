#include <fstream>
#include <sstream>

#include "rootarr/realizer.hpp"

namespace rootarr {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InvalidParams("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long long d = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InvalidParams("config key '" + key + "': expected an integer, got '" + v + "'");
  }
}

std::vector<double> parse_list(const std::string& key, std::string v) {
  if (!v.empty() && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  if (out.empty()) throw InvalidParams("config key '" + key + "': empty list");
  return out;
}

}  // namespace

void apply_config_entry(SolverConfig& cfg, const std::string& key, const std::string& raw) {
  std::string value = trim(raw);
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
  auto positive = [&](double x) {
    if (!(x > 0)) throw InvalidParams("config key '" + key + "' must be positive");
    return x;
  };
  if (key == "N") {
    cfg.N = parse_double(key, value);
    if (!(cfg.N > 1)) throw InvalidParams("N must exceed 1");
  } else if (key == "damping") {
    cfg.damping = parse_double(key, value);
    if (!(cfg.damping > 0 && cfg.damping <= 1)) throw InvalidParams("damping must lie in (0, 1]");
  } else if (key == "eps_fp") {
    cfg.eps_fp = positive(parse_double(key, value));
  } else if (key == "eps_eq") {
    cfg.eps_eq = positive(parse_double(key, value));
  } else if (key == "eps_theta") {
    cfg.eps_theta = positive(parse_double(key, value));
  } else if (key == "t_floor") {
    cfg.t_floor = positive(parse_double(key, value));
  } else if (key == "multistart") {
    cfg.multistart = static_cast<int>(positive(static_cast<double>(parse_int(key, value))));
  } else if (key == "max_iterations") {
    cfg.max_iterations = static_cast<int>(positive(static_cast<double>(parse_int(key, value))));
  } else if (key == "fallback_starts") {
    cfg.fallback_starts = static_cast<int>(positive(static_cast<double>(parse_int(key, value))));
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "b_schedule") {
    cfg.b_schedule = parse_list(key, value);
  } else if (key == "v_factors") {
    cfg.v_factors = parse_list(key, value);
  } else if (key == "a_schedule") {
    cfg.a_schedule = parse_list(key, value);
  } else if (key == "cond_c") {
    if (value == "always") cfg.cond_c = CondCMode::Always;
    else if (value == "hyperbolic-only") cfg.cond_c = CondCMode::HyperbolicOnly;
    else throw InvalidParams("cond_c must be 'always' or 'hyperbolic-only'");
  } else {
    throw InvalidParams("unknown config key '" + key + "'");
  }
}

SolverConfig load_config(const std::string& path, SolverConfig base) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidParams(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    apply_config_entry(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

}  // namespace rootarr
