#include "dirprec/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace dirprec {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const std::string v = trim(value);
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("invalid value '" + value + "' for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "off" || value == "0" || value == "no") return false;
  throw ConfigError("invalid boolean '" + value + "' for " + key);
}

}  // namespace

Mode parse_mode(const std::string& s) {
  if (s == "solve") return Mode::solve;
  if (s == "verify") return Mode::verify;
  if (s == "bench") return Mode::bench;
  if (s == "ablate") return Mode::ablate;
  throw ConfigError("unknown mode '" + s + "'");
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::solve: return "solve";
    case Mode::verify: return "verify";
    case Mode::bench: return "bench";
    case Mode::ablate: return "ablate";
  }
  return "?";
}

PrecondMode parse_precond(const std::string& s) {
  if (s == "on") return PrecondMode::on;
  if (s == "off") return PrecondMode::off;
  if (s == "both") return PrecondMode::both;
  throw ConfigError("unknown precond setting '" + s + "' (on|off|both)");
}

std::string to_string(PrecondMode m) {
  return m == PrecondMode::on ? "on" : (m == PrecondMode::off ? "off" : "both");
}

void set_config_value(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  try {
    if (key == "shape") {
      cfg.shapes.clear();
      for (const auto& s : split_list(value)) cfg.shapes.push_back(parse_shape(s));
    } else if (key == "radius") {
      cfg.shape_params.radius = parse_number<double>(key, value);
    } else if (key == "semi_x") {
      cfg.shape_params.semi_x = parse_number<double>(key, value);
    } else if (key == "semi_y") {
      cfg.shape_params.semi_y = parse_number<double>(key, value);
    } else if (key == "kite_scale") {
      cfg.shape_params.kite_scale = parse_number<double>(key, value);
    } else if (key == "q") {
      cfg.q.clear();
      for (const auto& s : split_list(value)) cfg.q.push_back(parse_number<int>(key, s));
    } else if (key == "p") {
      cfg.p = parse_number<int>(key, value);
    } else if (key == "bc") {
      cfg.bcs.clear();
      for (const auto& s : split_list(value)) cfg.bcs.push_back(parse_bc(s));
    } else if (key == "eta_factor") {
      cfg.eta_factor = parse_number<double>(key, value);
    } else if (key == "m_l") {
      cfg.m_l = parse_number<int>(key, value);
    } else if (key == "m_c") {
      cfg.m_c = parse_number<int>(key, value);
    } else if (key == "tau") {
      cfg.tau = parse_number<double>(key, value);
    } else if (key == "tol") {
      cfg.tol = parse_number<double>(key, value);
    } else if (key == "restart") {
      cfg.restart = parse_number<int>(key, value);
    } else if (key == "maxit") {
      cfg.max_iterations = parse_number<int>(key, value);
    } else if (key == "precond") {
      cfg.precond = parse_precond(value);
    } else if (key == "mode") {
      cfg.mode = parse_mode(value);
    } else if (key == "output" || key == "out") {
      cfg.output = value;
    } else if (key == "seed") {
      cfg.seed = parse_number<unsigned long>(key, value);
    } else if (key == "diagonal") {
      if (value == "flat") {
        cfg.exact_diagonal = false;
      } else if (value == "exact") {
        cfg.exact_diagonal = true;
      } else {
        throw ConfigError("invalid value '" + value + "' for diagonal (flat|exact)");
      }
    } else if (key == "zero_e") {
      cfg.zero_e = parse_bool(key, value);
    } else if (key == "dense_limit") {
      cfg.dense_limit = parse_number<int>(key, value);
    } else if (key == "matvec_repeats") {
      cfg.matvec_repeats = parse_number<int>(key, value);
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (shapes.empty()) fail("shape: at least one shape required");
  if (bcs.empty()) fail("bc: at least one boundary condition required");
  if (q.empty()) fail("q: at least one level required");
  for (int v : q)
    if (v < 2 || v > 12) fail("q: values must lie in [2, 12]");
  if (p < 4) fail("p: must be at least 4");
  if (p % 2 != 0) fail("p: must be even");
  if (!(eta_factor > 0)) fail("eta_factor: must be positive");
  if (m_l != 2 && m_l != 4) fail("m_l: must be 2 or 4");
  for (int v : q)
    if ((1 << v) < m_l) fail("q: 2^q must be at least m_l");
  if (m_c < 1) fail("m_c: must be positive");
  if (!(tau >= 1)) fail("tau: must be at least 1");
  if (!(tol > 0 && tol < 1)) fail("tol: must lie in (0, 1)");
  if (restart < 1) fail("restart: must be positive");
  if (max_iterations < 1) fail("maxit: must be positive");
  if (matvec_repeats < 1) fail("matvec_repeats: must be positive");
  if (!(shape_params.radius > 0 && shape_params.semi_x > 0 && shape_params.semi_y > 0 &&
        shape_params.kite_scale > 0))
    fail("shape parameters must be positive");
}

RunConfig parse_config(const std::string& text, const std::string& origin, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    try {
      set_config_value(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path, std::move(base));
}

}  // namespace dirprec
