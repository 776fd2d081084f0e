#include "jko/config.hpp"

#include <cstdlib>
#include <sstream>

namespace jko {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, int line, const std::string& key) {
  const char* begin = v.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    fail(line, "malformed number '" + v + "' for key '" + key + "'");
  return x;
}

long long parse_int(const std::string& v, int line, const std::string& key) {
  const char* begin = v.c_str();
  char* end = nullptr;
  const long long x = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0')
    fail(line, "malformed integer '" + v + "' for key '" + key + "'");
  return x;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  std::string cur;
  std::stringstream ss(v);
  while (std::getline(ss, cur, ',')) parts.push_back(trim(cur));
  return parts;
}

void apply_pair(RunConfig& cfg, int line, const std::string& key, const std::string& val) {
  if (key.empty()) fail(line, "empty key");
  if (val.empty()) fail(line, "empty value for key '" + key + "'");

  if (key == "d") {
    cfg.d = static_cast<int>(parse_int(val, line, key));
    if (cfg.d != 1 && cfg.d != 2) fail(line, "d must be 1 or 2");
  } else if (key == "m") {
    cfg.m = parse_double(val, line, key);
    if (cfg.m <= 0.0) fail(line, "m must be positive");
  } else if (key == "K") {
    cfg.K = static_cast<int>(parse_int(val, line, key));
    if (cfg.K < 1) fail(line, "K must be at least 1");
  } else if (key == "K1") {
    cfg.quad_cells = static_cast<int>(parse_int(val, line, key));
    if (cfg.quad_cells < 1) fail(line, "K1 must be at least 1");
  } else if (key == "K2") {
    cfg.quad_points = static_cast<int>(parse_int(val, line, key));
    if (cfg.quad_points < 1) fail(line, "K2 must be at least 1");
  } else if (key == "tau") {
    cfg.tau = parse_double(val, line, key);
    if (cfg.tau <= 0.0) fail(line, "tau must be positive");
  } else if (key == "T") {
    cfg.T = parse_double(val, line, key);
    if (cfg.T <= 0.0) fail(line, "T must be positive");
  } else if (key == "L") {
    cfg.L = static_cast<int>(parse_int(val, line, key));
    if (cfg.L < 3) fail(line, "L must be at least 3");
  } else if (key == "tol") {
    cfg.tol = parse_double(val, line, key);
    if (cfg.tol <= 0.0) fail(line, "tol must be positive");
  } else if (key == "potential") {
    if (val != "zero" && val != "quadratic" && val != "exp1")
      fail(line, "potential must be zero, quadratic, or exp1");
    cfg.potential = val;
  } else if (key == "lambda") {
    cfg.lambda = parse_double(val, line, key);
  } else if (key == "seed") {
    const long long s = parse_int(val, line, key);
    if (s < 0) fail(line, "seed must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  } else if (key == "steps") {
    cfg.steps = static_cast<int>(parse_int(val, line, key));
    if (cfg.steps < 1) fail(line, "steps must be at least 1");
  } else if (key == "Ks") {
    cfg.Ks.clear();
    for (const auto& p : split_list(val)) {
      const int k = static_cast<int>(parse_int(p, line, key));
      if (k < 1) fail(line, "Ks entries must be at least 1");
      cfg.Ks.push_back(k);
    }
    if (cfg.Ks.empty()) fail(line, "Ks must not be empty");
  } else if (key == "snapshot_times") {
    cfg.snapshot_times.clear();
    for (const auto& p : split_list(val)) {
      const double t = parse_double(p, line, key);
      if (t < 0.0) fail(line, "snapshot times must be nonnegative");
      cfg.snapshot_times.push_back(t);
    }
  } else if (key == "out") {
    cfg.out = val;
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(parse_int(val, line, key));
    if (cfg.threads < 1) fail(line, "threads must be at least 1");
  } else {
    fail(line, "unknown key '" + key + "'");
  }
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string stripped = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (stripped.empty()) continue;

    // Several whitespace-separated pairs may share a line, but only when every
    // token is itself key=value; "K = 12" and "Ks = 4, 8, 12" keep the
    // one-pair-per-line reading.
    std::vector<std::string> tokens;
    {
      std::stringstream ts(stripped);
      std::string t;
      while (ts >> t) tokens.push_back(t);
    }
    bool multi = tokens.size() > 1;
    for (const auto& t : tokens)
      if (t.find('=') == std::string::npos) multi = false;

    if (multi) {
      for (const auto& t : tokens) {
        const auto eq = t.find('=');
        apply_pair(cfg, line, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
      }
    } else {
      const auto eq = stripped.find('=');
      if (eq == std::string::npos) fail(line, "expected key=value, got '" + stripped + "'");
      apply_pair(cfg, line, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
  }
  if (cfg.potential == "exp1" && cfg.d != 2)
    throw ConfigError("config: potential exp1 requires d=2");
  return cfg;
}

}  // namespace jko
