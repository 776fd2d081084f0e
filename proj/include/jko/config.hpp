#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace jko {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Settings shared by all CLI commands; parsed from key=value text with '#'
/// comments. Every parse failure names the offending line.
struct RunConfig {
  int d = 2;
  double m = 2.0;
  int K = 8;
  int quad_cells = 0;   // key K1; 0 means 2K
  int quad_points = 0;  // key K2; 0 means the per-command default
  double tau = 5e-4;
  double T = 0.01;
  int L = 200;
  double tol = 1e-8;
  std::string potential = "exp1";  // zero | quadratic | exp1
  double lambda = 10.0;            // quadratic well strength
  std::uint64_t seed = 42;
  int steps = 100;  // contractivity step count
  std::vector<int> Ks = {4, 8, 12};
  std::vector<double> snapshot_times = {0.0, 2.5e-3, 4e-3, 5e-2};
  std::string out;
  int threads = 1;
};

RunConfig parse_config(const std::string& text);

}  // namespace jko
