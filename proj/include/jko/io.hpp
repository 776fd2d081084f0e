#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace jko {

/// Seeded uniform generator with a fixed bit-to-double mapping, so streams are
/// identical across platforms and standard libraries.
struct Rng {
  std::mt19937_64 eng;

  explicit Rng(std::uint64_t seed) : eng(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

/// Writes a one-line header followed by rows of space-separated values in
/// scientific notation with 17 significant digits.
void write_columns(const std::string& path, const std::string& header,
                   const std::vector<std::vector<double>>& rows);

void write_entropy_series(const std::string& path, double tau,
                          const std::vector<double>& series);

}  // namespace jko
