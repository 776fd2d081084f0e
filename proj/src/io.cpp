#include "jko/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace jko {

void write_columns(const std::string& path, const std::string& header,
                   const std::vector<std::vector<double>>& rows) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr)
    throw std::runtime_error("write_columns: cannot open " + path + " for writing");
  std::fprintf(f, "%s\n", header.c_str());
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      std::fprintf(f, "%s%.16e", i == 0 ? "" : " ", row[i]);
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

void write_entropy_series(const std::string& path, double tau,
                          const std::vector<double>& series) {
  std::vector<std::vector<double>> rows;
  rows.reserve(series.size());
  for (std::size_t n = 0; n < series.size(); ++n)
    rows.push_back({static_cast<double>(n) * tau, series[n]});
  write_columns(path, "t entropy", rows);
}

}  // namespace jko
