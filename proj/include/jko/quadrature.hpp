#pragma once

#include <cstddef>
#include <vector>

#include "jko/model.hpp"

namespace jko {

/// Composite tensor-product Gauss-Legendre grid on the unit cube: K1 cells per
/// direction, K2 points per cell. Nodes are strictly interior. Also stores the
/// reference density ubar sampled at the nodes.
struct QuadratureGrid {
  int d = 2;
  int K1 = 1;
  int K2 = 2;
  std::vector<double> node;    // size() * d, interleaved coordinates
  std::vector<double> weight;  // sums to 1
  std::vector<double> ubar;

  std::size_t size() const { return weight.size(); }
  const double* x(std::size_t k) const { return node.data() + k * d; }
};

// Gauss-Legendre rule on [-1,1] for any n >= 1 (Newton on Legendre roots).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

QuadratureGrid build_gauss_grid(int d, int K1, int K2, const ScalarField& ubar);

double integrate(const QuadratureGrid& g, const std::vector<double>& values);

}  // namespace jko
