#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "jko/quadrature.hpp"

namespace jko {

/// One tensor cosine mode b_k(x) = c_k/(pi |k|_2) prod_i cos(k_i pi x_i) with
/// c_k = sqrt(2)^(number of nonzero components). Gradients of these modes form
/// an orthonormal system in L²(dx).
struct ModeIndex {
  int d = 2;
  std::array<int, 2> k = {0, 0};
};

struct IndexSet {
  int d = 2;
  int K = 0;
  std::vector<ModeIndex> modes;  // lexicographic order
  std::size_t size() const { return modes.size(); }
};

// All modes with |k|_inf <= K, k != 0; cardinality (K+1)^d - 1.
IndexSet make_index_set(int d, int K);

double basis_value(const ModeIndex& k, const double* x);
// g has d entries.
void basis_gradient(const ModeIndex& k, const double* x, double* g);
// Packed symmetric second derivatives: d=1 -> [11]; d=2 -> [11,12,22].
void basis_hessian(const ModeIndex& k, const double* x, double* H);
// Packed symmetric third derivatives: d=1 -> [111]; d=2 -> [111,112,122,222].
void basis_third(const ModeIndex& k, const double* x, double* T);

/// Dense per-point derivative tables; one n x M matrix per derivative
/// component, so mode combinations become matrix-vector products.
struct BasisTables {
  int d = 2;
  std::size_t n = 0;
  std::size_t M = 0;
  std::array<Eigen::MatrixXd, 2> G;   // gradient components
  std::array<Eigen::MatrixXd, 3> H;   // packed Hessian components
  bool has_third = false;
  std::array<Eigen::MatrixXd, 4> T3;  // packed third-derivative components

  int hcomp() const { return d == 1 ? 1 : 3; }
  int tcomp() const { return d == 1 ? 1 : 4; }
};

BasisTables build_tables(const IndexSet& I, const double* points, std::size_t n,
                         bool with_third = false, int threads = 1);

// Gram matrix of the mode gradients under the given quadrature; close to the
// identity when the quadrature resolves products of modes up to frequency 2K.
Eigen::MatrixXd gram_of_gradients(const IndexSet& I, const QuadratureGrid& fine);

// L²(dx) projection coefficients <v, grad b_k> of a vector field.
Eigen::VectorXd project(const std::function<void(const double*, double*)>& v,
                        const IndexSet& I, const QuadratureGrid& fine);

}  // namespace jko
