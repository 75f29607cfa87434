#pragma once

#include "dgtd/dense.hpp"

namespace dgtd {

// Quadrature rule on the bi-unit reference tetrahedron with vertices
// (-1,-1,-1), (1,-1,-1), (-1,1,-1), (-1,-1,1).
struct QuadratureRule {
  int degree = 0;    // polynomial degree integrated exactly
  int n_points = 0;
  Mat points;        // n_points x 3
  Vec weights;       // positive, sum to the reference volume 4/3
};

// Tabulated rule for polynomial order p in {1,...,5}; degree 2p with point
// counts {4, 11, 23, 44, 74}. Throws ConfigError for unsupported p.
QuadratureRule tet_table_rule(int p);

// Collapsed-coordinate (tensor-product Gauss-Jacobi) rule of at least the
// requested degree. Available for any degree; used for operator assembly
// and as an independent oracle in tests.
QuadratureRule tet_collapsed_rule(int degree);

}  // namespace dgtd
