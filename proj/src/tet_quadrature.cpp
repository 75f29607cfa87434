#include "dgtd/quadrature.hpp"

#include <string>

#include "dgtd/errors.hpp"
#include "dgtd/jacobi.hpp"

namespace dgtd {

#include "tet_rule_tables.inc"

namespace {

QuadratureRule from_table(int degree, int n, const double bary[][4],
                          const double* w, bool valid) {
  if (!valid)
    throw ConfigError("tetrahedron quadrature table for degree " +
                      std::to_string(degree) + " is not available");
  QuadratureRule q;
  q.degree = degree;
  q.n_points = n;
  q.points.resize(n, 3);
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double* l = bary[i];
    q.points(i, 0) = -l[0] + l[1] - l[2] - l[3];
    q.points(i, 1) = -l[0] - l[1] + l[2] - l[3];
    q.points(i, 2) = -l[0] - l[1] - l[2] + l[3];
    q.weights(i) = w[i] * (4.0 / 3.0);
  }
  return q;
}

}  // namespace

QuadratureRule tet_table_rule(int p) {
  switch (p) {
    case 1:
      return from_table(2, 4, kTetDeg2Bary, kTetDeg2W, kTetDeg2Valid);
    case 2:
      return from_table(4, 11, kTetDeg4Bary, kTetDeg4W, kTetDeg4Valid);
    case 3:
      return from_table(6, 23, kTetDeg6Bary, kTetDeg6W, kTetDeg6Valid);
    case 4:
      return from_table(8, 44, kTetDeg8Bary, kTetDeg8W, kTetDeg8Valid);
    case 5:
      return from_table(10, 74, kTetDeg10Bary, kTetDeg10W, kTetDeg10Valid);
    default:
      throw ConfigError("no tetrahedron quadrature table for order p=" +
                        std::to_string(p) + " (supported: 1..5)");
  }
}

QuadratureRule tet_collapsed_rule(int degree) {
  if (degree < 1) throw ContractError("tet_collapsed_rule: degree must be >= 1");
  const int n1 = degree / 2 + 1;  // 1D Gauss: n points exact to 2n-1
  Vec xa, wa, xb, wb, xc, wc;
  jacobi_gq(0.0, 0.0, n1, xa, wa);
  jacobi_gq(1.0, 0.0, n1, xb, wb);
  jacobi_gq(2.0, 0.0, n1, xc, wc);

  QuadratureRule q;
  q.degree = 2 * n1 - 1;
  q.n_points = n1 * n1 * n1;
  q.points.resize(q.n_points, 3);
  q.weights.resize(q.n_points);
  int m = 0;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n1; ++j) {
      for (int k = 0; k < n1; ++k) {
        // Duffy map from the cube to the unit simplex, then to bi-unit coords
        const double zc = 0.5 * (1 + xc(k));                // l4
        const double yb = 0.5 * (1 + xb(j)) * (1 - zc);     // l3
        const double xs = 0.5 * (1 + xa(i)) * (1 - yb - zc);  // l2
        q.points(m, 0) = 2 * xs - 1;
        q.points(m, 1) = 2 * yb - 1;
        q.points(m, 2) = 2 * zc - 1;
        // weight factor (1-b)(1-c)^2/64 carries the Jacobi weights; the
        // Gauss-Jacobi weights already include (1-x)^alpha.
        q.weights(m) = wa(i) * wb(j) * wc(k) / 64.0 * 8.0;
        ++m;
      }
    }
  }
  return q;
}

}  // namespace dgtd
