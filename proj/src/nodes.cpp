#include <cmath>

#include "dgtd/dense.hpp"
#include "dgtd/errors.hpp"
#include "dgtd/jacobi.hpp"

namespace dgtd {

namespace {

// 1D warp factor: displacement field moving equidistant nodes onto
// Gauss-Lobatto nodes, deflated by the end-point roots.
Vec eval_warp_1d(int p, const Vec& xout) {
  Vec xeq(p + 1), xgll = jacobi_gl(p);
  for (int i = 0; i <= p; ++i) xeq(i) = 1.0 - 2.0 * i / p;  // descending
  std::reverse(xgll.data(), xgll.data() + p + 1);           // descending

  Vec warp = Vec::Zero(xout.size());
  for (int i = 1; i < p; ++i) {
    Vec d = Vec::Constant(xout.size(), xgll(i) - xeq(i));
    for (int j = 1; j < p; ++j) {
      if (j == i) continue;
      d.array() *= (xout.array() - xeq(j)) / (xeq(i) - xeq(j));
    }
    d *= -1.0 / (xeq(i) - xeq(0));
    d *= 1.0 / (xeq(i) - xeq(p));
    warp += 4.0 * d;
  }
  return warp;
}

// tangential warp on one equilateral-triangle face
void eval_shift(int p, double alpha, const Vec& l1, const Vec& l2,
                const Vec& l3, Vec& dx, Vec& dy) {
  const Vec w1 = eval_warp_1d(p, l3 - l2);
  const Vec w2 = eval_warp_1d(p, l1 - l3);
  const Vec w3 = eval_warp_1d(p, l2 - l1);

  const Eigen::ArrayXd warp1 =
      l2.array() * l3.array() * w1.array() * (1.0 + (alpha * l1.array()).square());
  const Eigen::ArrayXd warp2 =
      l1.array() * l3.array() * w2.array() * (1.0 + (alpha * l2.array()).square());
  const Eigen::ArrayXd warp3 =
      l1.array() * l2.array() * w3.array() * (1.0 + (alpha * l3.array()).square());

  const double c1 = std::cos(2.0 * M_PI / 3.0), c2 = std::cos(4.0 * M_PI / 3.0);
  const double s1 = std::sin(2.0 * M_PI / 3.0), s2 = std::sin(4.0 * M_PI / 3.0);
  dx = (warp1 + c1 * warp2 + c2 * warp3).matrix();
  dy = (s1 * warp2 + s2 * warp3).matrix();
}

}  // namespace

// Warp-and-blend interpolation nodes on the bi-unit reference tetrahedron.
Mat warp_blend_nodes(int p) {
  if (p < 1) throw ContractError("warp_blend_nodes: order must be >= 1");
  static const double alpha_opt[] = {0.0,    0.0,    0.0,    0.0,    0.1002,
                                     1.1332, 1.5608, 1.3413, 1.2577, 1.1603,
                                     1.10153};
  const double alpha = (p <= 10) ? alpha_opt[p] : 1.0;
  const int np = (p + 1) * (p + 2) * (p + 3) / 6;
  const double tol = 1e-10;

  // equidistant lattice in the reference frame
  Vec r(np), s(np), t(np);
  int sk = 0;
  for (int n = 1; n <= p + 1; ++n)
    for (int m = 1; m <= p + 2 - n; ++m)
      for (int q = 1; q <= p + 3 - n - m; ++q) {
        r(sk) = -1.0 + (q - 1) * 2.0 / p;
        s(sk) = -1.0 + (m - 1) * 2.0 / p;
        t(sk) = -1.0 + (n - 1) * 2.0 / p;
        ++sk;
      }

  const Vec l1 = 0.5 * (1.0 + t.array());
  const Vec l2 = 0.5 * (1.0 + s.array());
  const Vec l3 = (-0.5 * (1.0 + r.array() + s.array() + t.array())).matrix();
  const Vec l4 = 0.5 * (1.0 + r.array());

  const double sq3 = std::sqrt(3.0), sq6 = std::sqrt(6.0);
  const Vec3 v1(-1.0, -1.0 / sq3, -1.0 / sq6);
  const Vec3 v2(1.0, -1.0 / sq3, -1.0 / sq6);
  const Vec3 v3(0.0, 2.0 / sq3, -1.0 / sq6);
  const Vec3 v4(0.0, 0.0, 3.0 / sq6);

  Vec3 t1[4], t2[4];
  t1[0] = v2 - v1;
  t2[0] = v3 - 0.5 * (v1 + v2);
  t1[1] = v2 - v1;
  t2[1] = v4 - 0.5 * (v1 + v2);
  t1[2] = v3 - v2;
  t2[2] = v4 - 0.5 * (v2 + v3);
  t1[3] = v3 - v1;
  t2[3] = v4 - 0.5 * (v1 + v3);
  for (int f = 0; f < 4; ++f) {
    t1[f].normalize();
    t2[f].normalize();
  }

  Mat xyz(np, 3);
  for (int i = 0; i < np; ++i)
    xyz.row(i) =
        (l3(i) * v1 + l4(i) * v2 + l2(i) * v3 + l1(i) * v4).transpose();

  Mat shift = Mat::Zero(np, 3);
  for (int f = 0; f < 4; ++f) {
    Vec la, lb, lc, ld;
    switch (f) {
      case 0: la = l1; lb = l2; lc = l3; ld = l4; break;
      case 1: la = l2; lb = l1; lc = l3; ld = l4; break;
      case 2: la = l3; lb = l1; lc = l4; ld = l2; break;
      default: la = l4; lb = l1; lc = l3; ld = l2; break;
    }
    Vec w1, w2;
    eval_shift(p, alpha, lb, lc, ld, w1, w2);

    for (int i = 0; i < np; ++i) {
      double blend = lb(i) * lc(i) * ld(i);
      const double denom = (lb(i) + 0.5 * la(i)) * (lc(i) + 0.5 * la(i)) *
                           (ld(i) + 0.5 * la(i));
      if (denom > tol)
        blend *= (1.0 + alpha * alpha * la(i) * la(i)) / denom;
      shift.row(i) +=
          (blend * w1(i) * t1[f] + blend * w2(i) * t2[f]).transpose();

      // points on this face's edges get the pure surface warp
      const int inside = (lb(i) > tol) + (lc(i) > tol) + (ld(i) > tol);
      if (la(i) < tol && inside < 3)
        shift.row(i) = (w1(i) * t1[f] + w2(i) * t2[f]).transpose();
    }
  }
  xyz += shift;

  // equilateral frame back to the reference frame
  Mat3 a;
  a.col(0) = v2 - v1;
  a.col(1) = v3 - v1;
  a.col(2) = v4 - v1;
  const Mat3 ainv = a.inverse();
  Mat out(np, 3);
  const Vec3 off = v1 - v2 - v3 - v4;
  for (int i = 0; i < np; ++i)
    out.row(i) = (ainv * (2.0 * xyz.row(i).transpose() + off)).transpose();
  return out;
}

}  // namespace dgtd
