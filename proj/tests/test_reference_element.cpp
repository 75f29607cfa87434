#include <doctest.h>

#include <cmath>

#include "dgtd/errors.hpp"
#include "dgtd/jacobi.hpp"
#include "dgtd/reference_element.hpp"

using namespace dgtd;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// analytic integral of x^a y^b z^c over the unit simplex
double simplex_monomial(int a, int b, int c) {
  return factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
}

void check_rule_exactness(const QuadratureRule& q, int degree, double tol) {
  // transform to unit-simplex coordinates: x=(r+1)/2, weights / 8
  for (int n = 0; n <= degree; ++n) {
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n - a; ++b) {
        const int c = n - a - b;
        double acc = 0;
        for (int i = 0; i < q.n_points; ++i) {
          const double x = 0.5 * (q.points(i, 0) + 1);
          const double y = 0.5 * (q.points(i, 1) + 1);
          const double z = 0.5 * (q.points(i, 2) + 1);
          acc += q.weights(i) / 8.0 * std::pow(x, a) * std::pow(y, b) *
                 std::pow(z, c);
        }
        const double exact = simplex_monomial(a, b, c);
        CHECK(std::abs(acc - exact) <= tol * std::abs(exact));
      }
    }
  }
}

}  // namespace

TEST_CASE("node and quadrature counts match the published sizes") {
  const int np_expect[] = {4, 10, 20, 35, 56};
  const int nq_expect[] = {4, 11, 23, 44, 74};
  for (int p = 1; p <= 5; ++p) {
    const auto ops = build_reference_operators(p);
    CHECK(ops.n_nodes == np_expect[p - 1]);
    CHECK(ops.n_nodes == (p + 1) * (p + 2) * (p + 3) / 6);
    CHECK(ops.quad.n_points == nq_expect[p - 1]);
    CHECK(ops.n_face_nodes == (p + 1) * (p + 2) / 2);
  }
}

TEST_CASE("unsupported orders are rejected") {
  CHECK_THROWS_AS(build_reference_operators(0), ConfigError);
  CHECK_THROWS_AS(build_reference_operators(6), ConfigError);
  CHECK_THROWS_AS(build_quadrature(9), ConfigError);
}

TEST_CASE("tabulated rules: positive weights, reference volume, exactness") {
  for (int p = 1; p <= 5; ++p) {
    const auto q = build_quadrature(p);
    CHECK(q.weights.minCoeff() > 0.0);
    CHECK(std::abs(q.weights.sum() - 4.0 / 3.0) < 1e-12 * (4.0 / 3.0));
    CHECK(q.degree >= 2 * p);
    check_rule_exactness(q, q.degree, 1e-12);
    // all points strictly inside
    for (int i = 0; i < q.n_points; ++i) {
      CHECK(q.points.row(i).minCoeff() > -1.0);
      CHECK(q.points(i, 0) + q.points(i, 1) + q.points(i, 2) < -1.0 + 2.0);
    }
  }
}

TEST_CASE("collapsed rules integrate exactly to their degree") {
  for (int deg : {3, 6, 9, 12}) {
    const auto q = tet_collapsed_rule(deg);
    CHECK(q.degree >= deg);
    CHECK(q.weights.minCoeff() > 0.0);
    check_rule_exactness(q, deg, 1e-12);
  }
}

TEST_CASE("projection-interpolation identity P_q V_q = I") {
  for (int p = 1; p <= 5; ++p) {
    const auto ops = build_reference_operators(p);
    const Mat ident =
        ops.project_from_quad * ops.interp_to_quad -
        Mat::Identity(ops.n_nodes, ops.n_nodes);
    CHECK(ident.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("mass matrix: SPD, quadrature reconstruction") {
  for (int p = 1; p <= 5; ++p) {
    const auto ops = build_reference_operators(p);
    CHECK(((ops.mass - ops.mass.transpose()).cwiseAbs().maxCoeff()) < 1e-12);
    Eigen::LLT<Mat> llt(ops.mass);
    CHECK(llt.info() == Eigen::Success);
    const Mat mq = ops.interp_to_quad.transpose() *
                   ops.quad.weights.asDiagonal() * ops.interp_to_quad;
    CHECK((mq - ops.mass).norm() <= 1e-11 * ops.mass.norm());
    // M^{-1} consistency
    const Mat mi = ops.mass * ops.mass_inv - Mat::Identity(ops.n_nodes, ops.n_nodes);
    CHECK(mi.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("stiffness matrices satisfy discrete integration by parts") {
  // outward unit normals of the reference faces
  const double nfaces[4][3] = {{0, 0, -1},
                               {0, -1, 0},
                               {1 / std::sqrt(3.0), 1 / std::sqrt(3.0),
                                1 / std::sqrt(3.0)},
                               {-1, 0, 0}};
  for (int p = 1; p <= 5; ++p) {
    const auto ops = build_reference_operators(p);
    for (int dir = 0; dir < 3; ++dir) {
      Mat boundary = Mat::Zero(ops.n_nodes, ops.n_nodes);
      for (int f = 0; f < 4; ++f) {
        const auto& fn = ops.face_nodes[f];
        for (size_t a = 0; a < fn.size(); ++a)
          for (size_t b = 0; b < fn.size(); ++b)
            boundary(fn[a], fn[b]) +=
                nfaces[f][dir] *
                ops.emat(fn[a], f * ops.n_face_nodes + static_cast<int>(b));
      }
      const Mat lhs = ops.stiffness[dir] + ops.stiffness[dir].transpose();
      CHECK((lhs - boundary).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("interpolation to quadrature points") {
  const auto ops = build_reference_operators(3);

  SUBCASE("constants are reproduced at every quadrature node") {
    const Vec c = Vec::Constant(ops.n_nodes, 2.75);
    const Vec v = interpolate_to_quad(ops, c);
    CHECK((v.array() - 2.75).abs().maxCoeff() < 1e-13);
  }
  SUBCASE("degree-p polynomials are interpolated exactly") {
    auto poly = [](double r, double s, double t) {
      return 0.3 + r - 0.5 * s * t + r * r * s - t * t * t * 0.25;
    };
    Vec coeffs(ops.n_nodes);
    for (int i = 0; i < ops.n_nodes; ++i)
      coeffs(i) = poly(ops.nodes(i, 0), ops.nodes(i, 1), ops.nodes(i, 2));
    const Vec v = interpolate_to_quad(ops, coeffs);
    for (int i = 0; i < ops.quad.n_points; ++i) {
      const double exact = poly(ops.quad.points(i, 0), ops.quad.points(i, 1),
                                ops.quad.points(i, 2));
      CHECK(std::abs(v(i) - exact) < 1e-12 * (1 + std::abs(exact)));
    }
  }
  SUBCASE("projection round-trip is the identity on coefficients") {
    Vec coeffs = Vec::LinSpaced(ops.n_nodes, -1.0, 2.0);
    for (int i = 0; i < ops.n_nodes; ++i)
      coeffs(i) = std::sin(3.0 * i) + 0.1 * i;
    const Vec round = project_from_quad(ops, interpolate_to_quad(ops, coeffs));
    CHECK((round - coeffs).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("dimension mismatch is a contract violation") {
    CHECK_THROWS_AS(interpolate_to_quad(ops, Vec::Zero(3)), ContractError);
    CHECK_THROWS_AS(project_from_quad(ops, Vec::Zero(3)), ContractError);
  }
}

TEST_CASE("warp-and-blend nodes: vertices present, all nodes inside") {
  for (int p = 1; p <= 5; ++p) {
    const Mat nodes = warp_blend_nodes(p);
    const Mat verts = reference_tet_vertices();
    for (int v = 0; v < 4; ++v) {
      double best = 1e300;
      for (int i = 0; i < nodes.rows(); ++i)
        best = std::min(best, (nodes.row(i) - verts.row(v)).norm());
      CHECK(best < 1e-12);
    }
    for (int i = 0; i < nodes.rows(); ++i) {
      CHECK(nodes.row(i).minCoeff() > -1.0 - 1e-12);
      CHECK(nodes.row(i).sum() < -1.0 + 1e-12);
    }
  }
}

TEST_CASE("face node sets are congruent across faces") {
  // any face can be affinely mapped onto any other with node sets matching;
  // this is what makes neighbor traces collocate on shared mesh faces
  const auto ops = build_reference_operators(4);
  const Mat verts = reference_tet_vertices();
  const int nfp = ops.n_face_nodes;
  for (int f1 = 0; f1 < 4; ++f1)
    for (int f2 = 0; f2 < 4; ++f2) {
      // affine map sending face f1's vertices onto face f2's
      const Vec3 a1 = verts.row(kTetFaceVertices[f1][0]);
      const Vec3 b1 = verts.row(kTetFaceVertices[f1][1]);
      const Vec3 c1 = verts.row(kTetFaceVertices[f1][2]);
      const Vec3 a2 = verts.row(kTetFaceVertices[f2][0]);
      const Vec3 b2 = verts.row(kTetFaceVertices[f2][1]);
      const Vec3 c2 = verts.row(kTetFaceVertices[f2][2]);
      Eigen::Matrix<double, 3, 2> e1, e2;
      e1.col(0) = b1 - a1;
      e1.col(1) = c1 - a1;
      e2.col(0) = b2 - a2;
      e2.col(1) = c2 - a2;
      const Eigen::Matrix2d g = e1.transpose() * e1;
      for (int i = 0; i < nfp; ++i) {
        const Vec3 x = ops.nodes.row(ops.face_nodes[f1][i]).transpose();
        const Eigen::Vector2d uv = g.ldlt().solve(e1.transpose() * (x - a1));
        const Vec3 mapped = a2 + e2 * uv;
        double best = 1e300;
        for (int j = 0; j < nfp; ++j)
          best = std::min(best, (ops.nodes.row(ops.face_nodes[f2][j]) -
                                 mapped.transpose())
                                    .norm());
        CHECK(best < 1e-9);
      }
    }
}

TEST_CASE("construction is reproducible") {
  const auto a = build_reference_operators(3);
  const auto b = build_reference_operators(3);
  CHECK((a.vandermonde - b.vandermonde).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.nodes - b.nodes).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.lift - b.lift).cwiseAbs().maxCoeff() == 0.0);
}
