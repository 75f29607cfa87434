#include "dgtd/reference_element.hpp"

#include <string>

#include "dgtd/errors.hpp"
#include "dgtd/jacobi.hpp"

namespace dgtd {

const int kTetFaceVertices[4][3] = {{0, 1, 2}, {0, 1, 3}, {1, 2, 3}, {0, 2, 3}};
// faces 0,1,3 are right-triangle faces of area 2; face 2 is the equilateral
// hypotenuse face of area 2*sqrt(3)
const double kRefFaceArea[4] = {2.0, 2.0, 3.4641016151377544, 2.0};

namespace {

Mat reference_vertices() {
  Mat v(4, 3);
  v << -1, -1, -1, 1, -1, -1, -1, 1, -1, -1, -1, 1;
  return v;
}

// 2D coordinates of points on a reference-tet face, in the frame of the
// bi-unit triangle spanned by the face's first three vertices
Mat face_plane_coords(const Mat& pts3, int face) {
  const Mat v = reference_vertices();
  const Vec3 a = v.row(kTetFaceVertices[face][0]);
  const Vec3 b = v.row(kTetFaceVertices[face][1]);
  const Vec3 c = v.row(kTetFaceVertices[face][2]);
  Eigen::Matrix<double, 3, 2> e;
  e.col(0) = 0.5 * (b - a);
  e.col(1) = 0.5 * (c - a);
  // least-squares inverse of the in-plane frame (exact for in-plane points)
  // solve x = a + (u+1)/2 (b-a) + (v+1)/2 (c-a) for (u,v)
  const Eigen::Matrix2d g = e.transpose() * e;
  Mat rs(pts3.rows(), 2);
  for (int i = 0; i < pts3.rows(); ++i) {
    const Vec3 d0 = pts3.row(i).transpose() - a;
    const Eigen::Vector2d uv = g.ldlt().solve(e.transpose() * d0);
    rs(i, 0) = uv(0) - 1.0;
    rs(i, 1) = uv(1) - 1.0;
  }
  return rs;
}

}  // namespace

Mat reference_tet_vertices() { return reference_vertices(); }

QuadratureRule build_quadrature(int p) { return tet_table_rule(p); }

ReferenceOperators build_reference_operators(int p) {
  if (p < 1 || p > 5)
    throw ConfigError("build_reference_operators: unsupported order p=" +
                      std::to_string(p) +
                      " (node and quadrature tables cover 1..5)");
  ReferenceOperators ops;
  ops.order = p;
  ops.n_nodes = (p + 1) * (p + 2) * (p + 3) / 6;
  ops.n_face_nodes = (p + 1) * (p + 2) / 2;
  ops.nodes = warp_blend_nodes(p);

  ops.vandermonde = simplex3d_vandermonde(ops.nodes, p);
  Eigen::FullPivLU<Mat> vlu(ops.vandermonde);
  if (!vlu.isInvertible())
    throw ConfigError("build_reference_operators: singular Vandermonde matrix");
  const Mat vinv = vlu.inverse();

  ops.mass_inv = ops.vandermonde * ops.vandermonde.transpose();
  ops.mass = ops.mass_inv.llt().solve(Mat::Identity(ops.n_nodes, ops.n_nodes));

  Mat vr, vs, vt;
  simplex3d_grad_vandermonde(ops.nodes, p, vr, vs, vt);
  ops.diff[0] = vr * vinv;
  ops.diff[1] = vs * vinv;
  ops.diff[2] = vt * vinv;
  for (int d = 0; d < 3; ++d) ops.stiffness[d] = ops.mass * ops.diff[d];

  // face nodes: nodes lying on each face plane
  const auto on_face = [&](int f, int i) {
    const double r = ops.nodes(i, 0), s = ops.nodes(i, 1), t = ops.nodes(i, 2);
    switch (f) {
      case 0: return std::abs(t + 1) < 1e-9;
      case 1: return std::abs(s + 1) < 1e-9;
      case 2: return std::abs(r + s + t + 1) < 1e-9;
      default: return std::abs(r + 1) < 1e-9;
    }
  };
  for (int f = 0; f < 4; ++f) {
    for (int i = 0; i < ops.n_nodes; ++i)
      if (on_face(f, i)) ops.face_nodes[f].push_back(i);
    if (static_cast<int>(ops.face_nodes[f].size()) != ops.n_face_nodes)
      throw ContractError("face node count mismatch on face " +
                          std::to_string(f));
  }

  // face-mass embedding: for each face, the 2D mass matrix of its node set
  ops.emat = Mat::Zero(ops.n_nodes, 4 * ops.n_face_nodes);
  for (int f = 0; f < 4; ++f) {
    Mat fpts(ops.n_face_nodes, 3);
    for (int j = 0; j < ops.n_face_nodes; ++j)
      fpts.row(j) = ops.nodes.row(ops.face_nodes[f][j]);
    const Mat rs = face_plane_coords(fpts, f);
    const Mat vf = simplex2d_vandermonde(rs, p);
    Mat mf = (vf * vf.transpose())
                 .llt()
                 .solve(Mat::Identity(ops.n_face_nodes, ops.n_face_nodes));
    mf *= kRefFaceArea[f] / 2.0;  // bi-unit triangle has area 2
    for (int j = 0; j < ops.n_face_nodes; ++j)
      for (int i = 0; i < ops.n_face_nodes; ++i)
        ops.emat(ops.face_nodes[f][i], f * ops.n_face_nodes + j) = mf(i, j);
  }
  ops.lift = ops.mass_inv * ops.emat;

  // tabulated quadrature and the reference interpolation/projection pair
  ops.quad = build_quadrature(p);
  const Mat vq_modal = simplex3d_vandermonde(ops.quad.points, p);
  ops.interp_to_quad = vq_modal * vinv;
  // P_q = M^{-1} V_q^T W = V V_I^T W  (orthonormal basis identity)
  ops.project_from_quad = ops.vandermonde * vq_modal.transpose() *
                          ops.quad.weights.asDiagonal();

  // assembly rule for weighted mass matrices built from nodal coefficients
  ops.assembly_quad = tet_collapsed_rule(2 * p + 2);
  const Mat va_modal = simplex3d_vandermonde(ops.assembly_quad.points, p);
  ops.interp_to_assembly = va_modal * vinv;

  return ops;
}

Vec interpolate_to_quad(const ReferenceOperators& ops, const Vec& coeffs) {
  if (coeffs.size() != ops.n_nodes)
    throw ContractError("interpolate_to_quad: expected " +
                        std::to_string(ops.n_nodes) + " coefficients, got " +
                        std::to_string(coeffs.size()));
  return ops.interp_to_quad * coeffs;
}

Vec project_from_quad(const ReferenceOperators& ops, const Vec& values) {
  if (values.size() != ops.quad.n_points)
    throw ContractError("project_from_quad: expected " +
                        std::to_string(ops.quad.n_points) + " values, got " +
                        std::to_string(values.size()));
  return ops.project_from_quad * values;
}

Mat lagrange_basis_at(const ReferenceOperators& ops, const Mat& rst) {
  const Mat vi = simplex3d_vandermonde(rst, ops.order);
  // l(r)^T = phi(r)^T V^{-1}; solve V^T X^T = phi^T
  return ops.vandermonde.transpose()
      .fullPivLu()
      .solve(vi.transpose())
      .transpose();
}

}  // namespace dgtd
