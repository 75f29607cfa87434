#pragma once

#include <array>
#include <vector>

#include "dgtd/dense.hpp"
#include "dgtd/quadrature.hpp"

namespace dgtd {

// All element-independent operators on the bi-unit reference tetrahedron
// with vertices (-1,-1,-1), (1,-1,-1), (-1,1,-1), (-1,-1,1).
//
// Faces, as vertex index triples of the reference tetrahedron:
//   0: {0,1,2} (t = -1)   1: {0,1,3} (s = -1)
//   2: {1,2,3} (r+s+t = -1)   3: {0,2,3} (r = -1)
struct ReferenceOperators {
  int order = 0;         // polynomial order p
  int n_nodes = 0;       // N_p = (p+1)(p+2)(p+3)/6
  int n_face_nodes = 0;  // N_fp = (p+1)(p+2)/2

  Mat nodes;        // N_p x 3 interpolation nodes
  Mat vandermonde;  // V(j,i) = phi_i(r_j), orthonormal basis
  Mat mass;         // M = (V V^T)^{-1}
  Mat mass_inv;     // V V^T
  std::array<Mat, 3> stiffness;  // S^r, S^s, S^t = M D^u
  std::array<Mat, 3> diff;       // D^r, D^s, D^t nodal differentiation
  Mat emat;  // N_p x 4*N_fp face-mass embedding (columns grouped by face)
  Mat lift;  // M^{-1} emat
  std::array<std::vector<int>, 4> face_nodes;  // node ids on each face

  QuadratureRule quad;   // tabulated rule, degree 2p, paper point counts
  Mat interp_to_quad;    // V_q: N_q x N_p
  Mat project_from_quad; // P_q = M^{-1} V_q^T W: N_p x N_q

  // internal: higher-degree rule for weighted-mass assembly on the direct
  // path (exact for coefficients interpolated to degree p), plus the
  // interpolation matrix from nodes to its points
  QuadratureRule assembly_quad;
  Mat interp_to_assembly;
};

// Reference tetrahedron vertices (4x3) and face vertex triples.
Mat reference_tet_vertices();
extern const int kTetFaceVertices[4][3];
extern const double kRefFaceArea[4];
constexpr double kRefVolume = 4.0 / 3.0;

ReferenceOperators build_reference_operators(int p);
QuadratureRule build_quadrature(int p);

Vec interpolate_to_quad(const ReferenceOperators& ops, const Vec& coeffs);
Vec project_from_quad(const ReferenceOperators& ops, const Vec& values);

// Nodal Lagrange basis values at arbitrary reference points: row i holds
// l_1..l_Np evaluated at point i. Used for probes and oracle assembly.
Mat lagrange_basis_at(const ReferenceOperators& ops, const Mat& rst);

Mat warp_blend_nodes(int p);  // defined in nodes.cpp

}  // namespace dgtd
