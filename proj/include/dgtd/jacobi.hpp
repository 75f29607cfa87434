#pragma once

#include "dgtd/dense.hpp"

namespace dgtd {

// Jacobi polynomial P_n^(alpha,beta), normalized to unit L2 norm on [-1,1]
// with weight (1-x)^alpha (1+x)^beta.
Vec jacobi_p(const Vec& x, double alpha, double beta, int n);
Vec grad_jacobi_p(const Vec& x, double alpha, double beta, int n);

// Gauss-Jacobi quadrature with n points (Golub-Welsch).
void jacobi_gq(double alpha, double beta, int n, Vec& x, Vec& w);

// Gauss-Lobatto-Legendre points, n+1 of them on [-1,1].
Vec jacobi_gl(int n);

// Orthonormal Koornwinder-Dubiner basis on the bi-unit triangle/tetrahedron.
// Basis functions are indexed in the conventional (i,j[,k]) loop order; the
// matrices have one column per basis function, one row per evaluation point.
Mat simplex3d_vandermonde(const Mat& rst, int p);
void simplex3d_grad_vandermonde(const Mat& rst, int p, Mat& vr, Mat& vs, Mat& vt);
Mat simplex2d_vandermonde(const Mat& rs, int p);

}  // namespace dgtd
