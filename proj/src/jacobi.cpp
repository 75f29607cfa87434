#include "dgtd/jacobi.hpp"

#include <cmath>

#include "dgtd/errors.hpp"

namespace dgtd {

Vec jacobi_p(const Vec& x, double alpha, double beta, int n) {
  const int m = static_cast<int>(x.size());
  Mat pl(m, n + 1);

  const double gamma0 = std::pow(2.0, alpha + beta + 1) / (alpha + beta + 1) *
                        std::tgamma(alpha + 1) * std::tgamma(beta + 1) /
                        std::tgamma(alpha + beta + 1);
  pl.col(0).setConstant(1.0 / std::sqrt(gamma0));
  if (n == 0) return pl.col(0);

  const double gamma1 = (alpha + 1) * (beta + 1) / (alpha + beta + 3) * gamma0;
  pl.col(1) = ((alpha + beta + 2) * x.array() / 2 + (alpha - beta) / 2) /
              std::sqrt(gamma1);
  if (n == 1) return pl.col(1);

  double aold = 2.0 / (2 + alpha + beta) *
                std::sqrt((alpha + 1) * (beta + 1) / (alpha + beta + 3));
  for (int i = 1; i < n; ++i) {
    const double h1 = 2.0 * i + alpha + beta;
    const double anew =
        2.0 / (h1 + 2) *
        std::sqrt((i + 1) * (i + 1 + alpha + beta) * (i + 1 + alpha) *
                  (i + 1 + beta) / (h1 + 1) / (h1 + 3));
    const double bnew = -(alpha * alpha - beta * beta) / h1 / (h1 + 2);
    pl.col(i + 1) =
        ((x.array() - bnew) * pl.col(i).array() - aold * pl.col(i - 1).array()) /
        anew;
    aold = anew;
  }
  return pl.col(n);
}

Vec grad_jacobi_p(const Vec& x, double alpha, double beta, int n) {
  if (n == 0) return Vec::Zero(x.size());
  return std::sqrt(n * (n + alpha + beta + 1)) *
         jacobi_p(x, alpha + 1, beta + 1, n - 1);
}

void jacobi_gq(double alpha, double beta, int n, Vec& x, Vec& w) {
  if (n < 1) throw ContractError("jacobi_gq: need at least one point");
  Mat J = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double h1 = 2.0 * i + alpha + beta;
    if (i == 0 && alpha + beta < 1e-14)
      J(0, 0) = 0.0;
    else
      J(i, i) = -(alpha * alpha - beta * beta) / (h1 + 2) / h1;
    if (i < n - 1) {
      const double k = i + 1;
      J(i, i + 1) = 2.0 / (h1 + 2) *
                    std::sqrt(k * (k + alpha + beta) * (k + alpha) * (k + beta) /
                              (h1 + 1) / (h1 + 3));
      J(i + 1, i) = J(i, i + 1);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  x = es.eigenvalues();
  const double mu0 = std::pow(2.0, alpha + beta + 1) / (alpha + beta + 1) *
                     std::tgamma(alpha + 1) * std::tgamma(beta + 1) /
                     std::tgamma(alpha + beta + 1);
  w = es.eigenvectors().row(0).transpose().array().square() * mu0;
}

Vec jacobi_gl(int n) {
  if (n < 1) throw ContractError("jacobi_gl: order must be >= 1");
  Vec x(n + 1);
  x(0) = -1.0;
  x(n) = 1.0;
  if (n >= 2) {
    Vec xi, wi;
    jacobi_gq(1.0, 1.0, n - 1, xi, wi);
    x.segment(1, n - 1) = xi;
  }
  return x;
}

namespace {

// collapsed coordinates for the bi-unit tetrahedron
void rst_to_abc(const Mat& rst, Vec& a, Vec& b, Vec& c) {
  const int n = static_cast<int>(rst.rows());
  a.resize(n);
  b.resize(n);
  c.resize(n);
  for (int i = 0; i < n; ++i) {
    const double r = rst(i, 0), s = rst(i, 1), t = rst(i, 2);
    a(i) = (std::abs(s + t) > 1e-14) ? 2.0 * (1 + r) / (-s - t) - 1.0 : -1.0;
    b(i) = (std::abs(t - 1) > 1e-14) ? 2.0 * (1 + s) / (1 - t) - 1.0 : -1.0;
    c(i) = t;
  }
}

}  // namespace

Mat simplex3d_vandermonde(const Mat& rst, int p) {
  const int n = static_cast<int>(rst.rows());
  const int np = (p + 1) * (p + 2) * (p + 3) / 6;
  Vec a, b, c;
  rst_to_abc(rst, a, b, c);
  Mat v(n, np);
  int sk = 0;
  for (int i = 0; i <= p; ++i) {
    for (int j = 0; j <= p - i; ++j) {
      for (int k = 0; k <= p - i - j; ++k) {
        const Vec h1 = jacobi_p(a, 0, 0, i);
        const Vec h2 = jacobi_p(b, 2.0 * i + 1, 0, j);
        const Vec h3 = jacobi_p(c, 2.0 * (i + j) + 2, 0, k);
        v.col(sk) = 2.0 * std::sqrt(2.0) * h1.array() * h2.array() *
                    Eigen::pow(1.0 - b.array(), i) * h3.array() *
                    Eigen::pow(1.0 - c.array(), i + j);
        ++sk;
      }
    }
  }
  return v;
}

void simplex3d_grad_vandermonde(const Mat& rst, int p, Mat& vr, Mat& vs,
                                Mat& vt) {
  const int n = static_cast<int>(rst.rows());
  const int np = (p + 1) * (p + 2) * (p + 3) / 6;
  Vec a, b, c;
  rst_to_abc(rst, a, b, c);
  vr.resize(n, np);
  vs.resize(n, np);
  vt.resize(n, np);

  int sk = 0;
  for (int i = 0; i <= p; ++i) {
    for (int j = 0; j <= p - i; ++j) {
      for (int k = 0; k <= p - i - j; ++k) {
        const Vec fa = jacobi_p(a, 0, 0, i);
        const Vec dfa = grad_jacobi_p(a, 0, 0, i);
        const Vec gb = jacobi_p(b, 2.0 * i + 1, 0, j);
        const Vec dgb = grad_jacobi_p(b, 2.0 * i + 1, 0, j);
        const Vec hc = jacobi_p(c, 2.0 * (i + j) + 2, 0, k);
        const Vec dhc = grad_jacobi_p(c, 2.0 * (i + j) + 2, 0, k);

        Eigen::ArrayXd halfb = 0.5 * (1.0 - b.array());
        Eigen::ArrayXd halfc = 0.5 * (1.0 - c.array());

        // r-derivative
        Eigen::ArrayXd dr = dfa.array() * gb.array() * hc.array();
        if (i > 0) dr *= halfb.pow(i - 1);
        if (i + j > 0) dr *= halfc.pow(i + j - 1);

        // s-derivative
        Eigen::ArrayXd ds = 0.5 * (1.0 + a.array()) * dr;
        Eigen::ArrayXd tmp = dgb.array() * halfb.pow(i);
        if (i > 0) tmp += (-0.5 * i) * gb.array() * halfb.pow(i - 1);
        if (i + j > 0) tmp *= halfc.pow(i + j - 1);
        tmp = fa.array() * tmp * hc.array();
        ds += tmp;

        // t-derivative
        Eigen::ArrayXd dt = 0.5 * (1.0 + a.array()) * dr + 0.5 * (1.0 + b.array()) * tmp;
        Eigen::ArrayXd tmp2 = dhc.array() * halfc.pow(i + j);
        if (i + j > 0) tmp2 -= 0.5 * (i + j) * hc.array() * halfc.pow(i + j - 1);
        tmp2 = fa.array() * gb.array() * tmp2 * halfb.pow(i);
        dt += tmp2;

        const double scale = std::pow(2.0, 2.0 * i + j + 1.5);
        vr.col(sk) = dr * scale;
        vs.col(sk) = ds * scale;
        vt.col(sk) = dt * scale;
        ++sk;
      }
    }
  }
}

Mat simplex2d_vandermonde(const Mat& rs, int p) {
  const int n = static_cast<int>(rs.rows());
  const int np = (p + 1) * (p + 2) / 2;
  Vec a(n), b(n);
  for (int i = 0; i < n; ++i) {
    const double r = rs(i, 0), s = rs(i, 1);
    a(i) = (std::abs(1 - s) > 1e-14) ? 2.0 * (1 + r) / (1 - s) - 1.0 : -1.0;
    b(i) = s;
  }
  Mat v(n, np);
  int sk = 0;
  for (int i = 0; i <= p; ++i) {
    for (int j = 0; j <= p - i; ++j) {
      const Vec h1 = jacobi_p(a, 0, 0, i);
      const Vec h2 = jacobi_p(b, 2.0 * i + 1, 0, j);
      v.col(sk) = std::sqrt(2.0) * h1.array() * h2.array() *
                  Eigen::pow(1.0 - b.array(), i);
      ++sk;
    }
  }
  return v;
}

}  // namespace dgtd
