#include <doctest.h>
#include <algorithm>

#include <cmath>

#include "dgtd/constants.hpp"
#include "dgtd/errors.hpp"
#include "dgtd/mesh.hpp"
#include "dgtd/pml.hpp"

using namespace dgtd;

namespace {

AxisProfile z_profile(double sigma_max, double kappa_max = 1.0,
                      int p_sigma = 1) {
  AxisProfile p;
  p.active = true;
  p.u0 = 0.10;
  p.thickness = 0.016;
  p.sigma_max = sigma_max;
  p.kappa_max = kappa_max;
  p.p_sigma = p_sigma;
  return p;
}

}  // namespace

TEST_CASE("stretching profile") {
  auto p = z_profile(3.0, 2.0, 1);
  SUBCASE("zero inside the computation domain, continuous at the interface") {
    CHECK(eval_profile(p, 0.0) == std::pair{0.0, 1.0});
    CHECK(eval_profile(p, 0.10) == std::pair{0.0, 1.0});
    CHECK(eval_profile(p, -0.05) == std::pair{0.0, 1.0});
  }
  SUBCASE("full value at the outer edge for a linear ramp") {
    auto [s, k] = eval_profile(p, 0.10 + 0.016);
    CHECK(s == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(k == doctest::Approx(2.0).epsilon(1e-14));
    auto [sm, km] = eval_profile(p, -(0.10 + 0.016));
    CHECK(sm == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(km == doctest::Approx(2.0).epsilon(1e-14));
  }
  SUBCASE("quadratic ramp at the mid-layer") {
    auto q = z_profile(3.0, 1.0, 2);
    auto [s, k] = eval_profile(q, 0.10 + 0.008);
    CHECK(s == doctest::Approx(3.0 / 4).epsilon(1e-14));
    CHECK(k == 1.0);
  }
  SUBCASE("monotone in depth") {
    double prev = -1;
    for (int i = 0; i <= 16; ++i) {
      auto [s, k] = eval_profile(p, 0.10 + 0.001 * i);
      CHECK(s >= prev);
      prev = s;
    }
  }
}

TEST_CASE("update-tensor entries") {
  constexpr double e0 = constants::eps0;
  SUBCASE("vacuum limit") {
    const auto t = tensor_coefficients(Vec3(0, 0, 0), Vec3(1, 1, 1));
    CHECK((t.a - Vec3::Ones()).norm() == 0.0);
    CHECK(t.b.norm() == 0.0);
    CHECK(t.c.norm() == 0.0);
    CHECK(t.d.norm() == 0.0);
    CHECK((t.inv_kappa - Vec3::Ones()).norm() == 0.0);
  }
  SUBCASE("uniaxial conductivity along z") {
    const double s = 2.5;
    const auto t = tensor_coefficients(Vec3(0, 0, s), Vec3(1, 1, 1));
    CHECK((t.a - Vec3::Ones()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(t.b(0) == doctest::Approx(s / e0).epsilon(1e-14));
    CHECK(t.b(1) == doctest::Approx(s / e0).epsilon(1e-14));
    CHECK(t.b(2) == doctest::Approx(-s / e0).epsilon(1e-14));
    CHECK(t.c(0) == 0.0);
    CHECK(t.c(1) == 0.0);
    CHECK(t.c(2) == doctest::Approx(s * s / (e0 * e0)).epsilon(1e-14));
    CHECK(t.d(0) == 0.0);
    CHECK(t.d(1) == 0.0);
    CHECK(t.d(2) == doctest::Approx(s / e0).epsilon(1e-14));
  }
  SUBCASE("pure stretching along x") {
    const auto t = tensor_coefficients(Vec3(0, 0, 0), Vec3(2, 1, 1));
    CHECK(t.a(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t.a(1) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(t.a(2) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(t.b.norm() == 0.0);
    CHECK(t.c.norm() == 0.0);
    CHECK(t.d.norm() == 0.0);
    CHECK(t.inv_kappa(0) == 0.5);
    CHECK(t.inv_kappa(1) == 1.0);
  }
}

namespace {

// small PML test mesh: |z| > z0 tagged, 2x2x(interior+pml) lattice
struct PmlFixture {
  Mesh mesh;
  ReferenceOperators ops;
  GeometricFactors geo;
  StretchProfile prof;
  double z0 = 0.008;

  explicit PmlFixture(int p, MeshStyle style = MeshStyle::Layered,
                      double jitter = 0.0) {
    BoxMeshSpec spec;
    spec.origin = Vec3(-0.004, -0.004, -0.016);
    spec.extent = Vec3(0.008, 0.008, 0.032);
    spec.target_edge = 0.004;
    spec.style = style;
    spec.jitter = jitter;
    spec.jitter_zmin = z0;
    spec.jitter_zmax = 0.016;
    mesh = build_box_mesh(spec);
    connect_mesh(mesh, true, true);
    tag_pml_region(mesh, z0);
    ops = build_reference_operators(p);
    geo = geometric_factors(mesh);
    prof.axis[2] = AxisProfile{true, z0, 0.008, 2.0, 1.0, 1};
  }
};

}  // namespace

TEST_CASE("coefficient sampling strategies") {
  PmlFixture fx(2);

  SUBCASE("interior elements carry no samples; PML elements do") {
    const auto c = sample_coefficients(fx.mesh, fx.prof,
                                       SamplingStrategy::SmoothlyVarying,
                                       SampleLocation::Nodes, fx.ops);
    for (int k : c.elements) CHECK(fx.mesh.region[k] == 1);
    CHECK(c.elements.size() ==
          static_cast<size_t>(std::count(fx.mesh.region.begin(),
                                         fx.mesh.region.end(), 1)));
  }
  SUBCASE("element-constant samples have zero variance") {
    const auto c = sample_coefficients(
        fx.mesh, fx.prof, SamplingStrategy::ElementConstantFarthestNode,
        SampleLocation::Nodes, fx.ops);
    for (const auto& s : c.samples)
      for (int ax = 0; ax < 3; ++ax) {
        CHECK((s.b.col(ax).array() - s.b(0, ax)).abs().maxCoeff() == 0.0);
        CHECK((s.d.col(ax).array() - s.d(0, ax)).abs().maxCoeff() == 0.0);
      }
  }
  SUBCASE("smoothly varying samples match pointwise profile evaluation") {
    const auto c = sample_coefficients(fx.mesh, fx.prof,
                                       SamplingStrategy::SmoothlyVarying,
                                       SampleLocation::QuadPoints, fx.ops);
    for (size_t i = 0; i < c.elements.size(); ++i) {
      const Mat pts =
          element_points(fx.mesh, c.elements[i], fx.ops.quad.points);
      for (int q = 0; q < pts.rows(); ++q) {
        const auto [sg, kp] = eval_profile(fx.prof.axis[2], pts(q, 2));
        const auto t = tensor_coefficients(Vec3(0, 0, sg), Vec3(1, 1, kp));
        CHECK(std::abs(c.samples[i].d(q, 2) - t.d(2)) <=
              1e-14 * (1.0 + std::abs(t.d(2))));
      }
    }
  }
  SUBCASE("layered-outermost requires a layered mesh") {
    PmlFixture paved(2, MeshStyle::Paved, 0.2);
    CHECK_THROWS_AS(
        sample_coefficients(paved.mesh, paved.prof,
                            SamplingStrategy::LayeredOutermost,
                            SampleLocation::Nodes, paved.ops),
        ConfigError);
    // on the clean layered mesh the two element-constant strategies agree
    const auto lo = sample_coefficients(fx.mesh, fx.prof,
                                        SamplingStrategy::LayeredOutermost,
                                        SampleLocation::Nodes, fx.ops);
    const auto ec = sample_coefficients(
        fx.mesh, fx.prof, SamplingStrategy::ElementConstantFarthestNode,
        SampleLocation::Nodes, fx.ops);
    for (size_t i = 0; i < lo.samples.size(); ++i) {
      const double scale = 1.0 + ec.samples[i].d.cwiseAbs().maxCoeff();
      CHECK((lo.samples[i].d - ec.samples[i].d).cwiseAbs().maxCoeff() <
            1e-12 * scale);
    }
  }
}

TEST_CASE("direct operator construction") {
  PmlFixture fx(2);
  const int np = fx.ops.n_nodes;

  SUBCASE("vacuum coefficients give the plain mass inverse") {
    ElementCoeffSamples vac;
    vac.a = Mat::Ones(np, 3);
    vac.b = Mat::Zero(np, 3);
    vac.c = Mat::Zero(np, 3);
    vac.d = Mat::Zero(np, 3);
    vac.inv_kappa = Mat::Ones(np, 3);
    const double jk = 2.0;
    const auto d = build_direct_element(vac, fx.ops, jk);
    CHECK((d.A[0] - fx.ops.mass_inv / jk).cwiseAbs().maxCoeff() <
          1e-12 * fx.ops.mass_inv.cwiseAbs().maxCoeff());
    CHECK(d.Tb[1].cwiseAbs().maxCoeff() < 1e-12);
    CHECK(d.Tc[2].cwiseAbs().maxCoeff() < 1e-12);
    CHECK(d.Td[0].cwiseAbs().maxCoeff() < 1e-12);
    CHECK((d.Tk[0] - Mat::Identity(np, np)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("constant a scales the inverse") {
    ElementCoeffSamples s;
    s.a = 2.0 * Mat::Ones(np, 3);
    s.b = Mat::Zero(np, 3);
    s.c = Mat::Zero(np, 3);
    s.d = Mat::Zero(np, 3);
    s.inv_kappa = Mat::Ones(np, 3);
    const double jk = 3.0;
    const auto d = build_direct_element(s, fx.ops, jk);
    CHECK((d.A[0] - fx.ops.mass_inv / (2.0 * jk)).cwiseAbs().maxCoeff() <
          1e-12 * fx.ops.mass_inv.cwiseAbs().maxCoeff());
  }
  SUBCASE("nonpositive a is rejected") {
    ElementCoeffSamples s;
    s.a = Mat::Ones(np, 3);
    s.a(1, 0) = -0.5;
    s.b = s.c = s.d = Mat::Zero(np, 3);
    s.inv_kappa = Mat::Ones(np, 3);
    CHECK_THROWS_AS(build_direct_element(s, fx.ops, 1.0), ConfigError);
  }
  SUBCASE("smooth coefficient assembly matches a refined-quadrature oracle") {
    // a(r) = 1 + x/4 on the reference element
    const auto& ops = fx.ops;
    ElementCoeffSamples s;
    s.a.resize(np, 3);
    for (int i = 0; i < np; ++i)
      s.a.row(i).setConstant(1.0 + ops.nodes(i, 0) / 4.0);
    s.b = s.c = s.d = Mat::Zero(np, 3);
    s.inv_kappa = Mat::Ones(np, 3);
    const auto d = build_direct_element(s, ops, 1.0);

    // oracle: dense assembly with a high-degree collapsed rule
    const auto oracle_q = tet_collapsed_rule(4 * ops.order + 2);
    const Mat l = lagrange_basis_at(ops, oracle_q.points);
    Mat ma = Mat::Zero(np, np);
    for (int q = 0; q < oracle_q.n_points; ++q) {
      const double aq = 1.0 + oracle_q.points(q, 0) / 4.0;
      ma += oracle_q.weights(q) * aq * l.row(q).transpose() * l.row(q);
    }
    const Mat a_oracle = ma.llt().solve(Mat::Identity(np, np));
    CHECK((d.A[0] - a_oracle).norm() <= 1e-10 * a_oracle.norm());
  }
}

TEST_CASE("weight-adjusted operators") {
  PmlFixture fx(2);
  const auto& ops = fx.ops;
  const int np = ops.n_nodes, nq = ops.quad.n_points;

  SUBCASE("assembled weighted mass is symmetric") {
    Vec alpha(nq);
    for (int q = 0; q < nq; ++q) alpha(q) = 1.0 + 0.3 * ops.quad.points(q, 0);
    const Mat m = assemble_weighted_mass_quad(alpha, ops, 1.7);
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <
          1e-15 * m.cwiseAbs().maxCoeff());
  }
  SUBCASE("constant coefficients: fused operators act as scalars") {
    ElementCoeffSamples s;
    s.a = 2.0 * Mat::Ones(nq, 3);
    s.b = 3.0 * Mat::Ones(nq, 3);
    s.c = -1.5 * Mat::Ones(nq, 3);
    s.d = 0.7 * Mat::Ones(nq, 3);
    s.inv_kappa = 0.5 * Mat::Ones(nq, 3);
    const auto w = build_waa_element(s);
    Vec v = Vec::LinSpaced(np, -1, 1);
    for (int ax = 0; ax < 3; ++ax) {
      CHECK((waa_fused_dense(w, ax, FusedKind::B, ops) * v -
             (3.0 / 2.0) * v).cwiseAbs().maxCoeff() < 1e-12 * v.cwiseAbs().maxCoeff() * 3);
      CHECK((waa_fused_dense(w, ax, FusedKind::C, ops) * v -
             (-1.5 / 2.0) * v).cwiseAbs().maxCoeff() < 1e-12 * v.cwiseAbs().maxCoeff() * 3);
      CHECK((waa_fused_dense(w, ax, FusedKind::D, ops) * v - 0.7 * v)
                .cwiseAbs().maxCoeff() < 1e-12);
      CHECK((waa_fused_dense(w, ax, FusedKind::Kappa, ops) * v - 0.5 * v)
                .cwiseAbs().maxCoeff() < 1e-12);
    }
    // the weight-adjusted inverse equals (a Jk M)^{-1} exactly for constants
    const double jk = 1.3;
    const Mat inv = waa_inverse_dense(w, 0, ops, jk);
    const Mat exact = ops.mass_inv / (2.0 * jk);
    CHECK((inv - exact).norm() < 1e-12 * exact.norm());
  }
  SUBCASE("nonpositive samples are rejected") {
    ElementCoeffSamples s;
    s.a = Mat::Ones(nq, 3);
    s.a(0, 2) = 0.0;
    s.b = s.c = s.d = Mat::Zero(nq, 3);
    s.inv_kappa = Mat::Ones(nq, 3);
    CHECK_THROWS_AS(build_waa_element(s), ConfigError);
  }
  SUBCASE("smooth a: weight-adjusted inverse approaches the dense inverse") {
    // relative operator-norm error small at p=2 and decreasing at p=3 is
    // covered by the acceptance suite; here a sanity bound at p=2
    ElementCoeffSamples nodal;
    nodal.a.resize(np, 3);
    for (int i = 0; i < np; ++i)
      nodal.a.row(i).setConstant(1.0 + ops.nodes(i, 0) / 4.0);
    nodal.b = nodal.c = nodal.d = Mat::Zero(np, 3);
    nodal.inv_kappa = Mat::Ones(np, 3);
    const auto direct = build_direct_element(nodal, ops, 1.0);

    ElementCoeffSamples atq;
    atq.a.resize(nq, 3);
    for (int q = 0; q < nq; ++q)
      atq.a.row(q).setConstant(1.0 + ops.quad.points(q, 0) / 4.0);
    atq.b = atq.c = atq.d = Mat::Zero(nq, 3);
    atq.inv_kappa = Mat::Ones(nq, 3);
    const auto w = build_waa_element(atq);
    const Mat approx = waa_inverse_dense(w, 0, ops, 1.0);
    const double rel = (approx - direct.A[0]).norm() / direct.A[0].norm();
    CHECK(rel < 0.1);   // measured 3.4e-2 at p=2; decreases with p
    CHECK(rel > 1e-9);  // genuinely approximate for smooth coefficients
  }
}

TEST_CASE("storage accounting matches the formulas exactly") {
  PmlFixture fx(2);
  const auto nodal = sample_coefficients(fx.mesh, fx.prof,
                                         SamplingStrategy::SmoothlyVarying,
                                         SampleLocation::Nodes, fx.ops);
  const auto atq = sample_coefficients(fx.mesh, fx.prof,
                                       SamplingStrategy::SmoothlyVarying,
                                       SampleLocation::QuadPoints, fx.ops);
  const auto direct = build_direct_operators(nodal, fx.ops, fx.geo.jacobian);
  const auto waa = build_waa_operators(atq, fx.ops, fx.geo.jacobian);
  const auto kpml = direct.elements.size();
  CHECK(direct.allocated_doubles ==
        15ull * kpml * fx.ops.n_nodes * fx.ops.n_nodes);
  CHECK(waa.allocated_doubles == 15ull * kpml * fx.ops.quad.n_points);
  CHECK(waa.shared_doubles ==
        2ull * fx.ops.n_nodes * fx.ops.quad.n_points);
}
