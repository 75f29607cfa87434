#include "dgtd/pml.hpp"

#include <cmath>
#include <string>

#include "dgtd/constants.hpp"
#include "dgtd/errors.hpp"

namespace dgtd {

std::pair<double, double> eval_profile(const AxisProfile& prof, double u) {
  if (!prof.active) return {0.0, 1.0};
  const double depth = std::abs(u) - prof.u0;
  if (depth <= 0.0) return {0.0, 1.0};
  const double ramp = std::pow(depth / prof.thickness, prof.p_sigma);
  return {prof.sigma_max * ramp, 1.0 + (prof.kappa_max - 1.0) * ramp};
}

TensorCoefficients tensor_coefficients(const Vec3& sigma, const Vec3& kappa) {
  constexpr double e0 = constants::eps0;
  TensorCoefficients t;
  for (int u = 0; u < 3; ++u) {
    const int v = (u + 1) % 3, w = (u + 2) % 3;
    t.a(u) = kappa(v) * kappa(w) / kappa(u);
    t.b(u) = (sigma(v) * kappa(w) + sigma(w) * kappa(v) - t.a(u) * sigma(u)) /
             (kappa(u) * e0);
    t.c(u) = sigma(v) * sigma(w) / (e0 * e0) - t.b(u) * sigma(u) / e0;
    t.d(u) = sigma(u) / (kappa(u) * e0);
    t.inv_kappa(u) = 1.0 / kappa(u);
  }
  return t;
}

PmlCoefficients sample_coefficients(const Mesh& mesh,
                                    const StretchProfile& profile,
                                    SamplingStrategy strategy,
                                    SampleLocation location,
                                    const ReferenceOperators& ops) {
  if (strategy == SamplingStrategy::LayeredOutermost &&
      mesh.style != MeshStyle::Layered)
    throw ConfigError(
        "sample_coefficients: layered-outermost sampling requires a layered "
        "mesh");

  PmlCoefficients out;
  out.strategy = strategy;
  out.location = location;
  const Mat& ref =
      location == SampleLocation::Nodes ? ops.nodes : ops.quad.points;
  const int n = static_cast<int>(ref.rows());

  for (int k = 0; k < mesh.n_elements(); ++k) {
    if (!mesh.region.empty() && mesh.region[k] == 0) continue;
    out.elements.push_back(k);
    const Mat pts = element_points(mesh, k, ref);

    // per-axis (sigma, kappa) at every sample point
    Mat sig = Mat::Zero(n, 3), kap = Mat::Ones(n, 3);
    for (int ax = 0; ax < 3; ++ax) {
      const AxisProfile& prof = profile.axis[ax];
      if (!prof.active) continue;
      switch (strategy) {
        case SamplingStrategy::SmoothlyVarying: {
          for (int i = 0; i < n; ++i) {
            const auto [s, kp] = eval_profile(prof, pts(i, ax));
            sig(i, ax) = s;
            kap(i, ax) = kp;
          }
          break;
        }
        case SamplingStrategy::ElementConstantFarthestNode: {
          // the element's interpolation node farthest from the interface
          const Mat nodes = element_points(mesh, k, ops.nodes);
          double far = 0.0;
          for (int i = 0; i < nodes.rows(); ++i)
            far = std::max(far, std::abs(nodes(i, ax)));
          const auto [s, kp] = eval_profile(prof, far);
          sig.col(ax).setConstant(s);
          kap.col(ax).setConstant(kp);
          break;
        }
        case SamplingStrategy::LayeredOutermost: {
          // outermost surface of the mesh layer containing the element
          double far = 0.0;
          for (int v = 0; v < 4; ++v)
            far = std::max(
                far, std::abs(mesh.vertices(mesh.elements(k, v), ax)));
          const auto [s, kp] = eval_profile(prof, far);
          sig.col(ax).setConstant(s);
          kap.col(ax).setConstant(kp);
          break;
        }
      }
    }

    ElementCoeffSamples ec;
    ec.a.resize(n, 3);
    ec.b.resize(n, 3);
    ec.c.resize(n, 3);
    ec.d.resize(n, 3);
    ec.inv_kappa.resize(n, 3);
    for (int i = 0; i < n; ++i) {
      const TensorCoefficients t = tensor_coefficients(
          sig.row(i).transpose(), kap.row(i).transpose());
      ec.a.row(i) = t.a.transpose();
      ec.b.row(i) = t.b.transpose();
      ec.c.row(i) = t.c.transpose();
      ec.d.row(i) = t.d.transpose();
      ec.inv_kappa.row(i) = t.inv_kappa.transpose();
    }
    out.samples.push_back(std::move(ec));
  }
  return out;
}

namespace {

Mat assemble_weighted_mass_assembly_rule(const Vec& alpha_nodal,
                                         const ReferenceOperators& ops,
                                         double jacobian) {
  const Vec alpha_q = ops.interp_to_assembly * alpha_nodal;
  return jacobian * ops.interp_to_assembly.transpose() *
         (ops.assembly_quad.weights.array() * alpha_q.array())
             .matrix()
             .asDiagonal() *
         ops.interp_to_assembly;
}

}  // namespace

Mat assemble_weighted_mass_quad(const Vec& alpha_at_quad,
                                const ReferenceOperators& ops,
                                double jacobian) {
  if (alpha_at_quad.size() != ops.quad.n_points)
    throw ContractError("assemble_weighted_mass_quad: sample count mismatch");
  return jacobian * ops.interp_to_quad.transpose() *
         (ops.quad.weights.array() * alpha_at_quad.array())
             .matrix()
             .asDiagonal() *
         ops.interp_to_quad;
}

DirectElementOperators build_direct_element(const ElementCoeffSamples& nodal,
                                            const ReferenceOperators& ops,
                                            double jacobian) {
  if (nodal.a.rows() != ops.n_nodes)
    throw ContractError("build_direct_element: expected nodal samples");
  if ((nodal.a.array() <= 0).any() || (nodal.inv_kappa.array() <= 0).any())
    throw ConfigError(
        "build_direct_element: coefficient samples a and kappa must be "
        "positive");
  DirectElementOperators d;
  const int np = ops.n_nodes;
  for (int ax = 0; ax < 3; ++ax) {
    const Mat ma = assemble_weighted_mass_assembly_rule(nodal.a.col(ax), ops,
                                                        jacobian);
    Eigen::LLT<Mat> llt(ma);
    if (llt.info() != Eigen::Success)
      throw ConfigError(
          "build_direct_element: weighted mass matrix not SPD (coefficient a "
          "must be positive)");
    d.A[ax] = llt.solve(Mat::Identity(np, np));
    d.Tb[ax] = d.A[ax] * assemble_weighted_mass_assembly_rule(nodal.b.col(ax),
                                                              ops, jacobian);
    d.Tc[ax] = d.A[ax] * assemble_weighted_mass_assembly_rule(nodal.c.col(ax),
                                                              ops, jacobian);
    // M_k^-1 M_k^alpha: the element Jacobian cancels
    d.Td[ax] = ops.mass_inv *
               assemble_weighted_mass_assembly_rule(nodal.d.col(ax), ops, 1.0);
    d.Tk[ax] = ops.mass_inv * assemble_weighted_mass_assembly_rule(
                                  nodal.inv_kappa.col(ax), ops, 1.0);
  }
  return d;
}

DirectPmlOperators build_direct_operators(const PmlCoefficients& coeffs,
                                          const ReferenceOperators& ops,
                                          const Vec& jacobians) {
  if (coeffs.location != SampleLocation::Nodes)
    throw ContractError("build_direct_operators: requires nodal samples");
  DirectPmlOperators out;
  out.elements = coeffs.elements;
  out.ops.reserve(coeffs.elements.size());
  for (size_t i = 0; i < coeffs.elements.size(); ++i) {
    out.ops.push_back(build_direct_element(coeffs.samples[i], ops,
                                           jacobians(coeffs.elements[i])));
    out.allocated_doubles += 15u * ops.n_nodes * ops.n_nodes;
  }
  return out;
}

WaaElementOperators build_waa_element(const ElementCoeffSamples& at_quad) {
  if ((at_quad.a.array() <= 0).any() || (at_quad.inv_kappa.array() <= 0).any())
    throw ConfigError(
        "build_waa_element: coefficient samples a and kappa must be positive");
  WaaElementOperators w;
  w.inv_a = at_quad.a.array().inverse();
  w.b = at_quad.b;
  w.c = at_quad.c;
  w.d = at_quad.d;
  w.inv_kappa = at_quad.inv_kappa;
  return w;
}

WaaPmlOperators build_waa_operators(const PmlCoefficients& coeffs,
                                    const ReferenceOperators& ops,
                                    const Vec& /*jacobians*/) {
  if (coeffs.location != SampleLocation::QuadPoints)
    throw ContractError(
        "build_waa_operators: requires samples at quadrature points");
  WaaPmlOperators out;
  out.elements = coeffs.elements;
  out.ops.reserve(coeffs.elements.size());
  for (size_t i = 0; i < coeffs.elements.size(); ++i) {
    if (coeffs.samples[i].a.rows() != ops.quad.n_points)
      throw ContractError("build_waa_operators: sample count mismatch");
    out.ops.push_back(build_waa_element(coeffs.samples[i]));
    out.allocated_doubles += 15u * ops.quad.n_points;
  }
  out.shared_doubles = 2u * ops.n_nodes * ops.quad.n_points;
  return out;
}

Mat waa_inverse_dense(const WaaElementOperators& w, int axis,
                      const ReferenceOperators& ops, double jacobian) {
  return ops.project_from_quad * w.inv_a.col(axis).asDiagonal() *
         ops.interp_to_quad * (ops.mass_inv / jacobian);
}

Mat waa_fused_dense(const WaaElementOperators& w, int axis, FusedKind kind,
                    const ReferenceOperators& ops) {
  const Mat pq = ops.project_from_quad;
  const Mat vq = ops.interp_to_quad;
  switch (kind) {
    case FusedKind::B:
      return pq * w.inv_a.col(axis).asDiagonal() * vq * pq *
             w.b.col(axis).asDiagonal() * vq;
    case FusedKind::C:
      return pq * w.inv_a.col(axis).asDiagonal() * vq * pq *
             w.c.col(axis).asDiagonal() * vq;
    case FusedKind::D:
      return pq * w.d.col(axis).asDiagonal() * vq;
    case FusedKind::Kappa:
    default:
      return pq * w.inv_kappa.col(axis).asDiagonal() * vq;
  }
}

}  // namespace dgtd
