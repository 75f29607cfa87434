#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "dgtd/dense.hpp"
#include "dgtd/mesh.hpp"
#include "dgtd/reference_element.hpp"

namespace dgtd {

// One-dimensional stretching profile along one axis, symmetric in |u|:
//   sigma(u) = sigma_max ((|u|-u0)/L)^p_sigma   for |u| > u0
//   kappa(u) = 1 + (kappa_max-1) ((|u|-u0)/L)^p_sigma
struct AxisProfile {
  bool active = false;
  double u0 = 0.0;         // interface coordinate (meters)
  double thickness = 0.0;  // L (meters)
  double sigma_max = 0.0;  // S/m
  double kappa_max = 1.0;
  int p_sigma = 1;
};

struct StretchProfile {
  std::array<AxisProfile, 3> axis;
};

// (sigma, kappa) at coordinate u along the given axis profile
std::pair<double, double> eval_profile(const AxisProfile& prof, double u);

// Diagonal update-tensor entries from pointwise (sigma, kappa) triples,
// cyclic in (u,v,w). b, d carry 1/s; c carries 1/s^2.
struct TensorCoefficients {
  Vec3 a, b, c, d, inv_kappa;
};
TensorCoefficients tensor_coefficients(const Vec3& sigma, const Vec3& kappa);

enum class SamplingStrategy {
  ElementConstantFarthestNode,
  LayeredOutermost,
  SmoothlyVarying,
};
enum class SampleLocation { Nodes, QuadPoints };

// Per-element coefficient samples; each matrix is n_samples x 3 (axis columns).
struct ElementCoeffSamples {
  Mat a, b, c, d, inv_kappa;
};

struct PmlCoefficients {
  SamplingStrategy strategy = SamplingStrategy::SmoothlyVarying;
  SampleLocation location = SampleLocation::Nodes;
  std::vector<int> elements;  // PML element ids, ascending
  std::vector<ElementCoeffSamples> samples;
};

PmlCoefficients sample_coefficients(const Mesh& mesh,
                                    const StretchProfile& profile,
                                    SamplingStrategy strategy,
                                    SampleLocation location,
                                    const ReferenceOperators& ops);

// Direct path: five dense N_p x N_p matrices per element per axis.
//   A = (M^a)^-1, Tb = (M^a)^-1 M^b, Tc = (M^a)^-1 M^c,
//   Td = M^-1 M^d, Tk = M^-1 M^{1/kappa}
struct DirectElementOperators {
  std::array<Mat, 3> A, Tb, Tc, Td, Tk;
};

struct DirectPmlOperators {
  std::vector<int> elements;
  std::vector<DirectElementOperators> ops;
  std::size_t allocated_doubles = 0;
};

DirectElementOperators build_direct_element(const ElementCoeffSamples& nodal,
                                            const ReferenceOperators& ops,
                                            double jacobian);
DirectPmlOperators build_direct_operators(const PmlCoefficients& coeffs,
                                          const ReferenceOperators& ops,
                                          const Vec& jacobians);

// Weight-adjusted path: five length-N_q diagonal sample vectors per element
// per axis (1/a, b, c, d, 1/kappa); applications go through shared V_q, P_q.
struct WaaElementOperators {
  Mat inv_a, b, c, d, inv_kappa;  // N_q x 3
};

struct WaaPmlOperators {
  std::vector<int> elements;
  std::vector<WaaElementOperators> ops;
  std::size_t allocated_doubles = 0;  // per-element sample storage
  std::size_t shared_doubles = 0;     // V_q and P_q
};

WaaElementOperators build_waa_element(const ElementCoeffSamples& at_quad);
WaaPmlOperators build_waa_operators(const PmlCoefficients& coeffs,
                                    const ReferenceOperators& ops,
                                    const Vec& jacobians);

// Dense forms of the weight-adjusted operators, for verification:
//   waa_inverse_dense  : P_q diag(1/a) V_q M_k^-1        (Eq-(M^a)^-1 form)
//   waa_fused_dense    : the fused operator for one coefficient
Mat waa_inverse_dense(const WaaElementOperators& w, int axis,
                      const ReferenceOperators& ops, double jacobian);
enum class FusedKind { B, C, D, Kappa };
Mat waa_fused_dense(const WaaElementOperators& w, int axis, FusedKind kind,
                    const ReferenceOperators& ops);

// Dense weighted mass matrix M^alpha assembled with the tabulated rule from
// samples at its quadrature points (the weight-adjusted building block).
Mat assemble_weighted_mass_quad(const Vec& alpha_at_quad,
                                const ReferenceOperators& ops, double jacobian);

}  // namespace dgtd
