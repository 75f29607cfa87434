#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dgtd/mesh.hpp"
#include "dgtd/pml.hpp"
#include "dgtd/reference_element.hpp"

namespace dgtd {

enum class Flux { Upwind, Central };
enum class PmlPath { None, ElementConstant, Direct, Waa };

struct SolverConfig {
  Flux flux = Flux::Upwind;
  double cfl = 0.5;
  PmlPath pml_path = PmlPath::None;
  Vec eps_rel;  // per element; empty = vacuum
  Vec mu_rel;
  bool debug_checks = false;
  int finite_check_interval = 25;
};

// Base-band Gaussian plane wave injected across the z = 0 plane, travelling
// in +z: E = x^ E0 G(t - z/c0), G(t) = exp(-(t-t0)^2 / (4 tau^2)).
struct PlaneWaveSource {
  bool enabled = false;
  double e0 = 1.0;  // V/m
  double tau = 66.67e-12;
  double t0 = 15 * 66.67e-12;
  double gaussian(double t) const {
    const double s = (t - t0) / (2.0 * tau);
    return std::exp(-s * s);
  }
};

struct FieldState {
  std::array<Mat, 3> E, H;    // N_p x K nodal coefficients
  std::array<Mat, 3> PE, PH;  // N_p x K_pml auxiliary fields
  double time = 0.0;
};

struct PmlSetup {
  PmlPath path = PmlPath::None;
  PmlCoefficients coeffs;      // element-constant path reads these directly
  DirectPmlOperators direct;   // pml_path == Direct
  WaaPmlOperators waa;         // pml_path == Waa
};

class Simulation {
 public:
  Simulation(const Mesh& mesh, const ReferenceOperators& ops,
             const GeometricFactors& geo, SolverConfig config,
             PmlSetup pml = {}, PlaneWaveSource source = {});

  FieldState make_state() const;

  // Semi-discrete right-hand side of all unknowns at time t.
  void rhs(const FieldState& state, double t, FieldState& out);

  // One low-storage RK(5,4) step.
  void step(FieldState& state, double dt);

  double stable_dt() const;

  // Discrete EM energy over non-PML elements (joules).
  double energy(const FieldState& state) const;

  // M^{-1}-applied curl operators including numerical flux and boundary /
  // injection terms: ch drives the E equation, ce the H equation.
  void curl_rhs(const FieldState& state, double t, std::array<Mat, 3>& ch,
                std::array<Mat, 3>& ce);

  struct ProbeHandle {
    int element = -1;
    Vec weights;
  };
  ProbeHandle locate(const Vec3& point) const;
  // samples (Ex,Ey,Ez,Hx,Hy,Hz) at a located point
  Eigen::Matrix<double, 6, 1> sample(const FieldState& state,
                                     const ProbeHandle& probe) const;

  int n_elements() const { return k_; }
  int n_pml_elements() const { return kpml_; }
  const std::vector<int>& pml_elements() const { return pml_elements_; }
  const Mesh& mesh() const { return mesh_; }
  const ReferenceOperators& ops() const { return ops_; }
  const GeometricFactors& geometry() const { return geo_; }
  const SolverConfig& config() const { return config_; }

 private:
  void check_finite(const FieldState& state, double t) const;
  void apply_pml_terms(const FieldState& state, const std::array<Mat, 3>& ch,
                       const std::array<Mat, 3>& ce, FieldState& out);

  const Mesh& mesh_;
  const ReferenceOperators& ops_;
  const GeometricFactors& geo_;
  SolverConfig config_;
  PmlSetup pml_;
  PlaneWaveSource source_;

  int k_ = 0, np_ = 0, nfp4_ = 0, kpml_ = 0;
  Mat dstack_;  // 3 N_p x N_p differentiation (r,s,t blocks)
  Mat lift_;

  // per-element metric rows (dr_i/dx_j), each length K
  std::array<std::array<Eigen::RowVectorXd, 3>, 3> metric_;
  Eigen::RowVectorXd inv_eps_, inv_mu_;  // absolute material inverses
  Eigen::RowVectorXd wavespeed_;

  // face-node tables (4 N_fp x K)
  MatInt vmap_m_, vmap_p_;
  Mat pec_mask_;  // 1 on PEC slots
  Mat nx_, ny_, nz_, fscale_;
  Mat zp_frac_, yp_frac_, inv_zsum_, inv_ysum_;  // upwind material weights
  std::vector<std::pair<std::int64_t, double>> tfsf_slots_;  // (slot, sign)

  std::vector<int> pml_elements_;  // ascending element ids
  std::vector<int> pml_index_of_;  // K -> compact pml index or -1

  // element-constant coefficients (K_pml x 3 each)
  Mat ec_a_, ec_b_, ec_c_, ec_d_, ec_ik_;
  // weight-adjusted samples (N_q x K_pml per axis)
  std::array<Mat, 3> waa_inv_a_, waa_b_, waa_c_, waa_d_, waa_ik_;

  // scratch
  std::array<Mat, 3> em_, ep_, hm_, hp_, de_, dh_, flux_e_, flux_h_;
  std::array<Mat, 3> curl_e_, curl_h_;
  std::array<Mat, 6> dref_;  // 3Np x K per component
  Mat ndot_e_, ndot_h_;
  std::array<Mat, 3> ch_, ce_;
  FieldState res_;    // low-storage RK register
  FieldState deriv_;  // RK stage derivative
  std::uint64_t steps_taken_ = 0;
};

}  // namespace dgtd
