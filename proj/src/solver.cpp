#include "dgtd/solver.hpp"

#include <algorithm>
#include <sstream>

#include "dgtd/constants.hpp"
#include "dgtd/errors.hpp"

namespace dgtd {

namespace {

// Carpenter-Kennedy low-storage RK(5,4)
const double kRkA[5] = {0.0, -567301805773.0 / 1357537059087.0,
                        -2404267990393.0 / 2016746695238.0,
                        -3550918686646.0 / 2091501179385.0,
                        -1275806237668.0 / 842570457699.0};
const double kRkB[5] = {1432997174477.0 / 9575080441755.0,
                        5161836677717.0 / 13612068292357.0,
                        1720146321549.0 / 2090206949498.0,
                        3134564353537.0 / 4481467310338.0,
                        2277821191437.0 / 14882151754819.0};
const double kRkC[5] = {0.0, 1432997174477.0 / 9575080441755.0,
                        2526269341429.0 / 6820363962896.0,
                        2006345519317.0 / 3224310063776.0,
                        2802321613138.0 / 2924317926251.0};

void gather(const Mat& field, const MatInt& idx, Mat& out) {
  const double* src = field.data();
  const int* ix = idx.data();
  double* dst = out.data();
  const Eigen::Index n = idx.size();
  for (Eigen::Index i = 0; i < n; ++i) dst[i] = src[ix[i]];
}

}  // namespace

Simulation::Simulation(const Mesh& mesh, const ReferenceOperators& ops,
                       const GeometricFactors& geo, SolverConfig config,
                       PmlSetup pml, PlaneWaveSource source)
    : mesh_(mesh),
      ops_(ops),
      geo_(geo),
      config_(std::move(config)),
      pml_(std::move(pml)),
      source_(source) {
  if (!mesh.connected)
    throw ContractError("Simulation: mesh must be connected first");
  k_ = mesh.n_elements();
  np_ = ops.n_nodes;
  const int nfp = ops.n_face_nodes;
  nfp4_ = 4 * nfp;

  dstack_.resize(3 * np_, np_);
  dstack_.topRows(np_) = ops.diff[0];
  dstack_.middleRows(np_, np_) = ops.diff[1];
  dstack_.bottomRows(np_) = ops.diff[2];
  lift_ = ops.lift;

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      metric_[i][j].resize(k_);
      for (int k = 0; k < k_; ++k) metric_[i][j](k) = geo.inv_map[k](i, j);
    }

  inv_eps_.resize(k_);
  inv_mu_.resize(k_);
  wavespeed_.resize(k_);
  Vec zk(k_);
  for (int k = 0; k < k_; ++k) {
    const double er = config_.eps_rel.size() ? config_.eps_rel(k) : 1.0;
    const double mr = config_.mu_rel.size() ? config_.mu_rel(k) : 1.0;
    const double eps = er * constants::eps0, mu = mr * constants::mu0;
    inv_eps_(k) = 1.0 / eps;
    inv_mu_(k) = 1.0 / mu;
    wavespeed_(k) = 1.0 / std::sqrt(eps * mu);
    zk(k) = std::sqrt(mu / eps);
  }

  // face-node correspondence tables
  vmap_m_.resize(nfp4_, k_);
  vmap_p_.resize(nfp4_, k_);
  pec_mask_ = Mat::Zero(nfp4_, k_);
  nx_.resize(nfp4_, k_);
  ny_.resize(nfp4_, k_);
  nz_.resize(nfp4_, k_);
  fscale_.resize(nfp4_, k_);
  zp_frac_.resize(nfp4_, k_);
  yp_frac_.resize(nfp4_, k_);
  inv_zsum_.resize(nfp4_, k_);
  inv_ysum_.resize(nfp4_, k_);

  const Vec3 period = mesh.box_hi - mesh.box_lo;
  const double tol = 1e-9 * period.maxCoeff();

  for (int k = 0; k < k_; ++k) {
    for (int f = 0; f < 4; ++f) {
      Mat fpts(nfp, 3);
      {
        Mat ref(nfp, 3);
        for (int j = 0; j < nfp; ++j)
          ref.row(j) = ops.nodes.row(ops.face_nodes[f][j]);
        fpts = element_points(mesh, k, ref);
      }
      const int nbr = mesh.neighbor(k, f);
      const FaceTag tag = mesh.tag(k, f);
      Vec3 shift = Vec3::Zero();
      if (tag == FaceTag::PeriodicX || tag == FaceTag::PeriodicY ||
          tag == FaceTag::PeriodicZ) {
        const int ax = tag == FaceTag::PeriodicX ? 0
                       : tag == FaceTag::PeriodicY ? 1 : 2;
        // translate towards the partner plane
        const double here = fpts(0, ax);
        shift(ax) = (std::abs(here - mesh.box_lo(ax)) < std::abs(here - mesh.box_hi(ax)))
                        ? period(ax)
                        : -period(ax);
      }

      Mat npts;
      std::vector<int> nnodes;
      if (nbr >= 0) {
        const int f2 = mesh.neighbor_face(k, f);
        Mat ref2(nfp, 3);
        for (int j = 0; j < nfp; ++j)
          ref2.row(j) = ops.nodes.row(ops.face_nodes[f2][j]);
        npts = element_points(mesh, nbr, ref2);
        nnodes.assign(ops.face_nodes[f2].begin(), ops.face_nodes[f2].end());
      }

      for (int j = 0; j < nfp; ++j) {
        const int slot = f * nfp + j;
        const int my_node = ops.face_nodes[f][j];
        vmap_m_(slot, k) = k * np_ + my_node;
        if (nbr < 0) {
          vmap_p_(slot, k) = vmap_m_(slot, k);
          pec_mask_(slot, k) = 1.0;
        } else {
          const Vec3 target = fpts.row(j).transpose() + shift;
          int best = -1;
          double best_d = 1e300;
          for (int m = 0; m < nfp; ++m) {
            const double d = (npts.row(m).transpose() - target).squaredNorm();
            if (d < best_d) {
              best_d = d;
              best = m;
            }
          }
          if (std::sqrt(best_d) > 1e-6 * period.maxCoeff()) {
            std::ostringstream os;
            os << "Simulation: face nodes of elements " << k << " and " << nbr
               << " do not collocate (distance " << std::sqrt(best_d) << ")";
            throw MeshError(os.str());
          }
          vmap_p_(slot, k) = nbr * np_ + nnodes[best];
        }
        nx_(slot, k) = geo.normal[0](k, f);
        ny_(slot, k) = geo.normal[1](k, f);
        nz_(slot, k) = geo.normal[2](k, f);
        fscale_(slot, k) = geo.face_scale(k, f);
        const double zm = zk(k);
        const double zp = nbr >= 0 ? zk(nbr) : zm;
        zp_frac_(slot, k) = zp;
        inv_zsum_(slot, k) = 1.0 / (zm + zp);
        yp_frac_(slot, k) = 1.0 / zp;
        inv_ysum_(slot, k) = 1.0 / (1.0 / zm + 1.0 / zp);
      }

      if (mesh.injection_side(k, f) != 0 && source_.enabled) {
        for (int j = 0; j < nfp; ++j) {
          const std::int64_t slot =
              static_cast<std::int64_t>(k) * nfp4_ + f * nfp + j;
          tfsf_slots_.emplace_back(slot,
                                   static_cast<double>(mesh.injection_side(k, f)));
        }
      }
    }
  }

  // PML bookkeeping
  pml_index_of_.assign(k_, -1);
  if (pml_.path != PmlPath::None) {
    pml_elements_ = pml_.coeffs.elements;
    if (pml_.path == PmlPath::Direct) pml_elements_ = pml_.direct.elements;
    if (pml_.path == PmlPath::Waa) pml_elements_ = pml_.waa.elements;
    kpml_ = static_cast<int>(pml_elements_.size());
    for (int i = 0; i < kpml_; ++i) pml_index_of_[pml_elements_[i]] = i;

    if (pml_.path == PmlPath::ElementConstant) {
      ec_a_.resize(kpml_, 3);
      ec_b_.resize(kpml_, 3);
      ec_c_.resize(kpml_, 3);
      ec_d_.resize(kpml_, 3);
      ec_ik_.resize(kpml_, 3);
      for (int i = 0; i < kpml_; ++i) {
        const auto& s = pml_.coeffs.samples[i];
        // element-constant coefficients are replicated over sample points
        for (int ax = 0; ax < 3; ++ax) {
          if ((s.a.col(ax).array() - s.a(0, ax)).abs().maxCoeff() > 1e-12 ||
              (s.b.col(ax).array() - s.b(0, ax)).abs().maxCoeff() >
                  1e-12 * (1.0 + std::abs(s.b(0, ax))))
            throw ContractError(
                "Simulation: element-constant path needs constant samples");
          ec_a_(i, ax) = s.a(0, ax);
          ec_b_(i, ax) = s.b(0, ax);
          ec_c_(i, ax) = s.c(0, ax);
          ec_d_(i, ax) = s.d(0, ax);
          ec_ik_(i, ax) = s.inv_kappa(0, ax);
        }
      }
    }
    if (pml_.path == PmlPath::Waa) {
      const int nq = ops.quad.n_points;
      for (int ax = 0; ax < 3; ++ax) {
        waa_inv_a_[ax].resize(nq, kpml_);
        waa_b_[ax].resize(nq, kpml_);
        waa_c_[ax].resize(nq, kpml_);
        waa_d_[ax].resize(nq, kpml_);
        waa_ik_[ax].resize(nq, kpml_);
        for (int i = 0; i < kpml_; ++i) {
          waa_inv_a_[ax].col(i) = pml_.waa.ops[i].inv_a.col(ax);
          waa_b_[ax].col(i) = pml_.waa.ops[i].b.col(ax);
          waa_c_[ax].col(i) = pml_.waa.ops[i].c.col(ax);
          waa_d_[ax].col(i) = pml_.waa.ops[i].d.col(ax);
          waa_ik_[ax].col(i) = pml_.waa.ops[i].inv_kappa.col(ax);
        }
      }
    }
  }

  // scratch allocation
  for (int c = 0; c < 3; ++c) {
    em_[c].resize(nfp4_, k_);
    ep_[c].resize(nfp4_, k_);
    hm_[c].resize(nfp4_, k_);
    hp_[c].resize(nfp4_, k_);
    de_[c].resize(nfp4_, k_);
    dh_[c].resize(nfp4_, k_);
    flux_e_[c].resize(nfp4_, k_);
    flux_h_[c].resize(nfp4_, k_);
    curl_e_[c].resize(np_, k_);
    curl_h_[c].resize(np_, k_);
    ch_[c].resize(np_, k_);
    ce_[c].resize(np_, k_);
  }
  for (int c = 0; c < 6; ++c) dref_[c].resize(3 * np_, k_);
  ndot_e_.resize(nfp4_, k_);
  ndot_h_.resize(nfp4_, k_);
  res_ = make_state();
}

FieldState Simulation::make_state() const {
  FieldState s;
  for (int c = 0; c < 3; ++c) {
    s.E[c] = Mat::Zero(np_, k_);
    s.H[c] = Mat::Zero(np_, k_);
    s.PE[c] = Mat::Zero(np_, std::max(kpml_, 0));
    s.PH[c] = Mat::Zero(np_, std::max(kpml_, 0));
  }
  return s;
}

double Simulation::stable_dt() const {
  double dt = 1e300;
  for (int k = 0; k < k_; ++k)
    dt = std::min(dt, geo_.inscribed_radius(k) / wavespeed_(k));
  const int p = ops_.order;
  return config_.cfl * dt / (p * p);
}

void Simulation::curl_rhs(const FieldState& state, double t,
                          std::array<Mat, 3>& ch, std::array<Mat, 3>& ce) {
  // traces and jumps
  for (int c = 0; c < 3; ++c) {
    gather(state.E[c], vmap_m_, em_[c]);
    gather(state.H[c], vmap_m_, hm_[c]);
    gather(state.E[c], vmap_p_, ep_[c]);
    gather(state.H[c], vmap_p_, hp_[c]);
    // PEC mirror: tangential E flips (vmapP points at the interior trace)
    ep_[c].array() -= 2.0 * pec_mask_.array() * em_[c].array();
  }
  if (source_.enabled && !tfsf_slots_.empty()) {
    const double g = source_.e0 * source_.gaussian(t);
    const double gh = g / constants::eta0;
    double* epx = ep_[0].data();
    double* hpy = hp_[1].data();
    for (const auto& [slot, sign] : tfsf_slots_) {
      epx[slot] += sign * g;
      hpy[slot] += sign * gh;
    }
  }
  for (int c = 0; c < 3; ++c) {
    de_[c] = ep_[c] - em_[c];
    dh_[c] = hp_[c] - hm_[c];
  }

  // numerical flux
  if (config_.flux == Flux::Upwind) {
    ndot_e_ = nx_.cwiseProduct(de_[0]) + ny_.cwiseProduct(de_[1]) +
              nz_.cwiseProduct(de_[2]);
    ndot_h_ = nx_.cwiseProduct(dh_[0]) + ny_.cwiseProduct(dh_[1]) +
              nz_.cwiseProduct(dh_[2]);
    // n x dH and n x dE
    flux_e_[0] = ny_.cwiseProduct(dh_[2]) - nz_.cwiseProduct(dh_[1]);
    flux_e_[1] = nz_.cwiseProduct(dh_[0]) - nx_.cwiseProduct(dh_[2]);
    flux_e_[2] = nx_.cwiseProduct(dh_[1]) - ny_.cwiseProduct(dh_[0]);
    flux_h_[0] = ny_.cwiseProduct(de_[2]) - nz_.cwiseProduct(de_[1]);
    flux_h_[1] = nz_.cwiseProduct(de_[0]) - nx_.cwiseProduct(de_[2]);
    flux_h_[2] = nx_.cwiseProduct(de_[1]) - ny_.cwiseProduct(de_[0]);
    for (int c = 0; c < 3; ++c) {
      const Mat& nc = c == 0 ? nx_ : (c == 1 ? ny_ : nz_);
      flux_e_[c] = (zp_frac_.cwiseProduct(flux_e_[c]) + de_[c] -
                    nc.cwiseProduct(ndot_e_))
                       .cwiseProduct(inv_zsum_);
      flux_h_[c] = (-yp_frac_.cwiseProduct(flux_h_[c]) + dh_[c] -
                    nc.cwiseProduct(ndot_h_))
                       .cwiseProduct(inv_ysum_);
    }
  } else {
    flux_e_[0] = 0.5 * (ny_.cwiseProduct(dh_[2]) - nz_.cwiseProduct(dh_[1]));
    flux_e_[1] = 0.5 * (nz_.cwiseProduct(dh_[0]) - nx_.cwiseProduct(dh_[2]));
    flux_e_[2] = 0.5 * (nx_.cwiseProduct(dh_[1]) - ny_.cwiseProduct(dh_[0]));
    flux_h_[0] = -0.5 * (ny_.cwiseProduct(de_[2]) - nz_.cwiseProduct(de_[1]));
    flux_h_[1] = -0.5 * (nz_.cwiseProduct(de_[0]) - nx_.cwiseProduct(de_[2]));
    flux_h_[2] = -0.5 * (nx_.cwiseProduct(de_[1]) - ny_.cwiseProduct(de_[0]));
  }

  // reference-direction derivatives of all six components
  for (int c = 0; c < 3; ++c) {
    dref_[c].noalias() = dstack_ * state.E[c];
    dref_[3 + c].noalias() = dstack_ * state.H[c];
  }
  auto ddx = [&](int comp, int dir, bool is_h) -> Mat {
    const Mat& d = dref_[(is_h ? 3 : 0) + comp];
    Mat out(np_, k_);
    out = d.topRows(np_).array().rowwise() * metric_[0][dir].array();
    out.array() += d.middleRows(np_, np_).array().rowwise() * metric_[1][dir].array();
    out.array() += d.bottomRows(np_).array().rowwise() * metric_[2][dir].array();
    return out;
  };
  curl_e_[0] = ddx(2, 1, false) - ddx(1, 2, false);
  curl_e_[1] = ddx(0, 2, false) - ddx(2, 0, false);
  curl_e_[2] = ddx(1, 0, false) - ddx(0, 1, false);
  curl_h_[0] = ddx(2, 1, true) - ddx(1, 2, true);
  curl_h_[1] = ddx(0, 2, true) - ddx(2, 0, true);
  curl_h_[2] = ddx(1, 0, true) - ddx(0, 1, true);

  for (int c = 0; c < 3; ++c) {
    ch[c].noalias() = lift_ * fscale_.cwiseProduct(flux_e_[c]);
    ch[c] += curl_h_[c];
    ce[c].noalias() = -(lift_ * fscale_.cwiseProduct(flux_h_[c]));
    ce[c] += curl_e_[c];
  }
}

void Simulation::apply_pml_terms(const FieldState& state,
                                 const std::array<Mat, 3>& ch,
                                 const std::array<Mat, 3>& ce,
                                 FieldState& out) {
  if (pml_.path == PmlPath::None || kpml_ == 0) return;

  if (pml_.path == PmlPath::ElementConstant) {
    for (int i = 0; i < kpml_; ++i) {
      const int k = pml_elements_[i];
      for (int ax = 0; ax < 3; ++ax) {
        const double a = ec_a_(i, ax), b = ec_b_(i, ax), c = ec_c_(i, ax);
        const double d = ec_d_(i, ax), ik = ec_ik_(i, ax);
        out.E[ax].col(k) = -(b / a) * state.E[ax].col(k) -
                           (c / a) * state.PE[ax].col(i) +
                           (inv_eps_(k) / a) * ch[ax].col(k);
        out.H[ax].col(k) = -(b / a) * state.H[ax].col(k) -
                           (c / a) * state.PH[ax].col(i) -
                           (inv_mu_(k) / a) * ce[ax].col(k);
        out.PE[ax].col(i) = ik * state.E[ax].col(k) - d * state.PE[ax].col(i);
        out.PH[ax].col(i) = ik * state.H[ax].col(k) - d * state.PH[ax].col(i);
      }
    }
    return;
  }

  if (pml_.path == PmlPath::Direct) {
    for (int i = 0; i < kpml_; ++i) {
      const int k = pml_elements_[i];
      const auto& op = pml_.direct.ops[i];
      const double jk = geo_.jacobian(k);
      for (int ax = 0; ax < 3; ++ax) {
        // tested curl: C = J_k M (M_k^{-1} C)
        const Vec ce_tested = jk * (ops_.mass * ce[ax].col(k));
        const Vec ch_tested = jk * (ops_.mass * ch[ax].col(k));
        out.E[ax].col(k) = -(op.Tb[ax] * state.E[ax].col(k)) -
                           op.Tc[ax] * state.PE[ax].col(i) +
                           inv_eps_(k) * (op.A[ax] * ch_tested);
        out.H[ax].col(k) = -(op.Tb[ax] * state.H[ax].col(k)) -
                           op.Tc[ax] * state.PH[ax].col(i) -
                           inv_mu_(k) * (op.A[ax] * ce_tested);
        out.PE[ax].col(i) = op.Tk[ax] * state.E[ax].col(k) -
                            op.Td[ax] * state.PE[ax].col(i);
        out.PH[ax].col(i) = op.Tk[ax] * state.H[ax].col(k) -
                            op.Td[ax] * state.PH[ax].col(i);
      }
    }
    return;
  }

  // weight-adjusted path, batched over PML elements
  const int nq = ops_.quad.n_points;
  Mat epml(np_, kpml_), hpml(np_, kpml_), chp(np_, kpml_), cep(np_, kpml_);
  Mat vq_e(nq, kpml_), vq_h(nq, kpml_), vq_pe(nq, kpml_), vq_ph(nq, kpml_);
  Mat bracket(np_, kpml_), vq_br(nq, kpml_);
  for (int ax = 0; ax < 3; ++ax) {
    for (int i = 0; i < kpml_; ++i) {
      const int k = pml_elements_[i];
      epml.col(i) = state.E[ax].col(k);
      hpml.col(i) = state.H[ax].col(k);
      chp.col(i) = inv_eps_(k) * ch[ax].col(k);
      cep.col(i) = inv_mu_(k) * ce[ax].col(k);
    }
    vq_e.noalias() = ops_.interp_to_quad * epml;
    vq_h.noalias() = ops_.interp_to_quad * hpml;
    vq_pe.noalias() = ops_.interp_to_quad * state.PE[ax];
    vq_ph.noalias() = ops_.interp_to_quad * state.PH[ax];

    // E equation
    bracket.noalias() = ops_.project_from_quad *
                        (waa_b_[ax].cwiseProduct(vq_e) +
                         waa_c_[ax].cwiseProduct(vq_pe));
    bracket -= chp;
    vq_br.noalias() = ops_.interp_to_quad * bracket;
    bracket.noalias() =
        -(ops_.project_from_quad * waa_inv_a_[ax].cwiseProduct(vq_br));
    for (int i = 0; i < kpml_; ++i)
      out.E[ax].col(pml_elements_[i]) = bracket.col(i);

    // H equation
    bracket.noalias() = ops_.project_from_quad *
                        (waa_b_[ax].cwiseProduct(vq_h) +
                         waa_c_[ax].cwiseProduct(vq_ph));
    bracket += cep;
    vq_br.noalias() = ops_.interp_to_quad * bracket;
    bracket.noalias() =
        -(ops_.project_from_quad * waa_inv_a_[ax].cwiseProduct(vq_br));
    for (int i = 0; i < kpml_; ++i)
      out.H[ax].col(pml_elements_[i]) = bracket.col(i);

    // auxiliary fields
    out.PE[ax].noalias() = ops_.project_from_quad *
                           (waa_ik_[ax].cwiseProduct(vq_e) -
                            waa_d_[ax].cwiseProduct(vq_pe));
    out.PH[ax].noalias() = ops_.project_from_quad *
                           (waa_ik_[ax].cwiseProduct(vq_h) -
                            waa_d_[ax].cwiseProduct(vq_ph));
  }
}

void Simulation::rhs(const FieldState& state, double t, FieldState& out) {
  curl_rhs(state, t, ch_, ce_);
  for (int c = 0; c < 3; ++c) {
    out.E[c] = ch_[c].array().rowwise() * inv_eps_.array();
    out.H[c] = -(ce_[c].array().rowwise() * inv_mu_.array());
  }
  apply_pml_terms(state, ch_, ce_, out);
}

void Simulation::step(FieldState& state, double dt) {
  if (deriv_.E[0].size() == 0) deriv_ = make_state();
  FieldState& deriv = deriv_;
  for (int stage = 0; stage < 5; ++stage) {
    rhs(state, state.time + kRkC[stage] * dt, deriv);
    for (int c = 0; c < 3; ++c) {
      res_.E[c] = kRkA[stage] * res_.E[c] + dt * deriv.E[c];
      res_.H[c] = kRkA[stage] * res_.H[c] + dt * deriv.H[c];
      state.E[c] += kRkB[stage] * res_.E[c];
      state.H[c] += kRkB[stage] * res_.H[c];
      if (kpml_ > 0) {
        res_.PE[c] = kRkA[stage] * res_.PE[c] + dt * deriv.PE[c];
        res_.PH[c] = kRkA[stage] * res_.PH[c] + dt * deriv.PH[c];
        state.PE[c] += kRkB[stage] * res_.PE[c];
        state.PH[c] += kRkB[stage] * res_.PH[c];
      }
    }
  }
  state.time += dt;
  ++steps_taken_;
  const int interval = config_.debug_checks ? 1 : config_.finite_check_interval;
  if (interval > 0 && steps_taken_ % interval == 0) check_finite(state, state.time);
}

void Simulation::check_finite(const FieldState& state, double t) const {
  for (int c = 0; c < 3; ++c) {
    if (state.E[c].allFinite() && state.H[c].allFinite()) continue;
    for (int k = 0; k < k_; ++k)
      if (!state.E[c].col(k).allFinite() || !state.H[c].col(k).allFinite()) {
        std::ostringstream os;
        os << "instability: non-finite field at t=" << t << " s in element "
           << k;
        throw InstabilityError(os.str(), t, k);
      }
  }
}

double Simulation::energy(const FieldState& state) const {
  double total = 0.0;
  Mat me(np_, k_);
  for (int c = 0; c < 3; ++c) {
    me.noalias() = ops_.mass * state.E[c];
    for (int k = 0; k < k_; ++k) {
      if (!mesh_.region.empty() && mesh_.region[k]) continue;
      total += 0.5 / inv_eps_(k) * geo_.jacobian(k) *
               state.E[c].col(k).dot(me.col(k));
    }
    me.noalias() = ops_.mass * state.H[c];
    for (int k = 0; k < k_; ++k) {
      if (!mesh_.region.empty() && mesh_.region[k]) continue;
      total += 0.5 / inv_mu_(k) * geo_.jacobian(k) *
               state.H[c].col(k).dot(me.col(k));
    }
  }
  return total;
}

Simulation::ProbeHandle Simulation::locate(const Vec3& point) const {
  for (int k = 0; k < k_; ++k) {
    const Vec3 v0 = mesh_.vertices.row(mesh_.elements(k, 0));
    Mat3 jm;
    jm.col(0) = 0.5 * (mesh_.vertices.row(mesh_.elements(k, 1)).transpose() - v0);
    jm.col(1) = 0.5 * (mesh_.vertices.row(mesh_.elements(k, 2)).transpose() - v0);
    jm.col(2) = 0.5 * (mesh_.vertices.row(mesh_.elements(k, 3)).transpose() - v0);
    const Vec3 rst = jm.inverse() * (point - v0) - Vec3::Ones();
    const double tol = 1e-10;
    if (rst.minCoeff() < -1 - tol) continue;
    if (rst.sum() > -1 + tol) continue;
    ProbeHandle h;
    h.element = k;
    Mat ref(1, 3);
    ref << rst(0), rst(1), rst(2);
    h.weights = lagrange_basis_at(ops_, ref).row(0).transpose();
    return h;
  }
  throw ConfigError("probe point outside the mesh");
}

Eigen::Matrix<double, 6, 1> Simulation::sample(const FieldState& state,
                                               const ProbeHandle& probe) const {
  Eigen::Matrix<double, 6, 1> out;
  for (int c = 0; c < 3; ++c) {
    out(c) = probe.weights.dot(state.E[c].col(probe.element));
    out(3 + c) = probe.weights.dot(state.H[c].col(probe.element));
  }
  return out;
}

}  // namespace dgtd
