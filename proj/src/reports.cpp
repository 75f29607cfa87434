#include <sstream>

#include "dgtd/errors.hpp"
#include "dgtd/harness.hpp"

namespace dgtd {

MemoryReport memory_report(const ExperimentConfig& cfg) {
  MemoryReport rep;

  // a small instance of the configured geometry is enough to compare the
  // builders' allocations against the storage formulas
  BoxMeshSpec ms;
  const double edge = cfg.edge_z;
  const double z0 = 2 * edge;
  ms.origin = Vec3(-edge, -edge, -(z0 + cfg.pml_thickness));
  ms.extent = Vec3(2 * edge, 2 * edge, 2 * (z0 + cfg.pml_thickness));
  ms.edge = Vec3(edge, edge, edge);
  ms.target_edge = edge;
  ms.style = cfg.mesh_style;
  Mesh mesh = build_box_mesh(ms);
  connect_mesh(mesh, true, true, false);
  tag_pml_region(mesh, z0);
  const GeometricFactors geo = geometric_factors(mesh);

  StretchProfile prof;
  prof.axis[2].active = true;
  prof.axis[2].u0 = z0;
  prof.axis[2].thickness = cfg.pml_thickness;
  prof.axis[2].sigma_max = cfg.sigma_max > 0 ? cfg.sigma_max : 2.0;
  prof.axis[2].kappa_max = cfg.kappa_max;
  prof.axis[2].p_sigma = cfg.profile_order;

  for (int p = 1; p <= 5; ++p) {
    const ReferenceOperators ops = build_reference_operators(p);
    const auto nodal = sample_coefficients(
        mesh, prof, SamplingStrategy::SmoothlyVarying, SampleLocation::Nodes,
        ops);
    const auto at_quad = sample_coefficients(
        mesh, prof, SamplingStrategy::SmoothlyVarying,
        SampleLocation::QuadPoints, ops);
    const auto direct = build_direct_operators(nodal, ops, geo.jacobian);
    const auto waa = build_waa_operators(at_quad, ops, geo.jacobian);

    MemoryReportRow row;
    row.order = p;
    row.n_nodes = ops.n_nodes;
    row.n_quad = ops.quad.n_points;
    row.k_pml = static_cast<int>(direct.elements.size());
    row.direct_analytic = 15ull * row.k_pml * ops.n_nodes * ops.n_nodes;
    row.direct_actual = direct.allocated_doubles;
    row.waa_analytic = 15ull * row.k_pml * ops.quad.n_points;
    row.waa_actual = waa.allocated_doubles;
    row.waa_shared_analytic = 2ull * ops.n_nodes * ops.quad.n_points;
    row.waa_shared_actual = waa.shared_doubles;
    row.ratio_per_element =
        static_cast<double>(ops.n_nodes) * ops.n_nodes / ops.quad.n_points;
    row.unknown_doubles = 12ull * row.k_pml * ops.n_nodes;
    rep.rows.push_back(row);
  }
  return rep;
}

std::string MemoryReport::to_text() const {
  std::ostringstream os;
  os << "PML operator storage (doubles), per formula vs builder allocation\n";
  os << "  direct: 15 K_pml Np^2     waa: 15 K_pml Nq + shared 2 Np Nq\n";
  os << " p   Np   Nq  K_pml |   direct(formula)     direct(actual) |"
        "      waa(formula)       waa(actual) | shared(f)  shared(a) |"
        " Np^2/Nq | unknowns(12 Np K_pml)\n";
  for (const auto& r : rows) {
    os << " " << r.order << "  " << r.n_nodes << "  " << r.n_quad << "  "
       << r.k_pml << " | " << r.direct_analytic << " " << r.direct_actual
       << " | " << r.waa_analytic << " " << r.waa_actual << " | "
       << r.waa_shared_analytic << " " << r.waa_shared_actual << " | "
       << r.ratio_per_element << " | " << r.unknown_doubles << "\n";
  }
  return os.str();
}

OpCountReport operation_count_report() {
  OpCountReport rep;
  for (int p = 1; p <= 5; ++p) {
    const std::uint64_t np = (p + 1) * (p + 2) * (p + 3) / 6;
    const std::uint64_t nq_table[6] = {0, 4, 11, 23, 44, 74};
    const std::uint64_t nq = nq_table[p];
    OpCountRow r;
    r.order = p;
    r.n_nodes = static_cast<int>(np);
    r.n_quad = static_cast<int>(nq);
    // per field component, excluding the shared curl evaluation
    r.direct_field_mul = 3 * np * np;
    r.direct_field_add = 2 * np;
    r.waa_field_mul = 5 * nq * np + 3 * nq;
    r.waa_field_add = nq + np;
    r.direct_aux_mul = 3 * np * np;
    r.direct_aux_sub = np;
    r.waa_aux_mul = 3 * nq * np + 2 * nq;
    r.waa_aux_sub = nq;
    rep.rows.push_back(r);
  }
  return rep;
}

std::string OpCountReport::to_text() const {
  std::ostringstream os;
  os << "Per-element arithmetic per field component, excluding the curl\n";
  os << " p   Np   Nq | direct mul/add | waa mul/add | direct aux mul/sub |"
        " waa aux mul/sub\n";
  for (const auto& r : rows) {
    os << " " << r.order << "  " << r.n_nodes << "  " << r.n_quad << " | "
       << r.direct_field_mul << " / " << r.direct_field_add << " | "
       << r.waa_field_mul << " / " << r.waa_field_add << " | "
       << r.direct_aux_mul << " / " << r.direct_aux_sub << " | "
       << r.waa_aux_mul << " / " << r.waa_aux_sub << "\n";
  }
  return os.str();
}

}  // namespace dgtd
