#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "dgtd/constants.hpp"
#include "dgtd/errors.hpp"
#include "dgtd/harness.hpp"

namespace dgtd {

namespace {

constexpr double kC0 = constants::c0;

struct BuiltExperiment {
  Mesh mesh;
  ReferenceOperators ops;
  GeometricFactors geo;
  PmlSetup pml;
  PlaneWaveSource source;
  SolverConfig solver;
};

int checked_layers(double length, double edge, const char* what) {
  const double ratio = length / edge;
  const int n = static_cast<int>(std::lround(ratio));
  if (n < 1 || std::abs(ratio - n) > 1e-9)
    throw ConfigError(std::string(what) +
                      " must be an integral number of lattice layers");
  return n;
}

}  // namespace

// shared by the experiment driver and the memory report
static BuiltExperiment build_experiment(const ExperimentConfig& cfg) {
  BuiltExperiment b;
  const double z0 = cfg.domain_length / 2;
  checked_layers(cfg.pml_thickness, cfg.edge_z, "PML thickness");
  checked_layers(z0, cfg.edge_z, "computation half-length");
  checked_layers(cfg.cross_section, cfg.edge_xy, "cross section");

  BoxMeshSpec ms;
  ms.origin = Vec3(-cfg.cross_section / 2, -cfg.cross_section / 2,
                   -(z0 + cfg.pml_thickness));
  ms.extent = Vec3(cfg.cross_section, cfg.cross_section,
                   2 * (z0 + cfg.pml_thickness));
  ms.edge = Vec3(cfg.edge_xy, cfg.edge_xy, cfg.edge_z);
  ms.target_edge = cfg.edge_z;
  ms.style = cfg.mesh_style;
  ms.jitter = cfg.mesh_style == MeshStyle::Paved ? cfg.paved_jitter : 0.0;
  ms.jitter_zmin = z0;
  ms.jitter_zmax = z0 + cfg.pml_thickness;
  ms.jitter_seed = cfg.jitter_seed;
  b.mesh = build_box_mesh(ms);
  connect_mesh(b.mesh, true, true, false);
  tag_injection_plane(b.mesh, 0.0);
  tag_pml_region(b.mesh, z0);

  b.ops = build_reference_operators(cfg.order);
  b.geo = geometric_factors(b.mesh);

  StretchProfile prof;
  prof.axis[2].active = true;
  prof.axis[2].u0 = z0;
  prof.axis[2].thickness = cfg.pml_thickness;
  prof.axis[2].sigma_max = cfg.sigma_max;
  prof.axis[2].kappa_max = cfg.kappa_max;
  prof.axis[2].p_sigma = cfg.profile_order;

  b.pml.path = cfg.pml_path;
  if (cfg.pml_path == PmlPath::ElementConstant &&
      cfg.sampling == SamplingStrategy::SmoothlyVarying)
    throw ConfigError(
        "element-constant path cannot use smoothly-varying sampling");
  const SampleLocation loc = cfg.pml_path == PmlPath::Waa
                                 ? SampleLocation::QuadPoints
                                 : SampleLocation::Nodes;
  b.pml.coeffs = sample_coefficients(b.mesh, prof, cfg.sampling, loc, b.ops);
  if (cfg.pml_path == PmlPath::Direct)
    b.pml.direct = build_direct_operators(b.pml.coeffs, b.ops, b.geo.jacobian);
  if (cfg.pml_path == PmlPath::Waa)
    b.pml.waa = build_waa_operators(b.pml.coeffs, b.ops, b.geo.jacobian);

  b.source.enabled = true;
  b.source.e0 = cfg.e0;
  b.source.tau = cfg.tau;
  b.source.t0 = cfg.t0();

  b.solver.flux = cfg.flux;
  b.solver.cfl = cfg.cfl;
  b.solver.pml_path = cfg.pml_path;
  return b;
}

ReflectionResult run_reflection_experiment(const ExperimentConfig& cfg,
                                           const std::string& trace_path) {
  if (cfg.probes.empty()) throw ConfigError("no probe configured");
  const double z0 = cfg.domain_length / 2;
  const double zp = cfg.probes[0](2);
  if (zp <= 0 || zp >= z0)
    throw ConfigError("reflection probe must sit between the injection plane "
                      "and the PML interface");

  // pulse separation precondition: the reflected pulse must clear the
  // incident tail at the probe
  const double separation = 2 * (z0 - zp) / kC0;
  if (separation < 10 * cfg.tau) {
    std::ostringstream os;
    os << "domain too short to separate incident and reflected pulses: need "
       << "domain_length >= " << 2 * (5 * cfg.tau * kC0 + zp) * 100
       << " cm for tau = " << cfg.tau * 1e12 << " ps";
    throw ConfigError(os.str());
  }

  BuiltExperiment b = build_experiment(cfg);
  Simulation sim(b.mesh, b.ops, b.geo, b.solver, std::move(b.pml), b.source);
  FieldState state = sim.make_state();

  const double t_inc = cfg.t0() + zp / kC0;
  const double t_split = t_inc + 8 * cfg.tau;
  const double t_refl = cfg.t0() + (2 * z0 - zp) / kC0;
  const double t_end = cfg.t_final > 0
                           ? cfg.t_final
                           : cfg.t0() +
                                 (2 * (z0 + cfg.pml_thickness) + zp) / kC0 +
                                 6 * cfg.tau;
  if (t_refl < t_split + 2 * cfg.tau)
    throw ConfigError("probe too deep for pulse separation; move it closer "
                      "to the injection plane");

  const double dt0 = sim.stable_dt();
  const long nsteps = static_cast<long>(std::ceil(t_end / dt0));
  const double dt = t_end / nsteps;

  const auto probe = sim.locate(cfg.probes[0]);
  std::vector<std::array<double, 7>> trace;
  trace.reserve(nsteps / std::max(1, cfg.cadence_steps) + 2);
  auto record = [&]() {
    const auto s = sim.sample(state, probe);
    trace.push_back({state.time, s(0), s(1), s(2), s(3), s(4), s(5)});
  };
  record();
  for (long n = 0; n < nsteps; ++n) {
    sim.step(state, dt);
    if ((n + 1) % std::max(1, cfg.cadence_steps) == 0 || n + 1 == nsteps)
      record();
  }

  ReflectionResult res;
  res.sigma_max = cfg.sigma_max;
  res.config_hash = config_hash_hex(cfg);
  res.t_split = t_split;
  double refl = 0.0;
  for (const auto& row : trace) {
    const double ex = std::abs(row[1]);
    if (row[0] <= t_split) {
      res.incident_peak = std::max(res.incident_peak, ex);
    } else if (ex > refl) {
      refl = ex;
      res.peak_time = row[0];
    }
  }
  res.reflection_db = 20.0 * std::log10(std::max(refl / cfg.e0, 1e-300));

  if (!trace_path.empty()) {
    std::filesystem::create_directories(
        std::filesystem::path(trace_path).parent_path());
    std::ofstream out(trace_path);
    if (!out) throw ConfigError("cannot write trace CSV: " + trace_path);
    out << "# config_hash=" << res.config_hash << "\n";
    out << "# code_version=" << "dgtd-0.1.0" << "\n";
    out << "# t_split_s=" << t_split << "\n";
    out.precision(12);
    out << "t,Ex,Ey,Ez,Hx,Hy,Hz\n";
    for (const auto& row : trace) {
      for (int i = 0; i < 7; ++i) out << (i ? "," : "") << row[i];
      out << "\n";
    }
  }
  return res;
}

std::vector<ReflectionResult> sweep_sigma_max(const ExperimentConfig& cfg,
                                              const std::vector<double>& values,
                                              int concurrency) {
  if (values.empty()) throw ConfigError("sweep needs at least one sigma_max");
  if (concurrency <= 0)
    concurrency = std::max(1u, std::thread::hardware_concurrency());
  std::filesystem::create_directories(cfg.out_dir);

  std::vector<ReflectionResult> results(values.size());
  std::vector<std::future<void>> running;
  size_t next = 0;
  auto launch = [&](size_t i) {
    return std::async(std::launch::async, [&cfg, &results, &values, i]() {
      ExperimentConfig run = cfg;
      run.sigma_max = values[i];
      std::ostringstream name;
      name << cfg.out_dir << "/trace_sigma_" << values[i] << ".csv";
      results[i] = run_reflection_experiment(run, name.str());
    });
  };
  while (next < values.size() || !running.empty()) {
    while (next < values.size() &&
           running.size() < static_cast<size_t>(concurrency))
      running.push_back(launch(next++));
    running.front().get();
    running.erase(running.begin());
  }
  write_sweep_csv(cfg.out_dir + "/sweep.csv", cfg, results);
  return results;
}

void write_sweep_csv(const std::string& path, const ExperimentConfig& cfg,
                     const std::vector<ReflectionResult>& results) {
  std::filesystem::create_directories(
      std::filesystem::path(path).parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write sweep CSV: " + path);
  out << "# config_hash=" << config_hash_hex(cfg) << "\n";
  out << "# code_version=dgtd-0.1.0\n";
  out.precision(12);
  out << "sigma_max,reflection_db,peak_time,incident_peak\n";
  for (const auto& r : results)
    out << r.sigma_max << "," << r.reflection_db << "," << r.peak_time << ","
        << r.incident_peak << "\n";
}

std::vector<ConvergenceEntry> convergence_study(
    const ExperimentConfig& base, const std::vector<int>& orders,
    const std::vector<std::string>& configurations,
    const std::vector<double>& sweep_values, int concurrency) {
  std::vector<ConvergenceEntry> entries;
  for (const auto& name : configurations) {
    for (int p : orders) {
      ExperimentConfig cfg = apply_configuration(base, name);
      cfg.order = p;
      cfg.out_dir = base.out_dir + "/" + name + "_p" + std::to_string(p);
      const auto results = sweep_sigma_max(cfg, sweep_values, concurrency);
      ConvergenceEntry e;
      e.configuration = name;
      e.order = p;
      e.best_reflection_db = 1e300;
      for (const auto& r : results)
        if (r.reflection_db < e.best_reflection_db) {
          e.best_reflection_db = r.reflection_db;
          e.best_sigma = r.sigma_max;
        }
      entries.push_back(e);
    }
  }
  return entries;
}

}  // namespace dgtd
