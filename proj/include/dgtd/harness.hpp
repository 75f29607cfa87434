#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dgtd/solver.hpp"

namespace dgtd {

struct ExperimentConfig {
  // geometry (SI meters internally; the config file speaks centimeters)
  double cross_section = 0.012;   // x and y extent
  double domain_length = 0.60;    // computation region, z in [-L/2, L/2]
  double pml_thickness = 0.016;   // per z side
  double edge_xy = 0.004;
  double edge_z = 0.004;
  MeshStyle mesh_style = MeshStyle::Paved;
  double paved_jitter = 0.0;
  std::uint64_t jitter_seed = 12345;

  int order = 3;
  Flux flux = Flux::Upwind;
  double cfl = 0.5;
  PmlPath pml_path = PmlPath::Waa;

  double sigma_max = 2.0;  // S/m
  std::vector<double> sigma_sweep;
  double kappa_max = 1.0;
  int profile_order = 1;
  SamplingStrategy sampling = SamplingStrategy::SmoothlyVarying;

  double e0 = 1.0;          // V/m
  double tau = 66.67e-12;   // s
  double t0_over_tau = 15.0;

  std::vector<Vec3> probes;  // first probe drives the reflection measurement

  std::string out_dir = "out";
  int cadence_steps = 10;
  double t_final = 0.0;  // 0 = derived from geometry

  double t0() const { return t0_over_tau * tau; }
};

ExperimentConfig preset_paper();
ExperimentConfig preset_ci();

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string config_hash_hex(const ExperimentConfig& cfg);

struct ReflectionResult {
  double sigma_max = 0.0;
  double reflection_db = 0.0;  // 20 log10(peak reflected |Ex| / E0)
  double peak_time = 0.0;      // s
  double incident_peak = 0.0;  // peak |Ex| in the incident window (sanity)
  double t_split = 0.0;
  std::string config_hash;
};

// Builds mesh + operators for the configuration, runs the time loop,
// extracts the reflected peak from the probe trace. If trace_path is
// nonempty the full probe trace is written there as CSV.
ReflectionResult run_reflection_experiment(const ExperimentConfig& cfg,
                                           const std::string& trace_path = "");

// One run per value, concurrently (0 = hardware concurrency). Writes
// per-run traces and a combined CSV into cfg.out_dir.
std::vector<ReflectionResult> sweep_sigma_max(const ExperimentConfig& cfg,
                                              const std::vector<double>& values,
                                              int concurrency = 0);

struct MemoryReportRow {
  int order = 0, n_nodes = 0, n_quad = 0, k_pml = 0;
  std::uint64_t direct_analytic = 0, direct_actual = 0;
  std::uint64_t waa_analytic = 0, waa_actual = 0;      // per-run element storage
  std::uint64_t waa_shared_analytic = 0, waa_shared_actual = 0;
  double ratio_per_element = 0.0;  // N_p^2 / N_q
  std::uint64_t unknown_doubles = 0;  // 12 N_p per PML element
};
struct MemoryReport {
  std::vector<MemoryReportRow> rows;
  std::string to_text() const;
};
// Builds the PML operators of a small instance of the configuration for
// every supported order and compares actual allocation counts with the
// storage formulas.
MemoryReport memory_report(const ExperimentConfig& cfg);

struct OpCountRow {
  int order = 0, n_nodes = 0, n_quad = 0;
  std::uint64_t direct_field_mul = 0, direct_field_add = 0;
  std::uint64_t waa_field_mul = 0, waa_field_add = 0;
  std::uint64_t direct_aux_mul = 0, direct_aux_sub = 0;
  std::uint64_t waa_aux_mul = 0, waa_aux_sub = 0;
};
struct OpCountReport {
  std::vector<OpCountRow> rows;
  std::string to_text() const;
};
OpCountReport operation_count_report();

struct ConvergenceEntry {
  std::string configuration;
  int order = 0;
  double best_sigma = 0.0;
  double best_reflection_db = 0.0;
};
// For each configuration name in {ec-paved, ec-layered, sv-paved,
// sv-waa-paved} present in `configurations`, sweeps sigma_max at each order
// and records the minimum reflection.
std::vector<ConvergenceEntry> convergence_study(
    const ExperimentConfig& base, const std::vector<int>& orders,
    const std::vector<std::string>& configurations,
    const std::vector<double>& sweep_values, int concurrency = 0);

// Applies one of the four named PML configurations to a config.
ExperimentConfig apply_configuration(const ExperimentConfig& base,
                                     const std::string& name);

void write_sweep_csv(const std::string& path, const ExperimentConfig& cfg,
                     const std::vector<ReflectionResult>& results);

}  // namespace dgtd
