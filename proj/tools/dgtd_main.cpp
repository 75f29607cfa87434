#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dgtd/errors.hpp"
#include "dgtd/harness.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string preset = "paper";
  std::string out_dir;
  int order = 0;
  std::string pml_path;
  std::string mesh_style;
};

dgtd::ExperimentConfig resolve_config(const CommonOpts& o) {
  dgtd::ExperimentConfig cfg;
  if (!o.config_path.empty())
    cfg = dgtd::parse_config_file(o.config_path);
  else if (o.preset == "paper")
    cfg = dgtd::preset_paper();
  else if (o.preset == "ci")
    cfg = dgtd::preset_ci();
  else
    throw dgtd::ConfigError("unknown preset '" + o.preset + "'");

  if (o.order > 0) cfg.order = o.order;
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (!o.pml_path.empty()) {
    if (o.pml_path == "ec") cfg.pml_path = dgtd::PmlPath::ElementConstant;
    else if (o.pml_path == "direct") cfg.pml_path = dgtd::PmlPath::Direct;
    else if (o.pml_path == "waa") cfg.pml_path = dgtd::PmlPath::Waa;
    else throw dgtd::ConfigError("--pml-path must be ec|direct|waa");
    if (cfg.pml_path == dgtd::PmlPath::ElementConstant &&
        cfg.sampling == dgtd::SamplingStrategy::SmoothlyVarying)
      cfg.sampling = cfg.mesh_style == dgtd::MeshStyle::Layered
                         ? dgtd::SamplingStrategy::LayeredOutermost
                         : dgtd::SamplingStrategy::ElementConstantFarthestNode;
  }
  if (!o.mesh_style.empty()) {
    if (o.mesh_style == "paved") cfg.mesh_style = dgtd::MeshStyle::Paved;
    else if (o.mesh_style == "layered") cfg.mesh_style = dgtd::MeshStyle::Layered;
    else throw dgtd::ConfigError("--mesh must be paved|layered");
  }
  return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "configuration file");
  cmd->add_option("--preset", o.preset, "paper|ci (default paper)");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--order", o.order, "polynomial order p (1..5)");
  cmd->add_option("--pml-path", o.pml_path, "ec|direct|waa");
  cmd->add_option("--mesh", o.mesh_style, "paved|layered");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nodal DGTD Maxwell solver with weight-adjusted PML"};
  app.require_subcommand(1);

  CommonOpts run_o, sweep_o, mem_o, ops_o, conv_o;
  std::vector<double> sweep_values;
  std::vector<int> conv_orders{2, 3, 4};
  std::vector<std::string> conv_configs{"ec-paved", "ec-layered", "sv-paved",
                                        "sv-waa-paved"};

  auto* run = app.add_subcommand("run", "single reflection experiment");
  add_common(run, run_o);
  auto* sweep = app.add_subcommand("sweep", "scan sigma_max");
  add_common(sweep, sweep_o);
  sweep->add_option("--sigma", sweep_values, "sigma_max values (S/m)");
  auto* mem = app.add_subcommand("report-memory", "storage accounting");
  add_common(mem, mem_o);
  auto* ops = app.add_subcommand("report-ops", "arithmetic operation counts");
  add_common(ops, ops_o);
  auto* conv = app.add_subcommand("converge",
                                  "optimal reflection vs order study");
  add_common(conv, conv_o);
  conv->add_option("--orders", conv_orders, "polynomial orders");
  conv->add_option("--configs", conv_configs, "configuration names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto cfg = resolve_config(run_o);
      std::filesystem::create_directories(cfg.out_dir);
      const auto res =
          dgtd::run_reflection_experiment(cfg, cfg.out_dir + "/trace.csv");
      std::cout << "sigma_max " << res.sigma_max << " S/m -> reflection "
                << res.reflection_db << " dB (peak at " << res.peak_time * 1e9
                << " ns, incident peak " << res.incident_peak << " V/m)\n"
                << "trace written to " << cfg.out_dir << "/trace.csv\n";
    } else if (*sweep) {
      auto cfg = resolve_config(sweep_o);
      const auto values =
          sweep_values.empty() ? cfg.sigma_sweep : sweep_values;
      const auto results = dgtd::sweep_sigma_max(cfg, values);
      double best = 1e300;
      double best_sigma = 0;
      for (const auto& r : results) {
        std::cout << "sigma_max " << r.sigma_max << " -> " << r.reflection_db
                  << " dB\n";
        if (r.reflection_db < best) {
          best = r.reflection_db;
          best_sigma = r.sigma_max;
        }
      }
      std::cout << "minimum reflection " << best << " dB at sigma_max "
                << best_sigma << " S/m\n"
                << "results in " << cfg.out_dir << "/sweep.csv\n";
    } else if (*mem) {
      const auto cfg = resolve_config(mem_o);
      std::cout << dgtd::memory_report(cfg).to_text();
    } else if (*ops) {
      std::cout << dgtd::operation_count_report().to_text();
    } else if (*conv) {
      auto cfg = resolve_config(conv_o);
      std::filesystem::create_directories(cfg.out_dir);
      const auto entries = dgtd::convergence_study(
          cfg, conv_orders, conv_configs,
          cfg.sigma_sweep.empty() ? std::vector<double>{0.5, 1, 2, 4, 8, 16}
                                  : cfg.sigma_sweep);
      std::ofstream csv(cfg.out_dir + "/convergence.csv");
      csv << "# config_hash=" << dgtd::config_hash_hex(cfg) << "\n";
      csv << "configuration,order,best_sigma,best_reflection_db\n";
      for (const auto& e : entries) {
        std::cout << e.configuration << " p=" << e.order << ": best "
                  << e.best_reflection_db << " dB at sigma_max "
                  << e.best_sigma << "\n";
        csv << e.configuration << "," << e.order << "," << e.best_sigma << ","
            << e.best_reflection_db << "\n";
      }
      std::cout << "table in " << cfg.out_dir << "/convergence.csv\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
