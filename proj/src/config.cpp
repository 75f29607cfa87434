#include <fstream>
#include <map>
#include <sstream>

#include "dgtd/errors.hpp"
#include "dgtd/harness.hpp"

namespace dgtd {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

const char* style_name(MeshStyle s) {
  return s == MeshStyle::Paved ? "paved" : "layered";
}
const char* flux_name(Flux f) { return f == Flux::Upwind ? "upwind" : "central"; }
const char* path_name(PmlPath p) {
  switch (p) {
    case PmlPath::ElementConstant: return "ec";
    case PmlPath::Direct: return "direct";
    case PmlPath::Waa: return "waa";
    default: return "none";
  }
}
const char* sampling_name(SamplingStrategy s) {
  switch (s) {
    case SamplingStrategy::ElementConstantFarthestNode: return "ec-farthest";
    case SamplingStrategy::LayeredOutermost: return "ec-layered";
    default: return "sv";
  }
}

}  // namespace

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "[geometry]\n";
  os << "cross_section_cm = " << fmt(c.cross_section * 100) << "\n";
  os << "domain_length_cm = " << fmt(c.domain_length * 100) << "\n";
  os << "pml_thickness_cm = " << fmt(c.pml_thickness * 100) << "\n";
  os << "edge_xy_cm = " << fmt(c.edge_xy * 100) << "\n";
  os << "edge_z_cm = " << fmt(c.edge_z * 100) << "\n";
  os << "mesh_style = " << style_name(c.mesh_style) << "\n";
  os << "paved_jitter = " << fmt(c.paved_jitter) << "\n";
  os << "jitter_seed = " << c.jitter_seed << "\n";
  os << "[discretization]\n";
  os << "order = " << c.order << "\n";
  os << "flux = " << flux_name(c.flux) << "\n";
  os << "cfl = " << fmt(c.cfl) << "\n";
  os << "pml_path = " << path_name(c.pml_path) << "\n";
  os << "[pml]\n";
  os << "sigma_max = " << fmt(c.sigma_max) << "\n";
  os << "sigma_sweep =";
  for (double v : c.sigma_sweep) os << " " << fmt(v);
  os << "\n";
  os << "kappa_max = " << fmt(c.kappa_max) << "\n";
  os << "profile_order = " << c.profile_order << "\n";
  os << "sampling = " << sampling_name(c.sampling) << "\n";
  os << "[excitation]\n";
  os << "e0 = " << fmt(c.e0) << "\n";
  os << "tau_ps = " << fmt(c.tau * 1e12) << "\n";
  os << "t0_over_tau = " << fmt(c.t0_over_tau) << "\n";
  os << "[probes]\n";
  os << "probes_cm =";
  for (size_t i = 0; i < c.probes.size(); ++i) {
    if (i) os << " ;";
    os << " " << fmt(c.probes[i](0) * 100) << " " << fmt(c.probes[i](1) * 100)
       << " " << fmt(c.probes[i](2) * 100);
  }
  os << "\n";
  os << "[output]\n";
  os << "directory = " << c.out_dir << "\n";
  os << "cadence_steps = " << c.cadence_steps << "\n";
  os << "t_final_ns = " << fmt(c.t_final * 1e9) << "\n";
  return os.str();
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig c;
  c.probes.clear();
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  auto fail = [&](const std::string& m) {
    throw ConfigError("config line " + std::to_string(lineno) + ": " + m);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string trimmed;
    {
      std::istringstream probe(line);
      std::string tok;
      if (!(probe >> tok)) continue;
    }
    if (line.find('[') != std::string::npos) {
      const auto l = line.find('['), r = line.find(']');
      if (r == std::string::npos) fail("unterminated section");
      section = line.substr(l + 1, r - l - 1);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    std::string key, value = line.substr(eq + 1);
    {
      std::istringstream ks(line.substr(0, eq));
      ks >> key;
    }
    std::istringstream vs(value);
    const std::string full = section + "." + key;

    auto num = [&]() {
      double v;
      if (!(vs >> v)) fail("expected a number for " + full);
      return v;
    };
    if (full == "geometry.cross_section_cm") c.cross_section = num() / 100;
    else if (full == "geometry.domain_length_cm") c.domain_length = num() / 100;
    else if (full == "geometry.pml_thickness_cm") c.pml_thickness = num() / 100;
    else if (full == "geometry.edge_xy_cm") c.edge_xy = num() / 100;
    else if (full == "geometry.edge_z_cm") c.edge_z = num() / 100;
    else if (full == "geometry.mesh_style") {
      std::string v;
      vs >> v;
      if (v == "paved") c.mesh_style = MeshStyle::Paved;
      else if (v == "layered") c.mesh_style = MeshStyle::Layered;
      else fail("mesh_style must be paved|layered");
    } else if (full == "geometry.paved_jitter") c.paved_jitter = num();
    else if (full == "geometry.jitter_seed") c.jitter_seed =
        static_cast<std::uint64_t>(num());
    else if (full == "discretization.order") c.order = static_cast<int>(num());
    else if (full == "discretization.flux") {
      std::string v;
      vs >> v;
      if (v == "upwind") c.flux = Flux::Upwind;
      else if (v == "central") c.flux = Flux::Central;
      else fail("flux must be upwind|central");
    } else if (full == "discretization.cfl") c.cfl = num();
    else if (full == "discretization.pml_path") {
      std::string v;
      vs >> v;
      if (v == "ec") c.pml_path = PmlPath::ElementConstant;
      else if (v == "direct") c.pml_path = PmlPath::Direct;
      else if (v == "waa") c.pml_path = PmlPath::Waa;
      else fail("pml_path must be ec|direct|waa");
    } else if (full == "pml.sigma_max") c.sigma_max = num();
    else if (full == "pml.sigma_sweep") {
      c.sigma_sweep.clear();
      double v;
      while (vs >> v) c.sigma_sweep.push_back(v);
    } else if (full == "pml.kappa_max") c.kappa_max = num();
    else if (full == "pml.profile_order") c.profile_order = static_cast<int>(num());
    else if (full == "pml.sampling") {
      std::string v;
      vs >> v;
      if (v == "ec-farthest") c.sampling = SamplingStrategy::ElementConstantFarthestNode;
      else if (v == "ec-layered") c.sampling = SamplingStrategy::LayeredOutermost;
      else if (v == "sv") c.sampling = SamplingStrategy::SmoothlyVarying;
      else fail("sampling must be ec-farthest|ec-layered|sv");
    } else if (full == "excitation.e0") c.e0 = num();
    else if (full == "excitation.tau_ps") c.tau = num() * 1e-12;
    else if (full == "excitation.t0_over_tau") c.t0_over_tau = num();
    else if (full == "probes.probes_cm") {
      c.probes.clear();
      std::string rest;
      std::getline(vs, rest);
      std::istringstream groups(rest);
      std::string grp;
      std::string acc;
      std::vector<std::string> parts;
      std::istringstream split(rest);
      std::string piece;
      while (std::getline(split, piece, ';')) parts.push_back(piece);
      for (auto& part : parts) {
        std::istringstream ps(part);
        double x, y, z;
        if (!(ps >> x >> y >> z)) fail("probe needs three coordinates");
        c.probes.emplace_back(x / 100, y / 100, z / 100);
      }
    } else if (full == "output.directory") {
      std::string v;
      vs >> v;
      c.out_dir = v;
    } else if (full == "output.cadence_steps") c.cadence_steps = static_cast<int>(num());
    else if (full == "output.t_final_ns") c.t_final = num() * 1e-9;
    else fail("unknown key " + full);
  }
  if (c.probes.empty())
    c.probes.emplace_back(0.21 * c.edge_xy, 0.17 * c.edge_xy, 2.37 * c.edge_z);
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config_text(os.str());
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string s = serialize_config(cfg);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash_hex(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << std::hex << config_hash(cfg);
  return os.str();
}

ExperimentConfig preset_paper() {
  ExperimentConfig c;
  c.cross_section = 0.012;
  c.domain_length = 0.60;
  c.pml_thickness = 0.016;
  c.edge_xy = 0.004;
  c.edge_z = 0.004;
  c.mesh_style = MeshStyle::Paved;
  c.paved_jitter = 0.0;
  c.order = 3;
  c.flux = Flux::Upwind;
  c.cfl = 0.5;
  c.pml_path = PmlPath::Waa;
  c.sigma_max = 2.0;
  c.sigma_sweep = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  c.kappa_max = 1.0;
  c.profile_order = 1;
  c.sampling = SamplingStrategy::SmoothlyVarying;
  c.e0 = 1.0;
  c.tau = 66.67e-12;
  c.t0_over_tau = 15.0;
  c.probes = {Vec3(0.00084, 0.00068, 0.00948)};
  c.cadence_steps = 10;
  return c;
}

ExperimentConfig preset_ci() {
  ExperimentConfig c = preset_paper();
  c.domain_length = 0.20;
  c.edge_xy = 0.006;
  c.tau = 40e-12;
  c.cfl = 0.9;
  c.probes = {Vec3(0.00126, 0.00102, 0.00948)};
  return c;
}

ExperimentConfig apply_configuration(const ExperimentConfig& base,
                                     const std::string& name) {
  ExperimentConfig c = base;
  if (name == "ec-paved") {
    c.mesh_style = MeshStyle::Paved;
    if (c.paved_jitter <= 0) c.paved_jitter = 0.25;
    c.sampling = SamplingStrategy::ElementConstantFarthestNode;
    c.pml_path = PmlPath::ElementConstant;
  } else if (name == "ec-layered") {
    c.mesh_style = MeshStyle::Layered;
    c.paved_jitter = 0.0;
    c.sampling = SamplingStrategy::LayeredOutermost;
    c.pml_path = PmlPath::ElementConstant;
  } else if (name == "sv-paved") {
    c.mesh_style = MeshStyle::Paved;
    if (c.paved_jitter <= 0) c.paved_jitter = 0.25;
    c.sampling = SamplingStrategy::SmoothlyVarying;
    c.pml_path = PmlPath::Direct;
  } else if (name == "sv-waa-paved") {
    c.mesh_style = MeshStyle::Paved;
    if (c.paved_jitter <= 0) c.paved_jitter = 0.25;
    c.sampling = SamplingStrategy::SmoothlyVarying;
    c.pml_path = PmlPath::Waa;
  } else {
    throw ConfigError("unknown configuration '" + name + "'");
  }
  return c;
}

}  // namespace dgtd
