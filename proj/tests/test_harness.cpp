#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dgtd/errors.hpp"
#include "dgtd/harness.hpp"

using namespace dgtd;

namespace {

// small, fast reflection setup used by the harness smoke tests
ExperimentConfig tiny_config() {
  ExperimentConfig c = preset_ci();
  c.cross_section = 0.008;
  c.edge_xy = 0.004;
  c.domain_length = 0.04;  // z0 = 2 cm
  c.order = 2;
  c.tau = 6e-12;
  c.cfl = 0.9;
  c.sigma_max = 2.0;
  c.probes = {Vec3(0.00084, 0.00068, 0.00948)};
  c.out_dir = "harness_test_out";
  c.cadence_steps = 4;
  return c;
}

}  // namespace

TEST_CASE("configuration serializes and parses losslessly") {
  ExperimentConfig c = preset_paper();
  c.sigma_sweep = {0.0, 1.5, 3.25};
  c.probes = {Vec3(0.001, 0.002, 0.003), Vec3(0, 0, 0.01)};
  c.paved_jitter = 0.25;
  const std::string text = serialize_config(c);
  const ExperimentConfig r = parse_config_text(text);
  CHECK(serialize_config(r) == text);
  CHECK(config_hash(r) == config_hash(c));
  CHECK(r.domain_length == doctest::Approx(c.domain_length).epsilon(1e-15));
  CHECK(r.tau == doctest::Approx(c.tau).epsilon(1e-15));
  REQUIRE(r.probes.size() == 2);
  CHECK(r.probes[1](2) == doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("config parse errors carry line numbers and unknown keys fail") {
  CHECK_THROWS_WITH_AS(parse_config_text("[geometry]\nbogus_key = 1\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[geometry]\nmesh_style = diagonal\n"),
                  ConfigError);
}

TEST_CASE("presets") {
  const auto paper = preset_paper();
  CHECK(paper.domain_length == doctest::Approx(0.60));
  CHECK(paper.tau == doctest::Approx(66.67e-12));
  CHECK(paper.t0_over_tau == 15.0);
  CHECK(paper.pml_thickness == doctest::Approx(0.016));
  const auto ci = preset_ci();
  CHECK(ci.domain_length == doctest::Approx(0.20));
  CHECK(config_hash(ci) != config_hash(paper));
}

TEST_CASE("named configurations map to style, sampling, and path") {
  const auto base = preset_ci();
  const auto ecp = apply_configuration(base, "ec-paved");
  CHECK(ecp.mesh_style == MeshStyle::Paved);
  CHECK(ecp.paved_jitter > 0);
  CHECK(ecp.pml_path == PmlPath::ElementConstant);
  CHECK(ecp.sampling == SamplingStrategy::ElementConstantFarthestNode);
  const auto ecl = apply_configuration(base, "ec-layered");
  CHECK(ecl.mesh_style == MeshStyle::Layered);
  CHECK(ecl.paved_jitter == 0.0);
  CHECK(ecl.sampling == SamplingStrategy::LayeredOutermost);
  const auto svp = apply_configuration(base, "sv-paved");
  CHECK(svp.pml_path == PmlPath::Direct);
  const auto svw = apply_configuration(base, "sv-waa-paved");
  CHECK(svw.pml_path == PmlPath::Waa);
  CHECK_THROWS_AS(apply_configuration(base, "sv-diagonal"), ConfigError);
}

TEST_CASE("operation count report reproduces the published formulas") {
  const auto rep = operation_count_report();
  REQUIRE(rep.rows.size() == 5);
  const auto& p2 = rep.rows[1];
  CHECK(p2.direct_field_mul == 300);   // 3 * 10^2
  CHECK(p2.waa_field_mul == 583);      // 5*11*10 + 3*11
  CHECK(p2.direct_field_add == 20);
  CHECK(p2.waa_field_add == 21);
  for (const auto& r : rep.rows) {
    CHECK(r.waa_field_mul > r.direct_field_mul);
    CHECK(r.waa_aux_mul > r.direct_aux_mul);
    // modestly higher: stays within a small factor
    CHECK(r.waa_field_mul < 3 * r.direct_field_mul);
  }
  CHECK(rep.to_text().find("583") != std::string::npos);
}

TEST_CASE("experiment precondition failures") {
  SUBCASE("insufficient pulse separation names the required length") {
    ExperimentConfig c = tiny_config();
    c.tau = 66.67e-12;  // far too wide for a 4 cm domain
    CHECK_THROWS_WITH_AS(run_reflection_experiment(c),
                         doctest::Contains("domain_length"), ConfigError);
  }
  SUBCASE("probe must lie between injection plane and interface") {
    ExperimentConfig c = tiny_config();
    c.probes = {Vec3(0, 0, -0.005)};
    CHECK_THROWS_AS(run_reflection_experiment(c), ConfigError);
  }
  SUBCASE("element-constant path with smooth sampling is rejected") {
    ExperimentConfig c = tiny_config();
    c.pml_path = PmlPath::ElementConstant;
    c.sampling = SamplingStrategy::SmoothlyVarying;
    CHECK_THROWS_AS(run_reflection_experiment(c), ConfigError);
  }
  SUBCASE("lattice-incompatible PML thickness is rejected") {
    ExperimentConfig c = tiny_config();
    c.pml_thickness = 0.0175;
    CHECK_THROWS_AS(run_reflection_experiment(c), ConfigError);
  }
}

TEST_CASE("reflection experiment smoke run: PEC backstop at sigma_max = 0") {
  ExperimentConfig c = tiny_config();
  c.sigma_max = 0.0;
  const auto res = run_reflection_experiment(c, c.out_dir + "/trace0.csv");
  // without absorption the pulse returns nearly intact
  CHECK(res.reflection_db > -6.0);
  CHECK(res.reflection_db <= 0.5);
  CHECK(res.incident_peak == doctest::Approx(1.0).epsilon(0.35));
  CHECK(res.peak_time > res.t_split);

  // provenance header on the trace
  std::ifstream in(c.out_dir + "/trace0.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line.find("# config_hash=") == 0);
}

TEST_CASE("absorption improves with sigma_max in the small-sigma regime") {
  ExperimentConfig c = tiny_config();
  const auto results = sweep_sigma_max(c, {0.0, 4.0}, 2);
  REQUIRE(results.size() == 2);
  CHECK(results[1].reflection_db < results[0].reflection_db - 10.0);
  CHECK(std::filesystem::exists(c.out_dir + "/sweep.csv"));
}

TEST_CASE("runs are deterministic: identical config, identical bytes") {
  ExperimentConfig c = tiny_config();
  c.sigma_max = 2.0;
  auto read = [](const std::string& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  run_reflection_experiment(c, c.out_dir + "/det_a.csv");
  run_reflection_experiment(c, c.out_dir + "/det_b.csv");
  CHECK(read(c.out_dir + "/det_a.csv") == read(c.out_dir + "/det_b.csv"));
}

TEST_CASE("single-value sweep equals a direct run; argmin is order-stable") {
  ExperimentConfig c = tiny_config();
  c.sigma_max = 3.0;
  const auto direct = run_reflection_experiment(c);
  auto one = sweep_sigma_max(c, {3.0}, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].reflection_db == doctest::Approx(direct.reflection_db));

  const auto fwd = sweep_sigma_max(c, {0.0, 2.0, 8.0}, 2);
  const auto rev = sweep_sigma_max(c, {8.0, 2.0, 0.0}, 2);
  auto best = [](const std::vector<ReflectionResult>& v) {
    double s = 0, r = 1e300;
    for (const auto& e : v)
      if (e.reflection_db < r) {
        r = e.reflection_db;
        s = e.sigma_max;
      }
    return std::pair{s, r};
  };
  CHECK(best(fwd) == best(rev));
}
