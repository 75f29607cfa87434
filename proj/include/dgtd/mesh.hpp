#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dgtd/dense.hpp"

namespace dgtd {

enum class MeshStyle { Paved, Layered };

enum class FaceTag : int8_t {
  Interior = 0,
  PEC = 1,
  PeriodicX = 2,
  PeriodicY = 3,
  PeriodicZ = 4,
};

struct BoxMeshSpec {
  Vec3 origin = Vec3::Zero();  // low corner (meters)
  Vec3 extent = Vec3::Zero();  // box size (meters)
  double target_edge = 0.0;    // lattice spacing (meters)
  Vec3 edge = Vec3::Zero();    // optional per-axis spacing; 0 = target_edge
  MeshStyle style = MeshStyle::Paved;
  std::vector<double> layer_planes;  // z planes forced into the lattice

  // Deterministic vertex z-jitter emulating an unstructured paved mesh.
  // Applied only to vertices with jitter_zmin < |z| < jitter_zmax, periodic
  // in the x/y lattice indices so periodic face pairing is preserved.
  double jitter = 0.0;  // fraction of the local z spacing
  double jitter_zmin = 0.0;
  double jitter_zmax = 0.0;
  std::uint64_t jitter_seed = 12345;
};

struct Mesh {
  Mat vertices;     // Nv x 3 (meters)
  MatInt elements;  // K x 4, positive orientation

  // populated by connect_mesh
  MatInt neighbor;       // K x 4, -1 on boundary faces
  MatInt neighbor_face;  // K x 4
  Eigen::Matrix<std::int8_t, Eigen::Dynamic, 4> face_tag;
  Eigen::Matrix<std::int8_t, Eigen::Dynamic, 4> injection_side;  // +1 TF / -1 SF
  std::vector<std::uint8_t> region;  // 0 interior, 1 PML
  Vec3 box_lo = Vec3::Zero(), box_hi = Vec3::Zero();
  bool connected = false;
  MeshStyle style = MeshStyle::Paved;
  double built_jitter = 0.0;

  int n_vertices() const { return static_cast<int>(vertices.rows()); }
  int n_elements() const { return static_cast<int>(elements.rows()); }
  std::array<int, 3> face_vertices(int k, int f) const;
  Vec3 centroid(int k) const;
  double element_volume(int k) const;
  FaceTag tag(int k, int f) const { return static_cast<FaceTag>(face_tag(k, f)); }
};

Mesh build_box_mesh(const BoxMeshSpec& spec);

// Pair all faces; tag boundary faces PEC or periodic. Throws MeshError on
// unmatched periodic faces (reports the face centroid).
void connect_mesh(Mesh& mesh, bool periodic_x, bool periodic_y,
                  bool periodic_z = false);

// Mark faces lying in the plane z = z_plane; elements on the +z side get
// injection_side = +1 (total field), -z side -1 (scattered field).
void tag_injection_plane(Mesh& mesh, double z_plane);

// Tag elements reaching beyond |z| = z_interface as PML.
void tag_pml_region(Mesh& mesh, double z_interface);

// Physical coordinates of reference points mapped into element k.
Mat element_points(const Mesh& mesh, int k, const Mat& ref_points);

struct GeometricFactors {
  Vec jacobian;                // K: det of the affine map (V_phys/V_ref)
  std::vector<Mat3> inv_map;   // K: rows are grad r, grad s, grad t
  Mat normal[3];               // K x 4 outward unit normal components
  Mat face_scale;              // K x 4: surface Jacobian / volume Jacobian
  Vec inscribed_radius;        // K (meters)
};

GeometricFactors geometric_factors(const Mesh& mesh);

// Text format round-trip (documented in docs/mesh_format.md).
void write_mesh_file(const Mesh& mesh, const std::string& path);
Mesh read_mesh_file(const std::string& path);

}  // namespace dgtd
