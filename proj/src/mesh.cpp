#include "dgtd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "dgtd/errors.hpp"
#include "dgtd/reference_element.hpp"

namespace dgtd {

namespace {

double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// uniform in (-1, 1)
double hash_unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                 std::uint64_t c) {
  std::uint64_t h = splitmix64(seed ^ splitmix64(a ^ splitmix64(b ^ splitmix64(c))));
  return 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;
}

// the six Kuhn tetrahedra of a hex, as corner bit-triples along vertex paths
const int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                          {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

}  // namespace

std::array<int, 3> Mesh::face_vertices(int k, int f) const {
  return {elements(k, kTetFaceVertices[f][0]),
          elements(k, kTetFaceVertices[f][1]),
          elements(k, kTetFaceVertices[f][2])};
}

Vec3 Mesh::centroid(int k) const {
  Vec3 c = Vec3::Zero();
  for (int v = 0; v < 4; ++v) c += vertices.row(elements(k, v)).transpose();
  return c / 4.0;
}

double Mesh::element_volume(int k) const {
  return tet_volume(vertices.row(elements(k, 0)), vertices.row(elements(k, 1)),
                    vertices.row(elements(k, 2)), vertices.row(elements(k, 3)));
}

Mesh build_box_mesh(const BoxMeshSpec& spec) {
  for (int d = 0; d < 3; ++d)
    if (spec.extent(d) <= 0)
      throw ConfigError("build_box_mesh: extents must be positive");
  Vec3 edge = spec.edge;
  for (int d = 0; d < 3; ++d)
    if (edge(d) <= 0) edge(d) = spec.target_edge;
  for (int d = 0; d < 3; ++d) {
    if (edge(d) <= 0) throw ConfigError("build_box_mesh: edge length not set");
    if (edge(d) > spec.extent(d) * (1 + 1e-12))
      throw ConfigError("build_box_mesh: target edge exceeds extent");
  }

  const int nx = std::max(1, static_cast<int>(std::lround(spec.extent(0) / edge(0))));
  const int ny = std::max(1, static_cast<int>(std::lround(spec.extent(1) / edge(1))));
  const int nz = std::max(1, static_cast<int>(std::lround(spec.extent(2) / edge(2))));

  // z planes: uniform lattice, forced through any requested layer planes
  std::vector<double> zs(nz + 1);
  for (int i = 0; i <= nz; ++i)
    zs[i] = spec.origin(2) + spec.extent(2) * i / nz;
  if (!spec.layer_planes.empty()) {
    const double ztol = 1e-12 * spec.extent.norm();
    for (size_t i = 1; i < spec.layer_planes.size(); ++i)
      if (spec.layer_planes[i] <= spec.layer_planes[i - 1] + ztol)
        throw ConfigError("build_box_mesh: layer planes must be increasing");
    for (double zp : spec.layer_planes) {
      if (zp < spec.origin(2) - ztol || zp > spec.origin(2) + spec.extent(2) + ztol)
        throw ConfigError("build_box_mesh: layer plane outside extent");
      bool found = false;
      for (double& z : zs)
        if (std::abs(z - zp) < edge(2) * 0.5) {
          z = zp;  // snap the nearest lattice plane onto the layer plane
          found = true;
          break;
        }
      if (!found)
        throw ConfigError("build_box_mesh: layer plane incompatible with lattice");
    }
    std::sort(zs.begin(), zs.end());
    for (size_t i = 1; i < zs.size(); ++i)
      if (zs[i] - zs[i - 1] < 1e-6 * edge(2))
        throw ConfigError("build_box_mesh: duplicate z planes after snapping");
  }

  Mesh mesh;
  const int nvx = nx + 1, nvy = ny + 1;
  mesh.vertices.resize(nvx * nvy * (nz + 1), 3);
  auto vid = [&](int ix, int iy, int iz) {
    return (iz * nvy + iy) * nvx + ix;
  };
  for (int iz = 0; iz <= nz; ++iz)
    for (int iy = 0; iy <= ny; ++iy)
      for (int ix = 0; ix <= nx; ++ix) {
        double x = spec.origin(0) + spec.extent(0) * ix / nx;
        double y = spec.origin(1) + spec.extent(1) * iy / ny;
        double z = zs[iz];
        if (spec.jitter > 0 && iz > 0 && iz < nz) {
          const double az = std::abs(z);
          if (az > spec.jitter_zmin + 1e-12 && az < spec.jitter_zmax - 1e-12) {
            const double dz = 0.5 * (zs[iz + 1] - zs[iz - 1]);
            z += spec.jitter * dz *
                 hash_unit(spec.jitter_seed, ix % nx, iy % ny, iz);
          }
        }
        mesh.vertices.row(vid(ix, iy, iz)) << x, y, z;
      }

  mesh.elements.resize(6 * nx * ny * static_cast<int>(zs.size() - 1), 4);
  int k = 0;
  for (int iz = 0; iz < static_cast<int>(zs.size()) - 1; ++iz)
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        // mirrored Kuhn split: reflect per-axis by lattice parity so the
        // paved style criss-crosses the diagonals
        int px = 0, py = 0, pz = 0;
        if (spec.style == MeshStyle::Paved) {
          px = ix % 2;
          py = iy % 2;
          pz = iz % 2;
        }
        auto corner = [&](int bx, int by, int bz) {
          return vid(ix + (bx ^ px), iy + (by ^ py), iz + (bz ^ pz));
        };
        for (const auto& perm : kPerms) {
          int bits[3] = {0, 0, 0};
          int v[4];
          v[0] = corner(0, 0, 0);
          bits[perm[0]] = 1;
          v[1] = corner(bits[0], bits[1], bits[2]);
          bits[perm[1]] = 1;
          v[2] = corner(bits[0], bits[1], bits[2]);
          v[3] = corner(1, 1, 1);
          const double vol =
              tet_volume(mesh.vertices.row(v[0]), mesh.vertices.row(v[1]),
                         mesh.vertices.row(v[2]), mesh.vertices.row(v[3]));
          if (vol < 0) std::swap(v[2], v[3]);
          mesh.elements.row(k++) << v[0], v[1], v[2], v[3];
        }
      }

  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double vol = mesh.element_volume(e);
    if (vol <= 0)
      throw MeshError("build_box_mesh: non-positive volume in element " +
                      std::to_string(e) + " (reduce jitter)");
  }
  mesh.box_lo = spec.origin;
  mesh.box_hi = spec.origin + spec.extent;
  mesh.region.assign(mesh.n_elements(), 0);
  mesh.style = spec.style;
  mesh.built_jitter = spec.jitter;
  return mesh;
}

namespace {

struct TripleKey {
  long long a, b, c;
  bool operator<(const TripleKey& o) const {
    return std::tie(a, b, c) < std::tie(o.a, o.b, o.c);
  }
};

TripleKey sorted_key(int x, int y, int z) {
  int v[3] = {x, y, z};
  std::sort(v, v + 3);
  return {v[0], v[1], v[2]};
}

}  // namespace

void connect_mesh(Mesh& mesh, bool periodic_x, bool periodic_y,
                  bool periodic_z) {
  const int K = mesh.n_elements();
  mesh.neighbor = MatInt::Constant(K, 4, -1);
  mesh.neighbor_face = MatInt::Constant(K, 4, -1);
  mesh.face_tag.setConstant(K, 4, static_cast<std::int8_t>(FaceTag::PEC));
  mesh.injection_side.setConstant(K, 4, 0);

  std::map<TripleKey, std::pair<int, int>> open;
  for (int k = 0; k < K; ++k) {
    for (int f = 0; f < 4; ++f) {
      auto fv = mesh.face_vertices(k, f);
      const TripleKey key = sorted_key(fv[0], fv[1], fv[2]);
      auto it = open.find(key);
      if (it == open.end()) {
        open[key] = {k, f};
      } else {
        const auto [k2, f2] = it->second;
        mesh.neighbor(k, f) = k2;
        mesh.neighbor_face(k, f) = f2;
        mesh.neighbor(k2, f2) = k;
        mesh.neighbor_face(k2, f2) = f;
        mesh.face_tag(k, f) = mesh.face_tag(k2, f2) =
            static_cast<std::int8_t>(FaceTag::Interior);
        open.erase(it);
      }
    }
  }

  // classify remaining faces by bounding-box plane and pair periodic ones
  const Vec3 size = mesh.box_hi - mesh.box_lo;
  const double tol = 1e-9 * size.maxCoeff();
  const bool periodic[3] = {periodic_x, periodic_y, periodic_z};
  const FaceTag ptag[3] = {FaceTag::PeriodicX, FaceTag::PeriodicY,
                           FaceTag::PeriodicZ};

  auto face_plane = [&](int k, int f) -> std::pair<int, int> {
    // returns (axis, side) with side 0=lo 1=hi, or (-1,*) if not on a plane
    auto fv = mesh.face_vertices(k, f);
    for (int ax = 0; ax < 3; ++ax) {
      for (int side = 0; side < 2; ++side) {
        const double plane = side ? mesh.box_hi(ax) : mesh.box_lo(ax);
        bool on = true;
        for (int v : fv)
          if (std::abs(mesh.vertices(v, ax) - plane) > tol) on = false;
        if (on) return {ax, side};
      }
    }
    return {-1, 0};
  };

  // quantized key of a face for periodic matching: sorted vertex coordinates
  // with the periodic axis dropped
  auto pkey = [&](int k, int f, int ax) {
    auto fv = mesh.face_vertices(k, f);
    std::array<std::pair<long long, long long>, 3> q;
    int i = 0;
    const double h = tol * 10;
    for (int v : fv) {
      long long a = 0, b = 0;
      int axi = 0;
      for (int d = 0; d < 3; ++d) {
        if (d == ax) continue;
        const double val = mesh.vertices(v, d);
        (axi++ == 0 ? a : b) = std::llround(val / h);
      }
      q[i++] = {a, b};
    }
    std::sort(q.begin(), q.end());
    std::ostringstream os;
    for (auto& [a, b] : q) os << a << ',' << b << ';';
    return os.str();
  };

  std::array<std::map<std::string, std::pair<int, int>>, 3> lo_faces;
  std::vector<std::tuple<int, int, int>> hi_faces;  // (k, f, ax)

  for (int k = 0; k < K; ++k) {
    for (int f = 0; f < 4; ++f) {
      if (mesh.neighbor(k, f) >= 0) continue;
      const auto [ax, side] = face_plane(k, f);
      if (ax < 0) {
        Vec3 c = Vec3::Zero();
        for (int v : mesh.face_vertices(k, f))
          c += mesh.vertices.row(v).transpose();
        c /= 3.0;
        std::ostringstream os;
        os << "connect_mesh: interior face of element " << k
           << " has no partner (hanging node?), centroid (" << c.transpose()
           << ")";
        throw MeshError(os.str());
      }
      if (!periodic[ax]) {
        mesh.face_tag(k, f) = static_cast<std::int8_t>(FaceTag::PEC);
        continue;
      }
      mesh.face_tag(k, f) = static_cast<std::int8_t>(ptag[ax]);
      if (side == 0)
        lo_faces[ax][pkey(k, f, ax)] = {k, f};
      else
        hi_faces.emplace_back(k, f, ax);
    }
  }

  for (auto& [k, f, ax] : hi_faces) {
    auto it = lo_faces[ax].find(pkey(k, f, ax));
    if (it == lo_faces[ax].end()) {
      Vec3 c = Vec3::Zero();
      for (int v : mesh.face_vertices(k, f)) c += mesh.vertices.row(v).transpose();
      c /= 3.0;
      std::ostringstream os;
      os << "connect_mesh: unmatched periodic face of element " << k
         << " on axis " << ax << ", centroid (" << c.transpose() << ")";
      throw MeshError(os.str());
    }
    const auto [k2, f2] = it->second;
    mesh.neighbor(k, f) = k2;
    mesh.neighbor_face(k, f) = f2;
    mesh.neighbor(k2, f2) = k;
    mesh.neighbor_face(k2, f2) = f;
    lo_faces[ax].erase(it);
  }
  for (int ax = 0; ax < 3; ++ax)
    if (!lo_faces[ax].empty()) {
      const auto [k, f] = lo_faces[ax].begin()->second;
      Vec3 c = Vec3::Zero();
      for (int v : mesh.face_vertices(k, f)) c += mesh.vertices.row(v).transpose();
      c /= 3.0;
      std::ostringstream os;
      os << "connect_mesh: unmatched periodic face of element " << k
         << " on axis " << ax << ", centroid (" << c.transpose() << ")";
      throw MeshError(os.str());
    }

  mesh.connected = true;
}

void tag_injection_plane(Mesh& mesh, double z_plane) {
  if (!mesh.connected)
    throw ContractError("tag_injection_plane: connect the mesh first");
  const double tol = 1e-9 * (mesh.box_hi - mesh.box_lo).maxCoeff();
  int count = 0;
  for (int k = 0; k < mesh.n_elements(); ++k) {
    for (int f = 0; f < 4; ++f) {
      if (mesh.neighbor(k, f) < 0) continue;
      bool on = true;
      for (int v : mesh.face_vertices(k, f))
        if (std::abs(mesh.vertices(v, 2) - z_plane) > tol) on = false;
      if (!on) continue;
      mesh.injection_side(k, f) = mesh.centroid(k).z() > z_plane ? 1 : -1;
      ++count;
    }
  }
  if (count == 0)
    throw ConfigError("tag_injection_plane: no faces on the requested plane");
}

void tag_pml_region(Mesh& mesh, double z_interface) {
  const double tol = 1e-9 * (mesh.box_hi - mesh.box_lo).maxCoeff();
  mesh.region.assign(mesh.n_elements(), 0);
  for (int k = 0; k < mesh.n_elements(); ++k) {
    double zmax = 0;
    for (int v = 0; v < 4; ++v)
      zmax = std::max(zmax, std::abs(mesh.vertices(mesh.elements(k, v), 2)));
    if (zmax > z_interface + tol) mesh.region[k] = 1;
  }
}

Mat element_points(const Mesh& mesh, int k, const Mat& ref_points) {
  const Vec3 v0 = mesh.vertices.row(mesh.elements(k, 0));
  const Vec3 v1 = mesh.vertices.row(mesh.elements(k, 1));
  const Vec3 v2 = mesh.vertices.row(mesh.elements(k, 2));
  const Vec3 v3 = mesh.vertices.row(mesh.elements(k, 3));
  Mat out(ref_points.rows(), 3);
  for (int i = 0; i < ref_points.rows(); ++i) {
    const double r = ref_points(i, 0), s = ref_points(i, 1), t = ref_points(i, 2);
    const double l0 = -0.5 * (1.0 + r + s + t);
    out.row(i) = (l0 * v0 + 0.5 * (1.0 + r) * v1 + 0.5 * (1.0 + s) * v2 +
                  0.5 * (1.0 + t) * v3)
                     .transpose();
  }
  return out;
}

GeometricFactors geometric_factors(const Mesh& mesh) {
  const int K = mesh.n_elements();
  GeometricFactors g;
  g.jacobian.resize(K);
  g.inv_map.resize(K);
  for (int d = 0; d < 3; ++d) g.normal[d].resize(K, 4);
  g.face_scale.resize(K, 4);
  g.inscribed_radius.resize(K);

  for (int k = 0; k < K; ++k) {
    const Vec3 v0 = mesh.vertices.row(mesh.elements(k, 0));
    const Vec3 v1 = mesh.vertices.row(mesh.elements(k, 1));
    const Vec3 v2 = mesh.vertices.row(mesh.elements(k, 2));
    const Vec3 v3 = mesh.vertices.row(mesh.elements(k, 3));
    Mat3 jm;  // dx/dr columns
    jm.col(0) = 0.5 * (v1 - v0);
    jm.col(1) = 0.5 * (v2 - v0);
    jm.col(2) = 0.5 * (v3 - v0);
    const double det = jm.determinant();
    if (det <= 0)
      throw MeshError("geometric_factors: inverted element " + std::to_string(k));
    g.jacobian(k) = det;
    g.inv_map[k] = jm.inverse();

    const Vec3 verts[4] = {v0, v1, v2, v3};
    const Vec3 cen = 0.25 * (v0 + v1 + v2 + v3);
    double area_sum = 0;
    for (int f = 0; f < 4; ++f) {
      const Vec3 a = verts[kTetFaceVertices[f][0]];
      const Vec3 b = verts[kTetFaceVertices[f][1]];
      const Vec3 c = verts[kTetFaceVertices[f][2]];
      Vec3 n = (b - a).cross(c - a);
      const double area = 0.5 * n.norm();
      area_sum += area;
      n.normalize();
      const Vec3 fc = (a + b + c) / 3.0;
      if (n.dot(fc - cen) < 0) n = -n;
      for (int d = 0; d < 3; ++d) g.normal[d](k, f) = n(d);
      g.face_scale(k, f) = (area / kRefFaceArea[f]) / det;
    }
    g.inscribed_radius(k) = 3.0 * det * kRefVolume / area_sum;
  }
  return g;
}

}  // namespace dgtd
