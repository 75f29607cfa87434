#include <fstream>
#include <map>
#include <sstream>

#include "dgtd/errors.hpp"
#include "dgtd/mesh.hpp"
#include "dgtd/reference_element.hpp"

namespace dgtd {

namespace {

const std::map<std::string, FaceTag> kTagNames = {
    {"PEC", FaceTag::PEC},
    {"PERIODIC_X", FaceTag::PeriodicX},
    {"PERIODIC_Y", FaceTag::PeriodicY},
    {"PERIODIC_Z", FaceTag::PeriodicZ},
};

std::string tag_name(FaceTag t) {
  for (auto& [name, tag] : kTagNames)
    if (tag == t) return name;
  return "PEC";
}

struct LineReader {
  std::istream& in;
  int lineno = 0;
  std::string line;
  bool next() {
    while (std::getline(in, line)) {
      ++lineno;
      const auto pos = line.find('#');
      if (pos != std::string::npos) line.erase(pos);
      std::istringstream probe(line);
      std::string tok;
      if (probe >> tok) return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("mesh file line " + std::to_string(lineno) + ": " + msg);
  }
};

}  // namespace

void write_mesh_file(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open mesh file for writing: " + path);
  out.precision(17);
  out << "tetmesh 1\n";
  out << "vertices " << mesh.n_vertices() << "\n";
  for (int v = 0; v < mesh.n_vertices(); ++v)
    out << mesh.vertices(v, 0) << " " << mesh.vertices(v, 1) << " "
        << mesh.vertices(v, 2) << "\n";
  out << "elements " << mesh.n_elements() << "\n";
  for (int k = 0; k < mesh.n_elements(); ++k)
    out << mesh.elements(k, 0) << " " << mesh.elements(k, 1) << " "
        << mesh.elements(k, 2) << " " << mesh.elements(k, 3) << "\n";

  std::vector<std::string> blines;
  if (mesh.connected) {
    for (int k = 0; k < mesh.n_elements(); ++k)
      for (int f = 0; f < 4; ++f) {
        const FaceTag t = mesh.tag(k, f);
        if (t == FaceTag::Interior) continue;
        if (mesh.neighbor(k, f) >= 0 && t != FaceTag::PEC) {
          // periodic faces are stored once per physical pair, from the lower
          // element index
          if (mesh.neighbor(k, f) < k) continue;
        }
        auto fv = mesh.face_vertices(k, f);
        std::ostringstream os;
        os << fv[0] << " " << fv[1] << " " << fv[2] << " " << tag_name(t);
        blines.push_back(os.str());
      }
  }
  out << "boundary " << blines.size() << "\n";
  for (auto& l : blines) out << l << "\n";
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mesh file: " + path);
  LineReader rd{in};

  if (!rd.next()) rd.fail("empty file");
  {
    std::istringstream is(rd.line);
    std::string magic;
    int version = 0;
    is >> magic >> version;
    if (magic != "tetmesh" || version != 1)
      rd.fail("expected header 'tetmesh 1'");
  }

  Mesh mesh;
  if (!rd.next()) rd.fail("missing vertices section");
  int nv = 0;
  {
    std::istringstream is(rd.line);
    std::string kw;
    if (!(is >> kw >> nv) || kw != "vertices" || nv <= 0)
      rd.fail("expected 'vertices <count>'");
  }
  mesh.vertices.resize(nv, 3);
  for (int v = 0; v < nv; ++v) {
    if (!rd.next()) rd.fail("unexpected end of vertex list");
    std::istringstream is(rd.line);
    if (!(is >> mesh.vertices(v, 0) >> mesh.vertices(v, 1) >> mesh.vertices(v, 2)))
      rd.fail("bad vertex line");
  }

  if (!rd.next()) rd.fail("missing elements section");
  int ne = 0;
  {
    std::istringstream is(rd.line);
    std::string kw;
    if (!(is >> kw >> ne) || kw != "elements" || ne <= 0)
      rd.fail("expected 'elements <count>'");
  }
  mesh.elements.resize(ne, 4);
  for (int k = 0; k < ne; ++k) {
    if (!rd.next()) rd.fail("unexpected end of element list");
    std::istringstream is(rd.line);
    for (int v = 0; v < 4; ++v) {
      if (!(is >> mesh.elements(k, v))) rd.fail("bad element line");
      if (mesh.elements(k, v) < 0 || mesh.elements(k, v) >= nv)
        rd.fail("vertex index out of range in element " + std::to_string(k));
    }
    if (mesh.element_volume(k) <= 0)
      throw MeshError("mesh file: inverted or degenerate element " +
                      std::to_string(k) + " (line " + std::to_string(rd.lineno) +
                      ")");
  }

  int nb = 0;
  std::map<std::array<int, 3>, FaceTag> declared;
  if (rd.next()) {
    std::istringstream is(rd.line);
    std::string kw;
    if (!(is >> kw >> nb) || kw != "boundary") rd.fail("expected 'boundary <count>'");
    for (int b = 0; b < nb; ++b) {
      if (!rd.next()) rd.fail("unexpected end of boundary list");
      std::istringstream bs(rd.line);
      std::array<int, 3> fv{};
      std::string tag;
      if (!(bs >> fv[0] >> fv[1] >> fv[2] >> tag)) rd.fail("bad boundary line");
      auto it = kTagNames.find(tag);
      if (it == kTagNames.end()) rd.fail("unknown boundary tag '" + tag + "'");
      std::sort(fv.begin(), fv.end());
      declared[fv] = it->second;
    }
  }

  mesh.box_lo = mesh.vertices.colwise().minCoeff().transpose();
  mesh.box_hi = mesh.vertices.colwise().maxCoeff().transpose();
  mesh.region.assign(ne, 0);

  bool px = false, py = false, pz = false;
  for (auto& [fv, tag] : declared) {
    px = px || tag == FaceTag::PeriodicX;
    py = py || tag == FaceTag::PeriodicY;
    pz = pz || tag == FaceTag::PeriodicZ;
  }
  connect_mesh(mesh, px, py, pz);  // throws on hanging nodes

  // validate that declared boundary faces match the actual boundary
  for (int k = 0; k < ne; ++k)
    for (int f = 0; f < 4; ++f) {
      const FaceTag t = mesh.tag(k, f);
      if (t == FaceTag::Interior) continue;
      auto fv3 = mesh.face_vertices(k, f);
      std::array<int, 3> key{fv3[0], fv3[1], fv3[2]};
      std::sort(key.begin(), key.end());
      auto it = declared.find(key);
      if (t == FaceTag::PEC && it != declared.end() && it->second != FaceTag::PEC)
        throw MeshError("mesh file: face declared " + tag_name(it->second) +
                        " was not matched periodically");
    }
  return mesh;
}

}  // namespace dgtd
