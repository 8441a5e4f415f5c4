#include "katolab/mesh_io.hpp"

#include "katolab/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace katolab {

namespace {

// Next line that is neither blank nor a comment.
bool nextContentLine(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void parseError(const std::string& what) { throw MeshError(MeshError::Kind::Parse, what); }

} // namespace

MeshFormat mesh_format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".off") return MeshFormat::OFF;
  if (ext == ".obj") return MeshFormat::OBJ;
  throw InputError("unrecognized mesh extension '" + ext + "' (expected .off or .obj)");
}

DiscreteManifold load_mesh(const std::filesystem::path& path) { return load_mesh(path, mesh_format_from_path(path)); }

DiscreteManifold load_mesh(const std::filesystem::path& path, MeshFormat format) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open mesh file " + path.string());
  return format == MeshFormat::OFF ? read_off(in, path.string()) : read_obj(in, path.string());
}

DiscreteManifold read_off(std::istream& in, const std::string& descriptor) {
  std::string line;
  if (!nextContentLine(in, line)) parseError("empty OFF file");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") parseError("missing OFF header");
  long nv = -1, nf = -1, ne = 0;
  if (!(header >> nv)) {
    if (!nextContentLine(in, line)) parseError("missing OFF counts");
    std::istringstream counts(line);
    counts >> nv >> nf >> ne;
  } else {
    header >> nf >> ne;
  }
  if (nv <= 0 || nf <= 0) parseError("invalid OFF vertex/face counts");

  std::vector<Eigen::Vector3d> verts(nv);
  for (long i = 0; i < nv; ++i) {
    if (!nextContentLine(in, line)) parseError("OFF file ends inside vertex list");
    std::istringstream row(line);
    if (!(row >> verts[i].x() >> verts[i].y() >> verts[i].z())) parseError("bad OFF vertex line " + std::to_string(i));
  }
  std::vector<Face> faces;
  std::vector<std::vector<int>> polygons;
  faces.reserve(nf);
  for (long f = 0; f < nf; ++f) {
    if (!nextContentLine(in, line)) parseError("OFF file ends inside face list");
    std::istringstream row(line);
    int count = 0;
    if (!(row >> count) || count < 3) parseError("bad OFF face line " + std::to_string(f));
    std::vector<int> idx(count);
    for (auto& v : idx) {
      if (!(row >> v)) parseError("bad OFF face line " + std::to_string(f));
    }
    if (count != 3) {
      polygons.push_back(std::move(idx));
      continue;
    }
    faces.push_back({idx[0], idx[1], idx[2]});
  }
  if (!polygons.empty())
    throw MeshError(MeshError::Kind::NotTriangulated,
                    std::to_string(polygons.size()) + " non-triangular face(s); triangulate the mesh first",
                    std::move(polygons));
  return DiscreteManifold(std::move(verts), std::move(faces), descriptor);
}

DiscreteManifold read_obj(std::istream& in, const std::string& descriptor) {
  std::vector<Eigen::Vector3d> verts;
  std::vector<Face> faces;
  std::vector<std::vector<int>> polygons;
  std::string line;
  long lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::istringstream row(line);
    std::string tag;
    if (!(row >> tag)) continue;
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(row >> p.x() >> p.y() >> p.z())) parseError("bad OBJ vertex on line " + std::to_string(lineNo));
      verts.push_back(p);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string token;
      while (row >> token) {
        const long raw = std::stol(token.substr(0, token.find('/')));
        const long v = raw < 0 ? static_cast<long>(verts.size()) + raw : raw - 1;
        if (raw == 0 || v < 0) parseError("bad OBJ face index on line " + std::to_string(lineNo));
        idx.push_back(static_cast<int>(v));
      }
      if (idx.size() < 3) parseError("OBJ face with fewer than 3 vertices on line " + std::to_string(lineNo));
      if (idx.size() != 3) {
        polygons.push_back(std::move(idx));
        continue;
      }
      faces.push_back({idx[0], idx[1], idx[2]});
    }
  }
  if (!polygons.empty())
    throw MeshError(MeshError::Kind::NotTriangulated,
                    std::to_string(polygons.size()) + " non-triangular face(s); triangulate the mesh first",
                    std::move(polygons));
  if (verts.empty() || faces.empty()) parseError("OBJ file has no triangles");
  return DiscreteManifold(std::move(verts), std::move(faces), descriptor);
}

void write_off(std::ostream& out, const DiscreteManifold& m) {
  out << "OFF\n" << m.vertexCount() << ' ' << m.faceCount() << ' ' << m.edgeCount() << '\n';
  out << std::setprecision(17);
  for (const auto& v : m.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : m.faces()) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

void write_off(const std::filesystem::path& path, const DiscreteManifold& m) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write mesh file " + path.string());
  write_off(out, m);
}

} // namespace katolab
