#include "gencorr/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace gencorr {
namespace {

TriMesh assemble(const std::vector<Eigen::Vector3d>& verts, const std::vector<Eigen::Vector3i>& faces) {
  Eigen::MatrixX3d v(static_cast<Eigen::Index>(verts.size()), 3);
  for (std::size_t i = 0; i < verts.size(); ++i) v.row(static_cast<Eigen::Index>(i)) = verts[i].transpose();
  Eigen::MatrixX3i f(static_cast<Eigen::Index>(faces.size()), 3);
  for (std::size_t i = 0; i < faces.size(); ++i) f.row(static_cast<Eigen::Index>(i)) = faces[i].transpose();
  return TriMesh(std::move(v), std::move(f));
}

[[noreturn]] void non_triangle(std::size_t face, std::size_t count) {
  throw MeshError("non-triangle face " + std::to_string(face) + " with " + std::to_string(count) + " vertices");
}

// Next line that is neither blank nor a '#' comment.
bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

std::string lowercase_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

TriMesh read_obj(std::istream& in) {
  std::vector<Eigen::Vector3d> verts;
  std::vector<Eigen::Vector3i> faces;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag == "v") {
      Eigen::Vector3d p;
      if (!(ss >> p.x() >> p.y() >> p.z())) throw MeshError("OBJ: malformed vertex line: " + line);
      verts.push_back(p);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ss >> tok) {
        const std::string head = tok.substr(0, tok.find('/'));
        int i = 0;
        try {
          i = std::stoi(head);
        } catch (const std::exception&) {
          throw MeshError("OBJ: malformed face index '" + tok + "'");
        }
        // OBJ indices are 1-based; negative values count back from the end.
        idx.push_back(i > 0 ? i - 1 : static_cast<int>(verts.size()) + i);
      }
      if (idx.size() != 3) non_triangle(faces.size(), idx.size());
      faces.emplace_back(idx[0], idx[1], idx[2]);
    }
  }
  return assemble(verts, faces);
}

TriMesh read_off(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw MeshError("OFF: empty file");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") throw MeshError("OFF: missing OFF header");
  long nv = -1, nf = -1, ne = 0;
  // Counts may share the header line.
  if (!(header >> nv >> nf >> ne)) {
    if (!next_content_line(in, line)) throw MeshError("OFF: missing element counts");
    std::istringstream counts(line);
    if (!(counts >> nv >> nf)) throw MeshError("OFF: malformed element counts");
  }
  if (nv < 0 || nf < 0) throw MeshError("OFF: negative element counts");

  std::vector<Eigen::Vector3d> verts;
  verts.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    if (!next_content_line(in, line)) throw MeshError("OFF: truncated vertex list");
    std::istringstream ss(line);
    Eigen::Vector3d p;
    if (!(ss >> p.x() >> p.y() >> p.z())) throw MeshError("OFF: malformed vertex line: " + line);
    verts.push_back(p);
  }
  std::vector<Eigen::Vector3i> faces;
  faces.reserve(static_cast<std::size_t>(nf));
  for (long i = 0; i < nf; ++i) {
    if (!next_content_line(in, line)) throw MeshError("OFF: truncated face list");
    std::istringstream ss(line);
    std::size_t count = 0;
    if (!(ss >> count)) throw MeshError("OFF: malformed face line: " + line);
    if (count != 3) non_triangle(faces.size(), count);
    Eigen::Vector3i f;
    if (!(ss >> f.x() >> f.y() >> f.z())) throw MeshError("OFF: malformed face line: " + line);
    faces.push_back(f);
  }
  return assemble(verts, faces);
}

TriMesh read_ply(std::istream& in) {
  struct Element {
    std::string name;
    long count = 0;
    std::vector<std::string> properties;  // "list" properties are stored as "list:<name>"
  };

  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) throw MeshError("PLY: missing magic");
  std::vector<Element> elements;
  bool ascii = false;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "format") {
      std::string fmt;
      ss >> fmt;
      ascii = fmt == "ascii";
    } else if (key == "element") {
      Element e;
      ss >> e.name >> e.count;
      elements.push_back(e);
    } else if (key == "property") {
      if (elements.empty()) throw MeshError("PLY: property before element");
      std::string type, name;
      ss >> type;
      if (type == "list") {
        std::string count_type, item_type;
        ss >> count_type >> item_type >> name;
        elements.back().properties.push_back("list:" + name);
      } else {
        ss >> name;
        elements.back().properties.push_back(name);
      }
    } else if (key == "end_header") {
      break;
    }
  }
  if (!ascii) throw MeshError("PLY: only ASCII format is supported");

  std::vector<Eigen::Vector3d> verts;
  std::vector<Eigen::Vector3i> faces;
  for (const Element& e : elements) {
    for (long i = 0; i < e.count; ++i) {
      if (!std::getline(in, line)) throw MeshError("PLY: truncated " + e.name + " data");
      std::istringstream ss(line);
      if (e.name == "vertex") {
        Eigen::Vector3d p = Eigen::Vector3d::Zero();
        for (const std::string& prop : e.properties) {
          if (prop.rfind("list:", 0) == 0) {
            std::size_t n = 0;
            ss >> n;
            for (std::size_t k = 0; k < n; ++k) {
              double skip;
              ss >> skip;
            }
            continue;
          }
          double value = 0.0;
          if (!(ss >> value)) throw MeshError("PLY: malformed vertex line: " + line);
          if (prop == "x") p.x() = value;
          if (prop == "y") p.y() = value;
          if (prop == "z") p.z() = value;
        }
        verts.push_back(p);
      } else if (e.name == "face") {
        bool found = false;
        for (const std::string& prop : e.properties) {
          if (prop.rfind("list:", 0) == 0) {
            std::size_t n = 0;
            ss >> n;
            std::vector<int> idx(n);
            for (auto& v : idx) {
              if (!(ss >> v)) throw MeshError("PLY: malformed face line: " + line);
            }
            if (!found && (prop == "list:vertex_indices" || prop == "list:vertex_index")) {
              if (n != 3) non_triangle(faces.size(), n);
              faces.emplace_back(idx[0], idx[1], idx[2]);
              found = true;
            }
          } else {
            double skip;
            ss >> skip;
          }
        }
        if (!found) throw MeshError("PLY: face element without vertex_indices");
      }
    }
  }
  return assemble(verts, faces);
}

TriMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path.string());
  const std::string ext = lowercase_extension(path);
  if (ext == ".obj") return read_obj(in);
  if (ext == ".off") return read_off(in);
  if (ext == ".ply") return read_ply(in);
  throw MeshError("unsupported mesh format '" + ext + "' (expected .obj, .off or .ply)");
}

void write_ply(std::ostream& out, const TriMesh& mesh, const Eigen::MatrixX3d& colors) {
  if (colors.rows() != mesh.num_vertices()) throw MeshError("write_ply: one color per vertex required");
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << mesh.num_vertices() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "element face " << mesh.num_faces() << "\n";
  out << "property list uchar int vertex_indices\nend_header\n";
  out.precision(17);
  const auto& v = mesh.vertices();
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    out << v(i, 0) << ' ' << v(i, 1) << ' ' << v(i, 2);
    for (int k = 0; k < 3; ++k) {
      const double c = std::clamp(colors(i, k), 0.0, 1.0);
      out << ' ' << static_cast<int>(std::lround(255.0 * c));
    }
    out << '\n';
  }
  const auto& f = mesh.faces();
  for (int i = 0; i < mesh.num_faces(); ++i) {
    out << "3 " << f(i, 0) << ' ' << f(i, 1) << ' ' << f(i, 2) << '\n';
  }
}

void write_ply(const std::filesystem::path& path, const TriMesh& mesh, const Eigen::MatrixX3d& colors) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write " + path.string());
  write_ply(out, mesh, colors);
}

Eigen::RowVector3d diverging_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const Eigen::RowVector3d blue(0.23, 0.30, 0.75);
  const Eigen::RowVector3d white(0.87, 0.87, 0.87);
  const Eigen::RowVector3d red(0.71, 0.02, 0.15);
  return t < 0.5 ? blue + (white - blue) * (2.0 * t) : white + (red - white) * (2.0 * t - 1.0);
}

}  // namespace gencorr
