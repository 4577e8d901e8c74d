#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lgfem/mesh.hpp"

namespace lgfem {

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_elements() << '\n';
  char buf[96];
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Point p = mesh.vertices()[v];
    std::snprintf(buf, sizeof buf, "%.17g %.17g %d\n", p.x, p.y,
                  mesh.boundary_vertex()[v] ? 1 : 0);
    out << buf;
  }
  for (const auto& e : mesh.elements()) {
    out << e[0] << ' ' << e[1] << ' ' << e[2] << '\n';
  }
}

Mesh read_mesh(std::istream& in) {
  long nv = 0;
  long ne = 0;
  if (!(in >> nv >> ne) || nv <= 0 || ne <= 0) {
    throw std::runtime_error("read_mesh: bad header");
  }
  std::vector<Point> vertices(nv);
  std::vector<bool> boundary(nv);
  for (long v = 0; v < nv; ++v) {
    std::string xs;
    std::string ys;
    int b = 0;
    if (!(in >> xs >> ys >> b) || (b != 0 && b != 1)) {
      throw std::runtime_error("read_mesh: bad vertex line " + std::to_string(v));
    }
    vertices[v] = {std::stod(xs), std::stod(ys)};
    boundary[v] = b == 1;
  }
  std::vector<Mesh::ElementVertices> elements(ne);
  for (long e = 0; e < ne; ++e) {
    auto& ev = elements[e];
    if (!(in >> ev[0] >> ev[1] >> ev[2])) {
      throw std::runtime_error("read_mesh: bad element line " + std::to_string(e));
    }
  }
  return Mesh(std::move(vertices), std::move(elements), std::move(boundary));
}

}  // namespace lgfem
