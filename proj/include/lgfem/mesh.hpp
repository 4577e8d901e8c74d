#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lgfem/geometry.hpp"

namespace lgfem {

/// Conforming triangulation of a polygonal domain.
///
/// Elements are vertex-index triples in counterclockwise order. Local edge i of
/// an element joins its vertices i and (i+1)%3; neighbors(e)[i] is the element
/// across that edge, or -1 on the boundary. The mesh is immutable after
/// construction, which also builds a uniform background grid used by
/// point location and box queries.
class Mesh {
 public:
  using ElementVertices = std::array<int, 3>;

  Mesh(std::vector<Point> vertices, std::vector<ElementVertices> elements,
       std::vector<bool> boundary_vertex);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<ElementVertices>& elements() const { return elements_; }
  const std::vector<bool>& boundary_vertex() const { return boundary_vertex_; }
  const std::array<int, 3>& neighbors(int e) const { return neighbors_[e]; }
  double h_max() const { return h_max_; }

  Triangle triangle(int e) const;
  double area(int e) const { return areas_[e]; }
  Point centroid(int e) const;
  double total_area() const;

  /// Barycentric coordinates of p with respect to element e.
  std::array<double, 3> barycentric(int e, Point p) const;

  /// Element whose closed triangle contains p (barycentric coordinates
  /// >= -kGeomTol), found by walking across edges starting at `hint`. When p
  /// lies on a shared edge or vertex the smallest containing index wins.
  std::optional<int> locate(Point p, int hint) const;

  /// Superset of the elements whose triangle meets `box`, sorted ascending.
  std::vector<int> elements_overlapping_box(const Box& box) const;

  Box bounds() const { return bounds_; }

 private:
  void build_neighbors();
  void build_grid();
  bool contains(int e, Point p) const;
  std::optional<int> smallest_containing(Point p, int found) const;
  std::pair<int, int> cell_of(Point p) const;

  std::vector<Point> vertices_;
  std::vector<ElementVertices> elements_;
  std::vector<bool> boundary_vertex_;
  std::vector<std::array<int, 3>> neighbors_;
  std::vector<double> areas_;
  double h_max_ = 0.0;

  Box bounds_;
  int grid_nx_ = 1;
  int grid_ny_ = 1;
  double cell_w_ = 1.0;
  double cell_h_ = 1.0;
  std::vector<int> cell_start_;
  std::vector<int> cell_items_;
};

/// (N+1)x(N+1) lattice on [0,1]^2, each cell split along its lower-left to
/// upper-right diagonal.
Mesh unit_square_mesh(int n);

/// Unit disk approximated by concentric rings; exactly n vertices lie on the
/// unit circle. Requires n >= 8 and n divisible by 4.
Mesh unit_disk_mesh(int n);

/// Text format: "NV NE", NV lines "x y b", NE lines "i j k" (0-based).
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

}  // namespace lgfem
