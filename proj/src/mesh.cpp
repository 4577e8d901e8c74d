#include "lgfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace lgfem {

Mesh::Mesh(std::vector<Point> vertices, std::vector<ElementVertices> elements,
           std::vector<bool> boundary_vertex)
    : vertices_(std::move(vertices)),
      elements_(std::move(elements)),
      boundary_vertex_(std::move(boundary_vertex)) {
  if (vertices_.empty() || elements_.empty()) {
    throw std::invalid_argument("Mesh: empty vertex or element list");
  }
  if (boundary_vertex_.size() != vertices_.size()) {
    throw std::invalid_argument("Mesh: boundary flag count differs from vertex count");
  }
  const int nv = num_vertices();
  areas_.reserve(elements_.size());
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    for (int v : elements_[e]) {
      if (v < 0 || v >= nv) {
        throw std::invalid_argument("Mesh: element " + std::to_string(e) +
                                    " references vertex out of range");
      }
    }
    const Triangle t = triangle(static_cast<int>(e));
    const double a = signed_area(t);
    if (!(a > 0.0)) {
      throw std::invalid_argument("Mesh: element " + std::to_string(e) +
                                  " is not counterclockwise with positive area");
    }
    areas_.push_back(a);
    for (int i = 0; i < 3; ++i) {
      h_max_ = std::max(h_max_, norm(t[(i + 1) % 3] - t[i]));
    }
  }
  build_neighbors();
  build_grid();
}

Triangle Mesh::triangle(int e) const {
  const auto& ev = elements_[e];
  return {vertices_[ev[0]], vertices_[ev[1]], vertices_[ev[2]]};
}

Point Mesh::centroid(int e) const {
  const Triangle t = triangle(e);
  return (1.0 / 3.0) * (t[0] + t[1] + t[2]);
}

double Mesh::total_area() const {
  double s = 0.0;
  for (double a : areas_) {
    s += a;
  }
  return s;
}

std::array<double, 3> Mesh::barycentric(int e, Point p) const {
  const Triangle t = triangle(e);
  const double inv2a = 1.0 / (2.0 * areas_[e]);
  const double l1 = cross(t[2] - t[1], p - t[1]) * inv2a;  // opposite vertex 0
  const double l2 = cross(t[0] - t[2], p - t[2]) * inv2a;
  const double l3 = 1.0 - l1 - l2;
  return {l1, l2, l3};
}

void Mesh::build_neighbors() {
  neighbors_.assign(elements_.size(), {-1, -1, -1});
  // Directed edge (a,b) -> (element, local edge).
  std::map<std::pair<int, int>, std::pair<int, int>> half_edges;
  for (int e = 0; e < num_elements(); ++e) {
    for (int i = 0; i < 3; ++i) {
      const int a = elements_[e][i];
      const int b = elements_[e][(i + 1) % 3];
      if (a == b) {
        throw std::invalid_argument("Mesh: degenerate element " + std::to_string(e));
      }
      if (!half_edges.emplace(std::pair{a, b}, std::pair{e, i}).second) {
        throw std::invalid_argument("Mesh: non-conforming or inconsistently oriented edge at element " +
                                    std::to_string(e));
      }
    }
  }
  for (const auto& [edge, owner] : half_edges) {
    auto twin = half_edges.find({edge.second, edge.first});
    if (twin != half_edges.end()) {
      neighbors_[owner.first][owner.second] = twin->second.first;
    }
  }
}

std::pair<int, int> Mesh::cell_of(Point p) const {
  int i = static_cast<int>(std::floor((p.x - bounds_.lo.x) / cell_w_));
  int j = static_cast<int>(std::floor((p.y - bounds_.lo.y) / cell_h_));
  return {std::clamp(i, 0, grid_nx_ - 1), std::clamp(j, 0, grid_ny_ - 1)};
}

void Mesh::build_grid() {
  bounds_ = bounding_box(vertices_);
  const double w = std::max(bounds_.hi.x - bounds_.lo.x, kGeomTol);
  const double h = std::max(bounds_.hi.y - bounds_.lo.y, kGeomTol);
  // Roughly one element per cell.
  const double cell = std::sqrt(w * h / static_cast<double>(num_elements()));
  grid_nx_ = std::max(1, static_cast<int>(std::ceil(w / cell)));
  grid_ny_ = std::max(1, static_cast<int>(std::ceil(h / cell)));
  cell_w_ = w / grid_nx_;
  cell_h_ = h / grid_ny_;

  const std::size_t ncells = static_cast<std::size_t>(grid_nx_) * grid_ny_;
  std::vector<std::vector<int>> buckets(ncells);
  for (int e = 0; e < num_elements(); ++e) {
    const Triangle t = triangle(e);
    const Box b = bounding_box(t);
    const auto [i0, j0] = cell_of(b.lo - Point{kGeomTol, kGeomTol});
    const auto [i1, j1] = cell_of(b.hi + Point{kGeomTol, kGeomTol});
    for (int j = j0; j <= j1; ++j) {
      for (int i = i0; i <= i1; ++i) {
        buckets[static_cast<std::size_t>(j) * grid_nx_ + i].push_back(e);
      }
    }
  }
  cell_start_.assign(ncells + 1, 0);
  for (std::size_t c = 0; c < ncells; ++c) {
    cell_start_[c + 1] = cell_start_[c] + static_cast<int>(buckets[c].size());
  }
  cell_items_.reserve(cell_start_.back());
  for (const auto& bucket : buckets) {
    cell_items_.insert(cell_items_.end(), bucket.begin(), bucket.end());
  }
}

bool Mesh::contains(int e, Point p) const {
  const auto l = barycentric(e, p);
  return l[0] >= -kGeomTol && l[1] >= -kGeomTol && l[2] >= -kGeomTol;
}

std::optional<int> Mesh::smallest_containing(Point p, int found) const {
  const auto [i, j] = cell_of(p);
  const std::size_t c = static_cast<std::size_t>(j) * grid_nx_ + i;
  int best = found;
  for (int k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
    const int e = cell_items_[k];
    if ((best < 0 || e < best) && contains(e, p)) {
      best = e;
    }
  }
  if (best < 0) {
    return std::nullopt;
  }
  return best;
}

std::optional<int> Mesh::locate(Point p, int hint) const {
  if (hint < 0 || hint >= num_elements()) {
    throw std::out_of_range("Mesh::locate: hint out of range");
  }
  int e = hint;
  for (int step = 0; step < num_elements(); ++step) {
    const auto l = barycentric(e, p);
    const int worst = static_cast<int>(std::min_element(l.begin(), l.end()) - l.begin());
    if (l[worst] >= -kGeomTol) {
      return smallest_containing(p, e);
    }
    // Edge opposite vertex `worst` is local edge worst+1.
    const int next = neighbors_[e][(worst + 1) % 3];
    if (next < 0) {
      break;
    }
    e = next;
  }
  // Walk left the mesh (or cycled); fall back to the background grid.
  return smallest_containing(p, -1);
}

std::vector<int> Mesh::elements_overlapping_box(const Box& box) const {
  std::vector<int> out;
  if (!box.intersects(bounds_)) {
    return out;
  }
  const auto [i0, j0] = cell_of(box.lo);
  const auto [i1, j1] = cell_of(box.hi);
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const std::size_t c = static_cast<std::size_t>(j) * grid_nx_ + i;
      out.insert(out.end(), cell_items_.begin() + cell_start_[c],
                 cell_items_.begin() + cell_start_[c + 1]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace lgfem
