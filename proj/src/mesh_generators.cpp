#include <cmath>
#include <stdexcept>

#include "lgfem/mesh.hpp"

namespace lgfem {

Mesh unit_square_mesh(int n) {
  if (n < 1) {
    throw std::invalid_argument("unit_square_mesh: N must be >= 1");
  }
  const int side = n + 1;
  std::vector<Point> vertices;
  std::vector<bool> boundary;
  vertices.reserve(static_cast<std::size_t>(side) * side);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
      boundary.push_back(i == 0 || j == 0 || i == n || j == n);
    }
  }
  std::vector<Mesh::ElementVertices> elements;
  elements.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * side + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + side;
      const int v11 = v01 + 1;
      elements.push_back({v00, v10, v11});
      elements.push_back({v00, v11, v01});
    }
  }
  return Mesh(std::move(vertices), std::move(elements), std::move(boundary));
}

Mesh unit_disk_mesh(int n) {
  if (n < 8 || n % 4 != 0) {
    throw std::invalid_argument("unit_disk_mesh: N must be >= 8 and divisible by 4");
  }
  // Ring spacing close to the boundary arc length 2*pi/N.
  const int rings = std::max(1, static_cast<int>(std::lround(n / (2.0 * M_PI))));

  std::vector<Point> vertices{{0.0, 0.0}};
  std::vector<bool> boundary{false};
  std::vector<int> ring_first(rings + 1, 0);
  std::vector<int> ring_count(rings + 1, 1);
  std::vector<double> ring_shift(rings + 1, 0.0);

  for (int m = 1; m <= rings; ++m) {
    const double r = static_cast<double>(m) / rings;
    int count = m == rings ? n : static_cast<int>(std::lround(static_cast<double>(n) * m / rings));
    count = std::max(count, 6);
    // Stagger interior rings by half a slot; the boundary ring starts at angle 0.
    const double shift = (m == rings || m % 2 == 0) ? 0.0 : 0.5;
    ring_first[m] = static_cast<int>(vertices.size());
    ring_count[m] = count;
    ring_shift[m] = shift;
    for (int j = 0; j < count; ++j) {
      const double theta = 2.0 * M_PI * (j + shift) / count;
      if (m == rings) {
        vertices.push_back({std::cos(theta), std::sin(theta)});
      } else {
        vertices.push_back({r * std::cos(theta), r * std::sin(theta)});
      }
      boundary.push_back(m == rings);
    }
  }

  std::vector<Mesh::ElementVertices> elements;
  // Fan around the center.
  for (int j = 0; j < ring_count[1]; ++j) {
    elements.push_back({0, ring_first[1] + j, ring_first[1] + (j + 1) % ring_count[1]});
  }
  // Zip consecutive rings by merging their angular positions.
  for (int m = 1; m < rings; ++m) {
    const int a = ring_count[m];
    const int b = ring_count[m + 1];
    auto t_in = [&](int i) { return (i + ring_shift[m]) / a; };
    auto t_out = [&](int j) { return (j + ring_shift[m + 1]) / b; };
    auto in = [&](int i) { return ring_first[m] + i % a; };
    auto out = [&](int j) { return ring_first[m + 1] + j % b; };
    int i = 0;
    int j = 0;
    while (i < a || j < b) {
      const bool advance_out = i == a || (j < b && t_out(j + 1) <= t_in(i + 1));
      if (advance_out) {
        elements.push_back({in(i), out(j), out(j + 1)});
        ++j;
      } else {
        elements.push_back({in(i), out(j), in(i + 1)});
        ++i;
      }
    }
  }
  return Mesh(std::move(vertices), std::move(elements), std::move(boundary));
}

}  // namespace lgfem
