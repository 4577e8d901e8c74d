#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "lgfem/geometry.hpp"

namespace lgfem {

/// Symmetric rule on a triangle: integral over K ~= |K| * sum_i w_i f(a_i),
/// with points a_i given in barycentric coordinates and weights summing to 1.
struct TriangleRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// Smallest tabulated rule exact for degree >= d: 1-point (d=1), 3-point (2),
/// 6-point (3..4), 12-point (5..6).
const TriangleRule& rule_of_degree(int d);

/// Seven-point degree-5 rule: centroid plus two 3-orbits.
const TriangleRule& seven_point_rule();

inline Point map_to_triangle(const Triangle& tri, const std::array<double, 3>& bary) {
  return bary[0] * tri[0] + bary[1] * tri[1] + bary[2] * tri[2];
}

template <class F>
double integrate_on_triangle(F&& f, const Triangle& tri, const TriangleRule& rule) {
  const double area = std::abs(signed_area(tri));
  if (!(area > 0.0)) {
    throw std::invalid_argument("integrate_on_triangle: degenerate triangle");
  }
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    sum += rule.weights[q] * f(map_to_triangle(tri, rule.points[q]));
  }
  return area * sum;
}

/// How a convex polygon is split into triangles for integration.
enum class PolygonSplit {
  centroid_fan,  // triangles (c, p_i, p_{i+1}) around the vertex centroid c
  vertex_fan,    // ear clipping from vertex 0
};

/// Visits (point, weight) pairs of a degree-`degree` exact rule on a convex
/// counterclockwise polygon; weights already include sub-triangle areas.
template <class Visit>
void for_each_polygon_point(std::span<const Point> poly, int degree, Visit&& visit,
                            PolygonSplit split = PolygonSplit::centroid_fan) {
  const TriangleRule& rule = rule_of_degree(degree);
  const std::size_t n = poly.size();
  auto emit = [&](const Triangle& t) {
    const double area = signed_area(t);
    if (area <= 0.0) {
      return;  // collinear run along an edge
    }
    for (std::size_t q = 0; q < rule.size(); ++q) {
      visit(map_to_triangle(t, rule.points[q]), area * rule.weights[q]);
    }
  };
  if (split == PolygonSplit::centroid_fan) {
    Point c;
    for (const Point& p : poly) {
      c += p;
    }
    c *= 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      emit({c, poly[i], poly[(i + 1) % n]});
    }
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      emit({poly[0], poly[i], poly[i + 1]});
    }
  }
}

/// Exact integral of a polynomial of degree <= `degree` (<= 6) over a convex
/// counterclockwise polygon. Throws on tiny, non-convex or self-intersecting
/// input.
template <class F>
double integrate_on_convex_polygon(F&& f, std::span<const Point> poly, int degree,
                                   PolygonSplit split = PolygonSplit::centroid_fan) {
  if (poly.size() < 3) {
    throw std::invalid_argument("integrate_on_convex_polygon: fewer than 3 vertices");
  }
  if (!(polygon_signed_area(poly) > kGeomTol * kGeomTol)) {
    throw std::invalid_argument("integrate_on_convex_polygon: area too small or clockwise");
  }
  if (!is_convex_ccw(poly)) {
    throw std::invalid_argument("integrate_on_convex_polygon: polygon not convex");
  }
  double sum = 0.0;
  for_each_polygon_point(
      poly, degree, [&](Point p, double w) { sum += w * f(p); }, split);
  return sum;
}

}  // namespace lgfem
