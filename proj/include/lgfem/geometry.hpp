#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace lgfem {

/// Absolute tolerance for containment and clipping predicates (domain units ~1).
inline constexpr double kGeomTol = 1e-12;

struct Point {
  double x = 0.0;
  double y = 0.0;

  Point& operator+=(Point o) { x += o.x; y += o.y; return *this; }
  Point& operator-=(Point o) { x -= o.x; y -= o.y; return *this; }
  Point& operator*=(double s) { x *= s; y *= s; return *this; }
  friend Point operator+(Point a, Point b) { return a += b; }
  friend Point operator-(Point a, Point b) { return a -= b; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }

using Triangle = std::array<Point, 3>;

/// Signed area, positive for counterclockwise vertex order.
inline double signed_area(const Triangle& t) {
  return 0.5 * cross(t[1] - t[0], t[2] - t[0]);
}

double polygon_signed_area(std::span<const Point> poly);

/// Axis-aligned rectangle.
struct Box {
  Point lo;
  Point hi;

  bool intersects(const Box& o) const {
    return lo.x <= o.hi.x && o.lo.x <= hi.x && lo.y <= o.hi.y && o.lo.y <= hi.y;
  }
};

Box bounding_box(std::span<const Point> pts);

/// 2x2 affine map x -> M x + c.
struct Affine2 {
  std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};  // row-major
  Point c;

  Point operator()(Point p) const {
    return {m[0] * p.x + m[1] * p.y + c.x, m[2] * p.x + m[3] * p.y + c.y};
  }
  double det() const { return m[0] * m[3] - m[1] * m[2]; }
  Affine2 inverse() const;
};

/// Clips a counterclockwise convex polygon against a counterclockwise
/// triangle (one Sutherland-Hodgman pass per triangle edge). Returns an
/// empty polygon when the intersection has no interior.
std::vector<Point> clip_to_triangle(std::span<const Point> subject, const Triangle& clip);

/// True when the counterclockwise polygon turns left (or goes straight, within
/// tolerance) at every vertex.
bool is_convex_ccw(std::span<const Point> poly, double tol = kGeomTol);

}  // namespace lgfem
