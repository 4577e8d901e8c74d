#include "lgfem/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace lgfem {

double polygon_signed_area(std::span<const Point> poly) {
  double twice = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    twice += cross(poly[i], poly[(i + 1) % n]);
  }
  return 0.5 * twice;
}

Box bounding_box(std::span<const Point> pts) {
  if (pts.empty()) {
    throw std::invalid_argument("bounding_box: empty point set");
  }
  Box b{pts[0], pts[0]};
  for (const Point& p : pts.subspan(1)) {
    b.lo.x = std::min(b.lo.x, p.x);
    b.lo.y = std::min(b.lo.y, p.y);
    b.hi.x = std::max(b.hi.x, p.x);
    b.hi.y = std::max(b.hi.y, p.y);
  }
  return b;
}

Affine2 Affine2::inverse() const {
  const double d = det();
  if (d == 0.0) {
    throw std::domain_error("Affine2::inverse: singular map");
  }
  Affine2 inv;
  inv.m = {m[3] / d, -m[1] / d, -m[2] / d, m[0] / d};
  inv.c = {-(inv.m[0] * c.x + inv.m[1] * c.y), -(inv.m[2] * c.x + inv.m[3] * c.y)};
  return inv;
}

namespace {

// Keeps the part of `in` to the left of the directed line a->b.
void clip_half_plane(const std::vector<Point>& in, Point a, Point b, std::vector<Point>& out) {
  out.clear();
  const Point dir = b - a;
  const double scale = norm(dir);
  const std::size_t n = in.size();
  if (n == 0) {
    return;
  }
  auto side = [&](Point p) { return cross(dir, p - a) / scale; };
  Point prev = in[n - 1];
  double sprev = side(prev);
  for (std::size_t i = 0; i < n; ++i) {
    const Point cur = in[i];
    const double scur = side(cur);
    const bool cur_in = scur >= -kGeomTol;
    const bool prev_in = sprev >= -kGeomTol;
    if (cur_in) {
      if (!prev_in) {
        const double t = sprev / (sprev - scur);
        out.push_back(prev + t * (cur - prev));
      }
      out.push_back(cur);
    } else if (prev_in) {
      const double t = sprev / (sprev - scur);
      out.push_back(prev + t * (cur - prev));
    }
    prev = cur;
    sprev = scur;
  }
}

}  // namespace

std::vector<Point> clip_to_triangle(std::span<const Point> subject, const Triangle& clip) {
  std::vector<Point> cur(subject.begin(), subject.end());
  std::vector<Point> next;
  next.reserve(cur.size() + 3);
  for (int e = 0; e < 3; ++e) {
    clip_half_plane(cur, clip[e], clip[(e + 1) % 3], next);
    std::swap(cur, next);
    if (cur.size() < 3) {
      return {};
    }
  }
  // Drop consecutive duplicates produced when a vertex sits on a clip edge.
  std::vector<Point> out;
  out.reserve(cur.size());
  for (const Point& p : cur) {
    if (out.empty() || norm(p - out.back()) > kGeomTol) {
      out.push_back(p);
    }
  }
  while (out.size() > 1 && norm(out.front() - out.back()) <= kGeomTol) {
    out.pop_back();
  }
  if (out.size() < 3) {
    return {};
  }
  return out;
}

bool is_convex_ccw(std::span<const Point> poly, double tol) {
  const std::size_t n = poly.size();
  if (n < 3) {
    return false;
  }
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = poly[i];
    const Point b = poly[(i + 1) % n];
    const Point c = poly[(i + 2) % n];
    const double z = cross(b - a, c - b);
    if (z < -tol * std::max(1.0, norm(b - a) * norm(c - b))) {
      return false;
    }
    turning += std::atan2(z, dot(b - a, c - b));
  }
  // A star-shaped self-intersecting polygon turns left everywhere but winds twice.
  return std::abs(turning - 2.0 * M_PI) < 1e-6;
}

}  // namespace lgfem
