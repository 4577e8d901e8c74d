#include "lgfem/advect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "lgfem/errors.hpp"

namespace lgfem {

namespace {

constexpr double kMinJacobian = 0.5;
constexpr double kMaxJacobian = 1.5;

double frobenius(const std::array<double, 4>& g) {
  return std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
}

double jacobian(const std::array<double, 4>& g, double dt) {
  return (1.0 - dt * g[0]) * (1.0 - dt * g[3]) - dt * g[1] * dt * g[2];
}

}  // namespace

TimestepReport check_timestep(const VelocityP1& u_h, double dt, double d1) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("check_timestep: dt must be positive");
  }
  if (!(d1 > 0.0 && d1 < 1.0)) {
    throw std::invalid_argument("check_timestep: d1 must lie in (0, 1)");
  }
  const Mesh& mesh = u_h.space->mesh();
  TimestepReport rep;
  int worst = 0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double s = frobenius(u_h.gradient(e));
    if (s > rep.seminorm) {
      rep.seminorm = s;
      worst = e;
    }
  }
  rep.product = dt * rep.seminorm;
  // Relative slack so that dt = d1 / |u_h| is accepted despite rounding.
  if (rep.product > d1 * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "time step violates dt*|u_h|_{1,inf} <= " << d1 << ": product " << rep.product
        << " at element " << worst;
    throw TimestepViolation(worst, rep.product, jacobian(u_h.gradient(worst), dt), msg.str());
  }
  rep.min_jacobian = std::numeric_limits<double>::infinity();
  rep.max_jacobian = -std::numeric_limits<double>::infinity();
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double j = jacobian(u_h.gradient(e), dt);
    rep.min_jacobian = std::min(rep.min_jacobian, j);
    rep.max_jacobian = std::max(rep.max_jacobian, j);
    if (j < kMinJacobian || j > kMaxJacobian) {
      std::ostringstream msg;
      msg << "characteristic map Jacobian " << j << " outside [1/2, 3/2] at element " << e;
      throw TimestepViolation(e, rep.product, j, msg.str());
    }
  }
  return rep;
}

CharMap::CharMap(VelocityP1 u_h, double dt) : u_h_(std::move(u_h)), dt_(dt) {
  if (!(dt_ > 0.0)) {
    throw std::invalid_argument("CharMap: dt must be positive");
  }
  const Mesh& mesh = u_h_->space->mesh();
  for (int e = 0; e < mesh.num_elements(); ++e) {
    seminorm_ = std::max(seminorm_, frobenius(u_h_->gradient(e)));
  }
}

CharMap::CharMap(VectorField u, double dt) : u_(std::move(u)), dt_(dt) {
  if (!(dt_ > 0.0)) {
    throw std::invalid_argument("CharMap: dt must be positive");
  }
}

Point CharMap::foot(Point x, int element) const {
  if (u_h_) {
    return x - dt_ * u_h_->eval(element, x);
  }
  return x - dt_ * u_(x);
}

Affine2 CharMap::affine(int element) const {
  if (!u_h_) {
    throw std::logic_error("CharMap::affine: map is not linearized");
  }
  const auto g = u_h_->gradient(element);
  const Point v0 = u_h_->space->mesh().triangle(element)[0];
  const Point u0 = u_h_->eval(element, v0);
  // x - dt (u0 + G (x - v0))
  Affine2 a;
  a.m = {1.0 - dt_ * g[0], -dt_ * g[1], -dt_ * g[2], 1.0 - dt_ * g[3]};
  a.c = {-dt_ * (u0.x - g[0] * v0.x - g[1] * v0.y), -dt_ * (u0.y - g[2] * v0.x - g[3] * v0.y)};
  return a;
}

CompositeDecomposition::CompositeDecomposition(std::shared_ptr<const Mesh> mesh,
                                               std::vector<Affine2> maps,
                                               std::vector<std::vector<CompositePiece>> pieces,
                                               std::vector<bool> interior_mapped)
    : mesh_(std::move(mesh)),
      maps_(std::move(maps)),
      pieces_(std::move(pieces)),
      interior_mapped_(std::move(interior_mapped)) {}

std::size_t CompositeDecomposition::total_pieces() const {
  std::size_t n = 0;
  for (const auto& p : pieces_) {
    n += p.size();
  }
  return n;
}

CompositeDecomposition decompose(std::shared_ptr<const Mesh> mesh_ptr, const CharMap& map) {
  const Mesh& mesh = *mesh_ptr;
  if (!map.is_linearized()) {
    throw std::invalid_argument("decompose: requires a P1-linearized characteristic map");
  }
  if (&map.velocity_p1().space->mesh() != &mesh) {
    throw std::invalid_argument("decompose: velocity lives on a different mesh");
  }
  const int ne = mesh.num_elements();
  std::vector<Affine2> maps(ne);
  std::vector<std::vector<CompositePiece>> pieces(ne);
  std::vector<bool> interior(ne, true);

  for (int e = 0; e < ne; ++e) {
    const Affine2 a = map.affine(e);
    const double det = a.det();
    if (det < kMinJacobian || det > kMaxJacobian) {
      std::ostringstream msg;
      msg << "decompose: characteristic map determinant " << det << " at element " << e;
      throw DegenerateMap(e, det, msg.str());
    }
    maps[e] = a;
    const Affine2 inv = a.inverse();
    const Triangle k0 = mesh.triangle(e);
    const Triangle image{a(k0[0]), a(k0[1]), a(k0[2])};
    for (const Point& v : image) {
      if (!mesh.locate(v, e)) {
        interior[e] = false;
      }
    }
    for (int l : mesh.elements_overlapping_box(bounding_box(image))) {
      std::vector<Point> clipped = clip_to_triangle(image, mesh.triangle(l));
      if (clipped.empty()) {
        continue;
      }
      const double image_area = polygon_signed_area(clipped);
      const double area = image_area / det;
      if (!(area > kGeomTol * kGeomTol)) {
        continue;
      }
      for (Point& p : clipped) {
        p = inv(p);
      }
      pieces[e].push_back({l, std::move(clipped), area});
    }
  }
  return CompositeDecomposition(std::move(mesh_ptr), std::move(maps), std::move(pieces),
                                std::move(interior));
}

SparseMatrix composite_operator_exact(const CompositeDecomposition& decomp, const FeSpace& space,
                                      PolygonSplit split) {
  const Mesh& mesh = space.mesh();
  if (&decomp.mesh() != &mesh) {
    throw std::invalid_argument("composite_operator_exact: decomposition on a different mesh");
  }
  const int nloc = space.dofs_per_element();
  const int degree = 2 * space.degree();
  std::vector<Triplet> t;
  t.reserve(decomp.total_pieces() * nloc * nloc);
  std::array<double, 6> phi0{};
  std::array<double, 6> phil{};
  std::array<double, 36> block{};
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Affine2& a = decomp.map(e);
    const auto dofs0 = space.element_dofs(e);
    for (const CompositePiece& piece : decomp.pieces(e)) {
      block.fill(0.0);
      for_each_polygon_point(
          piece.polygon, degree,
          [&](Point x, double w) {
            space.basis(mesh.barycentric(e, x), phi0);
            space.basis(mesh.barycentric(piece.source, a(x)), phil);
            for (int i = 0; i < nloc; ++i) {
              const double wi = w * phi0[i];
              for (int j = 0; j < nloc; ++j) {
                block[i * nloc + j] += wi * phil[j];
              }
            }
          },
          split);
      const auto dofsl = space.element_dofs(piece.source);
      for (int i = 0; i < nloc; ++i) {
        for (int j = 0; j < nloc; ++j) {
          t.push_back({dofs0[i], dofsl[j], block[i * nloc + j]});
        }
      }
    }
  }
  return SparseMatrix::from_triplets(space.num_dofs(), space.num_dofs(), std::move(t));
}

std::vector<double> composite_term_exact(const CompositeDecomposition& decomp,
                                         const FeFunction& phi_prev, const FeSpace& space,
                                         PolygonSplit split) {
  if (phi_prev.space().degree() != space.degree() ||
      &phi_prev.space().mesh() != &space.mesh()) {
    throw std::invalid_argument("composite_term_exact: phi_prev lives in a different space");
  }
  return composite_operator_exact(decomp, space, split).multiply(phi_prev.coeffs());
}

SparseMatrix composite_operator_quadrature(const FeSpace& space, const VectorField& u, double dt,
                                           const TriangleRule& rule) {
  const Mesh& mesh = space.mesh();
  const int nloc = space.dofs_per_element();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(mesh.num_elements()) * rule.size() * nloc * nloc);
  std::array<double, 6> phi0{};
  std::array<double, 6> phil{};
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Triangle tri = mesh.triangle(e);
    const double area = mesh.area(e);
    const auto dofs0 = space.element_dofs(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point x = map_to_triangle(tri, rule.points[q]);
      const Point foot = x - dt * u(x);
      const auto l = mesh.locate(foot, e);
      if (!l) {
        continue;  // zero extension outside the domain
      }
      space.basis(rule.points[q], phi0);
      space.basis(mesh.barycentric(*l, foot), phil);
      const auto dofsl = space.element_dofs(*l);
      const double w = area * rule.weights[q];
      for (int i = 0; i < nloc; ++i) {
        for (int j = 0; j < nloc; ++j) {
          t.push_back({dofs0[i], dofsl[j], w * phi0[i] * phil[j]});
        }
      }
    }
  }
  return SparseMatrix::from_triplets(space.num_dofs(), space.num_dofs(), std::move(t));
}

std::vector<double> composite_term_quadrature(const FeSpace& space, const VectorField& u,
                                              double dt, const FeFunction& phi_prev,
                                              const TriangleRule& rule) {
  if (phi_prev.space().degree() != space.degree() ||
      &phi_prev.space().mesh() != &space.mesh()) {
    throw std::invalid_argument("composite_term_quadrature: phi_prev lives in a different space");
  }
  return composite_operator_quadrature(space, u, dt, rule).multiply(phi_prev.coeffs());
}

void write_decomposition(std::ostream& out, const CompositeDecomposition& decomp) {
  char buf[64];
  for (int e = 0; e < decomp.num_elements(); ++e) {
    for (const CompositePiece& piece : decomp.pieces(e)) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g", e, piece.source, piece.area);
      out << buf;
      for (const Point& p : piece.polygon) {
        std::snprintf(buf, sizeof buf, " %.17g %.17g", p.x, p.y);
        out << buf;
      }
      out << '\n';
    }
  }
}

}  // namespace lgfem
