#include "lgfem/fe_space.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "lgfem/linalg.hpp"
#include "lgfem/quadrature.hpp"

namespace lgfem {

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree) {
  if (!mesh_) {
    throw std::invalid_argument("FeSpace: null mesh");
  }
  if (degree_ != 1 && degree_ != 2) {
    throw std::invalid_argument("FeSpace: degree must be 1 or 2");
  }
  const Mesh& m = *mesh_;
  dof_coords_ = m.vertices();
  dirichlet_ = m.boundary_vertex();
  const int ne = m.num_elements();
  const int nloc = dofs_per_element();
  element_dofs_.assign(static_cast<std::size_t>(ne) * nloc, -1);

  bary_grads_.resize(ne);
  for (int e = 0; e < ne; ++e) {
    const Triangle t = m.triangle(e);
    const double inv2a = 1.0 / (2.0 * m.area(e));
    for (int i = 0; i < 3; ++i) {
      const Point d = t[(i + 2) % 3] - t[(i + 1) % 3];
      bary_grads_[e][i] = {-d.y * inv2a, d.x * inv2a};
    }
    for (int i = 0; i < 3; ++i) {
      element_dofs_[static_cast<std::size_t>(e) * nloc + i] = m.elements()[e][i];
    }
  }
  if (degree_ == 1) {
    return;
  }

  // Edge midpoints keyed by sorted vertex pair.
  std::map<std::pair<int, int>, int> edge_ids;
  for (int e = 0; e < ne; ++e) {
    for (int i = 0; i < 3; ++i) {
      const int a = m.elements()[e][i];
      const int b = m.elements()[e][(i + 1) % 3];
      edge_ids.emplace(std::minmax(a, b), 0);
    }
  }
  int next = m.num_vertices();
  for (auto& [edge, id] : edge_ids) {
    id = next++;
    const Point pa = m.vertices()[edge.first];
    const Point pb = m.vertices()[edge.second];
    dof_coords_.push_back(0.5 * (pa + pb));
    // An edge between two boundary vertices is a boundary edge only when it
    // has a single adjacent element; resolved below.
    dirichlet_.push_back(false);
  }
  for (int e = 0; e < ne; ++e) {
    for (int i = 0; i < 3; ++i) {
      const int a = m.elements()[e][i];
      const int b = m.elements()[e][(i + 1) % 3];
      const int id = edge_ids.at(std::minmax(a, b));
      element_dofs_[static_cast<std::size_t>(e) * nloc + 3 + i] = id;
      if (m.neighbors(e)[i] < 0) {
        dirichlet_[id] = true;
      }
    }
  }
}

void FeSpace::basis(const std::array<double, 3>& l, std::span<double> out) const {
  if (degree_ == 1) {
    out[0] = l[0];
    out[1] = l[1];
    out[2] = l[2];
    return;
  }
  for (int i = 0; i < 3; ++i) {
    out[i] = l[i] * (2.0 * l[i] - 1.0);
    out[3 + i] = 4.0 * l[i] * l[(i + 1) % 3];
  }
}

void FeSpace::basis_gradients(int e, const std::array<double, 3>& l, std::span<Point> out) const {
  const auto& g = bary_grads_[e];
  if (degree_ == 1) {
    out[0] = g[0];
    out[1] = g[1];
    out[2] = g[2];
    return;
  }
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    out[i] = (4.0 * l[i] - 1.0) * g[i];
    out[3 + i] = 4.0 * (l[j] * g[i] + l[i] * g[j]);
  }
}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space)
    : space_(std::move(space)), coeffs_(space_->num_dofs(), 0.0) {}

FeFunction::FeFunction(std::shared_ptr<const FeSpace> space, std::vector<double> coeffs)
    : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != space_->num_dofs()) {
    throw std::invalid_argument("FeFunction: coefficient count differs from DOF count");
  }
}

double FeFunction::eval(int e, Point p) const {
  const auto l = space_->mesh().barycentric(e, p);
  std::array<double, 6> phi{};
  space_->basis(l, phi);
  const auto dofs = space_->element_dofs(e);
  double v = 0.0;
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    v += coeffs_[dofs[i]] * phi[i];
  }
  return v;
}

Point FeFunction::eval_grad(int e, Point p) const {
  const auto l = space_->mesh().barycentric(e, p);
  std::array<Point, 6> grads{};
  space_->basis_gradients(e, l, grads);
  const auto dofs = space_->element_dofs(e);
  Point g;
  for (std::size_t i = 0; i < dofs.size(); ++i) {
    g += coeffs_[dofs[i]] * grads[i];
  }
  return g;
}

FeFunction interpolate(std::shared_ptr<const FeSpace> space, const ScalarField& g) {
  std::vector<double> c;
  c.reserve(space->num_dofs());
  for (const Point& p : space->dof_coords()) {
    c.push_back(g(p));
  }
  return FeFunction(std::move(space), std::move(c));
}

std::array<double, 4> VelocityP1::gradient(int e) const {
  const auto& g = space->barycentric_gradients(e);
  const auto dofs = space->element_dofs(e);
  std::array<double, 4> j{};
  for (int i = 0; i < 3; ++i) {
    const double ux = x.coeffs()[dofs[i]];
    const double uy = y.coeffs()[dofs[i]];
    j[0] += ux * g[i].x;
    j[1] += ux * g[i].y;
    j[2] += uy * g[i].x;
    j[3] += uy * g[i].y;
  }
  return j;
}

VelocityP1 interpolate_velocity_p1(std::shared_ptr<const Mesh> mesh, const VectorField& u) {
  auto space = std::make_shared<const FeSpace>(std::move(mesh), 1);
  std::vector<double> ux;
  std::vector<double> uy;
  ux.reserve(space->num_dofs());
  uy.reserve(space->num_dofs());
  for (const Point& p : space->dof_coords()) {
    const Point v = u(p);
    ux.push_back(v.x);
    uy.push_back(v.y);
  }
  FeFunction fx(space, std::move(ux));
  FeFunction fy(space, std::move(uy));
  return VelocityP1{space, std::move(fx), std::move(fy)};
}

FeFunction poisson_projection(std::shared_ptr<const FeSpace> space, const ScalarField& g,
                              const VectorField& grad_g, int data_rule_degree,
                              const CgOptions& cg) {
  const FeSpace& sp = *space;
  const Mesh& mesh = sp.mesh();
  const TriangleRule& rule = rule_of_degree(data_rule_degree);

  VectorField grad = grad_g;
  if (!grad) {
    constexpr double step = 1e-6;
    grad = [&g](Point p) {
      return Point{(g({p.x + step, p.y}) - g({p.x - step, p.y})) / (2.0 * step),
                   (g({p.x, p.y + step}) - g({p.x, p.y - step})) / (2.0 * step)};
    };
  }

  std::vector<double> rhs(sp.num_dofs(), 0.0);
  std::array<Point, 6> grads{};
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Triangle t = mesh.triangle(e);
    const double area = mesh.area(e);
    const auto dofs = sp.element_dofs(e);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point x = map_to_triangle(t, rule.points[q]);
      const Point gg = grad(x);
      sp.basis_gradients(e, rule.points[q], grads);
      const double w = area * rule.weights[q];
      for (std::size_t i = 0; i < dofs.size(); ++i) {
        rhs[dofs[i]] += w * dot(gg, grads[i]);
      }
    }
  }
  SparseMatrix a = assemble_stiffness(sp);
  apply_dirichlet(a, rhs, sp.dirichlet_mask());
  const std::vector<double> x0(sp.num_dofs(), 0.0);
  CgResult res = cg_solve(a, rhs, x0, cg);
  return FeFunction(std::move(space), std::move(res.x));
}

}  // namespace lgfem
