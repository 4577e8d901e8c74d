#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "lgfem/mesh.hpp"

namespace lgfem {

using ScalarField = std::function<double(Point)>;
using VectorField = std::function<Point(Point)>;

/// Continuous Pk Lagrange space (k = 1, 2) over a mesh.
///
/// Global numbering: vertices first, then (k = 2) edge midpoints in order of
/// their sorted vertex-index pair. Local DOFs 0..2 sit at the element
/// vertices, local DOF 3+i at the midpoint of local edge i (vertices i, i+1).
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const Mesh> mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int num_dofs() const { return static_cast<int>(dof_coords_.size()); }
  int dofs_per_element() const { return degree_ == 1 ? 3 : 6; }

  const std::vector<Point>& dof_coords() const { return dof_coords_; }
  std::span<const int> element_dofs(int e) const {
    return {element_dofs_.data() + static_cast<std::size_t>(e) * dofs_per_element(),
            static_cast<std::size_t>(dofs_per_element())};
  }
  const std::vector<bool>& dirichlet_mask() const { return dirichlet_; }

  /// Local basis values at barycentric coordinates `bary`.
  void basis(const std::array<double, 3>& bary, std::span<double> out) const;

  /// Local basis gradients on element e at barycentric coordinates `bary`.
  void basis_gradients(int e, const std::array<double, 3>& bary, std::span<Point> out) const;

  /// Constant gradients of the barycentric coordinates of element e.
  const std::array<Point, 3>& barycentric_gradients(int e) const { return bary_grads_[e]; }

 private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  std::vector<Point> dof_coords_;
  std::vector<int> element_dofs_;
  std::vector<bool> dirichlet_;
  std::vector<std::array<Point, 3>> bary_grads_;
};

/// Coefficient vector over an FeSpace.
class FeFunction {
 public:
  explicit FeFunction(std::shared_ptr<const FeSpace> space);
  FeFunction(std::shared_ptr<const FeSpace> space, std::vector<double> coeffs);

  const FeSpace& space() const { return *space_; }
  const std::shared_ptr<const FeSpace>& space_ptr() const { return space_; }
  std::vector<double>& coeffs() { return coeffs_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  /// Value of the local polynomial of element e at p (p inside closed e).
  double eval(int e, Point p) const;
  Point eval_grad(int e, Point p) const;

 private:
  std::shared_ptr<const FeSpace> space_;
  std::vector<double> coeffs_;
};

/// Lagrange interpolation: coefficient i is g at DOF node i. No Dirichlet
/// forcing.
FeFunction interpolate(std::shared_ptr<const FeSpace> space, const ScalarField& g);

/// Piecewise-linear nodal interpolant of a velocity field.
struct VelocityP1 {
  std::shared_ptr<const FeSpace> space;
  FeFunction x;
  FeFunction y;

  Point eval(int e, Point p) const { return {x.eval(e, p), y.eval(e, p)}; }
  /// Constant Jacobian on element e, row-major [dux/dx, dux/dy, duy/dx, duy/dy].
  std::array<double, 4> gradient(int e) const;
};

VelocityP1 interpolate_velocity_p1(std::shared_ptr<const Mesh> mesh, const VectorField& u);

struct CgOptions;

/// Stiffness-orthogonal projection onto the space with homogeneous Dirichlet
/// values. Right-hand side entries are integrals of grad g . grad phi_i using
/// rule_of_degree(data_rule_degree); when `grad_g` is empty the gradient is
/// taken by central differences of g with step 1e-6.
FeFunction poisson_projection(std::shared_ptr<const FeSpace> space, const ScalarField& g,
                              const VectorField& grad_g, int data_rule_degree,
                              const CgOptions& cg);

}  // namespace lgfem
