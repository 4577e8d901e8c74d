#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "lgfem/fe_space.hpp"
#include "lgfem/linalg.hpp"
#include "lgfem/quadrature.hpp"

namespace lgfem {

/// Default bound on dt * |u_h|_{1,inf}.
inline constexpr double kDefaultD1 = 0.2;

/// Result of a passed time-step guard.
struct TimestepReport {
  double seminorm = 0.0;  // max over elements of the Frobenius norm of grad u_h
  double product = 0.0;   // dt * seminorm
  double min_jacobian = 1.0;
  double max_jacobian = 1.0;
};

/// Checks dt * |u_h|_{1,inf} <= d1 and det(I - dt grad u_h) in [1/2, 3/2] on
/// every element. Throws TimestepViolation naming the offending element.
TimestepReport check_timestep(const VelocityP1& u_h, double dt, double d1 = kDefaultD1);

/// Backward-Euler characteristic foot x - w(x) dt, with w either a P1
/// interpolated velocity (element-wise affine map) or a continuous field.
class CharMap {
 public:
  CharMap(VelocityP1 u_h, double dt);
  CharMap(VectorField u, double dt);

  double dt() const { return dt_; }
  bool is_linearized() const { return u_h_.has_value(); }
  const VelocityP1& velocity_p1() const { return *u_h_; }

  /// |w|_{1,inf}; only defined for the linearized map.
  double seminorm() const { return seminorm_; }

  /// Foot of x, which lies in `element`.
  Point foot(Point x, int element) const;

  /// The affine restriction of the linearized map to `element`.
  Affine2 affine(int element) const;

 private:
  std::optional<VelocityP1> u_h_;
  VectorField u_;
  double dt_;
  double seminorm_ = 0.0;
};

/// One piece E_l = K0 intersect X^{-1}(K_l) of an upwind element K0.
struct CompositePiece {
  int source = -1;              // l
  std::vector<Point> polygon;   // counterclockwise, K0 coordinates
  double area = 0.0;
};

/// Per-element partition of the mesh into polygons on which the composite
/// integrand is a single polynomial.
class CompositeDecomposition {
 public:
  CompositeDecomposition(std::shared_ptr<const Mesh> mesh, std::vector<Affine2> maps,
                         std::vector<std::vector<CompositePiece>> pieces,
                         std::vector<bool> interior_mapped);

  const Mesh& mesh() const { return *mesh_; }
  int num_elements() const { return static_cast<int>(pieces_.size()); }
  const std::vector<CompositePiece>& pieces(int e) const { return pieces_[e]; }
  const Affine2& map(int e) const { return maps_[e]; }
  /// True when the image of element e lies inside the meshed domain.
  bool interior_mapped(int e) const { return interior_mapped_[e]; }
  std::size_t total_pieces() const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<Affine2> maps_;
  std::vector<std::vector<CompositePiece>> pieces_;
  std::vector<bool> interior_mapped_;
};

/// Clips each element's image under the linearized map against the mesh and
/// pulls the pieces back. Throws DegenerateMap if an element map has
/// determinant outside [1/2, 3/2].
CompositeDecomposition decompose(std::shared_ptr<const Mesh> mesh, const CharMap& map);

/// Sparse operator B with (B c)_i = integral of (phi_c o X_1h) phi_i, exact
/// for polynomial pieces. Rows and columns index DOFs of `space`.
SparseMatrix composite_operator_exact(const CompositeDecomposition& decomp, const FeSpace& space,
                                      PolygonSplit split = PolygonSplit::centroid_fan);

std::vector<double> composite_term_exact(const CompositeDecomposition& decomp,
                                         const FeFunction& phi_prev, const FeSpace& space,
                                         PolygonSplit split = PolygonSplit::centroid_fan);

/// Operator of the quadrature-based composite term: sum over elements of
/// |K| sum_q w_q phi_c(a_q - u(a_q) dt) phi_i(a_q). Feet outside the mesh
/// contribute zero.
SparseMatrix composite_operator_quadrature(const FeSpace& space, const VectorField& u, double dt,
                                           const TriangleRule& rule);

std::vector<double> composite_term_quadrature(const FeSpace& space, const VectorField& u,
                                              double dt, const FeFunction& phi_prev,
                                              const TriangleRule& rule);

/// One line per piece: "K0 l area v1x v1y v2x v2y ...".
void write_decomposition(std::ostream& out, const CompositeDecomposition& decomp);

}  // namespace lgfem
