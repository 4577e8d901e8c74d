#pragma once

#include <functional>
#include <limits>
#include <span>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lgfem/advect.hpp"
#include "lgfem/fe_space.hpp"
#include "lgfem/linalg.hpp"

namespace lgfem {

enum class Domain { unit_square, unit_disk };

/// Mesh for a domain selector: unit_square_mesh(n) or unit_disk_mesh(n).
std::shared_ptr<const Mesh> build_mesh(Domain domain, int n);

/// Nominal mesh size used by the time-step rules: 1/N on the square, 2*pi/N
/// on the disk.
double nominal_h(Domain domain, int n);

/// Product c(t) g(x).
struct SeparableTerm {
  std::function<double(double)> time;
  ScalarField space;
};

/// Space-time scalar field, either a general callable or a sum of separable
/// terms. The separable form lets load vectors and interpolants be
/// precomputed once per run.
struct SpaceTimeField {
  std::function<double(Point, double)> general;
  std::vector<SeparableTerm> terms;

  bool empty() const { return !general && terms.empty(); }
  bool separable() const { return !general && !terms.empty(); }
  double operator()(Point p, double t) const;
};

/// d(phi)/dt + u . grad(phi) - nu lap(phi) = f in the domain, phi = 0 on the
/// boundary, phi(., 0) = phi0.
struct ProblemSpec {
  std::string name;
  Domain domain = Domain::unit_square;
  double final_time = 1.0;
  double nu = 1e-2;
  std::function<Point(Point, double)> velocity;
  SpaceTimeField source;
  ScalarField phi0;
  VectorField phi0_grad;  // optional; finite differences when empty
  SpaceTimeField exact;   // optional
};

enum class Scheme { gslg, lgq };

const char* to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SchemeConfig {
  Scheme scheme = Scheme::gslg;
  int degree = 1;
  int n = 8;
  double dt = 0.0;
  double d1 = kDefaultD1;
  double cg_rel_tol = 1e-12;
  int data_rule_degree = 6;
  /// Test hook: replace phi_h^n by the interpolant of the exact solution.
  bool force_interpolant = false;
};

/// Both sides of the discrete stability estimate.
struct StabilityLedger {
  double lhs = 0.0;         // max_n ||phi^n|| + sqrt(nu) (dt sum ||grad phi^n||^2)^{1/2}
  double rhs = 0.0;         // ||phi^0|| + (dt sum ||f^n||^2)^{1/2}
  double ratio = 0.0;       // lhs / rhs
  double energy_lhs = 0.0;  // max_n (||phi^n||^2 + 2 nu dt sum_{m<=n} ||grad phi^m||^2)^{1/2}
  double energy_ratio = 0.0;
};

struct RunReport {
  std::string example;
  Scheme scheme = Scheme::gslg;
  int degree = 1;
  int n = 0;
  double h = 0.0;
  double dt = 0.0;
  double nu = 0.0;
  int steps_planned = 0;
  int steps = 0;  // completed steps

  std::vector<double> l2_norms;  // n = 0..steps
  std::vector<double> h1_norms;  // n = 0..steps
  std::vector<double> f_norms;   // n = 1..steps

  double e_l2 = std::numeric_limits<double>::quiet_NaN();
  double e_h1 = std::numeric_limits<double>::quiet_NaN();
  StabilityLedger ledger;
  bool diverged = false;

  double cg_iters_mean = 0.0;
  double runtime_s = 0.0;
  int operator_builds = 0;
  double guard_product = 0.0;
  double min_jacobian = 1.0;
  double max_jacobian = 1.0;

  std::optional<FeFunction> final_solution;
};

/// Accumulates the relative l-infinity-in-time errors against the
/// interpolant of the exact solution, in the mass (L2) and stiffness (H1_0)
/// norms.
class ErrorAccumulator {
 public:
  ErrorAccumulator(const SparseMatrix& mass, const SparseMatrix& stiffness)
      : mass_(&mass), stiffness_(&stiffness) {}

  void add(std::span<const double> interpolant, std::span<const double> phi_h);
  double e_l2() const;
  double e_h1() const;

 private:
  const SparseMatrix* mass_;
  const SparseMatrix* stiffness_;
  double max_err_l2_ = 0.0;
  double max_ref_l2_ = 0.0;
  double max_err_h1_ = 0.0;
  double max_ref_h1_ = 0.0;
};

/// Left/right sides of the stability estimate from a report's norm history.
StabilityLedger stability_ledger(const RunReport& report);

/// Per-step system matrix M/dt + nu A with Dirichlet elimination applied.
SparseMatrix system_matrix(const FeSpace& space, const SparseMatrix& mass,
                           const SparseMatrix& stiffness, double dt, double nu);

/// Time loop of the GSLG or LG-Q scheme. Throws std::invalid_argument on a
/// bad configuration, TimestepViolation when the guard fails and
/// SolverFailure when CG does not converge. Blow-up is reported through
/// RunReport::diverged.
RunReport run(const ProblemSpec& problem, const SchemeConfig& config);

/// Number of steps floor(T/dt), tolerant of rounding in T/dt.
int step_count(double final_time, double dt);

/// Divergence flag threshold factor: ||phi^n|| > factor (||phi^0|| + 1).
inline constexpr double kDivergenceFactor = 1e6;

}  // namespace lgfem
