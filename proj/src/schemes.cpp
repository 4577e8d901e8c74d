#include "lgfem/schemes.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "lgfem/quadrature.hpp"

namespace lgfem {

std::shared_ptr<const Mesh> build_mesh(Domain domain, int n) {
  switch (domain) {
    case Domain::unit_square:
      return std::make_shared<const Mesh>(unit_square_mesh(n));
    case Domain::unit_disk:
      return std::make_shared<const Mesh>(unit_disk_mesh(n));
  }
  throw std::invalid_argument("build_mesh: unknown domain");
}

double nominal_h(Domain domain, int n) {
  return domain == Domain::unit_square ? 1.0 / n : 2.0 * M_PI / n;
}

double SpaceTimeField::operator()(Point p, double t) const {
  if (general) {
    return general(p, t);
  }
  double v = 0.0;
  for (const SeparableTerm& term : terms) {
    v += term.time(t) * term.space(p);
  }
  return v;
}

const char* to_string(Scheme s) { return s == Scheme::gslg ? "gslg" : "lgq"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "gslg") {
    return Scheme::gslg;
  }
  if (s == "lgq") {
    return Scheme::lgq;
  }
  throw std::invalid_argument("unknown scheme '" + s + "'");
}

int step_count(double final_time, double dt) {
  return static_cast<int>(std::floor(final_time / dt * (1.0 + 1e-12)));
}

void ErrorAccumulator::add(std::span<const double> interpolant, std::span<const double> phi_h) {
  std::vector<double> d(interpolant.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = interpolant[i] - phi_h[i];
  }
  max_err_l2_ = std::max(max_err_l2_, energy_norm(*mass_, d));
  max_ref_l2_ = std::max(max_ref_l2_, energy_norm(*mass_, interpolant));
  max_err_h1_ = std::max(max_err_h1_, energy_norm(*stiffness_, d));
  max_ref_h1_ = std::max(max_ref_h1_, energy_norm(*stiffness_, interpolant));
}

double ErrorAccumulator::e_l2() const {
  return max_ref_l2_ > 0.0 ? max_err_l2_ / max_ref_l2_ : std::numeric_limits<double>::quiet_NaN();
}

double ErrorAccumulator::e_h1() const {
  return max_ref_h1_ > 0.0 ? max_err_h1_ / max_ref_h1_ : std::numeric_limits<double>::quiet_NaN();
}

StabilityLedger stability_ledger(const RunReport& r) {
  StabilityLedger led;
  if (r.l2_norms.empty()) {
    return led;
  }
  double grad_sum = 0.0;
  double max_l2 = r.l2_norms[0];
  led.energy_lhs = r.l2_norms[0];
  for (int n = 1; n < static_cast<int>(r.l2_norms.size()); ++n) {
    grad_sum += r.dt * r.h1_norms[n] * r.h1_norms[n];
    max_l2 = std::max(max_l2, r.l2_norms[n]);
    led.energy_lhs =
        std::max(led.energy_lhs, std::sqrt(r.l2_norms[n] * r.l2_norms[n] + 2.0 * r.nu * grad_sum));
  }
  double f_sum = 0.0;
  for (double f : r.f_norms) {
    f_sum += r.dt * f * f;
  }
  led.lhs = max_l2 + std::sqrt(r.nu * grad_sum);
  led.rhs = r.l2_norms[0] + std::sqrt(f_sum);
  if (led.rhs > 0.0) {
    led.ratio = led.lhs / led.rhs;
    led.energy_ratio = led.energy_lhs / led.rhs;
  } else {
    led.ratio = led.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    led.energy_ratio = led.ratio;
  }
  return led;
}

SparseMatrix system_matrix(const FeSpace& space, const SparseMatrix& mass,
                           const SparseMatrix& stiffness, double dt, double nu) {
  SparseMatrix s = linear_combination(1.0 / dt, mass, nu, stiffness);
  std::vector<double> dummy(space.num_dofs(), 0.0);
  apply_dirichlet(s, dummy, space.dirichlet_mask());
  return s;
}

namespace {

/// Load vectors (f^n, phi_i) and norms ||f^n||.
class SourceIntegrator {
 public:
  SourceIntegrator(const FeSpace& space, const SpaceTimeField& f, int rule_degree)
      : space_(space), f_(f), rule_(rule_of_degree(rule_degree)) {
    if (f_.separable()) {
      const std::size_t m = f_.terms.size();
      loads_.assign(m, std::vector<double>(space.num_dofs(), 0.0));
      gram_.assign(m * m, 0.0);
      std::vector<double> g(m);
      for_each_point([&](int, std::span<const int> dofs, std::span<const double> phi, Point x,
                         double w) {
        for (std::size_t j = 0; j < m; ++j) {
          g[j] = f_.terms[j].space(x);
          for (std::size_t i = 0; i < dofs.size(); ++i) {
            loads_[j][dofs[i]] += w * g[j] * phi[i];
          }
        }
        for (std::size_t j = 0; j < m; ++j) {
          for (std::size_t k = 0; k < m; ++k) {
            gram_[j * m + k] += w * g[j] * g[k];
          }
        }
      });
    }
  }

  /// Adds (f(t), phi_i) to `load` and returns ||f(t)||.
  double accumulate(double t, std::vector<double>& load) const {
    if (f_.empty()) {
      return 0.0;
    }
    if (f_.separable()) {
      const std::size_t m = f_.terms.size();
      std::vector<double> c(m);
      for (std::size_t j = 0; j < m; ++j) {
        c[j] = f_.terms[j].time(t);
        for (std::size_t i = 0; i < load.size(); ++i) {
          load[i] += c[j] * loads_[j][i];
        }
      }
      double sq = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t k = 0; k < m; ++k) {
          sq += c[j] * c[k] * gram_[j * m + k];
        }
      }
      return std::sqrt(std::max(0.0, sq));
    }
    double sq = 0.0;
    for_each_point([&](int, std::span<const int> dofs, std::span<const double> phi, Point x,
                       double w) {
      const double v = f_(x, t);
      sq += w * v * v;
      for (std::size_t i = 0; i < dofs.size(); ++i) {
        load[dofs[i]] += w * v * phi[i];
      }
    });
    return std::sqrt(sq);
  }

 private:
  template <class Visit>
  void for_each_point(Visit&& visit) const {
    const Mesh& mesh = space_.mesh();
    std::array<double, 6> phi{};
    const std::span<const double> phis(phi.data(), space_.dofs_per_element());
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const Triangle tri = mesh.triangle(e);
      const double area = mesh.area(e);
      const auto dofs = space_.element_dofs(e);
      for (std::size_t q = 0; q < rule_.size(); ++q) {
        space_.basis(rule_.points[q], phi);
        visit(e, dofs, phis, map_to_triangle(tri, rule_.points[q]), area * rule_.weights[q]);
      }
    }
  }

  const FeSpace& space_;
  const SpaceTimeField& f_;
  const TriangleRule& rule_;
  std::vector<std::vector<double>> loads_;
  std::vector<double> gram_;
};

/// Interpolants of the exact solution at successive times.
class ExactInterpolator {
 public:
  ExactInterpolator(std::shared_ptr<const FeSpace> space, const SpaceTimeField& exact)
      : space_(std::move(space)), exact_(exact) {
    if (exact_.separable()) {
      for (const SeparableTerm& term : exact_.terms) {
        spatial_.push_back(interpolate(space_, term.space).coeffs());
      }
    }
  }

  std::vector<double> at(double t) const {
    if (!exact_.separable()) {
      return interpolate(space_, [&](Point p) { return exact_(p, t); }).coeffs();
    }
    std::vector<double> v(space_->num_dofs(), 0.0);
    for (std::size_t j = 0; j < spatial_.size(); ++j) {
      const double c = exact_.terms[j].time(t);
      for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] += c * spatial_[j][i];
      }
    }
    return v;
  }

 private:
  std::shared_ptr<const FeSpace> space_;
  const SpaceTimeField& exact_;
  std::vector<std::vector<double>> spatial_;
};

void validate(const ProblemSpec& p, const SchemeConfig& c) {
  if (!(p.final_time > 0.0)) {
    throw std::invalid_argument("final time must be positive");
  }
  if (!(p.nu > 0.0)) {
    throw std::invalid_argument("nu must be positive");
  }
  if (!p.velocity || !p.phi0) {
    throw std::invalid_argument("problem needs a velocity and an initial field");
  }
  if (c.degree != 1 && c.degree != 2) {
    throw std::invalid_argument("degree must be 1 or 2");
  }
  if (!(c.dt > 0.0)) {
    throw std::invalid_argument("dt must be positive");
  }
  if (c.dt > p.final_time) {
    throw std::invalid_argument("dt must not exceed the final time");
  }
  if (c.force_interpolant && p.exact.empty()) {
    throw std::invalid_argument("force_interpolant requires an exact solution");
  }
}

}  // namespace

RunReport run(const ProblemSpec& problem, const SchemeConfig& config) {
  validate(problem, config);
  const auto start = std::chrono::steady_clock::now();

  const auto mesh = build_mesh(problem.domain, config.n);
  const auto space = std::make_shared<const FeSpace>(mesh, config.degree);
  const SparseMatrix mass = assemble_mass(*space);
  const SparseMatrix stiffness = assemble_stiffness(*space);
  const SparseMatrix system = system_matrix(*space, mass, stiffness, config.dt, problem.nu);
  const auto& mask = space->dirichlet_mask();
  const CgOptions cg{config.cg_rel_tol, -1};

  RunReport rep;
  rep.example = problem.name;
  rep.scheme = config.scheme;
  rep.degree = config.degree;
  rep.n = config.n;
  rep.h = nominal_h(problem.domain, config.n);
  rep.dt = config.dt;
  rep.nu = problem.nu;
  rep.steps_planned = step_count(problem.final_time, config.dt);
  rep.min_jacobian = std::numeric_limits<double>::infinity();
  rep.max_jacobian = -std::numeric_limits<double>::infinity();

  FeFunction phi = poisson_projection(space, problem.phi0, problem.phi0_grad,
                                      config.data_rule_degree, cg);
  std::optional<ExactInterpolator> exact;
  std::optional<ErrorAccumulator> errors;
  if (!problem.exact.empty()) {
    exact.emplace(space, problem.exact);
    errors.emplace(mass, stiffness);
  }
  if (config.force_interpolant) {
    phi.coeffs() = exact->at(0.0);
  }
  if (errors) {
    errors->add(exact->at(0.0), phi.coeffs());
  }
  rep.l2_norms.push_back(energy_norm(mass, phi.coeffs()));
  rep.h1_norms.push_back(energy_norm(stiffness, phi.coeffs()));
  const double blowup = kDivergenceFactor * (rep.l2_norms[0] + 1.0);

  const SourceIntegrator source(*space, problem.source, config.data_rule_degree);
  const TriangleRule& lgq_rule = seven_point_rule();

  // The composite operator depends only on the velocity samples it was built
  // from; it is rebuilt whenever those change.
  std::vector<Point> cached_samples;
  SparseMatrix composite;
  long cg_iterations = 0;

  std::vector<double> rhs(space->num_dofs());
  for (int step = 1; step <= rep.steps_planned; ++step) {
    const double t = step * config.dt;
    const VectorField u_t = [&problem, t](Point p) { return problem.velocity(p, t); };

    VelocityP1 u_h = interpolate_velocity_p1(mesh, u_t);
    std::vector<Point> samples;
    if (config.scheme == Scheme::gslg) {
      samples.reserve(mesh->num_vertices());
      for (int v = 0; v < mesh->num_vertices(); ++v) {
        samples.push_back({u_h.x.coeffs()[v], u_h.y.coeffs()[v]});
      }
    } else {
      samples.reserve(static_cast<std::size_t>(mesh->num_elements()) * lgq_rule.size());
      for (int e = 0; e < mesh->num_elements(); ++e) {
        const Triangle tri = mesh->triangle(e);
        for (const auto& bary : lgq_rule.points) {
          samples.push_back(u_t(map_to_triangle(tri, bary)));
        }
      }
    }
    if (rep.operator_builds == 0 || samples != cached_samples) {
      const TimestepReport guard = check_timestep(u_h, config.dt, config.d1);
      rep.guard_product = std::max(rep.guard_product, guard.product);
      rep.min_jacobian = std::min(rep.min_jacobian, guard.min_jacobian);
      rep.max_jacobian = std::max(rep.max_jacobian, guard.max_jacobian);
      if (config.scheme == Scheme::gslg) {
        const CharMap map(std::move(u_h), config.dt);
        composite = composite_operator_exact(decompose(mesh, map), *space);
      } else {
        composite = composite_operator_quadrature(*space, u_t, config.dt, lgq_rule);
      }
      cached_samples = std::move(samples);
      ++rep.operator_builds;
    }

    composite.multiply(phi.coeffs(), rhs);
    for (double& r : rhs) {
      r /= config.dt;
    }
    rep.f_norms.push_back(source.accumulate(t, rhs));
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      if (mask[i]) {
        rhs[i] = 0.0;
      }
    }

    if (config.force_interpolant) {
      phi.coeffs() = exact->at(t);
    } else {
      CgResult res = cg_solve(system, rhs, phi.coeffs(), cg);
      cg_iterations += res.iterations;
      phi.coeffs() = std::move(res.x);
    }
    rep.steps = step;

    const double l2 = energy_norm(mass, phi.coeffs());
    rep.l2_norms.push_back(l2);
    rep.h1_norms.push_back(energy_norm(stiffness, phi.coeffs()));
    if (errors) {
      errors->add(exact->at(t), phi.coeffs());
    }
    if (!std::isfinite(l2) || l2 > blowup) {
      rep.diverged = true;
      break;
    }
  }

  if (errors) {
    rep.e_l2 = errors->e_l2();
    rep.e_h1 = errors->e_h1();
  }
  rep.ledger = stability_ledger(rep);
  rep.cg_iters_mean = rep.steps > 0 ? static_cast<double>(cg_iterations) / rep.steps : 0.0;
  rep.final_solution = std::move(phi);
  rep.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace lgfem
