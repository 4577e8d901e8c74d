#include "lgfem/examples.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace lgfem {

namespace {

// Rotated coordinates (x cos t + y sin t, -x sin t + y cos t).
Point rotate_back(Point x, double t) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  return {x.x * c + x.y * s, -x.x * s + x.y * c};
}

double sin_sq(double a) {
  const double s = std::sin(a);
  return s * s;
}

// Spatial factor of sinsin_exact and its derivatives.
double s_val(Point p) { return sin_sq(M_PI * p.x) * std::sin(2.0 * M_PI * p.y); }

Point s_grad(Point p) {
  return {M_PI * std::sin(2.0 * M_PI * p.x) * std::sin(2.0 * M_PI * p.y),
          2.0 * M_PI * sin_sq(M_PI * p.x) * std::cos(2.0 * M_PI * p.y)};
}

double s_lap(Point p) {
  const double s2y = std::sin(2.0 * M_PI * p.y);
  return 2.0 * M_PI * M_PI * std::cos(2.0 * M_PI * p.x) * s2y -
         4.0 * M_PI * M_PI * sin_sq(M_PI * p.x) * s2y;
}

double bump(Point p) { return std::sin(M_PI * p.x) * std::sin(M_PI * p.y); }

// phi_t + u . grad phi - nu lap phi by central differences.
template <class Phi, class Vel>
double fd_operator(const Phi& phi, const Vel& u, Point x, double t, double nu, double step) {
  const double dt_phi = (phi({x.x, x.y}, t + step) - phi({x.x, x.y}, t - step)) / (2.0 * step);
  const double c = phi(x, t);
  const double xp = phi({x.x + step, x.y}, t);
  const double xm = phi({x.x - step, x.y}, t);
  const double yp = phi({x.x, x.y + step}, t);
  const double ym = phi({x.x, x.y - step}, t);
  const Point grad{(xp - xm) / (2.0 * step), (yp - ym) / (2.0 * step)};
  const double lap = (xp + xm + yp + ym - 4.0 * c) / (step * step);
  return dt_phi + dot(u(x, t), grad) - nu * lap;
}

}  // namespace

double gaussian_hill_exact(Point x, double t, double nu) {
  const double s = kHillSigma + 4.0 * nu * t;
  const Point d = rotate_back(x, t) - kHillCenter;
  return kHillSigma / s * std::exp(-dot(d, d) / s);
}

Point gaussian_hill_gradient(Point x, double t, double nu) {
  const double s = kHillSigma + 4.0 * nu * t;
  const Point d = rotate_back(x, t) - kHillCenter;
  const double v = kHillSigma / s * std::exp(-dot(d, d) / s);
  // Chain rule through the rotation: grad = R^T grad_xbar.
  const Point gbar = (-2.0 * v / s) * d;
  const double c = std::cos(t);
  const double sn = std::sin(t);
  return {c * gbar.x - sn * gbar.y, sn * gbar.x + c * gbar.y};
}

ProblemSpec gauss_hill(double nu) {
  ProblemSpec p;
  p.name = "gauss-hill";
  p.domain = Domain::unit_disk;
  p.final_time = 2.0 * M_PI;
  p.nu = nu;
  p.velocity = [](Point x, double) { return Point{-x.y, x.x}; };
  p.phi0 = [nu](Point x) { return gaussian_hill_exact(x, 0.0, nu); };
  p.phi0_grad = [nu](Point x) { return gaussian_hill_gradient(x, 0.0, nu); };
  p.exact.general = [nu](Point x, double t) { return gaussian_hill_exact(x, t, nu); };
  return p;
}

double sinsin_exact(Point x, double t) { return std::cos(2.0 * M_PI * t) * s_val(x); }

double sinsin_source(Point x, double t, double nu) {
  const double w = bump(x);
  const Point g = s_grad(x);
  return -2.0 * M_PI * std::sin(2.0 * M_PI * t) * s_val(x) +
         std::cos(2.0 * M_PI * t) * (w * (g.x + g.y) - nu * s_lap(x));
}

ProblemSpec sinsin(double nu) {
  ProblemSpec p;
  p.name = "sinsin";
  p.domain = Domain::unit_square;
  p.final_time = 1.0;
  p.nu = nu;
  p.velocity = [](Point x, double) {
    const double w = bump(x);
    return Point{w, w};
  };
  p.source.terms = {
      {[](double t) { return -2.0 * M_PI * std::sin(2.0 * M_PI * t); }, s_val},
      {[](double t) { return std::cos(2.0 * M_PI * t); },
       [nu](Point x) {
         const Point g = s_grad(x);
         return bump(x) * (g.x + g.y) - nu * s_lap(x);
       }},
  };
  p.phi0 = s_val;
  p.phi0_grad = s_grad;
  p.exact.terms = {{[](double t) { return std::cos(2.0 * M_PI * t); }, s_val}};
  return p;
}

ProblemSpec example_by_name(const std::string& name, std::optional<double> nu) {
  if (name == "gauss-hill") {
    return gauss_hill(nu.value_or(1e-5));
  }
  if (name == "sinsin") {
    return sinsin(nu.value_or(1e-2));
  }
  throw std::invalid_argument("unknown example '" + name + "'");
}

double verify_forcing(double nu, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto phi = [](Point x, double t) { return sinsin_exact(x, t); };
  const auto u = [](Point x, double) {
    const double w = bump(x);
    return Point{w, w};
  };
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Point x{unit(rng), unit(rng)};
    const double t = unit(rng);
    const double fd = fd_operator(phi, u, x, t, nu, 1e-4);
    worst = std::max(worst, std::abs(sinsin_source(x, t, nu) - fd));
  }
  return worst;
}

double gaussian_hill_residual(double nu, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto phi = [nu](Point x, double t) { return gaussian_hill_exact(x, t, nu); };
  const auto u = [](Point x, double) { return Point{-x.y, x.x}; };
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double r = 0.99 * std::sqrt(unit(rng));
    const double a = 2.0 * M_PI * unit(rng);
    const Point x{r * std::cos(a), r * std::sin(a)};
    const double t = 2.0 * M_PI * unit(rng);
    worst = std::max(worst, std::abs(fd_operator(phi, u, x, t, nu, 1e-4)));
  }
  return worst;
}

}  // namespace lgfem
