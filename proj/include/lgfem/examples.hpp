#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "lgfem/schemes.hpp"

namespace lgfem {

/// Rotating Gaussian hill on the unit disk: u = (-y, x), f = 0, T = 2 pi.
inline constexpr double kHillSigma = 0.01;
inline constexpr Point kHillCenter{0.25, 0.0};

double gaussian_hill_exact(Point x, double t, double nu);
Point gaussian_hill_gradient(Point x, double t, double nu);
ProblemSpec gauss_hill(double nu = 1e-5);

/// Manufactured solution cos(2 pi t) sin^2(pi x) sin(2 pi y) on the unit
/// square with u = (s, s), s = sin(pi x) sin(pi y), T = 1.
double sinsin_exact(Point x, double t);
/// f = d(phi)/dt + u . grad(phi) - nu lap(phi) for sinsin_exact.
double sinsin_source(Point x, double t, double nu);
ProblemSpec sinsin(double nu = 1e-2);

/// "gauss-hill" or "sinsin"; nu defaults to the example's own value.
ProblemSpec example_by_name(const std::string& name, std::optional<double> nu = std::nullopt);

/// Max |f - (phi_t + u . grad phi - nu lap phi)| over random (x, t) samples,
/// the bracket evaluated with second-order central differences (step 1e-4).
double verify_forcing(double nu, int samples = 1000, std::uint64_t seed = 1);

/// Max finite-difference PDE residual of gaussian_hill_exact (f = 0) at
/// random interior points and times in [0, 2 pi].
double gaussian_hill_residual(double nu, int samples = 1000, std::uint64_t seed = 1);

}  // namespace lgfem
