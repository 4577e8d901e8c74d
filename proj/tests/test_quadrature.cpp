#include <cmath>
#include <random>

#include "doctest.h"
#include "lgfem/quadrature.hpp"
#include "oracles.hpp"

using namespace lgfem;

namespace {

const Triangle kRef{Point{0, 0}, Point{1, 0}, Point{0, 1}};

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Random polynomial sum c_ab x^a y^b with a + b <= degree.
struct Poly {
  int degree;
  std::vector<double> c;
  Poly(int d, std::mt19937_64& rng) : degree(d) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b) c.push_back(u(rng));
  }
  double operator()(Point p) const {
    double s = 0.0;
    std::size_t k = 0;
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) s += c[k++] * std::pow(p.x, a) * std::pow(p.y, b);
    return s;
  }
};

}  // namespace

TEST_CASE("rules integrate monomials up to their degree") {
  for (int d = 1; d <= 6; ++d) {
    const TriangleRule& rule = rule_of_degree(d);
    CHECK(rule.degree >= d);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(std::abs(wsum - 1.0) < 1e-14);
    for (int a = 0; a <= rule.degree; ++a) {
      for (int b = 0; a + b <= rule.degree; ++b) {
        const double got = integrate_on_triangle(
            [&](Point p) { return std::pow(p.x, a) * std::pow(p.y, b); }, kRef, rule);
        CHECK(rel_err(got, oracle::monomial_integral(a, b)) < 1e-13);
      }
    }
  }
  CHECK_THROWS_AS(rule_of_degree(0), std::invalid_argument);
  CHECK_THROWS_AS(rule_of_degree(7), std::invalid_argument);
}

TEST_CASE("rule examples on the reference triangle") {
  CHECK(integrate_on_triangle([](Point) { return 1.0; }, kRef, rule_of_degree(1)) ==
        doctest::Approx(0.5).epsilon(1e-15));
  CHECK(integrate_on_triangle([](Point p) { return p.x; }, kRef, rule_of_degree(2)) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  const double x3y3 =
      integrate_on_triangle([](Point p) { return std::pow(p.x * p.y, 3); }, kRef, rule_of_degree(6));
  CHECK(rel_err(x3y3, 36.0 / 40320.0) < 1e-13);
}

TEST_CASE("seven-point rule") {
  const TriangleRule& r = seven_point_rule();
  CHECK(r.size() == 7);
  CHECK(r.degree == 5);
  CHECK(integrate_on_triangle([](Point) { return 1.0; }, kRef, r) == doctest::Approx(0.5));
  for (int a = 0; a <= 5; ++a)
    for (int b = 0; a + b <= 5; ++b)
      CHECK(rel_err(integrate_on_triangle(
                        [&](Point p) { return std::pow(p.x, a) * std::pow(p.y, b); }, kRef, r),
                    oracle::monomial_integral(a, b)) < 1e-13);
  const double x6 = integrate_on_triangle([](Point p) { return std::pow(p.x, 6); }, kRef, r);
  CHECK(rel_err(x6, oracle::monomial_integral(6, 0)) > 1e-6);
}

TEST_CASE("integrate_on_triangle on general triangles") {
  const Triangle t{Point{0.3, -0.2}, Point{1.7, 0.4}, Point{0.1, 1.1}};
  const double area = signed_area(t);
  CHECK(integrate_on_triangle([](Point) { return 1.0; }, t, rule_of_degree(1)) ==
        doctest::Approx(area).epsilon(1e-15));
  const Point c = (1.0 / 3.0) * (t[0] + t[1] + t[2]);
  for (int d = 1; d <= 6; ++d) {
    const double got =
        integrate_on_triangle([](Point p) { return 2.0 - 3.0 * p.x + 0.5 * p.y; }, t, rule_of_degree(d));
    CHECK(rel_err(got, area * (2.0 - 3.0 * c.x + 0.5 * c.y)) < 1e-14);
  }

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Triangle r{Point{u(rng), u(rng)}, Point{u(rng), u(rng)}, Point{u(rng), u(rng)}};
    if (std::abs(signed_area(r)) < 0.1) continue;
    const Poly q(4, rng);
    const double d4 = integrate_on_triangle(q, r, rule_of_degree(4));
    const double d6 = integrate_on_triangle(q, r, rule_of_degree(6));
    CHECK(rel_err(d4, d6) < 1e-13);
  }

  CHECK_THROWS_AS(
      integrate_on_triangle([](Point) { return 1.0; }, Triangle{Point{0, 0}, Point{1, 1}, Point{2, 2}},
                            rule_of_degree(1)),
      std::invalid_argument);
}

TEST_CASE("convex polygon integration") {
  const std::vector<Point> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  CHECK(integrate_on_convex_polygon([](Point) { return 1.0; }, square, 1) == doctest::Approx(1.0));
  CHECK(integrate_on_convex_polygon([](Point p) { return p.x; }, square, 1) ==
        doctest::Approx(0.5).epsilon(1e-15));

  // Random quartic on a convex pentagon against 10^4-sub-triangle subdivision.
  std::mt19937_64 rng(11);
  std::vector<Point> pent;
  for (int i = 0; i < 5; ++i) {
    const double th = 2.0 * M_PI * i / 5 + 0.2 * std::sin(3.0 * i);
    pent.push_back({0.3 + std::cos(th), -0.1 + 0.8 * std::sin(th)});
  }
  const Poly q(4, rng);
  double ref = 0.0;
  const int m = 45;  // 5 fan triangles * 45^2 ~ 10^4
  const Point c{0.3, -0.1};
  for (int i = 0; i < 5; ++i) {
    const Triangle t{c, pent[i], pent[(i + 1) % 5]};
    auto lattice = [&](int a, int b) {
      return (1.0 - double(a) / m - double(b) / m) * t[0] + (double(a) / m) * t[1] +
             (double(b) / m) * t[2];
    };
    for (int b = 0; b < m; ++b)
      for (int a = 0; a + b < m; ++a) {
        ref += integrate_on_triangle(q, {lattice(a, b), lattice(a + 1, b), lattice(a, b + 1)},
                                     rule_of_degree(6));
        if (a + b + 1 < m)
          ref += integrate_on_triangle(
              q, {lattice(a + 1, b), lattice(a + 1, b + 1), lattice(a, b + 1)}, rule_of_degree(6));
      }
  }
  for (auto split : {PolygonSplit::centroid_fan, PolygonSplit::vertex_fan}) {
    CHECK(rel_err(integrate_on_convex_polygon(q, pent, 4, split), ref) < 1e-12);
  }

  // Additivity across a chord and invariance under an affine change of variables.
  const std::vector<Point> left{pent[0], pent[1], pent[2], pent[3]};
  const std::vector<Point> right{pent[3], pent[4], pent[0]};
  CHECK(rel_err(integrate_on_convex_polygon(q, left, 4) + integrate_on_convex_polygon(q, right, 4),
                ref) < 1e-12);
  const Affine2 a{{1.2, 0.3, -0.4, 0.9}, {0.5, -0.7}};
  std::vector<Point> image;
  for (Point p : pent) image.push_back(a(p));
  const Affine2 inv = a.inverse();
  const double pulled = integrate_on_convex_polygon([&](Point p) { return q(inv(p)); }, image, 4);
  CHECK(rel_err(pulled, ref * a.det()) < 1e-12);
}

TEST_CASE("convex polygon integration rejects bad input") {
  auto one = [](Point) { return 1.0; };
  const std::vector<Point> two{{0, 0}, {1, 0}};
  CHECK_THROWS_AS(integrate_on_convex_polygon(one, two, 1), std::invalid_argument);
  const std::vector<Point> cw{{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  CHECK_THROWS_AS(integrate_on_convex_polygon(one, cw, 1), std::invalid_argument);
  const std::vector<Point> dart{{0, 0}, {2, 0}, {0.5, 0.5}, {0, 2}};
  CHECK_THROWS_AS(integrate_on_convex_polygon(one, dart, 1), std::invalid_argument);
  const std::vector<Point> sliver{{0, 0}, {1, 0}, {2, 1e-25}};
  CHECK_THROWS_AS(integrate_on_convex_polygon(one, sliver, 1), std::invalid_argument);
}

TEST_CASE("triangle clipping") {
  const Triangle clip{Point{0, 0}, Point{1, 0}, Point{0, 1}};
  const std::vector<Point> sq{{0.25, 0.25}, {1.25, 0.25}, {1.25, 1.25}, {0.25, 1.25}};
  const auto poly = clip_to_triangle(sq, clip);
  CHECK(poly.size() == 3);
  CHECK(polygon_signed_area(poly) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(is_convex_ccw(poly));

  const std::vector<Point> far{{5, 5}, {6, 5}, {5, 6}};
  CHECK(clip_to_triangle(far, clip).empty());
  // Touching along an edge only: no interior.
  const std::vector<Point> touch{{1, 0}, {1, 1}, {0, 1}};
  CHECK(clip_to_triangle(touch, clip).empty());
  // Subject containing the clip triangle returns the clip triangle.
  const std::vector<Point> big{{-1, -1}, {3, -1}, {-1, 3}};
  CHECK(polygon_signed_area(clip_to_triangle(big, clip)) == doctest::Approx(0.5));
}
