#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "lgfem/advect.hpp"
#include "lgfem/errors.hpp"
#include "oracles.hpp"

using namespace lgfem;

namespace {

std::shared_ptr<const Mesh> square(int n) { return std::make_shared<const Mesh>(unit_square_mesh(n)); }
std::shared_ptr<const Mesh> disk(int n) { return std::make_shared<const Mesh>(unit_disk_mesh(n)); }

Point rotation(Point p) { return {-p.y, p.x}; }

Point sinsin_velocity(Point p) {
  const double s = std::sin(std::numbers::pi * p.x) * std::sin(std::numbers::pi * p.y);
  return {s, s};
}

double rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("time-step guard") {
  const auto d = disk(32);
  const VelocityP1 zero = interpolate_velocity_p1(d, [](Point) { return Point{}; });
  for (double dt : {1e-3, 1.0, 1e6}) {
    const TimestepReport r = check_timestep(zero, dt);
    CHECK(r.product == 0.0);
    CHECK(r.min_jacobian == 1.0);
    CHECK(r.max_jacobian == 1.0);
  }

  const VelocityP1 rot = interpolate_velocity_p1(d, rotation);
  const double dt_edge = 0.2 / std::sqrt(2.0);
  const TimestepReport r = check_timestep(rot, dt_edge, 0.2);
  CHECK(r.seminorm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.product == doctest::Approx(0.2).epsilon(1e-12));
  // det(I - dt [[0,-1],[1,0]]) = 1 + dt^2
  CHECK(r.min_jacobian == doctest::Approx(1.0 + dt_edge * dt_edge).epsilon(1e-12));
  CHECK_THROWS_AS(check_timestep(rot, dt_edge * 1.001, 0.2), TimestepViolation);
  try {
    check_timestep(rot, 2.0 / std::sqrt(2.0), 0.2);
    FAIL("expected a violation");
  } catch (const TimestepViolation& v) {
    CHECK(v.product() == doctest::Approx(2.0));
    CHECK(v.element() >= 0);
  }

  // Within the seminorm bound but with a Jacobian below 1/2.
  const auto sq = square(4);
  const VelocityP1 dilation = interpolate_velocity_p1(sq, [](Point p) { return p; });
  try {
    check_timestep(dilation, 0.69, 0.99);
    FAIL("expected a violation");
  } catch (const TimestepViolation& v) {
    CHECK(v.jacobian() == doctest::Approx(0.31 * 0.31));
  }
  CHECK_THROWS_AS(check_timestep(rot, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(check_timestep(rot, 0.1, 1.5), std::invalid_argument);
}

TEST_CASE("characteristic foot") {
  const auto d = disk(32);
  const Point x{0.25, 0.0};
  const int e = *d->locate(x, 0);
  const double dt = 0.05;

  const CharMap still(interpolate_velocity_p1(d, [](Point) { return Point{}; }), dt);
  CHECK(still.foot(x, e) == x);

  const CharMap shift(interpolate_velocity_p1(d, [](Point) { return Point{1.0, 0.0}; }), 0.1);
  CHECK(norm(shift.foot(x, e) - Point{0.25 - 0.1, 0.0}) < 1e-15);

  for (const CharMap& m : {CharMap(interpolate_velocity_p1(d, rotation), dt), CharMap(VectorField(rotation), dt)}) {
    CHECK(norm(m.foot(x, e) - Point{0.25, -0.25 * dt}) < 1e-15);
  }

  // The affine restriction agrees with the pointwise foot.
  const CharMap lin(interpolate_velocity_p1(d, [](Point p) { return Point{p.x * p.y, 1.0 - p.x}; }), dt);
  for (int k = 0; k < d->num_elements(); k += 7) {
    const Triangle t = d->triangle(k);
    const Point p = 0.5 * t[0] + 0.3 * t[1] + 0.2 * t[2];
    CHECK(norm(lin.affine(k)(p) - lin.foot(p, k)) < 1e-15);
  }
  CHECK_THROWS_AS(CharMap(VectorField(rotation), 0.0), std::invalid_argument);
}

TEST_CASE("decomposition with zero velocity is the identity") {
  const auto mesh = square(4);
  const CharMap m(interpolate_velocity_p1(mesh, [](Point) { return Point{}; }), 0.1);
  const auto dec = decompose(mesh, m);
  for (int e = 0; e < mesh->num_elements(); ++e) {
    REQUIRE(dec.pieces(e).size() == 1);
    CHECK(dec.pieces(e)[0].source == e);
    CHECK(dec.pieces(e)[0].area == doctest::Approx(mesh->area(e)).epsilon(1e-14));
    CHECK(dec.interior_mapped(e));
  }
}

TEST_CASE("decomposition of a half-cell translation") {
  const int n = 8;
  const double h = 1.0 / n;
  const double dt = 0.01;
  const auto mesh = square(n);
  const CharMap m(interpolate_velocity_p1(mesh, [&](Point) { return Point{0.5 * h / dt, 0.0}; }), dt);
  const auto dec = decompose(mesh, m);
  // Lower triangle of cell (3, 3) slides half a cell to the left.
  const int k0 = 2 * (3 * n + 3);
  const auto& pieces = dec.pieces(k0);
  REQUIRE(pieces.size() == 3);
  std::map<int, double> areas;
  for (const auto& p : pieces) areas[p.source] = p.area;
  CHECK(areas.at(k0 - 2) == doctest::Approx(h * h / 8).epsilon(1e-12));
  CHECK(areas.at(k0) == doctest::Approx(h * h / 8).epsilon(1e-12));
  CHECK(areas.at(k0 + 1) == doctest::Approx(h * h / 4).epsilon(1e-12));
}

TEST_CASE("decomposition pieces partition each element") {
  for (int n : {8, 16}) {
    const auto mesh = square(n);
    const CharMap m(interpolate_velocity_p1(mesh, sinsin_velocity), 1.0 / n);
    const auto dec = decompose(mesh, m);
    int interior = 0;
    for (int e = 0; e < mesh->num_elements(); ++e) {
      double sum = 0.0;
      for (const auto& p : dec.pieces(e)) {
        sum += p.area;
        CHECK(p.area == doctest::Approx(polygon_signed_area(p.polygon)).epsilon(1e-12));
        CHECK(is_convex_ccw(p.polygon, 1e-10));
        // Each piece lies in K0 and maps into its source element.
        for (Point v : p.polygon) {
          const auto l0 = mesh->barycentric(e, v);
          const auto ll = mesh->barycentric(p.source, dec.map(e)(v));
          for (int i = 0; i < 3; ++i) {
            CHECK(l0[i] > -1e-10);
            CHECK(ll[i] > -1e-10);
          }
        }
      }
      if (dec.interior_mapped(e)) {
        ++interior;
        CHECK(std::abs(sum - mesh->area(e)) <= 1e-10 * mesh->area(e));
      } else {
        CHECK(sum <= mesh->area(e) * (1.0 + 1e-10));
      }
    }
    // The velocity vanishes on the boundary, so every image stays inside.
    CHECK(interior == mesh->num_elements());
  }
}

TEST_CASE("degenerate characteristic map") {
  const auto mesh = square(4);
  const CharMap m(interpolate_velocity_p1(mesh, [](Point p) { return p; }), 0.69);
  CHECK_THROWS_AS(decompose(mesh, m), DegenerateMap);
  const CharMap field(VectorField(rotation), 0.1);
  CHECK_THROWS_AS(decompose(mesh, field), std::invalid_argument);
}

TEST_CASE("exact composite term") {
  for (int k : {1, 2}) {
    const auto mesh = square(8);
    auto space = std::make_shared<const FeSpace>(mesh, k);
    const SparseMatrix mass = assemble_mass(*space);
    const FeFunction phi = oracle::random_function(space, 17 + k);

    const CharMap still(interpolate_velocity_p1(mesh, [](Point) { return Point{}; }), 0.1);
    const auto b0 = composite_term_exact(decompose(mesh, still), phi, *space);
    const auto mphi = mass.multiply(phi.coeffs());
    for (int i = 0; i < space->num_dofs(); ++i) CHECK(std::abs(b0[i] - mphi[i]) < 1e-12);

    const CharMap moving(interpolate_velocity_p1(mesh, sinsin_velocity), 0.125 / 8);
    const auto dec = decompose(mesh, moving);
    const auto bc = composite_term_exact(dec, phi, *space, PolygonSplit::centroid_fan);
    const auto bv = composite_term_exact(dec, phi, *space, PolygonSplit::vertex_fan);
    CHECK(rel_diff(bv, bc) < 1e-13);
    const SparseMatrix op = composite_operator_exact(dec, *space);
    CHECK(rel_diff(op.multiply(phi.coeffs()), bc) < 1e-14);

    // Constants are transported exactly: sum_i b_i = |Omega| when every image is interior.
    const FeFunction one(space, std::vector<double>(space->num_dofs(), 1.0));
    double total = 0.0;
    for (double v : composite_term_exact(dec, one, *space)) total += v;
    CHECK(std::abs(total - 1.0) < 1e-12);

    // (phi o X, phi) <= (1 + c dt) ||phi||^2 with c = 4 |u_h|_{1,inf}.
    const double c = 4.0 * moving.seminorm();
    CHECK(dot(bc, phi.coeffs()) <= (1.0 + c * moving.dt()) * dot(mphi, phi.coeffs()));
  }
}

TEST_CASE("quadrature composite term") {
  const auto mesh = square(16);
  for (int k : {1, 2}) {
    auto space = std::make_shared<const FeSpace>(mesh, k);
    const SparseMatrix mass = assemble_mass(*space);
    const FeFunction phi = oracle::random_function(space, 3);
    const auto b0 = composite_term_quadrature(*space,
                                              [](Point) { return Point{}; }, 0.1, phi,
                                              rule_of_degree(2 * k));
    const auto mphi = mass.multiply(phi.coeffs());
    for (int i = 0; i < space->num_dofs(); ++i) CHECK(std::abs(b0[i] - mphi[i]) < 1e-12);

    // Polynomial phi, smooth velocity, small dt: both schemes agree closely.
    const FeFunction poly = interpolate(space, [&](Point p) { return k == 1 ? p.x + 2.0 * p.y : p.x * p.y; });
    const double dt = 1e-3;
    const auto bq = composite_term_quadrature(*space, sinsin_velocity, dt, poly, seven_point_rule());
    const auto be = composite_term_exact(
        decompose(mesh, CharMap(interpolate_velocity_p1(mesh, sinsin_velocity), dt)), poly, *space);
    CHECK(rel_diff(bq, be) < 1e-3);

    const SparseMatrix op = composite_operator_quadrature(*space, sinsin_velocity, dt, seven_point_rule());
    CHECK(rel_diff(op.multiply(poly.coeffs()), bq) < 1e-14);
  }
}

TEST_CASE("feet leaving the domain contribute zero") {
  // Inward flow: feet x (1 + dt) of points near the rim leave the disk.
  const auto d = disk(16);
  auto space = std::make_shared<const FeSpace>(d, 1);
  const FeFunction one(space, std::vector<double>(space->num_dofs(), 1.0));
  const VectorField inward = [](Point p) { return -1.0 * p; };
  const double dt = 0.1;

  const auto bq = composite_term_quadrature(*space, inward, dt, one, seven_point_rule());
  double sum_q = 0.0;
  for (double v : bq) {
    CHECK(std::isfinite(v));
    sum_q += v;
  }
  CHECK(sum_q < d->total_area() - 1e-3);
  CHECK(sum_q > 0.5 * d->total_area());

  const auto dec = decompose(d, CharMap(interpolate_velocity_p1(d, inward), dt));
  int leaking = 0;
  for (int e = 0; e < d->num_elements(); ++e) leaking += !dec.interior_mapped(e);
  CHECK(leaking > 0);
  double sum_e = 0.0;
  for (double v : composite_term_exact(dec, one, *space)) sum_e += v;
  double piece_area = 0.0;
  for (int e = 0; e < d->num_elements(); ++e)
    for (const auto& p : dec.pieces(e)) piece_area += p.area;
  CHECK(sum_e == doctest::Approx(piece_area).epsilon(1e-12));
  // The preimage of the mesh under x -> 1.1 x has area |Omega| / 1.21.
  CHECK(sum_e == doctest::Approx(d->total_area() / 1.21).epsilon(1e-12));
}

TEST_CASE("decomposition dump format") {
  const auto mesh = square(4);
  const auto dec = decompose(mesh, CharMap(interpolate_velocity_p1(mesh, sinsin_velocity), 0.03));
  std::stringstream ss;
  write_decomposition(ss, dec);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(ss, line)) {
    std::istringstream ls(line);
    std::vector<double> tok;
    double v;
    while (ls >> v) tok.push_back(v);
    CHECK(tok.size() >= 3 + 6);
    CHECK((tok.size() - 3) % 2 == 0);
    CHECK(tok[0] >= 0);
    CHECK(tok[1] < mesh->num_elements());
    ++lines;
  }
  CHECK(lines == dec.total_pieces());
}
