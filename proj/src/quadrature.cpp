#include "lgfem/quadrature.hpp"

#include <cmath>
#include <string>

namespace lgfem {

namespace {

void add_centroid(TriangleRule& r, double w) {
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(w);
}

// Orbit of (a, a, 1-2a).
void add_orbit3(TriangleRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  for (const auto& p : {std::array{a, a, b}, std::array{a, b, a}, std::array{b, a, a}}) {
    r.points.push_back(p);
    r.weights.push_back(w);
  }
}

// Orbit of (a, b, 1-a-b).
void add_orbit6(TriangleRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  for (const auto& p : {std::array{a, b, c}, std::array{a, c, b}, std::array{b, a, c},
                        std::array{b, c, a}, std::array{c, a, b}, std::array{c, b, a}}) {
    r.points.push_back(p);
    r.weights.push_back(w);
  }
}

TriangleRule make_rule(int degree) {
  TriangleRule r;
  r.degree = degree;
  switch (degree) {
    case 1:
      add_centroid(r, 1.0);
      break;
    case 2:
      add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
      break;
    case 4:
      add_orbit3(r, 0.44594849091596488631832925388305, 0.22338158967801146569500700843312);
      add_orbit3(r, 0.091576213509770743459571463402202, 0.10995174365532186763832632490021);
      break;
    case 5: {
      const double s = std::sqrt(15.0);
      add_centroid(r, 9.0 / 40.0);
      add_orbit3(r, (6.0 - s) / 21.0, (155.0 - s) / 1200.0);
      add_orbit3(r, (6.0 + s) / 21.0, (155.0 + s) / 1200.0);
      break;
    }
    case 6:
      add_orbit3(r, 0.24928674517091042129163855310702, 0.11678627572637936602528961138558);
      add_orbit3(r, 0.063089014491502228340331602870819, 0.050844906370206816920936809106869);
      add_orbit6(r, 0.053145049844816947353249671631398, 0.31035245103378440541660773395655,
                 0.082851075618373575193553456420442);
      break;
    default:
      throw std::logic_error("make_rule: no rule of degree " + std::to_string(degree));
  }
  return r;
}

}  // namespace

const TriangleRule& rule_of_degree(int d) {
  static const TriangleRule r1 = make_rule(1);
  static const TriangleRule r2 = make_rule(2);
  static const TriangleRule r4 = make_rule(4);
  static const TriangleRule r6 = make_rule(6);
  switch (d) {
    case 1:
      return r1;
    case 2:
      return r2;
    case 3:
    case 4:
      return r4;
    case 5:
    case 6:
      return r6;
    default:
      throw std::invalid_argument("rule_of_degree: degree must be in 1..6, got " +
                                  std::to_string(d));
  }
}

const TriangleRule& seven_point_rule() {
  static const TriangleRule r7 = make_rule(5);
  return r7;
}

}  // namespace lgfem
