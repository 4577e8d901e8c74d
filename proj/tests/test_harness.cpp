#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "lgfem/examples.hpp"
#include "lgfem/harness.hpp"

using namespace lgfem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Cli {
  int status = -1;
  std::string out;
};

Cli run_cli(const std::string& args) {
  Cli r;
  const std::string cmd = std::string(LGFEM_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

}  // namespace

TEST_CASE("manufactured forcing matches the exact solution") {
  CHECK(verify_forcing(1e-2) < 1e-5);
  CHECK(verify_forcing(0.0) < 1e-5);
  CHECK(verify_forcing(1e-5, 200, 9) < 1e-5);

  // cos(2 pi t) vanishes at t = 1/4, leaving only the time derivative.
  for (Point x : {Point{0.3, 0.2}, Point{0.71, 0.45}}) {
    CHECK(std::abs(sinsin_exact(x, 0.25)) < 1e-15);
    const double dphidt = -2.0 * kPi * std::pow(std::sin(kPi * x.x), 2) * std::sin(2.0 * kPi * x.y);
    CHECK(sinsin_source(x, 0.25, 1e-2) == doctest::Approx(dphidt).epsilon(1e-12));
  }
  // Homogeneous boundary values.
  CHECK(std::abs(sinsin_exact({0.0, 0.4}, 0.1)) < 1e-15);
  CHECK(std::abs(sinsin_exact({0.4, 1.0}, 0.1)) < 1e-15);
}

TEST_CASE("rotating Gaussian hill") {
  CHECK(gaussian_hill_exact(kHillCenter, 0.0, 1e-5) == 1.0);
  const double peak = 0.01 / (0.01 + 8.0 * kPi * 1e-5);
  CHECK(gaussian_hill_exact(kHillCenter, 2.0 * kPi, 1e-5) == doctest::Approx(peak).epsilon(1e-13));
  CHECK(peak == doctest::Approx(0.97549).epsilon(1e-4));
  // Quarter turn moves the peak to (0, 0.25).
  CHECK(gaussian_hill_exact({0.0, 0.25}, 0.5 * kPi, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  for (int i = 0; i < 64; ++i) {
    const double th = 2.0 * kPi * i / 64;
    for (double t : {0.0, 1.0, 2.0 * kPi}) {
      CHECK(gaussian_hill_exact({std::cos(th), std::sin(th)}, t, 1e-5) < 1e-15);
    }
  }
  CHECK(gaussian_hill_residual(1e-5) < 1e-4);

  // Analytic gradient against central differences.
  const Point x{0.2, 0.05};
  const double d = 1e-6;
  const Point g = gaussian_hill_gradient(x, 0.7, 1e-5);
  const double gx = (gaussian_hill_exact({x.x + d, x.y}, 0.7, 1e-5) - gaussian_hill_exact({x.x - d, x.y}, 0.7, 1e-5)) / (2 * d);
  const double gy = (gaussian_hill_exact({x.x, x.y + d}, 0.7, 1e-5) - gaussian_hill_exact({x.x, x.y - d}, 0.7, 1e-5)) / (2 * d);
  CHECK(g.x == doctest::Approx(gx).epsilon(1e-6));
  CHECK(g.y == doctest::Approx(gy).epsilon(1e-6));
}

TEST_CASE("example lookup") {
  CHECK(example_by_name("sinsin").nu == 1e-2);
  CHECK(example_by_name("gauss-hill").nu == 1e-5);
  CHECK(example_by_name("sinsin", 1e-5).nu == 1e-5);
  CHECK(example_by_name("gauss-hill").domain == Domain::unit_disk);
  CHECK_THROWS_AS(example_by_name("hill"), std::invalid_argument);
}

TEST_CASE("observed orders") {
  const auto o = observed_orders({0.4, 0.1, 0.025});
  REQUIRE(o.size() == 3);
  CHECK_FALSE(o[0].has_value());
  CHECK(*o[1] == doctest::Approx(2.0));
  CHECK(*o[2] == doctest::Approx(2.0));

  const auto scaled = observed_orders({4.0, 1.0, 0.25});
  CHECK(*scaled[1] == doctest::Approx(*o[1]).epsilon(1e-14));

  const auto blanks = observed_orders({0.0, 0.0, 1.0, std::nan("")});
  for (const auto& v : blanks) CHECK_FALSE(v.has_value());
}

TEST_CASE("dt rules") {
  CHECK(dt_rule_constant("sinsin", DtRule::c1h) == 0.125);
  CHECK(dt_rule_constant("sinsin", DtRule::c4h3) == 5.12);
  CHECK(dt_rule_constant("gauss-hill", DtRule::c3h2) == doctest::Approx(128.0 / (5.0 * kPi * kPi)));
  CHECK(dt_rule_constant("gauss-hill", DtRule::c4h3) == doctest::Approx(2048.0 / (5.0 * std::pow(kPi, 3))));
  CHECK(dt_from_rule(DtRule::c4h3, 5.12, 0.5) == doctest::Approx(0.64));
  CHECK(dt_rule_from_string("c2h2") == DtRule::c2h2);
  CHECK_THROWS_AS(dt_rule_from_string("c5"), std::invalid_argument);

  // On the disk, h = 2 pi / N: c1 h = 1.6 / N.
  SweepPlan plan;
  plan.example = "gauss-hill";
  plan.dt_rule = DtRule::c1h;
  const SchemeConfig c = config_for(plan, gauss_hill(), 32);
  CHECK(c.dt == doctest::Approx(1.6 / 32).epsilon(1e-14));
}

TEST_CASE("sweep output") {
  SweepPlan plan;
  plan.example = "sinsin";
  plan.degree = 1;
  plan.n_list = {4, 8};
  plan.dt_rule = DtRule::c1h;
  const auto rows = run_sweep(plan, 1);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].order_l2.has_value());
  CHECK(rows[1].order_l2.has_value());

  CHECK(csv_header() ==
        "example,scheme,degree,N,h,dt,nu,steps,E_L2,E_H1,order_L2,order_H1,stability_ratio,diverged,"
        "cg_iters_mean,runtime_s");
  const std::string row = csv_row(rows[1].report, rows[1].order_l2, rows[1].order_h1, false);
  const auto cols = split(row, ',');
  REQUIRE(cols.size() == 16);
  CHECK(cols[0] == "sinsin");
  CHECK(cols[1] == "gslg");
  CHECK(cols[3] == "8");
  CHECK(cols[7] == "64");
  CHECK(cols[13] == "0");
  CHECK(cols[15].empty());

  // Threaded sweeps reproduce the serial rows byte for byte.
  const auto again = run_sweep(plan, 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(csv_row(again[i].report, again[i].order_l2, again[i].order_h1, false) ==
          csv_row(rows[i].report, rows[i].order_l2, rows[i].order_h1, false));
  }

  plan.force_interpolant = true;
  for (const auto& r : run_sweep(plan, 1)) {
    CHECK(r.report.e_l2 == 0.0);
    CHECK(r.report.e_h1 == 0.0);
    CHECK_FALSE(r.order_l2.has_value());
    const auto c = split(csv_row(r.report, r.order_l2, r.order_h1), ',');
    CHECK(c[10].empty());
    CHECK(c[11].empty());
  }

  plan.n_list = {4, 12};
  CHECK_THROWS_AS(run_sweep(plan, 1), std::invalid_argument);
  plan.n_list = {8};
  CHECK_THROWS_AS(run_sweep(plan, 1), std::invalid_argument);
}

TEST_CASE("command line") {
  const Cli bad = run_cli("run --example sinsin --scheme gslg --degree 1 --n 8 --dt 2.0");
  CHECK(bad.status == 2);
  CHECK(run_cli("run --example nope").status == 2);
  CHECK(run_cli("run --example sinsin --n 8 --dt 0.1 --dt-rule c1h").status == 2);
  CHECK(run_cli("run --example gauss-hill --n 16 --dt 0.5").status == 3);

  const Cli ok = run_cli("run --example sinsin --scheme gslg --degree 1 --n 8 --dt-rule c1h --nu 1e-2");
  REQUIRE(ok.status == 0);
  const auto lines = split(ok.out, '\n');
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == csv_header());
  const auto cols = split(lines[1], ',');
  REQUIRE(cols.size() == 16);
  const double e = std::stod(cols[8]);
  // Reference 8.97e-2 on an unstructured mesh; within a factor 2 on ours.
  CHECK(e > 8.97e-2 / 2.0);
  CHECK(e < 8.97e-2 * 2.0);

  const Cli v = run_cli("verify --example sinsin");
  CHECK(v.status == 0);
  CHECK(v.out.find("discrepancy") != std::string::npos);
}
