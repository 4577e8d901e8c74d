// lgfem: run, sweep and verify the Lagrange-Galerkin convection-diffusion
// solvers on the built-in examples.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lgfem/advect.hpp"
#include "lgfem/errors.hpp"
#include "lgfem/examples.hpp"
#include "lgfem/harness.hpp"

namespace {

struct Options {
  std::string example = "sinsin";
  std::string scheme = "gslg";
  int degree = 1;
  int n = 8;
  std::string n_list;
  std::optional<double> dt;
  std::string dt_rule;
  std::optional<double> nu;
  double d1 = lgfem::kDefaultD1;
  std::string out;
  int jobs = 1;
  std::string dump_mesh;
  std::string dump_decomp;
};

void add_common(CLI::App* cmd, Options& o, bool sweep) {
  cmd->add_option("--example", o.example, "gauss-hill | sinsin")
      ->check(CLI::IsMember({"gauss-hill", "sinsin"}));
  cmd->add_option("--scheme", o.scheme, "gslg | lgq")->check(CLI::IsMember({"gslg", "lgq"}));
  cmd->add_option("--degree", o.degree, "finite element degree")->check(CLI::IsMember({1, 2}));
  if (sweep) {
    cmd->add_option("--n-list", o.n_list, "comma-separated resolutions, e.g. 8,16,32,64")
        ->required();
  } else {
    cmd->add_option("--n", o.n, "mesh resolution")->check(CLI::PositiveNumber);
  }
  auto* dt = cmd->add_option("--dt", o.dt, "fixed time increment");
  auto* rule = cmd->add_option("--dt-rule", o.dt_rule, "c1h | c2h2 | c3h2 | c4h3")
                   ->check(CLI::IsMember({"c1h", "c2h2", "c3h2", "c4h3"}));
  dt->excludes(rule);
  cmd->add_option("--nu", o.nu, "diffusion coefficient");
  cmd->add_option("--d1", o.d1, "time-step guard bound on dt*|u_h|_{1,inf}");
  cmd->add_option("--out", o.out, "write CSV here instead of stdout");
  if (sweep) {
    cmd->add_option("--jobs", o.jobs, "concurrent runs")->check(CLI::PositiveNumber);
  } else {
    cmd->add_option("--dump-mesh", o.dump_mesh, "write the mesh in text format");
    cmd->add_option("--dump-decomp", o.dump_decomp,
                    "write the first-step composite decomposition (gslg)");
  }
}

lgfem::SweepPlan plan_from(const Options& o) {
  lgfem::SweepPlan plan;
  plan.example = o.example;
  plan.scheme = lgfem::scheme_from_string(o.scheme);
  plan.degree = o.degree;
  plan.nu = o.nu;
  plan.d1 = o.d1;
  plan.dt = o.dt;
  if (!o.dt_rule.empty()) {
    plan.dt_rule = lgfem::dt_rule_from_string(o.dt_rule);
  }
  if (!plan.dt && !plan.dt_rule) {
    throw std::invalid_argument("one of --dt or --dt-rule is required");
  }
  return plan;
}

std::vector<int> parse_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (used != item.size() || v <= 0) {
      throw std::invalid_argument("bad --n-list entry '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) {
    throw std::runtime_error("cannot open " + o.out);
  }
  f << text;
}

void dump_extras(const Options& o, const lgfem::ProblemSpec& problem,
                 const lgfem::SchemeConfig& config) {
  if (o.dump_mesh.empty() && o.dump_decomp.empty()) {
    return;
  }
  const auto mesh = lgfem::build_mesh(problem.domain, config.n);
  if (!o.dump_mesh.empty()) {
    std::ofstream f(o.dump_mesh);
    lgfem::write_mesh(f, *mesh);
  }
  if (!o.dump_decomp.empty()) {
    const double t = config.dt;
    auto u_h = lgfem::interpolate_velocity_p1(
        mesh, [&](lgfem::Point p) { return problem.velocity(p, t); });
    lgfem::check_timestep(u_h, config.dt, config.d1);
    const lgfem::CharMap map(std::move(u_h), config.dt);
    std::ofstream f(o.dump_decomp);
    lgfem::write_decomposition(f, lgfem::decompose(mesh, map));
  }
}

int cmd_run(const Options& o) {
  lgfem::SweepPlan plan = plan_from(o);
  const lgfem::ProblemSpec problem = lgfem::example_by_name(o.example, o.nu);
  const lgfem::SchemeConfig config = lgfem::config_for(plan, problem, o.n);
  dump_extras(o, problem, config);
  const lgfem::RunReport r = lgfem::run(problem, config);
  emit(o, lgfem::csv_header() + "\n" + lgfem::csv_row(r, std::nullopt, std::nullopt) + "\n");
  return 0;
}

int cmd_sweep(const Options& o) {
  lgfem::SweepPlan plan = plan_from(o);
  plan.n_list = parse_list(o.n_list);
  const auto rows = lgfem::run_sweep(plan, o.jobs);
  std::string text = lgfem::csv_header() + "\n";
  for (const auto& row : rows) {
    text += lgfem::csv_row(row.report, row.order_l2, row.order_h1) + "\n";
  }
  emit(o, text);
  return 0;
}

int cmd_verify(const Options& o) {
  std::ostringstream text;
  if (o.example == "sinsin") {
    const double nu = o.nu.value_or(1e-2);
    text << "sinsin forcing max discrepancy (nu=" << nu << "): " << lgfem::verify_forcing(nu)
         << "\n";
  } else {
    const double nu = o.nu.value_or(1e-5);
    text << "gauss-hill PDE residual (nu=" << nu << "): " << lgfem::gaussian_hill_residual(nu)
         << "\n";
  }
  emit(o, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lagrange-Galerkin finite elements for convection-diffusion"};
  app.require_subcommand(1);
  Options run_opts;
  Options sweep_opts;
  Options verify_opts;
  auto* run = app.add_subcommand("run", "single run, one CSV row");
  add_common(run, run_opts, false);
  auto* sweep = app.add_subcommand("sweep", "convergence sweep with observed orders");
  add_common(sweep, sweep_opts, true);
  auto* verify = app.add_subcommand("verify", "check the built-in exact solutions");
  verify->add_option("--example", verify_opts.example)
      ->check(CLI::IsMember({"gauss-hill", "sinsin"}));
  verify->add_option("--nu", verify_opts.nu);
  verify->add_option("--out", verify_opts.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*sweep) return cmd_sweep(sweep_opts);
    return cmd_verify(verify_opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "lgfem: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const lgfem::TimestepViolation& e) {
    std::cerr << "lgfem: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "lgfem: " << e.what() << "\n";
    return 1;
  }
}
