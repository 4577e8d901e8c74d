#include "lgfem/harness.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <stdexcept>
#include <thread>

#include "lgfem/examples.hpp"

namespace lgfem {

DtRule dt_rule_from_string(const std::string& s) {
  if (s == "c1h") return DtRule::c1h;
  if (s == "c2h2") return DtRule::c2h2;
  if (s == "c3h2") return DtRule::c3h2;
  if (s == "c4h3") return DtRule::c4h3;
  throw std::invalid_argument("unknown dt rule '" + s + "'");
}

const char* to_string(DtRule r) {
  switch (r) {
    case DtRule::c1h: return "c1h";
    case DtRule::c2h2: return "c2h2";
    case DtRule::c3h2: return "c3h2";
    case DtRule::c4h3: return "c4h3";
  }
  return "?";
}

double dt_rule_constant(const std::string& example, DtRule rule) {
  if (example == "gauss-hill") {
    const double pi = M_PI;
    switch (rule) {
      case DtRule::c1h: return 4.0 / (5.0 * pi);
      case DtRule::c2h2: return 64.0 / (5.0 * pi * pi);
      case DtRule::c3h2: return 128.0 / (5.0 * pi * pi);
      case DtRule::c4h3: return 2048.0 / (5.0 * pi * pi * pi);
    }
  }
  if (example == "sinsin") {
    switch (rule) {
      case DtRule::c1h: return 0.125;
      case DtRule::c2h2: return 1.0;
      case DtRule::c3h2: return 1.0;
      case DtRule::c4h3: return 5.12;
    }
  }
  throw std::invalid_argument("no dt-rule constants for example '" + example + "'");
}

double dt_from_rule(DtRule rule, double constant, double h) {
  switch (rule) {
    case DtRule::c1h: return constant * h;
    case DtRule::c2h2:
    case DtRule::c3h2: return constant * h * h;
    case DtRule::c4h3: return constant * h * h * h;
  }
  throw std::invalid_argument("dt_from_rule: bad rule");
}

std::vector<std::optional<double>> observed_orders(const std::vector<double>& errors) {
  std::vector<std::optional<double>> out(errors.size());
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double a = errors[i - 1];
    const double b = errors[i];
    if (std::isfinite(a) && std::isfinite(b) && a > 0.0 && b > 0.0) {
      out[i] = std::log2(a / b);
    }
  }
  return out;
}

SchemeConfig config_for(const SweepPlan& plan, const ProblemSpec& problem, int n) {
  SchemeConfig c;
  c.scheme = plan.scheme;
  c.degree = plan.degree;
  c.n = n;
  c.d1 = plan.d1;
  c.force_interpolant = plan.force_interpolant;
  if (plan.dt) {
    c.dt = *plan.dt;
  } else if (plan.dt_rule) {
    const double k = plan.dt_constant.value_or(dt_rule_constant(plan.example, *plan.dt_rule));
    c.dt = dt_from_rule(*plan.dt_rule, k, nominal_h(problem.domain, n));
  } else {
    throw std::invalid_argument("either dt or a dt rule is required");
  }
  return c;
}

std::vector<SweepRow> run_sweep(const SweepPlan& plan, int jobs) {
  if (plan.n_list.size() < 2) {
    throw std::invalid_argument("sweep needs at least two resolutions");
  }
  for (std::size_t i = 1; i < plan.n_list.size(); ++i) {
    if (plan.n_list[i] != 2 * plan.n_list[i - 1]) {
      throw std::invalid_argument("sweep resolutions must double at each entry");
    }
  }
  const ProblemSpec problem = example_by_name(plan.example, plan.nu);
  std::vector<SchemeConfig> configs;
  for (int n : plan.n_list) {
    configs.push_back(config_for(plan, problem, n));
  }

  const std::size_t count = configs.size();
  std::vector<std::optional<RunReport>> reports(count);
  std::vector<std::exception_ptr> failures(count);
  auto work = [&](std::size_t i) {
    try {
      reports[i] = run(problem, configs[i]);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      work(i);
    }
  } else {
    // Largest runs first so they overlap with the small ones.
    std::vector<std::thread> pool;
    std::size_t next = count;
    while (next > 0) {
      while (pool.size() < static_cast<std::size_t>(jobs) && next > 0) {
        pool.emplace_back(work, --next);
      }
      for (auto& th : pool) {
        th.join();
      }
      pool.clear();
    }
  }
  for (const auto& f : failures) {
    if (f) {
      std::rethrow_exception(f);
    }
  }

  std::vector<double> el2;
  std::vector<double> eh1;
  for (const auto& r : reports) {
    el2.push_back(r->e_l2);
    eh1.push_back(r->e_h1);
  }
  const auto o2 = observed_orders(el2);
  const auto o1 = observed_orders(eh1);
  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < count; ++i) {
    rows.push_back({std::move(*reports[i]), o2[i], o1[i]});
  }
  return rows;
}

std::string csv_header() {
  return "example,scheme,degree,N,h,dt,nu,steps,E_L2,E_H1,order_L2,order_H1,"
         "stability_ratio,diverged,cg_iters_mean,runtime_s";
}

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string fmt_opt(std::optional<double> v) { return v ? fmt("%.4f", *v) : std::string(); }

}  // namespace

std::string csv_row(const RunReport& r, std::optional<double> order_l2,
                    std::optional<double> order_h1, bool with_runtime) {
  std::string s;
  s += r.example + ',';
  s += std::string(to_string(r.scheme)) + ',';
  s += std::to_string(r.degree) + ',';
  s += std::to_string(r.n) + ',';
  s += fmt("%.10g", r.h) + ',';
  s += fmt("%.10g", r.dt) + ',';
  s += fmt("%g", r.nu) + ',';
  s += std::to_string(r.steps) + ',';
  s += fmt("%.6e", r.e_l2) + ',';
  s += fmt("%.6e", r.e_h1) + ',';
  s += fmt_opt(order_l2) + ',';
  s += fmt_opt(order_h1) + ',';
  s += fmt("%.6e", r.ledger.ratio) + ',';
  s += std::string(r.diverged ? "1" : "0") + ',';
  s += fmt("%.3f", r.cg_iters_mean) + ',';
  if (with_runtime) {
    s += fmt("%.3f", r.runtime_s);
  }
  return s;
}

}  // namespace lgfem
