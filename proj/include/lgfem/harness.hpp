#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lgfem/schemes.hpp"

namespace lgfem {

/// Time-step couplings dt = c1 h, c2 h^2, c3 h^2, c4 h^3.
enum class DtRule { c1h, c2h2, c3h2, c4h3 };

DtRule dt_rule_from_string(const std::string& s);
const char* to_string(DtRule r);

/// Default constant of a rule for a built-in example ("gauss-hill" uses
/// 4/(5 pi), 64/(5 pi^2), 128/(5 pi^2), 2048/(5 pi^3); "sinsin" uses 0.125,
/// 1, 1, 5.12).
double dt_rule_constant(const std::string& example, DtRule rule);
double dt_from_rule(DtRule rule, double constant, double h);

/// log2(E(N) / E(2N)) for consecutive entries; the first entry and any pair
/// with a zero or non-finite error yield no value.
std::vector<std::optional<double>> observed_orders(const std::vector<double>& errors);

struct SweepPlan {
  std::string example;
  Scheme scheme = Scheme::gslg;
  int degree = 1;
  std::vector<int> n_list;
  std::optional<DtRule> dt_rule;
  std::optional<double> dt_constant;  // overrides the example default
  std::optional<double> dt;           // fixed dt instead of a rule
  std::optional<double> nu;
  double d1 = 0.2;
  bool force_interpolant = false;
};

struct SweepRow {
  RunReport report;
  std::optional<double> order_l2;
  std::optional<double> order_h1;
};

/// Config for one N of a plan.
SchemeConfig config_for(const SweepPlan& plan, const ProblemSpec& problem, int n);

/// Runs every N of the plan (concurrently when jobs > 1) and attaches
/// observed orders. Requires >= 2 entries, each double the previous.
std::vector<SweepRow> run_sweep(const SweepPlan& plan, int jobs = 1);

std::string csv_header();
/// One CSV row; `with_runtime` false blanks the runtime column for
/// byte-level comparisons.
std::string csv_row(const RunReport& r, std::optional<double> order_l2,
                    std::optional<double> order_h1, bool with_runtime = true);

}  // namespace lgfem
