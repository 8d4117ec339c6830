#include "commands.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <lavrentiev/csv.hpp>

#include "acceptance.hpp"

namespace lavrentiev::cli {

namespace {

void emit(const std::string& csv, const std::string& path, const CommandContext& ctx) {
  if (path.empty()) {
    *ctx.out << csv;
    ctx.out->flush();
  } else {
    write_text_file(path, csv);
  }
}

std::string fmt_exponent(const std::optional<double>& e) {
  return e ? fmt::format("{:.4f}", *e) : std::string("none");
}

void summarise(const RateReport& r, const CommandContext& ctx) {
  fmt::print(*ctx.err, "rule {}: slope {:.4f} (r2 {:.4f}), expected {}, tolerance {}: {}\n",
             to_string(r.rule), r.fit.slope, r.fit.r2, fmt_exponent(r.expected_exponent), r.tolerance,
             r.pass ? "pass" : "FAIL");
  if (!ctx.verbose) return;
  for (std::size_t i = 0; i < r.deltas.size(); ++i) {
    fmt::print(*ctx.err, "  delta {:.4e}  median error {:.6e}\n", r.deltas[i], r.median_errors[i]);
  }
  for (const RateRow& row : r.rows) {
    fmt::print(*ctx.err, "  delta {:.4e} seed {} alpha {:.4e} error {:.4e} estimate slack {:.3e}/{:.3e}\n",
               row.delta, row.seed, row.alpha, row.error, row.estimates.error_slack,
               row.estimates.image_slack);
  }
}

// Per-cell checks attached by the rule, plus the basic estimates.
bool cells_ok(const RateReport& r) {
  for (const RateRow& row : r.rows) {
    if (!row.estimates.holds) return false;
    if (!row.bracket_ok.value_or(true) || !row.lower_bound_ok.value_or(true)) return false;
    if (!row.lepskii_bound_ok.value_or(true)) return false;
  }
  return true;
}

}  // namespace

int cmd_rates(const RunConfig& cfg, const CommandContext& ctx) {
  const RateReport r = run_rate_study(cfg.experiment);
  emit(rate_csv(r), cfg.experiment.output, ctx);
  summarise(r, ctx);
  const bool ok = r.pass && cells_ok(r);
  if (!cells_ok(r)) fmt::print(*ctx.err, "per-cell checks failed\n");
  return ok ? exit_ok : exit_check_failed;
}

int cmd_rules(const RunConfig& cfg, const CommandContext& ctx) {
  const ComparisonReport r = run_rule_comparison(cfg.experiment);
  emit(comparison_csv(r), cfg.experiment.output, ctx);
  bool ok = true;
  for (const RateReport& rule : r.rules) {
    summarise(rule, ctx);
    const bool cells = cells_ok(rule);
    if (!cells) fmt::print(*ctx.err, "rule {}: per-cell checks failed\n", to_string(rule.rule));
    ok = ok && rule.pass && cells;
  }
  return ok ? exit_ok : exit_check_failed;
}

int cmd_distance(const RunConfig& cfg, const CommandContext& ctx) {
  const DistanceStudyReport r = run_distance_study(cfg.experiment);
  if (cfg.experiment.output.empty()) {
    *ctx.out << profile_csv(r.profile) << '\n' << prediction_csv(r);
  }
  fmt::print(*ctx.err, "profile slope {:.4f}; predicted exponent {:.4f}; observed exponent {:.4f}{}\n",
             r.profile_fit.slope, r.predicted_fit.slope, r.observed_fit.slope,
             r.prediction.collapsed ? "; profile collapsed, alpha = sqrt(delta)" : "");
  bool ok = r.profile.theta_monotone;
  for (ProfileStatus s : r.profile.status) ok = ok && s == ProfileStatus::ok;
  if (ctx.verbose) {
    for (std::size_t i = 0; i < r.profile.R.size(); ++i) {
      fmt::print(*ctx.err, "  R {:.4e}  d {:.6e}  lambda {:.4e}  theta residual {:.2e}\n", r.profile.R[i],
                 r.profile.d[i], r.profile.lambda[i], r.profile.theta_residual[i]);
    }
  }
  if (!ok) fmt::print(*ctx.err, "distance profile has out-of-range radii or non-monotone theta\n");
  if (const auto& e = cfg.experiment.expected_exponent) {
    const bool rate_ok = std::abs(r.predicted_fit.slope - *e) <= cfg.experiment.slope_tolerance;
    fmt::print(*ctx.err, "predicted exponent vs expected {:.4f}: {}\n", *e, rate_ok ? "pass" : "FAIL");
    ok = ok && rate_ok;
  }
  return ok ? exit_ok : exit_check_failed;
}

int cmd_vsc(const RunConfig& cfg, const CommandContext& ctx) {
  ProblemSpec spec = cfg.experiment.problem;
  spec.n = cfg.vsc.n;
  const SyntheticProblem p = make_problem(spec);
  const VscReport r = vsc_verify(*p.forward, p.xdag, p.xbar, cfg.vsc.variant, cfg.vsc.beta, cfg.vsc.sampler);
  const std::string csv = fmt::format("mu,beta,fitted_coefficient,violations,sample_count\n{:.17g},{:.17g},{:.17g},{},{}\n",
                                      r.mu, r.beta, r.fitted_coefficient, r.violations, r.sample_count);
  emit(csv, cfg.experiment.output, ctx);
  bool ok = r.violations == 0;
  std::string bound = "no bound";
  if (cfg.vsc.bound) {
    ok = ok && r.fitted_coefficient <= *cfg.vsc.bound;
    bound = fmt::format("bound {:.10f}", *cfg.vsc.bound);
  }
  fmt::print(*ctx.err, "vsc mu {} beta {}: fitted coefficient {:.10f} ({}), {} violations in {} samples: {}\n",
             r.mu, r.beta, r.fitted_coefficient, bound, r.violations, r.sample_count, ok ? "pass" : "FAIL");
  return ok ? exit_ok : exit_check_failed;
}

int cmd_fracpow(const RunConfig& cfg, const CommandContext& ctx) {
  const Grid grid(cfg.fracpow.n);
  auto a = volterra(grid);
  const DiscreteFunction v =
      DiscreteFunction::sample(grid, [](double t) { return std::cos(std::numbers::pi * t) + t * t; });
  const FractionalPowerResult d = fractional_power_apply(*a, cfg.fracpow.dunford, v);
  const DiscreteFunction rl = riemann_liouville(grid, cfg.fracpow.dunford.p, v);
  std::string csv = "t,dunford,riemann_liouville\n";
  for (int i = 0; i < grid.size(); ++i) {
    csv += fmt::format("{:.17g},{:.17g},{:.17g}\n", grid.node(i + 1), d.value[i], rl[i]);
  }
  emit(csv, cfg.experiment.output, ctx);
  const double rel = norm(d.value - rl) / norm(rl);
  const bool ok = rel <= cfg.fracpow.tolerance;
  fmt::print(*ctx.err, "p = {}: relative L2 discrepancy {:.3e} (tolerance {:.1e}), tail estimate {:.2e}{}: {}\n",
             cfg.fracpow.dunford.p, rel, cfg.fracpow.tolerance, d.tail_estimate,
             d.accuracy_warning ? " [tail warning]" : "", ok ? "pass" : "FAIL");
  return ok ? exit_ok : exit_check_failed;
}

int cmd_selftest(const CommandContext& ctx) {
  const std::vector<CriterionResult> results = run_acceptance(ctx.verbose ? ctx.err : nullptr);
  int failed = 0;
  for (const CriterionResult& r : results) {
    *ctx.out << format_result(r) << '\n';
    failed += r.pass ? 0 : 1;
  }
  fmt::print(*ctx.err, "{} of {} criteria passed\n", results.size() - failed, results.size());
  return failed == 0 ? exit_ok : exit_check_failed;
}

}  // namespace lavrentiev::cli
