#include "lavrentiev/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include <fmt/format.h>

#include "lavrentiev/csv.hpp"
#include "lavrentiev/error.hpp"
#include "parallel.hpp"

namespace lavrentiev {

int default_grid_size(const ProblemSpec& problem) {
  if (problem.kind == ProblemKind::elliptic) return 200;
  return problem.source == VolterraSource::benchmark_Aw ? 400 : 100000;
}

namespace {

double smooth_w(double t) { return std::cos(std::numbers::pi * t); }

}  // namespace

SyntheticProblem make_problem(const ProblemSpec& spec) {
  const int n = spec.n > 0 ? spec.n : default_grid_size(spec);
  if (spec.kind == ProblemKind::elliptic) {
    const Grid grid(n, Grid::Layout::interior);
    auto model = std::make_shared<const EllipticModel1D>(grid, spec.xi);
    // Smooth source and a range-type condition q+ - qbar = F'(q+) w.
    DiscreteFunction qdag = DiscreteFunction::sample(
        grid, [](double t) { return 20.0 * std::sin(std::numbers::pi * t); });
    DiscreteFunction w = DiscreteFunction::sample(
        grid, [](double t) { return 10.0 * std::sin(std::numbers::pi * t); });
    DiscreteFunction qbar = qdag - model->derivative_apply(qdag, w);
    DiscreteFunction y = model->apply(qdag);
    return SyntheticProblem{spec, model, nullptr, qdag, qbar, y, w};
  }

  const Grid grid(n);
  auto op = volterra(grid);
  auto forward = linear_forward(op);
  const DiscreteFunction zero = DiscreteFunction::zeros(grid);
  std::optional<DiscreteFunction> w;
  DiscreteFunction xdag = zero;
  switch (spec.source) {
    case VolterraSource::constant_one:
      xdag = DiscreteFunction::constant(grid, 1.0);
      break;
    case VolterraSource::benchmark_Aw:
      w = DiscreteFunction::sample(grid, smooth_w);
      xdag = (*op)(*w);
      break;
    case VolterraSource::fractional: {
      DunfordSpec dunford;
      dunford.p = spec.p;
      xdag = fractional_power_apply(*op, dunford, DiscreteFunction::sample(grid, smooth_w)).value;
      break;
    }
  }
  DiscreteFunction y = (*op)(xdag);
  return SyntheticProblem{spec, forward, op, xdag, zero, y, w};
}

std::vector<double> DeltaGrid::values() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(count));
  double d = delta0;
  for (double& v : out) {
    v = d;
    d *= ratio;
  }
  return out;
}

void DeltaGrid::validate() const {
  if (!(delta0 > 0.0)) throw ConfigError("noise.delta0 must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("noise.ratio must lie in (0,1)");
  if (count < 4) throw ConfigError("noise.count must be at least 4 for slope fitting");
}

std::string to_string(RuleSpec::Kind kind) {
  switch (kind) {
    case RuleSpec::Kind::apriori: return "apriori";
    case RuleSpec::Kind::discrepancy: return "discrepancy";
    case RuleSpec::Kind::lepskii: return "lepskii";
  }
  return "?";
}

std::string to_string(VolterraSource source) {
  switch (source) {
    case VolterraSource::constant_one: return "constant_one";
    case VolterraSource::benchmark_Aw: return "benchmark_Aw";
    case VolterraSource::fractional: return "fractional";
  }
  return "?";
}

std::string to_string(XiKind kind) {
  switch (kind) {
    case XiKind::linear: return "linear";
    case XiKind::cubic: return "cubic";
    case XiKind::arctan: return "arctan";
  }
  return "?";
}

APrioriRule default_apriori_rule(const ProblemSpec& problem) {
  // ||F'|| <= 1/pi^2 for the elliptic model, so alpha = sqrt(delta) would not be
  // small against the operator at the top of the default delta grid.
  if (problem.kind == ProblemKind::elliptic) return APrioriRule::power_law(0.3, 0.5);
  switch (problem.source) {
    case VolterraSource::constant_one: return APrioriRule::power_law(1.0, 2.0 / 3.0);
    case VolterraSource::benchmark_Aw: return APrioriRule::power_law(1.0, 0.5);
    case VolterraSource::fractional: return APrioriRule::power_law(1.0, 1.0 / (problem.p + 1.0));
  }
  return APrioriRule::power_law(1.0, 0.5);
}

double default_expected_exponent(const ProblemSpec& problem) {
  if (problem.kind == ProblemKind::elliptic) return 0.5;
  switch (problem.source) {
    case VolterraSource::constant_one: return 1.0 / 3.0;
    case VolterraSource::benchmark_Aw: return 0.5;
    case VolterraSource::fractional: return problem.p / (problem.p + 1.0);
  }
  return 0.5;
}

std::vector<double> DistanceStudySpec::radii() const {
  if (!(r_min > 0.0 && r_min < r_max) || r_count < 2) {
    throw ConfigError("distance: need 0 < r_min < r_max and r_count >= 2");
  }
  std::vector<double> out(static_cast<std::size_t>(r_count));
  const double a = std::log(r_min);
  const double b = std::log(r_max);
  for (int i = 0; i < r_count; ++i) out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (r_count - 1));
  out.back() = r_max;
  return out;
}

void ExperimentConfig::validate() const {
  if (problem.n != 0 && problem.n < 2) throw ConfigError("problem.n must be at least 2");
  if (problem.kind == ProblemKind::volterra && problem.source == VolterraSource::fractional &&
      !(problem.p > 0.0 && problem.p < 1.0)) {
    throw ConfigError("problem.p must lie in (0,1)");
  }
  deltas.validate();
  if (seeds.empty()) throw ConfigError("noise.seeds must not be empty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("noise.seeds must be distinct");
  }
  if (rule.apriori) rule.apriori->validate();
  rule.discrepancy.validate();
  rule.lepskii.validate();
  if (!(rule.lepskii_alpha0_over_delta > 0.0)) {
    throw ConfigError("rule.lepskii.alpha0_over_delta must be positive");
  }
  if (!(slope_tolerance > 0.0)) throw ConfigError("slope_tolerance must be positive");
  if (!(newton_tol > 0.0) || max_newton_iters < 1) {
    throw ConfigError("solver: newton_tol must be positive and max_newton_iters >= 1");
  }
}

std::vector<double> median_errors(const std::vector<RateRow>& rows,
                                  const std::vector<double>& deltas) {
  std::vector<double> out;
  out.reserve(deltas.size());
  for (double delta : deltas) {
    std::vector<double> e;
    for (const RateRow& r : rows) {
      if (r.delta == delta) e.push_back(r.error);
    }
    if (e.empty()) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    std::sort(e.begin(), e.end());
    const std::size_t m = e.size() / 2;
    out.push_back(e.size() % 2 == 1 ? e[m] : 0.5 * (e[m - 1] + e[m]));
  }
  return out;
}

namespace {

struct Cell {
  double delta;
  std::uint64_t seed;
};

std::vector<Cell> make_cells(const std::vector<double>& deltas, std::vector<std::uint64_t> seeds) {
  std::sort(seeds.begin(), seeds.end());
  std::vector<Cell> cells;
  for (double d : deltas) {
    for (std::uint64_t s : seeds) cells.push_back({d, s});
  }
  return cells;
}

LavrentievConfig solver_config(const ExperimentConfig& cfg) {
  LavrentievConfig c;
  c.newton_tol = cfg.newton_tol;
  c.max_newton_iters = cfg.max_newton_iters;
  return c;
}

RateRow finish_row(const SyntheticProblem& prob, const Cell& cell, const RegularizedSolution& sol) {
  RateRow row;
  row.delta = cell.delta;
  row.seed = cell.seed;
  row.alpha = sol.alpha;
  row.error = norm(sol.x - prob.xdag);
  row.discrepancy = sol.discrepancy;
  row.newton_iters = sol.newton_iters;
  row.source_distance = norm(prob.xdag - prob.xbar);
  const double shift = sol.alpha * norm(sol.x - prob.xbar);
  row.identity_error = std::abs(sol.discrepancy - shift) / std::max(sol.discrepancy, 1e-300);
  row.estimates = basic_estimate_check(*prob.forward, sol, prob.xdag, prob.xbar, cell.delta);
  return row;
}

RateRow run_cell(const SyntheticProblem& prob, const ExperimentConfig& cfg, RuleSpec::Kind kind,
                 const Cell& cell, const DiscreteFunction& ydelta) {
  LavrentievConfig solver = solver_config(cfg);
  const ForwardModel& f = *prob.forward;
  switch (kind) {
    case RuleSpec::Kind::apriori: {
      const APrioriRule rule = cfg.rule.apriori ? *cfg.rule.apriori : default_apriori_rule(prob.spec);
      solver.alpha = apriori_alpha(cell.delta, rule);
      return finish_row(prob, cell, solve_nonlinear(f, prob.xbar, ydelta, solver));
    }
    case RuleSpec::Kind::discrepancy: {
      const DiscrepancyRule& rule = cfg.rule.discrepancy;
      const DiscrepancyResult res = discrepancy_alpha(f, prob.xbar, ydelta, cell.delta, rule, solver);
      RateRow row = finish_row(prob, cell, res.solution);
      const auto& at = res.trail[static_cast<std::size_t>(res.index)];
      const auto& before = res.trail[static_cast<std::size_t>(res.index) - 1];
      row.bracket_ok = at.discrepancy <= res.threshold && before.discrepancy > res.threshold &&
                       std::abs(before.alpha * rule.q - at.alpha) <= 1e-12 * at.alpha;
      const double bound = discrepancy_alpha_lower_bound(cell.delta, rule, row.source_distance);
      row.lower_bound_ok = res.alpha >= bound * (1.0 - 1e-12);
      return row;
    }
    case RuleSpec::Kind::lepskii: {
      LepskiiRule rule = cfg.rule.lepskii;
      rule.alpha0 = cfg.rule.lepskii_alpha0_over_delta * cell.delta;
      const LepskiiResult res = lepskii_select(f, prob.xbar, ydelta, cell.delta, rule, solver);
      RateRow row = finish_row(prob, cell, res.solution);
      const double alpha_apri =
          apriori_alpha(cell.delta, APrioriRule::theta_inverse(PsiSpec::linear()));
      row.lepskii_bound_ok = row.error <= 3.0 * sigma(alpha_apri, cell.delta, rule.beta);
      return row;
    }
  }
  throw Error("unknown rule");
}

void summarise(RateReport& report, const std::vector<double>& deltas) {
  report.deltas = deltas;
  report.median_errors = median_errors(report.rows, deltas);
  report.fit = fit_loglog_slope(report.deltas, report.median_errors);
  if (report.expected_exponent) {
    report.pass = std::abs(report.fit.slope - *report.expected_exponent) <= report.tolerance;
  }
}

struct CellError {
  std::string message;
  double last_residual = 0.0;
};

// Runs all cells for the given rules on shared noisy data. On solver errors
// the successful rows are kept and the first error (in cell order) is
// returned.
std::optional<CellError> run_cells(const SyntheticProblem& prob, const ExperimentConfig& cfg,
                                     const std::vector<RuleSpec::Kind>& kinds,
                                     const std::vector<Cell>& cells,
                                     std::vector<std::vector<std::optional<RateRow>>>& rows) {
  rows.assign(kinds.size(), std::vector<std::optional<RateRow>>(cells.size()));
  std::vector<std::optional<CellError>> errors(cells.size());
  detail::parallel_for(cells.size(), cfg.threads, [&](std::size_t i) {
    const Cell& cell = cells[i];
    const DiscreteFunction ydelta = add_noise(prob.y, {cell.delta, cell.seed});
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      try {
        rows[k][i] = run_cell(prob, cfg, kinds[k], cell, ydelta);
      } catch (const SolverError& e) {
        if (!errors[i]) {
          errors[i] = CellError{fmt::format("{} rule, delta = {:.6g}, seed = {}: {}", to_string(kinds[k]),
                                            cell.delta, cell.seed, e.what()),
                                e.last_residual()};
        }
      }
    }
  });
  for (const auto& e : errors) {
    if (e) return e;
  }
  return std::nullopt;
}

RateReport collect(RuleSpec::Kind kind, const std::vector<std::optional<RateRow>>& rows,
                   const ExperimentConfig& cfg, bool with_expectation) {
  RateReport report;
  report.rule = kind;
  report.tolerance = cfg.slope_tolerance;
  for (const auto& r : rows) {
    if (r) report.rows.push_back(*r);
  }
  if (with_expectation) {
    report.expected_exponent = cfg.expected_exponent
                                   ? cfg.expected_exponent
                                   : std::optional<double>(default_expected_exponent(cfg.problem));
  }
  return report;
}

}  // namespace

RateReport run_rate_study(const ExperimentConfig& cfg) {
  cfg.validate();
  const SyntheticProblem prob = make_problem(cfg.problem);
  const std::vector<double> deltas = cfg.deltas.values();
  const std::vector<Cell> cells = make_cells(deltas, cfg.seeds);

  std::vector<std::vector<std::optional<RateRow>>> rows;
  const auto error = run_cells(prob, cfg, {cfg.rule.kind}, cells, rows);
  // Rate expectations are tied to a priori choices; a posteriori rules only
  // carry one when the config states it.
  const bool expect = cfg.rule.kind == RuleSpec::Kind::apriori || cfg.expected_exponent.has_value();
  RateReport report = collect(cfg.rule.kind, rows[0], cfg, expect);
  if (error) {
    if (!cfg.output.empty()) write_text_file(cfg.output, rate_csv(report) + "# error: " + error->message + "\n");
    throw SolverError(error->message, error->last_residual);
  }
  summarise(report, deltas);
  if (!cfg.output.empty()) write_text_file(cfg.output, rate_csv(report));
  return report;
}

ComparisonReport run_rule_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  const SyntheticProblem prob = make_problem(cfg.problem);
  const std::vector<double> deltas = cfg.deltas.values();
  const std::vector<Cell> cells = make_cells(deltas, cfg.seeds);
  const std::vector<RuleSpec::Kind> kinds{RuleSpec::Kind::apriori, RuleSpec::Kind::discrepancy,
                                          RuleSpec::Kind::lepskii};

  std::vector<std::vector<std::optional<RateRow>>> rows;
  const auto error = run_cells(prob, cfg, kinds, cells, rows);
  ComparisonReport report;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    report.rules.push_back(collect(kinds[k], rows[k], cfg, k == 0));
  }
  if (error) {
    if (!cfg.output.empty()) {
      write_text_file(cfg.output, comparison_csv(report) + "# error: " + error->message + "\n");
    }
    throw SolverError(error->message, error->last_residual);
  }
  for (RateReport& r : report.rules) summarise(r, deltas);
  if (!cfg.output.empty()) write_text_file(cfg.output, comparison_csv(report));
  return report;
}

namespace {

LogLogFit fit_if_possible(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> fx;
  std::vector<double> fy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > 0.0 && ys[i] > 0.0 && std::isfinite(ys[i])) {
      fx.push_back(xs[i]);
      fy.push_back(ys[i]);
    }
  }
  if (fx.size() < 3) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
  return fit_loglog_slope(fx, fy);
}

}  // namespace

DistanceStudyReport run_distance_study(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.problem.kind != ProblemKind::volterra) {
    throw ConfigError("distance study needs a linear (volterra) problem");
  }
  const SyntheticProblem prob = make_problem(cfg.problem);
  const std::vector<double> deltas = cfg.deltas.values();
  const std::vector<double> radii = cfg.distance.radii();

  DistanceOptions options;
  options.lambda_min = cfg.distance.lambda_min;
  options.lambda_max = cfg.distance.lambda_max;
  options.threads = cfg.threads;

  DistanceStudyReport report{distance_function(*prob.op, prob.xdag - prob.xbar, radii, options),
                             {}, {}, {}, {}, {}};
  report.prediction = rate_from_distance(report.profile, deltas);

  std::vector<double> pr;
  std::vector<double> pd;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (report.profile.status[i] == ProfileStatus::ok) {
      pr.push_back(report.profile.R[i]);
      pd.push_back(report.profile.d[i]);
    }
  }
  report.profile_fit = fit_if_possible(pr, pd);

  std::vector<std::uint64_t> seeds = cfg.seeds;
  std::sort(seeds.begin(), seeds.end());
  const std::vector<Cell> cells = make_cells(deltas, seeds);
  std::vector<double> errors(cells.size(), std::numeric_limits<double>::quiet_NaN());
  detail::parallel_for(cells.size(), cfg.threads, [&](std::size_t i) {
    const RatePredictionEntry& e = report.prediction.entries[i / seeds.size()];
    if (e.status == PredictionStatus::out_of_range) return;
    const DiscreteFunction ydelta = add_noise(prob.y, {cells[i].delta, cells[i].seed});
    errors[i] = norm(solve_linear(*prob.op, prob.xbar, ydelta, e.alpha_pred).x - prob.xdag);
  });

  std::vector<double> err_pred;
  std::vector<double> err_obs;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    const RatePredictionEntry& e = report.prediction.entries[k];
    double median = std::numeric_limits<double>::quiet_NaN();
    if (e.status != PredictionStatus::out_of_range) {
      std::vector<double> cell_errors(
          errors.begin() + static_cast<std::ptrdiff_t>(k * seeds.size()),
          errors.begin() + static_cast<std::ptrdiff_t>((k + 1) * seeds.size()));
      std::sort(cell_errors.begin(), cell_errors.end());
      const std::size_t m = cell_errors.size() / 2;
      median = cell_errors.size() % 2 == 1 ? cell_errors[m]
                                           : 0.5 * (cell_errors[m - 1] + cell_errors[m]);
    }
    report.rows.push_back({e.delta, e.alpha_pred, e.err_pred, median, e.status});
    err_pred.push_back(e.err_pred);
    err_obs.push_back(median);
  }
  report.predicted_fit = fit_if_possible(deltas, err_pred);
  report.observed_fit = fit_if_possible(deltas, err_obs);

  if (!cfg.output.empty()) {
    write_text_file(cfg.output, profile_csv(report.profile));
    write_text_file(sibling_path(cfg.output, "_prediction"), prediction_csv(report));
  }
  return report;
}

}  // namespace lavrentiev
