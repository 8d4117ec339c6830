#include "acceptance.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include <lavrentiev/csv.hpp>
#include <lavrentiev/error.hpp>
#include <lavrentiev/experiments.hpp>

namespace lavrentiev::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

// Rows of every rate study run by the suite, for the basic-estimate criterion.
struct Shared {
  std::vector<std::pair<std::string, std::vector<RateRow>>> studies;
};

ExperimentConfig volterra_config(VolterraSource source, double p = 0.25) {
  ExperimentConfig cfg;
  cfg.problem.kind = ProblemKind::volterra;
  cfg.problem.source = source;
  cfg.problem.p = p;
  return cfg;
}

CriterionResult benchmark_rate(Shared& shared) {
  const auto t0 = Clock::now();
  const RateReport r = run_rate_study(volterra_config(VolterraSource::benchmark_Aw));
  const double s = seconds_since(t0);
  shared.studies.emplace_back("benchmark", r.rows);
  const bool ok = within(r.fit.slope, 0.42, 0.58) && s <= 10.0;
  return {1, "benchmark source x+ = Aw, alpha = sqrt(delta), n = 400", ok,
          fmt::format("slope {:.4f} in [0.42, 0.58], r2 {:.4f}, limit 10 s", r.fit.slope, r.fit.r2), s};
}

CriterionResult cube_root_rate(Shared& shared) {
  const auto t0 = Clock::now();
  ExperimentConfig cfg = volterra_config(VolterraSource::constant_one);
  const RateReport r = run_rate_study(cfg);
  const double s = seconds_since(t0);
  shared.studies.emplace_back("constant_one", r.rows);
  const bool ok = within(r.fit.slope, 0.25, 0.41) && s <= 10.0;
  return {2, "x+ = 1, alpha = delta^(2/3)", ok,
          fmt::format("slope {:.4f} in [0.25, 0.41], n = {}, limit 10 s", r.fit.slope,
                      default_grid_size(cfg.problem)),
          s};
}

CriterionResult holder_rates(Shared& shared) {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (double p : {0.25, 0.4}) {
    const auto t1 = Clock::now();
    const RateReport r = run_rate_study(volterra_config(VolterraSource::fractional, p));
    const double s = seconds_since(t1);
    shared.studies.emplace_back(fmt::format("fractional p={}", p), r.rows);
    const double expected = p / (p + 1.0);
    const bool this_ok = std::abs(r.fit.slope - expected) <= 0.08 && s <= 30.0;
    ok = ok && this_ok;
    detail += fmt::format("{}p = {}: slope {:.4f} vs {:.4f} ({:.1f} s)", detail.empty() ? "" : "; ", p,
                          r.fit.slope, expected, s);
  }
  return {3, "fractional sources A^p w, alpha = delta^(1/(p+1))", ok, detail, seconds_since(t0)};
}

CriterionResult distance_decay() {
  const auto t0 = Clock::now();
  // The inclusive-rectangle Volterra matrix keeps d(R) R = 1/2 only while
  // R is well below sqrt(n), hence the large grid.
  const Grid grid(1 << 22);
  auto a = volterra(grid);
  std::vector<double> radii;
  for (int i = 0; i <= 12; ++i) radii.push_back(std::pow(10.0, 1.0 + i / 6.0));
  const DistanceProfile p = distance_function(*a, DiscreteFunction::constant(grid, 1.0), radii);
  bool statuses_ok = p.theta_monotone;
  for (ProfileStatus st : p.status) statuses_ok = statuses_ok && st == ProfileStatus::ok;
  const LogLogFit fit = fit_loglog_slope(p.R, p.d);

  const Grid small(400);
  auto a_small = volterra(small);
  const DiscreteFunction w =
      DiscreteFunction::sample(small, [](double t) { return std::cos(std::numbers::pi * t); });
  const double r0 = norm(w);
  std::vector<double> beyond;
  for (double f : {1.0, 2.0, 10.0, 100.0}) beyond.push_back(r0 * (1.0 + 1e-3) * f);
  const DistanceProfile pb = distance_function(*a_small, (*a_small)(w), beyond);
  double d_max = 0.0;
  for (double d : pb.d) d_max = std::max(d_max, d);

  const bool ok = within(fit.slope, -1.1, -0.9) && statuses_ok && d_max <= 1e-8;
  return {4, "distance function d(R) ~ 1/R, collapse for x+ = Aw", ok,
          fmt::format("slope {:.4f} in [-1.1, -0.9] on R in [10, 1000] (n = 2^22); "
                      "benchmark max d = {:.2e} <= 1e-8",
                      fit.slope, d_max),
          seconds_since(t0)};
}

CriterionResult rate_prediction() {
  const auto t0 = Clock::now();
  ExperimentConfig cfg = volterra_config(VolterraSource::constant_one);
  const DistanceStudyReport r = run_distance_study(cfg);
  const double exponent = r.predicted_fit.slope;

  // Analytic profile d(R) = K/R: prediction K^{1/3} delta^{1/3}.
  const double k = 0.5;
  DistanceProfile analytic{{}, {}, {}, {}, {}, DiscreteFunction::constant(Grid(2), 1.0), true};
  for (int i = 0; i <= 60; ++i) {
    const double radius = std::pow(10.0, -1.0 + i / 10.0);
    analytic.R.push_back(radius);
    analytic.d.push_back(k / radius);
    analytic.lambda.push_back(1.0);
    analytic.theta_residual.push_back(0.0);
    analytic.status.push_back(ProfileStatus::ok);
  }
  const std::vector<double> deltas = cfg.deltas.values();
  const RatePrediction pred = rate_from_distance(analytic, deltas);
  double worst = 0.0;
  for (const RatePredictionEntry& e : pred.entries) {
    const double exact = std::cbrt(k * e.delta);
    worst = std::max(worst, e.status == PredictionStatus::ok ? std::abs(e.err_pred / exact - 1.0) : 1.0);
  }
  const bool ok = within(exponent, 0.28, 0.38) && worst <= 1e-6;
  return {5, "rate prediction d(chi^-1(phi^-1(delta)))", ok,
          fmt::format("numeric-profile exponent {:.4f} in [0.28, 0.38]; analytic K/R max rel. error {:.1e}",
                      exponent, worst),
          seconds_since(t0)};
}

CriterionResult fractional_oracle() {
  const auto t0 = Clock::now();
  const Grid grid(200);
  auto a = volterra(grid);
  const DiscreteFunction v =
      DiscreteFunction::sample(grid, [](double t) { return std::cos(std::numbers::pi * t) + t * t; });
  double worst = 0.0;
  for (double p : {0.25, 0.5, 0.75}) {
    DunfordSpec spec;
    spec.p = p;
    const DiscreteFunction dunford = fractional_power_apply(*a, spec, v).value;
    const DiscreteFunction oracle = riemann_liouville(grid, p, v);
    worst = std::max(worst, norm(dunford - oracle) / norm(oracle));
  }
  const Grid g400(400);
  const DiscreteFunction rec = riemann_liouville(g400, 0.25, abel_source(g400, 0.25));
  double abel_err = 0.0;
  for (int i = 0; i < g400.size(); ++i) {
    if (g400.node(i + 1) >= 0.1) abel_err = std::max(abel_err, std::abs(rec[i] - 1.0));
  }
  const bool ok = worst <= 1e-4 && abel_err <= 0.05;
  return {6, "Dunford quadrature vs Riemann-Liouville, Abel reconstruction", ok,
          fmt::format("max relative L2 discrepancy {:.2e} <= 1e-4; Abel max error {:.2e} <= 0.05",
                      worst, abel_err),
          seconds_since(t0)};
}

CriterionResult volterra_identity() {
  const auto t0 = Clock::now();
  const Grid grid(400);
  auto a = volterra(grid);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  const double h = grid.h();
  for (int k = 0; k < 1000; ++k) {
    Vector x(grid.size());
    for (double& e : x) e = gauss(rng);
    const double lhs = inner(grid, a->apply(x), x);
    const double rhs = 0.5 * (std::pow(h * x.sum(), 2) + h * h * x.squaredNorm());
    worst = std::max(worst, std::abs(lhs - rhs) / rhs);
  }
  const double margin = accretivity_margin(*a, 1000, 11);
  const bool ok = worst <= 1e-12 && margin >= -1e-12;
  return {7, "discrete Volterra identity and accretivity", ok,
          fmt::format("max relative deviation {:.2e} <= 1e-12; margin {:.3e} >= -1e-12", worst, margin),
          seconds_since(t0)};
}

CriterionResult vsc_volterra() {
  const auto t0 = Clock::now();
  const Grid grid(400);
  const auto f = linear_forward(volterra(grid));
  RadialSampler sampler;
  sampler.count = 10000;
  const VscReport r = vsc_verify(*f, DiscreteFunction::constant(grid, 1.0), DiscreteFunction::zeros(grid),
                                 {VscVariant::Kind::lavrentiev, 0.5}, 0.0, sampler);
  const double bound = std::sqrt(2.0) * (1.0 + 1e-10);
  const bool ok = r.violations == 0 && r.fitted_coefficient <= bound;
  return {8, "variational source condition, mu = 1/2, beta = 0", ok,
          fmt::format("fitted beta2 {:.10f} <= sqrt(2); violations {} of {} samples",
                      r.fitted_coefficient, r.violations, r.sample_count),
          seconds_since(t0)};
}

CriterionResult basic_estimates(const Shared& shared) {
  const auto t0 = Clock::now();
  double worst = std::numeric_limits<double>::infinity();
  std::size_t cells = 0;
  bool ok = true;
  for (const auto& [name, rows] : shared.studies) {
    for (const RateRow& r : rows) {
      ++cells;
      worst = std::min({worst, r.estimates.error_slack, r.estimates.image_slack});
      ok = ok && r.estimates.error_slack >= -1e-8 && r.estimates.image_slack >= -1e-8;
    }
  }
  ok = ok && cells > 0;
  return {9, "basic estimates on every rate-study cell", ok,
          fmt::format("{} cells in {} studies, minimum slack {:.3e} >= -1e-8", cells, shared.studies.size(),
                      worst),
          seconds_since(t0)};
}

CriterionResult discrepancy_rule(Shared& shared) {
  const auto t0 = Clock::now();
  ExperimentConfig cfg = volterra_config(VolterraSource::constant_one);
  cfg.rule.kind = RuleSpec::Kind::discrepancy;
  // With q = 0.5 the selected alpha is tau delta^kappa rounded down to a power
  // of two; the rounding alternates faster than delta^0.1 (the error trend for
  // x+ = 1) and makes the medians zigzag. A finer grid keeps the trend.
  cfg.rule.discrepancy.q = 0.9;
  const RateReport r = run_rate_study(cfg);
  shared.studies.emplace_back("discrepancy", r.rows);
  bool brackets = true;
  bool lower = true;
  for (const RateRow& row : r.rows) {
    brackets = brackets && row.bracket_ok.value_or(false);
    lower = lower && row.lower_bound_ok.value_or(false);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < r.median_errors.size(); ++i) {
    monotone = monotone && r.median_errors[i] < r.median_errors[i - 1];
  }
  const bool ok = brackets && lower && monotone;
  return {10, "sequential discrepancy principle (tau 1.5, kappa 0.9, q 0.9)", ok,
          fmt::format("brackets {}, lower bound {}, medians decreasing {} over {} cells",
                      brackets ? "ok" : "FAIL", lower ? "ok" : "FAIL", monotone ? "yes" : "NO",
                      r.rows.size()),
          seconds_since(t0)};
}

CriterionResult lepskii_bound(Shared& shared) {
  const auto t0 = Clock::now();
  ExperimentConfig cfg = volterra_config(VolterraSource::benchmark_Aw);
  cfg.rule.lepskii.beta = 0.0;
  cfg.rule.lepskii.q = 0.5;
  const ComparisonReport r = run_rule_comparison(cfg);
  bool ok = true;
  std::size_t cells = 0;
  for (const RateReport& rule : r.rules) {
    shared.studies.emplace_back("comparison " + to_string(rule.rule), rule.rows);
    if (rule.rule != RuleSpec::Kind::lepskii) continue;
    for (const RateRow& row : rule.rows) {
      ++cells;
      ok = ok && row.lepskii_bound_ok.value_or(false);
    }
  }
  ok = ok && cells > 0;
  return {11, "Lepskii error <= 3 Sigma(alpha_apri, delta)", ok,
          fmt::format("{} cells of the benchmark comparison", cells), seconds_since(t0)};
}

double manufactured_error(int n) {
  const Grid grid(n, Grid::Layout::interior);
  const EllipticModel1D model(grid, XiKind::linear);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const DiscreteFunction q =
      DiscreteFunction::sample(grid, [&](double t) { return (pi2 + 1.0) * std::sin(std::numbers::pi * t); });
  const DiscreteFunction u = model.apply(q);
  double err = 0.0;
  for (int i = 0; i < n; ++i) {
    err = std::max(err, std::abs(u[i] - std::sin(std::numbers::pi * grid.node(i + 1))));
  }
  return err;
}

CriterionResult elliptic_model(Shared& shared) {
  const auto t0 = Clock::now();
  const double ratio = manufactured_error(99) / manufactured_error(199);

  const Grid grid(200, Grid::Layout::interior);
  const EllipticModel1D model(grid, XiKind::cubic);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 1000; ++k) {
    Vector a(grid.size());
    Vector b(grid.size());
    const double scale = std::pow(10.0, -2.0 + 4.0 * (k % 10) / 9.0);
    for (int i = 0; i < grid.size(); ++i) {
      a[i] = scale * gauss(rng);
      b[i] = scale * gauss(rng);
    }
    const MonotonicityGap g = monotonicity_gap(model, {grid, a}, {grid, b});
    worst = std::min(worst, g.gap - g.grad_bound);
  }

  ExperimentConfig cfg;
  cfg.problem.kind = ProblemKind::elliptic;
  const auto t1 = Clock::now();
  const RateReport r = run_rate_study(cfg);
  const double study_s = seconds_since(t1);
  shared.studies.emplace_back("elliptic", r.rows);

  const double total = seconds_since(t0);
  const bool ok = within(ratio, 3.5, 4.5) && worst >= -1e-10 && within(r.fit.slope, 0.4, 0.6) && total <= 60.0;
  return {12, "elliptic model: O(h^2) forward, monotonicity, nonlinear rate", ok,
          fmt::format("error ratio {:.3f} in [3.5, 4.5]; min(gap - grad bound) {:.3e}; "
                      "slope {:.4f} in [0.4, 0.6] ({:.2f} s)",
                      ratio, worst, r.fit.slope, study_s),
          total};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

CriterionResult determinism() {
  const auto t0 = Clock::now();
  const auto dir = std::filesystem::temp_directory_path() /
                   fmt::format("lavrentiev-determinism-{}", std::random_device{}());
  std::filesystem::create_directories(dir);
  bool ok = true;
  std::string detail;
  auto twice = [&](const std::string& name, const std::function<void(ExperimentConfig&)>& run,
                   ExperimentConfig cfg) {
    cfg.output = (dir / (name + "_a.csv")).string();
    cfg.threads = 1;
    run(cfg);
    cfg.output = (dir / (name + "_b.csv")).string();
    cfg.threads = 4;
    run(cfg);
    const std::string a = read_file(dir / (name + "_a.csv"));
    const std::string b = read_file(dir / (name + "_b.csv"));
    const bool same = !a.empty() && a == b;
    ok = ok && same;
    detail += fmt::format("{}{} {}", detail.empty() ? "" : ", ", name, same ? "identical" : "DIFFER");
  };
  twice("rates", [](ExperimentConfig& c) { run_rate_study(c); },
        volterra_config(VolterraSource::benchmark_Aw));
  ExperimentConfig rules = volterra_config(VolterraSource::benchmark_Aw);
  twice("rules", [](ExperimentConfig& c) { run_rule_comparison(c); }, rules);
  ExperimentConfig elliptic;
  elliptic.problem.kind = ProblemKind::elliptic;
  twice("elliptic", [](ExperimentConfig& c) { run_rate_study(c); }, elliptic);
  ExperimentConfig dist = volterra_config(VolterraSource::constant_one);
  dist.problem.n = 20000;
  twice("distance", [](ExperimentConfig& c) { run_distance_study(c); }, dist);
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  return {13, "byte-identical CSV for repeated runs (1 vs 4 threads)", ok, detail, seconds_since(t0)};
}

}  // namespace

std::string format_result(const CriterionResult& r) {
  return fmt::format("{} {:>2}  {} ({}) [{:.2f} s]", r.pass ? "PASS" : "FAIL", r.id, r.title, r.detail,
                     r.seconds);
}

std::vector<CriterionResult> run_acceptance(std::ostream* log) {
  Shared shared;
  std::vector<std::function<CriterionResult()>> steps{
      [&] { return benchmark_rate(shared); },
      [&] { return cube_root_rate(shared); },
      [&] { return holder_rates(shared); },
      [] { return distance_decay(); },
      [] { return rate_prediction(); },
      [] { return fractional_oracle(); },
      [] { return volterra_identity(); },
      [] { return vsc_volterra(); },
      // Criterion 9 is evaluated last so it covers every study in the suite.
      [] { return CriterionResult{9, "", false, "", 0.0}; },
      [&] { return discrepancy_rule(shared); },
      [&] { return lepskii_bound(shared); },
      [&] { return elliptic_model(shared); },
      [] { return determinism(); },
  };
  std::vector<CriterionResult> results;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (id == 9) {
      results.push_back({});
      continue;
    }
    CriterionResult r;
    const auto t0 = Clock::now();
    try {
      r = steps[i]();
    } catch (const std::exception& e) {
      r = {id, "criterion", false, fmt::format("exception: {}", e.what()), seconds_since(t0)};
    }
    if (log) *log << format_result(r) << std::endl;
    results.push_back(r);
  }
  results[8] = basic_estimates(shared);
  if (log) *log << format_result(results[8]) << std::endl;
  return results;
}

}  // namespace lavrentiev::cli
