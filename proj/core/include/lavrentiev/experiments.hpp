#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lavrentiev/fractional.hpp"
#include "lavrentiev/parameter_rules.hpp"
#include "lavrentiev/source_analysis.hpp"

namespace lavrentiev {

enum class ProblemKind { volterra, elliptic };
enum class VolterraSource { constant_one, benchmark_Aw, fractional };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::volterra;
  /// 0 selects the default size for the problem (see default_grid_size).
  int n = 0;
  VolterraSource source = VolterraSource::benchmark_Aw;
  /// Exponent of the fractional source x+ - xbar = A^p w.
  double p = 0.25;
  XiKind xi = XiKind::cubic;
};

/// 400 for the Volterra benchmark source, 100000 for the Volterra sources
/// whose rate depends on A having no bounded inverse on the grid scale, 200
/// for the elliptic model.
int default_grid_size(const ProblemSpec& problem);

/// Synthetic problem with known solution: y = F(x+), x+ - xbar of the
/// requested smoothness.
struct SyntheticProblem {
  ProblemSpec spec;
  std::shared_ptr<const ForwardModel> forward;
  /// Set for linear problems.
  std::shared_ptr<const LinearOperator> op;
  DiscreteFunction xdag;
  DiscreteFunction xbar;
  DiscreteFunction y;
  /// Set when x+ - xbar = A w (Volterra) or F'(x+) w (elliptic).
  std::optional<DiscreteFunction> w;
};

SyntheticProblem make_problem(const ProblemSpec& spec);

struct DeltaGrid {
  double delta0 = 1e-2;
  double ratio = 0.31622776601683794;
  int count = 8;
  std::vector<double> values() const;
  void validate() const;
};

struct RuleSpec {
  enum class Kind { apriori, discrepancy, lepskii };
  Kind kind = Kind::apriori;
  /// Unset: the power law matching the problem's source (default_apriori_rule).
  std::optional<APrioriRule> apriori;
  DiscrepancyRule discrepancy{};
  LepskiiRule lepskii{};
  /// The Lepskii grid starts at alpha0 = alpha0_over_delta * delta; the
  /// ascending scan must begin below the balancing point.
  double lepskii_alpha0_over_delta = 1.0;
};

std::string to_string(RuleSpec::Kind kind);
std::string to_string(VolterraSource source);
std::string to_string(XiKind kind);

/// alpha ~ delta^{1/2} for range-type sources, delta^{2/3} for x+ = 1,
/// delta^{1/(p+1)} for x+ - xbar = A^p w.
APrioriRule default_apriori_rule(const ProblemSpec& problem);
/// The rate exponent the theory predicts under default_apriori_rule.
double default_expected_exponent(const ProblemSpec& problem);

struct DistanceStudySpec {
  double r_min = 1.0;
  double r_max = 100.0;
  int r_count = 13;
  double lambda_min = 1e-14;
  double lambda_max = 1e6;
  std::vector<double> radii() const;
};

struct ExperimentConfig {
  ProblemSpec problem;
  DeltaGrid deltas;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  RuleSpec rule;
  std::optional<double> expected_exponent;
  double slope_tolerance = 0.08;
  double newton_tol = 1e-12;
  int max_newton_iters = 50;
  DistanceStudySpec distance;
  /// CSV destination; empty means no file.
  std::string output;
  int threads = 0;
  void validate() const;
};

struct RateRow {
  double delta = 0.0;
  std::uint64_t seed = 0;
  double alpha = 0.0;
  double error = 0.0;
  double discrepancy = 0.0;
  int newton_iters = 0;

  // Per-cell checks, not part of the CSV.
  double source_distance = 0.0;
  double identity_error = 0.0;
  BasicEstimateReport estimates;
  /// Discrepancy rule: disc(alpha*) <= tau delta^kappa < disc(alpha*/q).
  std::optional<bool> bracket_ok;
  /// Discrepancy rule: alpha* >= q (tau - 1) delta^kappa / ||x+ - xbar||.
  std::optional<bool> lower_bound_ok;
  /// Lepskii rule: error <= 3 Sigma(alpha_apri, delta) with
  /// alpha_apri = Theta^{-1}(delta^2) for linear Psi.
  std::optional<bool> lepskii_bound_ok;
};

struct RateReport {
  RuleSpec::Kind rule = RuleSpec::Kind::apriori;
  std::vector<RateRow> rows;
  std::vector<double> deltas;
  std::vector<double> median_errors;
  LogLogFit fit;
  std::optional<double> expected_exponent;
  double tolerance = 0.08;
  bool pass = true;
};

/// Median error per delta (in the order of report.deltas), recomputed from rows.
std::vector<double> median_errors(const std::vector<RateRow>& rows,
                                  const std::vector<double>& deltas);

/// Runs every (delta, seed) cell with the configured rule. Cells run
/// concurrently and are assembled in (delta descending, seed ascending)
/// order. On a solver error the completed rows and an error line are written
/// to cfg.output before the error propagates.
RateReport run_rate_study(const ExperimentConfig& cfg);

struct ComparisonReport {
  std::vector<RateReport> rules;
};

/// A priori, discrepancy and Lepskii choices on identical noisy data.
ComparisonReport run_rule_comparison(const ExperimentConfig& cfg);

struct DistanceStudyRow {
  double delta = 0.0;
  double alpha_pred = 0.0;
  double err_pred = 0.0;
  double err_obs = 0.0;
  PredictionStatus status = PredictionStatus::ok;
};

struct DistanceStudyReport {
  DistanceProfile profile;
  RatePrediction prediction;
  std::vector<DistanceStudyRow> rows;
  LogLogFit profile_fit;
  LogLogFit predicted_fit;
  LogLogFit observed_fit;
};

/// Profile of x+ - xbar over cfg.distance.radii(), predicted errors, and the
/// median observed error with alpha = phi^{-1}(delta) (sqrt(delta) when the
/// profile collapses). Linear problems only.
DistanceStudyReport run_distance_study(const ExperimentConfig& cfg);

}  // namespace lavrentiev
