#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lavrentiev/forward_models.hpp"
#include "lavrentiev/parameter_rules.hpp"

namespace lavrentiev {

enum class ProfileStatus {
  ok,
  /// R^2 exceeds theta(lambda_min): the multiplier is clamped to lambda_min.
  /// For an element of the form A w this is the saturated regime R > ||w||.
  above_range,
  /// R^2 is below theta(lambda_max): clamped to lambda_max, d close to ||element||.
  below_range,
};

struct DistanceOptions {
  double lambda_min = 1e-14;
  double lambda_max = 1e6;
  /// Number of log-spaced lambdas on which monotonicity of theta is checked.
  int monotonicity_samples = 25;
  int threads = 0;
};

/// Tabulated distance function d(R) = min{ ||element - A w|| : ||w|| <= R }.
///
/// For each R the minimiser is w = v_lambda = A^*(AA^* + lambda I)^{-1} element
/// with lambda chosen so that theta(lambda) = ||v_lambda||^2 = R^2, and then
/// d(R) = ||lambda (AA^* + lambda I)^{-1} element||.
struct DistanceProfile {
  std::vector<double> R;
  std::vector<double> d;
  std::vector<double> lambda;
  std::vector<double> theta_residual;
  std::vector<ProfileStatus> status;
  DiscreteFunction element;
  bool theta_monotone = false;
};

DistanceProfile distance_function(const LinearOperator& a, const DiscreteFunction& element,
                                  std::span<const double> Rs, const DistanceOptions& options = {});

/// theta(lambda) and the distance ||element - A v_lambda|| for one multiplier.
struct MultiplierEvaluation {
  double theta = 0.0;
  double distance = 0.0;
};
MultiplierEvaluation evaluate_multiplier(const LinearOperator& a, const DiscreteFunction& element,
                                         double lambda);

enum class PredictionStatus { ok, out_of_range, sqrt_delta_branch };

struct RatePredictionEntry {
  double delta = 0.0;
  double alpha_pred = 0.0;
  double err_pred = 0.0;
  PredictionStatus status = PredictionStatus::ok;
};

struct RatePrediction {
  std::vector<RatePredictionEntry> entries;
  /// True when the profile vanishes beyond some R (x+ - xbar in the range of
  /// A); predictions then follow the sqrt(delta) branch.
  bool collapsed = false;
};

/// Predicted error d(chi^{-1}(phi^{-1}(delta))) with chi(R) = d(R)/R and
/// phi(alpha) = alpha d(chi^{-1}(alpha)), together with alpha = phi^{-1}(delta).
/// d is interpolated piecewise linearly in log-log coordinates.
RatePrediction rate_from_distance(const DistanceProfile& profile, std::span<const double> deltas);

/// Absolute level below which a profile entry counts as zero.
inline constexpr double kCollapseLevel = 1e-8;

struct VscVariant {
  enum class Kind { lavrentiev, tikhonov };
  Kind kind = Kind::lavrentiev;
  double mu = 0.5;
};

struct RadialSampler {
  int count = 10000;
  double r_min = 1e-4;
  double r_max = 1.0;
  std::uint64_t seed = 1;
  /// Extra deterministic points x+ + eps (xbar - x+) with eps log-spaced in
  /// [r_min, 1].
  int ray_points = 16;
};

struct VscReport {
  double mu = 0.0;
  double beta = 0.0;
  /// Smallest beta_2 with LHS <= beta ||x - x+||^2 + beta_2 G^mu on all samples.
  double fitted_coefficient = 0.0;
  int violations = 0;
  int sample_count = 0;
};

/// Empirical check of the variational source condition
///   <x+ - xbar, x+ - x> <= beta ||x - x+||^2 + beta_2 G(x)^mu
/// with G = <F(x) - F(x+), x - x+> (Lavrentiev) or ||F(x) - F(x+)|| (Tikhonov).
/// Sampling a ball around x+ is only a proxy for the set of regularised
/// solutions the condition is meant for.
VscReport vsc_verify(const ForwardModel& f, const DiscreteFunction& xdag,
                     const DiscreteFunction& xbar, const VscVariant& variant, double beta,
                     const RadialSampler& sampler);

/// Same check on caller-supplied samples.
VscReport vsc_verify_samples(const ForwardModel& f, const DiscreteFunction& xdag,
                             const DiscreteFunction& xbar, const VscVariant& variant, double beta,
                             std::span<const DiscreteFunction> samples);

std::vector<DiscreteFunction> radial_samples(const DiscreteFunction& xdag,
                                             const DiscreteFunction& xbar,
                                             const RadialSampler& sampler);

/// Index function phi of a Lavrentiev variational source condition.
struct PhiVariant {
  enum class Kind { holder, logarithmic };
  Kind kind = Kind::holder;
  double mu = 0.5;
};

PsiSpec psi_from_phi(const PhiVariant& variant);

}  // namespace lavrentiev
