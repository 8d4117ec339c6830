#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lavrentiev/forward_models.hpp"

namespace lavrentiev {

struct LavrentievConfig {
  double alpha = 1.0;
  double newton_tol = 1e-12;
  int max_newton_iters = 50;
  std::optional<DiscreteFunction> warm_start;
};

/// x_alpha^delta together with the quantities the parameter rules consume.
struct RegularizedSolution {
  DiscreteFunction x;
  double alpha = 0.0;
  /// ||F(x) + alpha (x - xbar) - y^delta||
  double residual_norm = 0.0;
  int newton_iters = 0;
  /// ||F(x) - y^delta||, equal to alpha ||x - xbar|| up to the residual.
  double discrepancy = 0.0;
};

/// Solves (A + alpha I) x = y^delta + alpha xbar directly.
RegularizedSolution solve_linear(const LinearOperator& a, const DiscreteFunction& xbar,
                                 const DiscreteFunction& ydelta, double alpha);

/// Newton's method on G(x) = F(x) + alpha (x - xbar) - y^delta with the
/// shifted Jacobian F'(x) + alpha I, halving the step while ||G|| does not
/// decrease. Starts from cfg.warm_start, else from xbar.
///
/// Success means ||G(x)|| <= newton_tol, relaxed to the level at which G can
/// be evaluated in floating point (64 ulps of its largest term).
RegularizedSolution solve_nonlinear(const ForwardModel& f, const DiscreteFunction& xbar,
                                    const DiscreteFunction& ydelta, const LavrentievConfig& cfg);

/// Sequential solves along strictly decreasing alphas, each warm-started from
/// the previous solution. The first failure aborts the path with the failing
/// alpha in the message.
std::vector<RegularizedSolution> solve_alpha_path(const ForwardModel& f,
                                                  const DiscreteFunction& xbar,
                                                  const DiscreteFunction& ydelta,
                                                  std::span<const double> alphas,
                                                  const LavrentievConfig& cfg);

/// The two a priori estimates of a Lavrentiev solution
///   ||x - x+||       <= ||x+ - xbar|| + delta/alpha
///   ||F(x) - F(x+)|| <= alpha ||x+ - xbar|| + delta
/// evaluated for a synthetic problem with known x+.
struct BasicEstimateReport {
  double error = 0.0;
  double error_bound = 0.0;
  double error_slack = 0.0;
  double image_error = 0.0;
  double image_bound = 0.0;
  double image_slack = 0.0;
  double tolerance = 0.0;
  bool holds = false;
};

BasicEstimateReport basic_estimate_check(const ForwardModel& f, const RegularizedSolution& sol,
                                         const DiscreteFunction& xdag, const DiscreteFunction& xbar,
                                         double delta);

}  // namespace lavrentiev
