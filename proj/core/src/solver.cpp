#include "lavrentiev/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "lavrentiev/error.hpp"

namespace lavrentiev {

namespace {

void require_positive_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw DomainError(fmt::format("alpha must be positive and finite, got {}", alpha));
  }
}

}  // namespace

RegularizedSolution solve_linear(const LinearOperator& a, const DiscreteFunction& xbar,
                                 const DiscreteFunction& ydelta, double alpha) {
  require_same_grid(xbar, ydelta);
  if (!(xbar.grid() == a.grid())) throw StructuralError("solve_linear: grid mismatch");
  require_positive_alpha(alpha);

  const Vector rhs = ydelta.values() + alpha * xbar.values();
  DiscreteFunction x{a.grid(), a.shifted_solve(alpha, rhs)};
  const Vector ax = a.apply(x.values());
  const Vector misfit = ax - ydelta.values();

  RegularizedSolution sol{x, alpha, 0.0, 0, 0.0};
  sol.residual_norm = norm(a.grid(), misfit + alpha * (x.values() - xbar.values()));
  sol.discrepancy = norm(a.grid(), misfit);
  const double scale = norm(a.grid(), rhs);
  if (sol.residual_norm > 1e-10 * scale) {
    throw SolverError(fmt::format("solve_linear: residual {:.3e} at alpha = {:.6g}",
                                  sol.residual_norm, alpha),
                      sol.residual_norm);
  }
  return sol;
}

RegularizedSolution solve_nonlinear(const ForwardModel& f, const DiscreteFunction& xbar,
                                    const DiscreteFunction& ydelta, const LavrentievConfig& cfg) {
  require_same_grid(xbar, ydelta);
  if (!(xbar.grid() == f.grid())) throw StructuralError("solve_nonlinear: grid mismatch");
  require_positive_alpha(cfg.alpha);
  if (cfg.max_newton_iters < 1 || !(cfg.newton_tol > 0.0)) {
    throw DomainError("solve_nonlinear: newton_tol must be positive and max_newton_iters >= 1");
  }
  // One Newton step is exact for linear F; solve directly.
  if (const auto* lin = dynamic_cast<const LinearForward*>(&f)) {
    RegularizedSolution sol = solve_linear(lin->op(), xbar, ydelta, cfg.alpha);
    sol.newton_iters = 1;
    return sol;
  }
  const double alpha = cfg.alpha;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  struct State {
    DiscreteFunction x;
    DiscreteFunction fx;
    DiscreteFunction g;
    double g_norm;
    double floor;
  };
  auto evaluate = [&](DiscreteFunction x) {
    DiscreteFunction fx = f.apply(x);
    DiscreteFunction shift = alpha * (x - xbar);
    DiscreteFunction g = fx + shift - ydelta;
    const double gn = norm(g);
    const double fl = 64.0 * eps * (norm(fx) + norm(shift) + norm(ydelta));
    return State{std::move(x), std::move(fx), std::move(g), gn, fl};
  };

  State s = evaluate(cfg.warm_start ? *cfg.warm_start : xbar);
  require_same_grid(s.x, xbar);
  int iters = 0;
  for (;; ++iters) {
    if (s.g_norm <= std::max(cfg.newton_tol, s.floor)) break;
    if (iters == cfg.max_newton_iters) {
      throw SolverError(fmt::format("Lavrentiev Newton did not converge in {} iterations "
                                    "(residual {:.3e}, alpha = {:.6g})",
                                    cfg.max_newton_iters, s.g_norm, alpha),
                        s.g_norm);
    }
    const DiscreteFunction step = f.shifted_jacobian_solve(s.x, alpha, s.g);
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      State trial = evaluate(s.x - t * step);
      if (trial.g_norm < s.g_norm) {
        s = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (s.g_norm <= 16.0 * s.floor) break;
      throw SolverError(fmt::format("Lavrentiev Newton stalled (residual {:.3e}, alpha = {:.6g})",
                                    s.g_norm, alpha),
                        s.g_norm);
    }
  }

  RegularizedSolution sol{s.x, alpha, s.g_norm, iters, norm(s.fx - ydelta)};
  return sol;
}

std::vector<RegularizedSolution> solve_alpha_path(const ForwardModel& f,
                                                  const DiscreteFunction& xbar,
                                                  const DiscreteFunction& ydelta,
                                                  std::span<const double> alphas,
                                                  const LavrentievConfig& cfg) {
  for (std::size_t i = 1; i < alphas.size(); ++i) {
    if (!(alphas[i] < alphas[i - 1])) {
      throw DomainError("solve_alpha_path: alphas must be strictly decreasing");
    }
  }
  std::vector<RegularizedSolution> path;
  path.reserve(alphas.size());
  LavrentievConfig step_cfg = cfg;
  for (double alpha : alphas) {
    step_cfg.alpha = alpha;
    if (!path.empty()) step_cfg.warm_start = path.back().x;
    try {
      path.push_back(solve_nonlinear(f, xbar, ydelta, step_cfg));
    } catch (const SolverError& e) {
      throw SolverError(fmt::format("alpha path failed at alpha = {:.6g}: {}", alpha, e.what()),
                        e.last_residual());
    }
  }
  return path;
}

BasicEstimateReport basic_estimate_check(const ForwardModel& f, const RegularizedSolution& sol,
                                         const DiscreteFunction& xdag, const DiscreteFunction& xbar,
                                         double delta) {
  require_same_grid(sol.x, xdag);
  require_same_grid(xdag, xbar);
  const double dist = norm(xdag - xbar);
  BasicEstimateReport r;
  r.error = norm(sol.x - xdag);
  r.error_bound = dist + delta / sol.alpha;
  r.image_error = norm(f.apply(sol.x) - f.apply(xdag));
  r.image_bound = sol.alpha * dist + delta;
  r.error_slack = r.error_bound - r.error;
  r.image_slack = r.image_bound - r.image_error;
  r.tolerance = 1e-8 * std::max({1.0, r.error_bound, r.image_bound});
  r.holds = r.error_slack >= -r.tolerance && r.image_slack >= -r.tolerance;
  return r;
}

}  // namespace lavrentiev
