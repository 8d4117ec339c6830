#include "lavrentiev/source_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include "lavrentiev/error.hpp"
#include "parallel.hpp"

namespace lavrentiev {

MultiplierEvaluation evaluate_multiplier(const LinearOperator& a, const DiscreteFunction& element,
                                         double lambda) {
  const Vector z = a.normal_shifted_solve(lambda, element.values());
  const Vector v = a.apply_adjoint(z);
  const double vn = norm(a.grid(), v);
  return {vn * vn, lambda * norm(a.grid(), z)};
}

DistanceProfile distance_function(const LinearOperator& a, const DiscreteFunction& element,
                                  std::span<const double> Rs, const DistanceOptions& options) {
  if (!(element.grid() == a.grid())) throw StructuralError("distance_function: grid mismatch");
  if (norm(element) == 0.0) throw DomainError("distance_function: element must be nonzero");
  if (!(options.lambda_min > 0.0 && options.lambda_min < options.lambda_max)) {
    throw DomainError("distance_function: invalid lambda bracket");
  }
  for (std::size_t i = 0; i < Rs.size(); ++i) {
    if (!(Rs[i] > 0.0) || (i > 0 && !(Rs[i] > Rs[i - 1]))) {
      throw DomainError("distance_function: radii must be positive and ascending");
    }
  }

  const std::size_t m = Rs.size();
  DistanceProfile p{std::vector<double>(Rs.begin(), Rs.end()),
                    std::vector<double>(m),
                    std::vector<double>(m),
                    std::vector<double>(m),
                    std::vector<ProfileStatus>(m, ProfileStatus::ok),
                    element,
                    true};

  const double log_lo = std::log(options.lambda_min);
  const double log_hi = std::log(options.lambda_max);

  // theta on a log grid: checks monotonicity and supplies a tight initial
  // bracket for every radius.
  const int samples = std::max(options.monotonicity_samples, 2);
  std::vector<double> log_lambda(static_cast<std::size_t>(samples));
  std::vector<double> theta_grid(log_lambda.size());
  for (int k = 0; k < samples; ++k) {
    log_lambda[static_cast<std::size_t>(k)] =
        log_lo + (log_hi - log_lo) * static_cast<double>(k) / (samples - 1);
  }
  detail::parallel_for(theta_grid.size(), options.threads, [&](std::size_t k) {
    theta_grid[k] = evaluate_multiplier(a, element, std::exp(log_lambda[k])).theta;
  });
  for (std::size_t k = 1; k < theta_grid.size(); ++k) {
    if (!(theta_grid[k] < theta_grid[k - 1])) p.theta_monotone = false;
  }

  detail::parallel_for(m, options.threads, [&](std::size_t i) {
    const double target = Rs[i] * Rs[i];
    double lambda = 0.0;
    if (target >= theta_grid.front()) {
      lambda = options.lambda_min;
      p.status[i] = ProfileStatus::above_range;
    } else if (target <= theta_grid.back()) {
      lambda = options.lambda_max;
      p.status[i] = ProfileStatus::below_range;
    } else {
      std::size_t k = 0;
      while (theta_grid[k + 1] > target) ++k;
      const double log_target = std::log(target);
      auto f = [&](double ll) {
        return std::log(evaluate_multiplier(a, element, std::exp(ll)).theta) - log_target;
      };
      // |d log theta / d log lambda| <= 1, so a 1e-10 bracket in log lambda
      // puts theta within about 1e-10 relative of R^2.
      auto tol = [](double l, double r) { return r - l <= 1e-10; };
      std::uintmax_t iters = 100;
      const auto [l, r] = boost::math::tools::toms748_solve(
          f, log_lambda[k], log_lambda[k + 1], std::log(theta_grid[k]) - log_target,
          std::log(theta_grid[k + 1]) - log_target, tol, iters);
      lambda = std::exp(0.5 * (l + r));
    }
    const MultiplierEvaluation ev = evaluate_multiplier(a, element, lambda);
    p.lambda[i] = lambda;
    p.d[i] = ev.distance;
    p.theta_residual[i] = std::abs(ev.theta - target) / target;
  });
  return p;
}

RatePrediction rate_from_distance(const DistanceProfile& profile, std::span<const double> deltas) {
  RatePrediction out;
  for (double d : profile.d) {
    if (d <= kCollapseLevel) out.collapsed = true;
  }
  for (double delta : deltas) {
    if (!(delta > 0.0)) throw DomainError("rate_from_distance: deltas must be positive");
  }
  if (out.collapsed) {
    for (double delta : deltas) {
      out.entries.push_back({delta, std::sqrt(delta), std::sqrt(delta),
                             PredictionStatus::sqrt_delta_branch});
    }
    return out;
  }

  // Along the profile, phi(chi(R)) = d(R)^2/R; with log d piecewise linear in
  // log R so is log phi, and the inversion is exact on each segment.
  std::vector<double> log_r;
  std::vector<double> log_d;
  for (std::size_t i = 0; i < profile.R.size(); ++i) {
    if (profile.status[i] == ProfileStatus::ok && profile.d[i] > 0.0) {
      log_r.push_back(std::log(profile.R[i]));
      log_d.push_back(std::log(profile.d[i]));
    }
  }
  std::vector<double> log_phi(log_r.size());
  for (std::size_t i = 0; i < log_r.size(); ++i) log_phi[i] = 2.0 * log_d[i] - log_r[i];

  for (double delta : deltas) {
    RatePredictionEntry e{delta, 0.0, 0.0, PredictionStatus::out_of_range};
    const double target = std::log(delta);
    for (std::size_t k = 0; k + 1 < log_r.size(); ++k) {
      const double hi = log_phi[k];
      const double lo = log_phi[k + 1];
      if (!(hi > lo) || target > hi || target < lo) continue;
      const double t = (hi - target) / (hi - lo);
      const double lr = log_r[k] + t * (log_r[k + 1] - log_r[k]);
      const double ld = log_d[k] + t * (log_d[k + 1] - log_d[k]);
      e.err_pred = std::exp(ld);
      e.alpha_pred = std::exp(ld - lr);
      e.status = PredictionStatus::ok;
      break;
    }
    out.entries.push_back(e);
  }
  return out;
}

namespace {

// Sample stream shared by vsc_verify and radial_samples: `count` radial
// points x+ + r*dir, then the deterministic ray toward xbar.
template <class Visit>
void for_each_sample(const DiscreteFunction& xdag, const DiscreteFunction& xbar,
                     const RadialSampler& s, Visit&& visit) {
  if (s.count < 0 || s.ray_points < 0) throw DomainError("sampler counts must be nonnegative");
  if (!(s.r_min > 0.0 && s.r_min <= s.r_max)) throw DomainError("sampler needs 0 < r_min <= r_max");
  const Grid& grid = xdag.grid();
  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uniform(std::log(s.r_min), std::log(s.r_max));
  Vector dir(grid.size());
  for (int k = 0; k < s.count; ++k) {
    for (Eigen::Index i = 0; i < dir.size(); ++i) dir[i] = gauss(rng);
    const double r = std::exp(uniform(rng));
    visit(DiscreteFunction{grid, xdag.values() + (r / norm(grid, dir)) * dir});
  }
  const DiscreteFunction towards = xbar - xdag;
  for (int k = 0; k < s.ray_points; ++k) {
    const double t = s.ray_points == 1 ? 0.0 : static_cast<double>(k) / (s.ray_points - 1);
    const double eps = std::exp(std::log(s.r_min) * (1.0 - t));
    visit(xdag + eps * towards);
  }
}

struct VscAccumulator {
  const ForwardModel& f;
  const DiscreteFunction& xdag;
  DiscreteFunction fdag;
  DiscreteFunction source;
  VscVariant variant;
  VscReport report;

  void add(const DiscreteFunction& x) {
    const DiscreteFunction diff = x - xdag;
    const DiscreteFunction fdiff = f.apply(x) - fdag;
    const double lhs = inner(source, xdag - x);
    const double nd = norm(diff);
    const double num = lhs - report.beta * nd * nd;
    const double g =
        variant.kind == VscVariant::Kind::lavrentiev ? inner(fdiff, diff) : norm(fdiff);
    ++report.sample_count;
    if (!(num > 0.0)) return;
    if (!(g > 1e-300)) {
      ++report.violations;
      return;
    }
    report.fitted_coefficient = std::max(report.fitted_coefficient, num / std::pow(g, variant.mu));
  }
};

VscAccumulator make_accumulator(const ForwardModel& f, const DiscreteFunction& xdag,
                                const DiscreteFunction& xbar, const VscVariant& variant,
                                double beta) {
  require_same_grid(xdag, xbar);
  if (!(xdag.grid() == f.grid())) throw StructuralError("vsc_verify: grid mismatch");
  if (variant.kind == VscVariant::Kind::lavrentiev && !(variant.mu > 0.0 && variant.mu <= 0.5)) {
    throw DomainError("vsc_verify: Lavrentiev exponent mu must lie in (0, 1/2]");
  }
  if (!(variant.mu > 0.0)) throw DomainError("vsc_verify: mu must be positive");
  if (!(beta >= 0.0)) throw DomainError("vsc_verify: beta must be nonnegative");
  VscReport report;
  report.mu = variant.mu;
  report.beta = beta;
  return VscAccumulator{f, xdag, f.apply(xdag), xdag - xbar, variant, report};
}

}  // namespace

VscReport vsc_verify(const ForwardModel& f, const DiscreteFunction& xdag,
                     const DiscreteFunction& xbar, const VscVariant& variant, double beta,
                     const RadialSampler& sampler) {
  VscAccumulator acc = make_accumulator(f, xdag, xbar, variant, beta);
  for_each_sample(xdag, xbar, sampler, [&](const DiscreteFunction& x) { acc.add(x); });
  return acc.report;
}

VscReport vsc_verify_samples(const ForwardModel& f, const DiscreteFunction& xdag,
                             const DiscreteFunction& xbar, const VscVariant& variant, double beta,
                             std::span<const DiscreteFunction> samples) {
  VscAccumulator acc = make_accumulator(f, xdag, xbar, variant, beta);
  for (const DiscreteFunction& x : samples) {
    require_same_grid(x, xdag);
    acc.add(x);
  }
  return acc.report;
}

std::vector<DiscreteFunction> radial_samples(const DiscreteFunction& xdag,
                                             const DiscreteFunction& xbar,
                                             const RadialSampler& sampler) {
  require_same_grid(xdag, xbar);
  std::vector<DiscreteFunction> out;
  for_each_sample(xdag, xbar, sampler, [&](const DiscreteFunction& x) { out.push_back(x); });
  return out;
}

PsiSpec psi_from_phi(const PhiVariant& variant) {
  switch (variant.kind) {
    case PhiVariant::Kind::holder: return PsiSpec::holder(variant.mu);
    case PhiVariant::Kind::logarithmic: return PsiSpec::logarithmic();
  }
  throw DomainError("psi_from_phi: unknown variant");
}

}  // namespace lavrentiev
