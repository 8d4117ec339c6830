#include "lavrentiev/parameter_rules.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "lavrentiev/error.hpp"

namespace lavrentiev {

PsiSpec PsiSpec::holder(double mu) {
  if (!(mu > 0.0 && mu <= 0.5)) {
    throw DomainError(fmt::format("Hoelder exponent mu must lie in (0, 1/2], got {}", mu));
  }
  return {Kind::holder, mu};
}

double PsiSpec::psi(double alpha) const {
  if (!(alpha > 0.0)) throw DomainError("Psi: alpha must be positive");
  switch (kind) {
    case Kind::holder: {
      const double e = mu / (1.0 - mu);
      return (1.0 - mu) * std::pow(mu, e) * std::pow(alpha, e);
    }
    case Kind::logarithmic:
      if (!(alpha < 1.0)) throw DomainError("logarithmic Psi needs alpha < 1");
      return 1.0 / -std::log(alpha);
    case Kind::linear:
      return alpha;
  }
  return alpha;
}

double PsiSpec::theta(double alpha) const { return alpha * alpha * psi(alpha); }

double PsiSpec::rate_exponent() const {
  switch (kind) {
    case Kind::holder: return mu / (2.0 - mu);
    case Kind::linear: return 1.0 / 3.0;
    case Kind::logarithmic: return std::numeric_limits<double>::quiet_NaN();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double PsiSpec::alpha_exponent() const {
  switch (kind) {
    case Kind::holder: return 2.0 * (1.0 - mu) / (2.0 - mu);
    case Kind::linear: return 2.0 / 3.0;
    case Kind::logarithmic: return std::numeric_limits<double>::quiet_NaN();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

APrioriRule APrioriRule::power_law(double c, double theta) {
  APrioriRule r;
  r.kind = Kind::power_law;
  r.c = c;
  r.theta = theta;
  r.validate();
  return r;
}

APrioriRule APrioriRule::theta_inverse(PsiSpec psi) {
  APrioriRule r;
  r.kind = Kind::theta_inverse;
  r.psi = psi;
  r.validate();
  return r;
}

void APrioriRule::validate() const {
  if (kind == Kind::power_law) {
    if (!(c > 0.0)) throw ConfigError("a priori rule: C must be positive");
    if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("a priori rule: theta must lie in (0,1)");
  } else if (psi.kind == PsiSpec::Kind::holder && !(psi.mu > 0.0 && psi.mu <= 0.5)) {
    throw ConfigError("a priori rule: mu must lie in (0, 1/2]");
  }
}

double apriori_alpha(double delta, const APrioriRule& rule) {
  if (!(delta > 0.0)) throw DomainError("apriori_alpha: delta must be positive");
  rule.validate();
  if (rule.kind == APrioriRule::Kind::power_law) return rule.c * std::pow(delta, rule.theta);

  double lo = std::log(1e-16);
  double hi = std::log(1e2);
  if (rule.psi.kind == PsiSpec::Kind::logarithmic) hi = std::log1p(-1e-12);
  const double target = delta * delta;
  const auto theta = [&](double log_alpha) { return rule.psi.theta(std::exp(log_alpha)); };
  if (theta(lo) > target || theta(hi) < target) {
    throw DomainError(fmt::format("apriori_alpha: delta^2 = {:.3e} outside the range of Theta on "
                                  "the search bracket",
                                  target));
  }
  // Theta is strictly increasing; a relative width of 1e-13 in alpha puts
  // Theta(alpha) within a few 1e-13 of delta^2.
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    if (theta(mid) < target) lo = mid;
    else hi = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

void DiscrepancyRule::validate() const {
  if (!(tau > 1.0)) throw ConfigError("tau must exceed 1");
  if (!(kappa > 0.0 && kappa < 1.0)) throw ConfigError("kappa must lie in (0,1)");
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("q must lie in (0,1)");
  if (!(alpha0 > 0.0)) throw ConfigError("alpha0 must be positive");
  if (max_steps < 1) throw ConfigError("max_steps must be at least 1");
}

DiscrepancyResult discrepancy_alpha(const ForwardModel& f, const DiscreteFunction& xbar,
                                    const DiscreteFunction& ydelta, double delta,
                                    const DiscrepancyRule& rule, const LavrentievConfig& solver) {
  rule.validate();
  if (!(delta > 0.0)) throw DomainError("discrepancy_alpha: delta must be positive");
  DiscrepancyResult out{0.0, 0, {xbar, 0.0, 0.0, 0, 0.0}, rule.tau * std::pow(delta, rule.kappa), {}};

  LavrentievConfig cfg = solver;
  double alpha = rule.alpha0;
  for (int k = 0; k <= rule.max_steps; ++k, alpha *= rule.q) {
    cfg.alpha = alpha;
    RegularizedSolution sol = solve_nonlinear(f, xbar, ydelta, cfg);
    out.trail.push_back({alpha, sol.discrepancy});
    if (sol.discrepancy <= out.threshold) {
      if (k == 0) throw DomainError("alpha0 below discrepancy threshold");
      out.alpha = alpha;
      out.index = k;
      out.solution = std::move(sol);
      return out;
    }
    cfg.warm_start = std::move(sol.x);
  }
  throw SolverError(fmt::format("discrepancy threshold {:.3e} not reached in {} steps",
                                out.threshold, rule.max_steps),
                    out.trail.back().discrepancy);
}

double discrepancy_alpha_lower_bound(double delta, const DiscrepancyRule& rule,
                                     double source_distance) {
  return rule.q * (rule.tau - 1.0) * std::pow(delta, rule.kappa) / source_distance;
}

void LepskiiRule::validate() const {
  if (!(beta >= 0.0 && beta < 1.0)) throw ConfigError("beta must lie in [0,1)");
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("q must lie in (0,1)");
  if (!(alpha0 > 0.0)) throw ConfigError("alpha0 must be positive");
  if (j_max < 0) throw ConfigError("j_max must be nonnegative");
}

double sigma(double alpha, double delta, double beta) {
  return std::sqrt(3.0 - 2.0 * beta) / (1.0 - beta) * delta / alpha;
}

std::vector<double> lepskii_grid(const LepskiiRule& rule) {
  rule.validate();
  std::vector<double> alphas(static_cast<std::size_t>(rule.j_max) + 1);
  double a = rule.alpha0;
  for (double& v : alphas) {
    v = a;
    a /= rule.q;
  }
  return alphas;
}

namespace {

// Tests candidate j against all i < j; appends every test to the trail.
bool lepskii_admissible(std::span<const RegularizedSolution> path, int j, double delta,
                        double beta, std::vector<PairTest>& trail) {
  bool ok = true;
  for (int i = 0; i < j; ++i) {
    PairTest t;
    t.i = i;
    t.j = j;
    t.distance = norm(path[i].x - path[j].x);
    t.bound = 2.0 * sigma(path[i].alpha, delta, beta);
    t.passed = t.distance <= t.bound;
    trail.push_back(t);
    ok = ok && t.passed;
  }
  return ok;
}

}  // namespace

LepskiiResult lepskii_alpha(std::span<const RegularizedSolution> path, double delta,
                            const LepskiiRule& rule) {
  if (path.empty()) throw StructuralError("lepskii_alpha: empty path");
  rule.validate();
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (!(path[i].alpha > path[i - 1].alpha)) {
      throw StructuralError("lepskii_alpha: path must be ascending in alpha");
    }
  }
  LepskiiResult out{path[0].alpha, 0, path[0], {}};
  for (int j = 1; j < static_cast<int>(path.size()); ++j) {
    if (!lepskii_admissible(path, j, delta, rule.beta, out.trail)) break;
    out.index = j;
  }
  out.alpha = path[out.index].alpha;
  out.solution = path[out.index];
  return out;
}

LepskiiResult lepskii_select(const ForwardModel& f, const DiscreteFunction& xbar,
                             const DiscreteFunction& ydelta, double delta, const LepskiiRule& rule,
                             const LavrentievConfig& solver) {
  const std::vector<double> alphas = lepskii_grid(rule);
  std::vector<RegularizedSolution> path;
  path.reserve(alphas.size());
  LavrentievConfig cfg = solver;
  LepskiiResult out{alphas[0], 0, {xbar, 0.0, 0.0, 0, 0.0}, {}};
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    cfg.alpha = alphas[j];
    path.push_back(solve_nonlinear(f, xbar, ydelta, cfg));
    cfg.warm_start = path.back().x;
    if (!lepskii_admissible(path, static_cast<int>(j), delta, rule.beta, out.trail)) break;
    out.index = static_cast<int>(j);
  }
  out.alpha = path[out.index].alpha;
  out.solution = path[out.index];
  return out;
}

}  // namespace lavrentiev
