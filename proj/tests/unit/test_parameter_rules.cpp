#include <cmath>
#include <vector>

#include <doctest.h>

#include <lavrentiev/error.hpp>
#include <lavrentiev/parameter_rules.hpp>

using namespace lavrentiev;

namespace {

RegularizedSolution constant_solution(const Grid& g, double value, double alpha) {
  return {DiscreteFunction::constant(g, value), alpha, 0.0, 1, 0.0};
}

}  // namespace

TEST_SUITE("parameter_rules") {

TEST_CASE("Psi families") {
  const PsiSpec h = PsiSpec::holder(0.5);
  CHECK(h.psi(0.04) == doctest::Approx(0.25 * 0.04));
  CHECK(h.theta(0.1) == doctest::Approx(0.01 * 0.025));
  CHECK(h.rate_exponent() == doctest::Approx(1.0 / 3.0));
  CHECK(h.alpha_exponent() == doctest::Approx(2.0 / 3.0));
  CHECK(PsiSpec::logarithmic().psi(std::exp(-4.0)) == doctest::Approx(0.25));
  CHECK(std::isnan(PsiSpec::logarithmic().rate_exponent()));
  CHECK(PsiSpec::holder(0.25).rate_exponent() == doctest::Approx(0.25 / 1.75));
  CHECK_THROWS_AS(PsiSpec::holder(0.6), DomainError);
  CHECK_THROWS_AS(PsiSpec::logarithmic().psi(1.5), DomainError);
}

TEST_CASE("a priori choices") {
  CHECK(apriori_alpha(1e-4, APrioriRule::power_law(2.0, 0.5)) == doctest::Approx(2e-2));
  // Theta(a) = a^3 for linear Psi.
  CHECK(apriori_alpha(1e-3, APrioriRule::theta_inverse(PsiSpec::linear())) ==
        doctest::Approx(1e-2).epsilon(1e-11));
  // References: scipy brentq on log Theta(a) = 2 log delta.
  CHECK(std::log(apriori_alpha(1e-3, APrioriRule::theta_inverse(PsiSpec::holder(0.25)))) ==
        doctest::Approx(-5.599598727916799).epsilon(1e-12));
  CHECK(std::log(apriori_alpha(1e-2, APrioriRule::theta_inverse(PsiSpec::logarithmic()))) ==
        doctest::Approx(-3.9218840981764966).epsilon(1e-12));
  CHECK_THROWS_AS(APrioriRule::power_law(1.0, 1.5), ConfigError);
}

TEST_CASE("discrepancy rule validation") {
  DiscrepancyRule r;
  r.tau = 1.0;
  CHECK_THROWS_WITH_AS(r.validate(), "tau must exceed 1", ConfigError);
  r = {};
  r.q = 1.0;
  CHECK_THROWS_AS(r.validate(), ConfigError);
}

TEST_CASE("sequential discrepancy principle returns the first admissible grid value") {
  const Grid g(400);
  auto f = linear_forward(volterra(g));
  const DiscreteFunction xdag = DiscreteFunction::constant(g, 1.0);
  const DiscreteFunction xbar = DiscreteFunction::zeros(g);
  const double delta = 1e-3;
  const DiscreteFunction y = add_noise(f->apply(xdag), {delta, 1});
  const DiscrepancyRule rule;
  const DiscrepancyResult r = discrepancy_alpha(*f, xbar, y, delta, rule, {});
  REQUIRE(r.index >= 1);
  REQUIRE(r.trail.size() == static_cast<std::size_t>(r.index) + 1);
  CHECK(r.threshold == doctest::Approx(1.5 * std::pow(delta, 0.9)));
  CHECK(r.alpha == doctest::Approx(std::pow(0.5, r.index)));
  CHECK(r.trail.back().discrepancy <= r.threshold);
  for (int k = 0; k < r.index; ++k) CHECK(r.trail[k].discrepancy > r.threshold);
  // The discrepancy alpha ||x - xbar|| grows with alpha for a linear problem.
  for (int k = 1; k <= r.index; ++k) CHECK(r.trail[k].discrepancy < r.trail[k - 1].discrepancy);
  CHECK(r.alpha >= discrepancy_alpha_lower_bound(delta, rule, norm(xdag - xbar)));
}

TEST_CASE("discrepancy principle rejects a starting value that already passes") {
  const Grid g(100);
  auto f = linear_forward(volterra(g));
  const DiscreteFunction xbar = DiscreteFunction::zeros(g);
  const DiscreteFunction y = add_noise(f->apply(DiscreteFunction::constant(g, 1.0)), {1e-2, 1});
  DiscrepancyRule rule;
  rule.alpha0 = 1e-9;
  CHECK_THROWS_WITH_AS(discrepancy_alpha(*f, xbar, y, 1e-2, rule, {}), "alpha0 below discrepancy threshold",
                       DomainError);
  rule.alpha0 = 1.0;
  rule.max_steps = 2;
  CHECK_THROWS_AS(discrepancy_alpha(*f, xbar, y, 1e-2, rule, {}), SolverError);
}

TEST_CASE("Lepskii balancing on a hand-made path") {
  // Sigma(alpha_i) = sqrt(3) delta/alpha_i = sqrt(3) 2^{-i} with alpha0 = delta.
  const Grid g(4);
  const double delta = 1e-3;
  LepskiiRule rule;
  rule.alpha0 = delta;
  const std::vector<double> grid = lepskii_grid(rule);
  CHECK(grid[3] == doctest::Approx(8e-3));
  CHECK(sigma(1e-2, 1e-3, 0.0) == doctest::Approx(std::sqrt(3.0) * 0.1));
  CHECK(sigma(1e-2, 1e-3, 0.5) == doctest::Approx(std::sqrt(2.0) / 0.5 * 0.1));

  std::vector<RegularizedSolution> path;
  const double values[] = {0.0, 0.1, 0.2, 0.25, 1.25, 1.3};
  for (int j = 0; j < 6; ++j) path.push_back(constant_solution(g, values[j], grid[j]));
  const LepskiiResult r = lepskii_alpha(path, delta, rule);
  // Candidate 4 fails on the pair (2, 4): 1.05 > 2 sqrt(3)/4. Index 3 is returned.
  CHECK(r.index == 3);
  CHECK(r.alpha == doctest::Approx(grid[3]));
  REQUIRE_FALSE(r.trail.empty());
  CHECK_FALSE(r.trail.back().passed);
  CHECK(r.trail.back().j == 4);
}

TEST_CASE("lazy Lepskii selection equals the full-path rule") {
  const Grid g(400);
  auto f = linear_forward(volterra(g));
  const DiscreteFunction xbar = DiscreteFunction::zeros(g);
  const DiscreteFunction w = DiscreteFunction::sample(g, [](double t) { return std::cos(3.0 * t); });
  const double delta = 1e-4;
  const DiscreteFunction y = add_noise(f->apply(f->apply(w)), {delta, 2});
  LepskiiRule rule;
  rule.alpha0 = delta;
  rule.j_max = 30;
  std::vector<RegularizedSolution> path;
  for (double a : lepskii_grid(rule)) path.push_back(solve_linear(f->op(), xbar, y, a));
  const LepskiiResult full = lepskii_alpha(path, delta, rule);
  const LepskiiResult lazy = lepskii_select(*f, xbar, y, delta, rule, {});
  CHECK(full.index == lazy.index);
  CHECK(full.index > 0);
  CHECK(full.index < rule.j_max);
}

}
