#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include <lavrentiev/csv.hpp>
#include <lavrentiev/error.hpp>
#include <lavrentiev/experiments.hpp>

using namespace lavrentiev;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig small_benchmark() {
  ExperimentConfig cfg;
  cfg.problem.source = VolterraSource::benchmark_Aw;
  cfg.problem.n = 100;
  cfg.deltas.count = 4;
  cfg.seeds = {1, 2};
  return cfg;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("delta grid") {
  DeltaGrid d;
  const auto v = d.values();
  REQUIRE(v.size() == 8);
  CHECK(v[0] == doctest::Approx(1e-2));
  CHECK(v[2] == doctest::Approx(1e-3));
  CHECK(v[7] == doctest::Approx(std::pow(10.0, -5.5)));
  d.count = 3;
  CHECK_THROWS_AS(d.validate(), ConfigError);
}

TEST_CASE("synthetic problems carry the advertised source structure") {
  ProblemSpec spec;
  spec.source = VolterraSource::benchmark_Aw;
  spec.n = 64;
  const SyntheticProblem p = make_problem(spec);
  REQUIRE(p.w.has_value());
  CHECK(norm(p.xdag - p.xbar - (*p.op)(*p.w)) <= 1e-15);
  CHECK(norm(p.y - p.forward->apply(p.xdag)) == 0.0);

  ProblemSpec ell;
  ell.kind = ProblemKind::elliptic;
  const SyntheticProblem e = make_problem(ell);
  REQUIRE(e.w.has_value());
  CHECK(e.xdag.size() == default_grid_size(ell));
  CHECK(norm(e.xdag - e.xbar - e.forward->derivative_apply(e.xdag, *e.w)) <= 1e-12 * norm(e.xdag));
}

TEST_CASE("default a priori rules and exponents") {
  ProblemSpec s;
  s.source = VolterraSource::constant_one;
  CHECK(default_apriori_rule(s).theta == doctest::Approx(2.0 / 3.0));
  CHECK(default_expected_exponent(s) == doctest::Approx(1.0 / 3.0));
  s.source = VolterraSource::fractional;
  s.p = 0.4;
  CHECK(default_apriori_rule(s).theta == doctest::Approx(1.0 / 1.4));
  CHECK(default_expected_exponent(s) == doctest::Approx(0.4 / 1.4));
  s.source = VolterraSource::benchmark_Aw;
  CHECK(default_expected_exponent(s) == doctest::Approx(0.5));
}

TEST_CASE("rate study rows are ordered and serialised exactly") {
  const RateReport r = run_rate_study(small_benchmark());
  REQUIRE(r.rows.size() == 8);
  CHECK(r.rows[0].delta > r.rows[2].delta);
  CHECK(r.rows[0].seed == 1);
  CHECK(r.rows[1].seed == 2);
  const std::string csv = rate_csv(r);
  std::istringstream lines(csv);
  std::string header;
  std::string first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "delta,seed,alpha,error,discrepancy,newton_iters");
  double delta = 0.0;
  double alpha = 0.0;
  double error = 0.0;
  char c = 0;
  int seed = 0;
  std::istringstream row(first);
  row >> delta >> c >> seed >> c >> alpha >> c >> error;
  CHECK(delta == r.rows[0].delta);
  CHECK(alpha == r.rows[0].alpha);
  CHECK(error == r.rows[0].error);
  CHECK(r.median_errors == median_errors(r.rows, r.deltas));
}

TEST_CASE("median errors") {
  std::vector<RateRow> rows(3);
  rows[0].delta = rows[1].delta = rows[2].delta = 0.1;
  rows[0].error = 3.0;
  rows[1].error = 1.0;
  rows[2].error = 2.0;
  CHECK(median_errors(rows, {0.1}) == std::vector<double>{2.0});
}

TEST_CASE("rule comparison uses identical noise") {
  const ComparisonReport c = run_rule_comparison(small_benchmark());
  REQUIRE(c.rules.size() == 3);
  CHECK(c.rules[0].rule == RuleSpec::Kind::apriori);
  CHECK(c.rules[1].rule == RuleSpec::Kind::discrepancy);
  CHECK(c.rules[2].rule == RuleSpec::Kind::lepskii);
  for (const RateRow& row : c.rules[1].rows) CHECK(row.bracket_ok.value_or(false));
  for (const RateRow& row : c.rules[2].rows) CHECK(row.lepskii_bound_ok.value_or(false));
  const std::string csv = comparison_csv(c);
  CHECK(csv.rfind("rule,delta,seed,alpha,error,discrepancy,newton_iters\n", 0) == 0);
}

TEST_CASE("distance study writes both tables") {
  ExperimentConfig cfg = small_benchmark();
  cfg.problem.source = VolterraSource::constant_one;
  cfg.problem.n = 2000;
  const auto dir = std::filesystem::temp_directory_path() / "lavrentiev-unit-distance";
  cfg.output = (dir / "profile.csv").string();
  const DistanceStudyReport r = run_distance_study(cfg);
  CHECK(r.profile_fit.slope < -0.5);
  CHECK(slurp(cfg.output).rfind("R,d,lambda\n", 0) == 0);
  CHECK(slurp(sibling_path(cfg.output, "_prediction")).rfind("delta,alpha_pred,err_pred,err_obs\n", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sibling paths") {
  CHECK(sibling_path("out/foo.csv", "_prediction") == "out/foo_prediction.csv");
  CHECK(sibling_path("foo", "_x") == "foo_x");
}

TEST_CASE("configuration checks") {
  ExperimentConfig cfg = small_benchmark();
  cfg.seeds = {1, 1};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = small_benchmark();
  cfg.problem.kind = ProblemKind::elliptic;
  cfg.rule.kind = RuleSpec::Kind::apriori;
  CHECK_NOTHROW(cfg.validate());
}

}
