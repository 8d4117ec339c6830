#include <string>

#include <doctest.h>

#include <lavrentiev/error.hpp>

#include "config.hpp"

using namespace lavrentiev;
using namespace lavrentiev::cli;

TEST_SUITE("config") {

TEST_CASE("defaults from an empty file") {
  const RunConfig c = parse_config_string("");
  CHECK(c.experiment.problem.kind == ProblemKind::volterra);
  CHECK(c.experiment.seeds.size() == 5);
  CHECK(c.experiment.rule.kind == RuleSpec::Kind::apriori);
}

TEST_CASE("a full rate-study file") {
  const RunConfig c = parse_config_string(R"(
[problem]
kind = "volterra"
source = "fractional"
p = 0.4
n = 5000

[noise]
delta0 = 1e-3
ratio = 0.5
count = 6
seeds = [3, 4]

[rule]
kind = "discrepancy"
tau = 2.0
q = 0.8

[solver]
newton_tol = 1e-11

[output]
path = "out.csv"
threads = 2
)");
  const ExperimentConfig& e = c.experiment;
  CHECK(e.problem.source == VolterraSource::fractional);
  CHECK(e.problem.p == 0.4);
  CHECK(e.problem.n == 5000);
  CHECK(e.deltas.delta0 == 1e-3);
  CHECK(e.deltas.count == 6);
  CHECK(e.seeds == std::vector<std::uint64_t>{3, 4});
  CHECK(e.rule.kind == RuleSpec::Kind::discrepancy);
  CHECK(e.rule.discrepancy.tau == 2.0);
  CHECK(e.rule.discrepancy.q == 0.8);
  CHECK(e.newton_tol == 1e-11);
  CHECK(e.output == "out.csv");
  CHECK(e.threads == 2);
}

TEST_CASE("a priori rule forms") {
  const RunConfig c = parse_config_string(R"(
[rule.apriori]
form = "theta_inverse"
psi = "holder"
mu = 0.25
)");
  REQUIRE(c.experiment.rule.apriori.has_value());
  CHECK(c.experiment.rule.apriori->kind == APrioriRule::Kind::theta_inverse);
  CHECK(c.experiment.rule.apriori->psi.mu == 0.25);
}

TEST_CASE("invalid values name the problem") {
  CHECK_THROWS_WITH_AS(parse_config_string("[rule]\nkind = \"discrepancy\"\ntau = 0.9\n"),
                       doctest::Contains("tau must exceed 1"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_string("[problem]\nsize = 3\n"), doctest::Contains("problem.size"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_string("[bogus]\n"), doctest::Contains("bogus"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[problem]\nkind = \"parabolic\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[noise]\nseeds = [1, 1]\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("[problem]\nn = \"many\"\n"), ConfigError);
}

TEST_CASE("syntax errors carry the line") {
  CHECK_THROWS_WITH_AS(parse_config_string("[noise]\ncount = 4\ncount = 5\n", "dup.toml"),
                       doctest::Contains("dup.toml:3"), ConfigError);
}

TEST_CASE("missing files") {
  CHECK_THROWS_WITH_AS(parse_config("/nonexistent/run.toml"), doctest::Contains("not found"), ConfigError);
}

TEST_CASE("command-line overrides") {
  RunConfig c = parse_config_string("[noise]\nseeds = [1, 2, 3]\n");
  Overrides o;
  o.n = 123;
  o.seed = 10;
  o.delta0 = 5e-3;
  o.out = "x.csv";
  apply_overrides(c, o);
  CHECK(c.experiment.problem.n == 123);
  CHECK(c.experiment.seeds == std::vector<std::uint64_t>{10, 11, 12});
  CHECK(c.vsc.sampler.seed == 10);
  CHECK(c.experiment.deltas.delta0 == 5e-3);
  CHECK(c.experiment.output == "x.csv");
  o = {};
  o.delta0 = -1.0;
  CHECK_THROWS_AS(apply_overrides(c, o), ConfigError);
}

TEST_CASE("vsc and fracpow sections") {
  const RunConfig c = parse_config_string(R"(
[vsc]
n = 300
count = 100
bound = 0

[fracpow]
p = 0.75
panels = 200
)");
  CHECK(c.vsc.n == 300);
  CHECK(c.vsc.sampler.count == 100);
  CHECK_FALSE(c.vsc.bound.has_value());
  CHECK(c.fracpow.dunford.p == 0.75);
  CHECK(c.fracpow.dunford.panels == 200);
}

}
