#include <cmath>

#include <doctest.h>

#include <lavrentiev/error.hpp>
#include <lavrentiev/fractional.hpp>

using namespace lavrentiev;

namespace {

DiscreteFunction sample8() {
  Vector v(8);
  v << 1.0, 2.0, -1.0, 0.5, 0.0, 3.0, -2.0, 1.5;
  return {Grid(8), v};
}

}  // namespace

TEST_SUITE("fractional") {

TEST_CASE("Dunford integral reproduces the principal matrix power") {
  // Reference: scipy.linalg.fractional_matrix_power on the dense 8x8 matrix.
  const double half[] = {0.3535533905932741, 0.8838834764831853, 0.1325825214724778, 0.37565047750535374,
                         0.27345145053698544, 1.2968227881526735, 0.03556249924912802, 0.7694274716182727};
  const double quarter[] = {0.5946035575013602, 1.3378580043780604, -0.20439497289109254,
                            0.4041446054892057, 0.17739393243814994, 1.9219369627781395,
                            -0.6266763659694892, 0.9753195888273901};
  const DiscreteFunction v = sample8();
  auto a = volterra(v.grid());
  DunfordSpec spec;
  spec.p = 0.5;
  const FractionalPowerResult r = fractional_power_apply(*a, spec, v);
  CHECK_FALSE(r.accuracy_warning);
  for (int i = 0; i < 8; ++i) CHECK(r.value[i] == doctest::Approx(half[i]).epsilon(1e-9));
  spec.p = 0.25;
  const FractionalPowerResult q = fractional_power_apply(*a, spec, v);
  for (int i = 0; i < 8; ++i) CHECK(q.value[i] == doctest::Approx(quarter[i]).epsilon(1e-9));
}

TEST_CASE("Grunwald weights give the same matrix power") {
  const DiscreteFunction v = sample8();
  const DiscreteFunction r = riemann_liouville(v.grid(), 0.5, v);
  CHECK(r[0] == doctest::Approx(0.3535533905932741).epsilon(1e-13));
  CHECK(r[7] == doctest::Approx(0.7694274716182727).epsilon(1e-13));
}

TEST_CASE("half powers compose to the operator") {
  const Grid g(120);
  auto a = volterra(g);
  const DiscreteFunction v = DiscreteFunction::sample(g, [](double t) { return std::exp(-t) * (1 + t); });
  DunfordSpec spec;
  spec.p = 0.5;
  const DiscreteFunction twice = fractional_power_apply(*a, spec, fractional_power_apply(*a, spec, v).value).value;
  CHECK(norm(twice - (*a)(v)) <= 1e-9 * norm((*a)(v)));
}

TEST_CASE("product integration converges to the continuous Abel integral") {
  // I^p of v = 1 is t^p / Gamma(p+1).
  const double p = 0.3;
  const Grid g(256);
  const DiscreteFunction r = riemann_liouville(g, p, DiscreteFunction::constant(g, 1.0),
                                               RiemannLiouvilleRule::product_integration);
  for (int i : {31, 127, 255}) {
    CHECK(r[i] == doctest::Approx(std::pow(g.node(i + 1), p) / std::tgamma(p + 1)).epsilon(1e-12));
  }
}

TEST_CASE("Abel source is mapped close to one away from the origin") {
  const Grid g(400);
  const DiscreteFunction rec = riemann_liouville(g, 0.25, abel_source(g, 0.25));
  CHECK(std::abs(rec[399] - 1.0) < 0.02);
}

TEST_CASE("invalid exponents are rejected") {
  const Grid g(4);
  auto a = volterra(g);
  DunfordSpec spec;
  spec.p = 1.0;
  CHECK_THROWS_AS(fractional_power_apply(*a, spec, DiscreteFunction::constant(g, 1.0)), DomainError);
  spec.p = 0.5;
  spec.panels = 0;
  CHECK_THROWS_AS(spec.validate(), DomainError);
}

}
