#include <random>

#include <doctest.h>

#include <lavrentiev/operators.hpp>

using namespace lavrentiev;

namespace {

Vector random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Vector v(n);
  for (double& e : v) e = g(rng);
  return v;
}

void check_close(const Vector& a, const Vector& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(tol));
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("volterra apply is a scaled cumulative sum") {
  auto a = volterra(Grid(5));
  Vector x(5);
  x << 1, 2, 3, 4, 5;
  Vector expect(5);
  expect << 0.2, 0.6, 1.2, 2.0, 3.0;
  check_close(a->apply(x), expect, 1e-14);
}

TEST_CASE("volterra shifted and normal solves match dense references") {
  auto a = volterra(Grid(4));
  Vector b(4);
  b << 1.0, -2.0, 0.5, 3.0;
  Vector shifted(4);
  shifted << 1.8181818181818181, -4.462809917355371, 2.1111945905334335, 5.697015231200054;
  check_close(a->shifted_solve(0.3, b), shifted, 1e-12);
  Vector normal(4);
  normal << 11.48014398151733, -23.9324406248963, -2.1418472178244827, 17.736382601904047;
  check_close(a->normal_shifted_solve(0.07, b), normal, 1e-12);
}

TEST_CASE("volterra matches its dense matrix on large grids") {
  const Grid g(300);
  auto a = volterra(g);
  const DenseOperator d(g, a->to_dense());
  const Vector x = random_vector(300, 3);
  check_close(a->apply(x), d.apply(x), 1e-12);
  check_close(a->apply_adjoint(x), d.apply_adjoint(x), 1e-12);
  check_close(a->shifted_solve(1e-3, x), d.shifted_solve(1e-3, x), 1e-9);
  check_close(a->normal_shifted_solve(1e-4, x), d.normal_shifted_solve(1e-4, x), 1e-8);
}

TEST_CASE("adjoint satisfies the inner product identity") {
  const Grid g(50);
  auto a = volterra(g);
  const Vector x = random_vector(50, 1);
  const Vector y = random_vector(50, 2);
  CHECK(inner(g, a->apply(x), y) == doctest::Approx(inner(g, x, a->apply_adjoint(y))).epsilon(1e-13));
  const DenseOperator at = adjoint(*a);
  check_close(at.apply(x), a->apply_adjoint(x), 1e-13);
}

TEST_CASE("accretivity margin of the volterra matrix is h/2") {
  // <hL x, x> = h^2/2 ((sum x)^2 + |x|^2) >= h/2 |x|_h^2
  const Grid g(80);
  CHECK(accretivity_margin(*volterra(g), 200, 5) >= 0.5 * g.h() - 1e-14);
}

TEST_CASE("negative shift is rejected where it is not invertible") {
  auto a = volterra(Grid(4));
  CHECK_THROWS(a->shifted_solve(-0.25, Vector::Ones(4)));
}

TEST_CASE("resolvent apply inverts the shifted operator") {
  const Grid g(64);
  auto a = volterra(g);
  const DiscreteFunction v(g, random_vector(64, 9));
  const DiscreteFunction r = resolvent_apply(*a, 0.01, v);
  const DiscreteFunction back = (*a)(r) + 0.01 * r;
  CHECK(norm(back - v) <= 1e-13 * norm(v));
}

}
