#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <lavrentiev/forward_models.hpp>

using namespace lavrentiev;

namespace {

const Grid kInterior5(5, Grid::Layout::interior);

DiscreteFunction q5() {
  Vector q(5);
  q << 10.0, 40.0, -20.0, 30.0, 5.0;
  return {kInterior5, q};
}

DiscreteFunction random_function(const Grid& g, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  Vector v(g.size());
  for (double& e : v) e = scale * n(rng);
  return {g, v};
}

}  // namespace

TEST_SUITE("forward_models") {

TEST_CASE("state equation matches dense references") {
  // Reference: numpy solve / scipy fsolve of K u + xi(u) = q, K the 3-point stencil.
  const double linear[] = {0.9130133274988209, 1.5736103585392756, 1.166807677316932, 1.347971876020059,
                           0.7332464046126318};
  const double cubic[] = {0.8777567357358295, 1.4965210748681057, 1.0972735161224623, 1.2902794955577617,
                          0.7096211591044668};
  const double arctan[] = {0.9351937148042112, 1.6134963853278244, 1.2089092018403038, 1.3843135021891293,
                           0.7526402410567068};
  const DiscreteFunction ul = EllipticModel1D(kInterior5, XiKind::linear).apply(q5());
  const DiscreteFunction uc = EllipticModel1D(kInterior5, XiKind::cubic).apply(q5());
  const DiscreteFunction ua = EllipticModel1D(kInterior5, XiKind::arctan).apply(q5());
  for (int i = 0; i < 5; ++i) {
    CHECK(ul[i] == doctest::Approx(linear[i]).epsilon(1e-12));
    CHECK(uc[i] == doctest::Approx(cubic[i]).epsilon(1e-12));
    CHECK(ua[i] == doctest::Approx(arctan[i]).epsilon(1e-12));
  }
}

TEST_CASE("state solve converges on fine grids") {
  // The stencil entries reach 2/h^2 = 5e7 here; the stopping rule must not ask
  // for a residual below the rounding of those products.
  const Grid g(5000, Grid::Layout::interior);
  const EllipticModel1D m(g, XiKind::cubic);
  const double pi = std::numbers::pi;
  const DiscreteFunction q = DiscreteFunction::sample(g, [&](double t) {
    const double s = std::sin(pi * t);
    return pi * pi * s + s * s * s;
  });
  const DiscreteFunction u = m.apply(q);
  double err = 0.0;
  for (int i = 0; i < g.size(); ++i) err = std::max(err, std::abs(u[i] - std::sin(pi * g.node(i + 1))));
  CHECK(err < 1e-6);
}

TEST_CASE("xi and its derivative") {
  CHECK(xi(XiKind::cubic, -2.0) == doctest::Approx(-8.0));
  CHECK(xi_prime(XiKind::cubic, -2.0) == doctest::Approx(12.0));
  CHECK(xi(XiKind::arctan, 1.0) == doctest::Approx(std::numbers::pi / 4));
  CHECK(xi_prime(XiKind::arctan, 1.0) == doctest::Approx(0.5));
  CHECK(xi_prime(XiKind::linear, 7.0) == doctest::Approx(1.0));
}

TEST_CASE("derivative agrees with central differences") {
  const Grid g(40, Grid::Layout::interior);
  const EllipticModel1D m(g, XiKind::cubic);
  const DiscreteFunction q = DiscreteFunction::sample(g, [](double t) { return 30 * std::sin(3 * t); });
  const DiscreteFunction dir = random_function(g, 4, 1.0);
  const double eps = 1e-5;
  const DiscreteFunction fd = (1.0 / (2 * eps)) * (m.apply(q + eps * dir) - m.apply(q - eps * dir));
  const DiscreteFunction d = m.derivative_apply(q, dir);
  CHECK(norm(fd - d) <= 1e-8 * norm(d));
}

TEST_CASE("shifted jacobian solve inverts F'(q) + alpha I") {
  const Grid g(60, Grid::Layout::interior);
  const EllipticModel1D m(g, XiKind::cubic);
  const DiscreteFunction q = DiscreteFunction::sample(g, [](double t) { return 20 * std::sin(std::numbers::pi * t); });
  const DiscreteFunction r = random_function(g, 8, 1.0);
  for (double alpha : {1e-6, 1e-2, 10.0}) {
    const DiscreteFunction z = m.shifted_jacobian_solve(q, alpha, r);
    const DiscreteFunction back = m.derivative_apply(q, z) + alpha * z;
    CHECK(norm(back - r) <= 1e-10 * norm(r));
  }
}

TEST_CASE("poincare constant is the inverse smallest eigenvalue of the stencil") {
  const Grid g(30, Grid::Layout::interior);
  const EllipticModel1D m(g, XiKind::linear);
  Matrix k(30, 30);
  for (int j = 0; j < 30; ++j) {
    Vector e = Vector::Zero(30);
    e[j] = 1.0;
    k.col(j) = m.laplacian(e);
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> es(k);
  CHECK(m.poincare_constant() == doctest::Approx(1.0 / es.eigenvalues()[0]).epsilon(1e-12));
}

TEST_CASE("monotonicity gap dominates the gradient bound") {
  const Grid g(50, Grid::Layout::interior);
  const EllipticModel1D m(g, XiKind::cubic);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const MonotonicityGap gap = monotonicity_gap(m, random_function(g, 2 * s, 5.0), random_function(g, 2 * s + 1, 5.0));
    CHECK(gap.gap >= gap.grad_bound - 1e-10);
    CHECK(gap.grad_bound > 0.0);
  }
}

TEST_CASE("linear forward wraps an operator") {
  const Grid g(10);
  auto f = linear_forward(volterra(g));
  const DiscreteFunction x = DiscreteFunction::constant(g, 2.0);
  CHECK(norm(f->apply(x) - f->op()(x)) == 0.0);
  CHECK(norm(f->derivative_apply(x, x) - f->op()(x)) == 0.0);
}

}
