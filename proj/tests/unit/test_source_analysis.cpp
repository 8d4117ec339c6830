#include <cmath>
#include <vector>

#include <doctest.h>

#include <lavrentiev/error.hpp>
#include <lavrentiev/source_analysis.hpp>

using namespace lavrentiev;

namespace {

DenseOperator diagonal4() {
  Vector a(4);
  a << 1.0, 0.5, 0.1, 0.01;
  return {Grid(4), a.asDiagonal().toDenseMatrix()};
}

DistanceProfile analytic_profile(double k) {
  DistanceProfile p{{}, {}, {}, {}, {}, DiscreteFunction::constant(Grid(2), 1.0), true};
  for (int i = 0; i <= 40; ++i) {
    const double r = std::pow(10.0, -1.0 + i / 10.0);
    p.R.push_back(r);
    p.d.push_back(k / r);
    p.lambda.push_back(1.0);
    p.theta_residual.push_back(0.0);
    p.status.push_back(ProfileStatus::ok);
  }
  return p;
}

}  // namespace

TEST_SUITE("source_analysis") {

TEST_CASE("distance function of a diagonal operator") {
  // Reference: closed-form theta and d for A = diag(a), lambda by scipy brentq.
  const double expect[] = {0.7876369992052745, 0.68668930891303, 0.5438777473060904, 0.41346255375485313};
  const DenseOperator a = diagonal4();
  const std::vector<double> radii{0.5, 1.0, 3.0, 10.0};
  const DistanceProfile p = distance_function(a, DiscreteFunction::constant(a.grid(), 1.0), radii);
  CHECK(p.theta_monotone);
  for (int i = 0; i < 4; ++i) {
    CHECK(p.status[i] == ProfileStatus::ok);
    CHECK(p.d[i] == doctest::Approx(expect[i]).epsilon(1e-8));
  }
}

TEST_CASE("multiplier evaluation") {
  const DenseOperator a = diagonal4();
  const MultiplierEvaluation m = evaluate_multiplier(a, DiscreteFunction::constant(a.grid(), 1.0), 0.25);
  double theta = 0.0;
  double d2 = 0.0;
  for (double ai : {1.0, 0.5, 0.1, 0.01}) {
    theta += 0.25 * ai * ai / std::pow(ai * ai + 0.25, 2);
    d2 += 0.25 * 0.0625 / std::pow(ai * ai + 0.25, 2);
  }
  CHECK(m.theta == doctest::Approx(theta).epsilon(1e-13));
  CHECK(m.distance == doctest::Approx(std::sqrt(d2)).epsilon(1e-13));
}

TEST_CASE("radii beyond the source norm saturate") {
  // element = A w with ||w|| = 1: for R > 1 the distance vanishes.
  const Grid g(200);
  auto a = volterra(g);
  const DiscreteFunction w = DiscreteFunction::constant(g, 1.0);
  const std::vector<double> radii{0.5, 2.0};
  const DistanceProfile p = distance_function(*a, (*a)(w), radii);
  CHECK(p.status[0] == ProfileStatus::ok);
  CHECK(p.d[0] > 1e-4);
  CHECK(p.d[1] <= kCollapseLevel);
}

TEST_CASE("rate prediction from an analytic profile") {
  // d = K/R gives alpha = K^{-1/3} delta^{2/3} and error K^{1/3} delta^{1/3}.
  const double k = 0.5;
  const std::vector<double> deltas{1e-2, 1e-3, 1e-4};
  const RatePrediction r = rate_from_distance(analytic_profile(k), deltas);
  CHECK_FALSE(r.collapsed);
  for (const RatePredictionEntry& e : r.entries) {
    CHECK(e.status == PredictionStatus::ok);
    CHECK(e.err_pred == doctest::Approx(std::cbrt(k * e.delta)).epsilon(1e-10));
    CHECK(e.alpha_pred == doctest::Approx(std::pow(e.delta, 2.0 / 3.0) / std::cbrt(k)).epsilon(1e-10));
  }
}

TEST_CASE("collapsed profiles follow the square-root branch") {
  DistanceProfile p = analytic_profile(0.5);
  for (std::size_t i = 30; i < p.d.size(); ++i) p.d[i] = 0.0;
  const std::vector<double> deltas{1e-2, 1e-4};
  const RatePrediction r = rate_from_distance(p, deltas);
  CHECK(r.collapsed);
  for (const RatePredictionEntry& e : r.entries) {
    CHECK(e.status == PredictionStatus::sqrt_delta_branch);
    CHECK(e.alpha_pred == doctest::Approx(std::sqrt(e.delta)));
  }
}

TEST_CASE("deltas outside the tabulated range are flagged") {
  const std::vector<double> deltas{1e-30};
  const RatePrediction r = rate_from_distance(analytic_profile(0.5), deltas);
  CHECK(r.entries[0].status == PredictionStatus::out_of_range);
}

TEST_CASE("variational source condition for the Volterra problem") {
  const Grid g(100);
  auto f = linear_forward(volterra(g));
  RadialSampler s;
  s.count = 500;
  const VscReport r = vsc_verify(*f, DiscreteFunction::constant(g, 1.0), DiscreteFunction::zeros(g),
                                 {VscVariant::Kind::lavrentiev, 0.5}, 0.0, s);
  CHECK(r.violations == 0);
  CHECK(r.sample_count == 516);
  CHECK(r.fitted_coefficient > 0.5);
  CHECK(r.fitted_coefficient <= std::sqrt(2.0) * (1 + 1e-10));
  const auto samples = radial_samples(DiscreteFunction::constant(g, 1.0), DiscreteFunction::zeros(g), s);
  const VscReport again = vsc_verify_samples(*f, DiscreteFunction::constant(g, 1.0), DiscreteFunction::zeros(g),
                                             {VscVariant::Kind::lavrentiev, 0.5}, 0.0, samples);
  CHECK(again.fitted_coefficient == r.fitted_coefficient);
}

TEST_CASE("index function conversion") {
  const PsiSpec p = psi_from_phi({PhiVariant::Kind::holder, 0.25});
  CHECK(p.kind == PsiSpec::Kind::holder);
  CHECK(p.mu == 0.25);
  CHECK(psi_from_phi({PhiVariant::Kind::logarithmic, 0.0}).kind == PsiSpec::Kind::logarithmic);
}

}
