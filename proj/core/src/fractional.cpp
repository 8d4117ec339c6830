#include "lavrentiev/fractional.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

#include "lavrentiev/error.hpp"

namespace lavrentiev {

namespace {

void require_open_unit(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(fmt::format("{}: exponent must lie in (0,1), got {}", what, p));
  }
}

}  // namespace

void DunfordSpec::validate() const {
  require_open_unit(p, "DunfordSpec");
  if (panels < 8) throw DomainError(fmt::format("DunfordSpec: need at least 8 panels, got {}", panels));
  if (!(log_s_min < log_s_max)) {
    throw DomainError(fmt::format("DunfordSpec: empty range [{}, {}]", log_s_min, log_s_max));
  }
}

FractionalPowerResult fractional_power_apply(const LinearOperator& a, const DunfordSpec& spec,
                                             const DiscreteFunction& v) {
  spec.validate();
  if (!(v.grid() == a.grid())) throw StructuralError("fractional power of function on another grid");

  using rule = boost::math::quadrature::gauss<double, 8>;
  const auto& abscissa = rule::abscissa();
  const auto& weights = rule::weights();

  const double p = spec.p;
  const Vector av = a.apply(v.values());
  const double width = (spec.log_s_max - spec.log_s_min) / spec.panels;

  Vector acc = Vector::Zero(av.size());
  auto add_node = [&](double u, double w) {
    const double s = std::exp(u);
    acc += (w * std::exp(p * u)) * a.shifted_solve(s, av);
  };
  for (int k = 0; k < spec.panels; ++k) {
    const double mid = spec.log_s_min + (k + 0.5) * width;
    const double half = 0.5 * width;
    for (std::size_t j = 0; j < abscissa.size(); ++j) {
      add_node(mid + half * abscissa[j], half * weights[j]);
      if (abscissa[j] != 0.0) add_node(mid - half * abscissa[j], half * weights[j]);
    }
  }

  // s < lo: (A+sI)^{-1}A v = v - s (A+sI)^{-1} v, keep the first term.
  // s > hi: (A+sI)^{-1}A v = Av/s - (A+sI)^{-1}A^2 v/s, keep the first term.
  const double lo = std::exp(spec.log_s_min);
  const double hi = std::exp(spec.log_s_max);
  acc += (std::pow(lo, p) / p) * v.values();
  acc += (std::pow(hi, p - 1.0) / (1.0 - p)) * av;

  const double scale = std::sin(p * std::numbers::pi) / std::numbers::pi;
  acc *= scale;

  const Grid& grid = a.grid();
  const double lower_next = std::pow(lo, p + 1.0) / (p + 1.0) * norm(grid, a.shifted_solve(lo, v.values()));
  const double upper_next = std::pow(hi, p - 2.0) / (2.0 - p) * norm(grid, a.apply(av));
  const double result_norm = norm(grid, acc);
  const double tail = scale * (lower_next + upper_next);

  FractionalPowerResult out{DiscreteFunction(grid, std::move(acc)), 0.0, false};
  out.tail_estimate = result_norm > 0.0 ? tail / result_norm : tail;
  out.accuracy_warning = out.tail_estimate > spec.tail_tolerance;
  return out;
}

DiscreteFunction riemann_liouville(const Grid& grid, double p, const DiscreteFunction& v,
                                   RiemannLiouvilleRule rule) {
  require_open_unit(p, "riemann_liouville");
  if (!(v.grid() == grid)) throw StructuralError("riemann_liouville: function on another grid");

  const int n = grid.size();
  Vector w(n);
  if (rule == RiemannLiouvilleRule::grunwald) {
    w[0] = 1.0;
    for (int k = 1; k < n; ++k) w[k] = w[k - 1] * (k - 1 + p) / k;
  } else {
    const double g = std::tgamma(p + 1.0);
    for (int k = 0; k < n; ++k) w[k] = (std::pow(k + 1.0, p) - std::pow(static_cast<double>(k), p)) / g;
  }
  w *= std::pow(grid.h(), p);

  const Vector& x = v.values();
  Vector out(n);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int k = 0; k <= i; ++k) sum += w[k] * x[i - k];
    out[i] = sum;
  }
  return {grid, std::move(out)};
}

DiscreteFunction abel_source(const Grid& grid, double p) {
  require_open_unit(p, "abel_source");
  const double g = std::tgamma(1.0 - p);
  return DiscreteFunction::sample(grid, [p, g](double t) { return std::pow(t, -p) / g; });
}

}  // namespace lavrentiev
