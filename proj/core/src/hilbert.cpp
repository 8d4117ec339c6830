#include "lavrentiev/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "lavrentiev/error.hpp"

namespace lavrentiev {

Grid::Grid(int n, Layout layout) : n_(n), h_(0.0), layout_(layout) {
  if (n < 2) {
    throw StructuralError(fmt::format("grid needs at least 2 nodes, got {}", n));
  }
  h_ = layout == Layout::right_endpoint ? 1.0 / n : 1.0 / (n + 1);
}

Vector Grid::nodes() const {
  Vector t(n_);
  for (int i = 0; i < n_; ++i) t[i] = node(i + 1);
  return t;
}

DiscreteFunction::DiscreteFunction(Grid grid, Vector values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw StructuralError(fmt::format("value vector has length {}, grid has {} nodes",
                                      values_.size(), grid_.size()));
  }
}

DiscreteFunction DiscreteFunction::zeros(const Grid& grid) {
  return {grid, Vector::Zero(grid.size())};
}

DiscreteFunction DiscreteFunction::constant(const Grid& grid, double c) {
  return {grid, Vector::Constant(grid.size(), c)};
}

DiscreteFunction DiscreteFunction::sample(const Grid& grid,
                                          const std::function<double(double)>& f) {
  Vector v(grid.size());
  for (int i = 0; i < grid.size(); ++i) v[i] = f(grid.node(i + 1));
  return {grid, std::move(v)};
}

DiscreteFunction& DiscreteFunction::operator+=(const DiscreteFunction& other) {
  require_same_grid(*this, other);
  values_ += other.values_;
  return *this;
}

DiscreteFunction& DiscreteFunction::operator-=(const DiscreteFunction& other) {
  require_same_grid(*this, other);
  values_ -= other.values_;
  return *this;
}

DiscreteFunction& DiscreteFunction::operator*=(double s) {
  values_ *= s;
  return *this;
}

void require_same_grid(const DiscreteFunction& u, const DiscreteFunction& v) {
  if (!(u.grid() == v.grid())) {
    throw StructuralError(
        fmt::format("grid mismatch: {} vs {} nodes", u.grid().size(), v.grid().size()));
  }
}

double inner(const Grid& grid, const Vector& u, const Vector& v) {
  return grid.h() * u.dot(v);
}

double norm(const Grid& grid, const Vector& u) {
  return std::sqrt(grid.h() * u.squaredNorm());
}

double inner(const DiscreteFunction& u, const DiscreteFunction& v) {
  require_same_grid(u, v);
  return inner(u.grid(), u.values(), v.values());
}

double norm(const DiscreteFunction& u) { return norm(u.grid(), u.values()); }

namespace {

std::mt19937_64 noise_engine(std::uint64_t seed, double delta, int n) {
  const auto delta_bits = std::bit_cast<std::uint64_t>(delta);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(delta_bits),
                    static_cast<std::uint32_t>(delta_bits >> 32), static_cast<std::uint32_t>(n)};
  return std::mt19937_64(seq);
}

}  // namespace

DiscreteFunction add_noise(const DiscreteFunction& y, const NoiseSpec& spec) {
  if (!(spec.delta >= 0.0)) {
    throw DomainError(fmt::format("noise level must be nonnegative, got {}", spec.delta));
  }
  if (spec.delta == 0.0) return y;

  const Grid& grid = y.grid();
  auto engine = noise_engine(spec.seed, spec.delta, grid.size());
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector e(grid.size());
  double len = 0.0;
  while (len == 0.0) {
    for (int i = 0; i < e.size(); ++i) e[i] = gauss(engine);
    len = norm(grid, e);
  }
  e *= spec.delta / len;
  return {grid, y.values() + e};
}

LogLogFit fit_loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw StructuralError(
        fmt::format("slope fit needs equal lengths, got {} and {}", xs.size(), ys.size()));
  }
  if (xs.size() < 3) {
    throw StructuralError(fmt::format("slope fit needs at least 3 points, got {}", xs.size()));
  }
  const auto count = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw DomainError(fmt::format("log-log fit needs positive data, got ({}, {}) at index {}",
                                    xs[i], ys[i], i));
    }
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= count;
  my /= count;

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    const double dy = std::log(ys[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DomainError("log-log fit needs at least two distinct abscissae");

  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // Constant data is fitted exactly by a flat line.
  fit.r2 = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

}  // namespace lavrentiev
