#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include <Eigen/Dense>

namespace lavrentiev {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Uniform grid on (0,1) with rectangle-rule weight h per node.
///
/// Two layouts share the same weighted inner product:
///  - right_endpoint: h = 1/n, nodes t_i = i*h for i = 1..n (t_n = 1);
///  - interior: h = 1/(n+1), nodes t_i = i*h for i = 1..n, boundary values
///    at t_0 = 0 and t_{n+1} = 1 are implicit zeros.
class Grid {
 public:
  enum class Layout { right_endpoint, interior };

  explicit Grid(int n, Layout layout = Layout::right_endpoint);

  int size() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  Layout layout() const noexcept { return layout_; }

  /// Node t_i, 1-based as in the quadrature formulas.
  double node(int i) const noexcept { return i * h_; }
  Vector nodes() const;

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.n_ == b.n_ && a.layout_ == b.layout_;
  }

 private:
  int n_;
  double h_;
  Layout layout_;
};

/// Nodal values on a Grid, an element of the discretised L^2(0,1).
class DiscreteFunction {
 public:
  DiscreteFunction(Grid grid, Vector values);

  static DiscreteFunction zeros(const Grid& grid);
  static DiscreteFunction constant(const Grid& grid, double c);
  static DiscreteFunction sample(const Grid& grid, const std::function<double(double)>& f);

  const Grid& grid() const noexcept { return grid_; }
  const Vector& values() const noexcept { return values_; }
  int size() const noexcept { return grid_.size(); }

  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }

  DiscreteFunction& operator+=(const DiscreteFunction& other);
  DiscreteFunction& operator-=(const DiscreteFunction& other);
  DiscreteFunction& operator*=(double s);

  friend DiscreteFunction operator+(DiscreteFunction a, const DiscreteFunction& b) { return a += b; }
  friend DiscreteFunction operator-(DiscreteFunction a, const DiscreteFunction& b) { return a -= b; }
  friend DiscreteFunction operator*(double s, DiscreteFunction a) { return a *= s; }
  friend DiscreteFunction operator*(DiscreteFunction a, double s) { return a *= s; }
  friend DiscreteFunction operator-(DiscreteFunction a) { return a *= -1.0; }

 private:
  Grid grid_;
  Vector values_;
};

/// Throws StructuralError when the two functions live on different grids.
void require_same_grid(const DiscreteFunction& u, const DiscreteFunction& v);

/// h * sum_i u_i v_i.
double inner(const DiscreteFunction& u, const DiscreteFunction& v);
double norm(const DiscreteFunction& u);

/// Weighted pairing and norm on raw value vectors (weight h).
double inner(const Grid& grid, const Vector& u, const Vector& v);
double norm(const Grid& grid, const Vector& u);

struct NoiseSpec {
  double delta = 0.0;
  std::uint64_t seed = 0;
};

/// Returns y^delta = y + e with ||e|| = delta exactly (to rounding).
///
/// The direction of e is drawn from an isotropic Gaussian whose stream is a
/// pure function of (seed, delta, n).
DiscreteFunction add_noise(const DiscreteFunction& y, const NoiseSpec& spec);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares of log(ys) on log(xs).
LogLogFit fit_loglog_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace lavrentiev
