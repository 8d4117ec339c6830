#pragma once

#include <memory>

#include "lavrentiev/operators.hpp"

namespace lavrentiev {

/// Monotone forward operator F together with its derivative.
///
/// Implementations are immutable; every member is safe to call concurrently.
class ForwardModel {
 public:
  virtual ~ForwardModel() = default;

  virtual const Grid& grid() const = 0;

  virtual DiscreteFunction apply(const DiscreteFunction& x) const = 0;

  /// F'(x) dir.
  virtual DiscreteFunction derivative_apply(const DiscreteFunction& x,
                                            const DiscreteFunction& dir) const = 0;

  /// z with (F'(x) + alpha I) z = r.
  virtual DiscreteFunction shifted_jacobian_solve(const DiscreteFunction& x, double alpha,
                                                  const DiscreteFunction& r) const = 0;

  /// Lower bound g(x, x~) <= <F(x) - F(x~), x - x~> that the model guarantees
  /// beyond plain monotonicity (0 when there is none).
  virtual double monotonicity_lower_bound(const DiscreteFunction& x,
                                          const DiscreteFunction& x_tilde) const;
};

/// F = A for an accretive linear operator.
class LinearForward final : public ForwardModel {
 public:
  explicit LinearForward(std::shared_ptr<const LinearOperator> op);

  const Grid& grid() const override { return op_->grid(); }
  const LinearOperator& op() const noexcept { return *op_; }

  DiscreteFunction apply(const DiscreteFunction& x) const override;
  DiscreteFunction derivative_apply(const DiscreteFunction& x,
                                    const DiscreteFunction& dir) const override;
  DiscreteFunction shifted_jacobian_solve(const DiscreteFunction& x, double alpha,
                                          const DiscreteFunction& r) const override;

 private:
  std::shared_ptr<const LinearOperator> op_;
};

std::shared_ptr<const LinearForward> linear_forward(std::shared_ptr<const LinearOperator> op);

enum class XiKind { linear, cubic, arctan };

double xi(XiKind kind, double u);
double xi_prime(XiKind kind, double u);

/// Source-to-state map q -> u of -u'' + xi(u) = q on (0,1), u(0) = u(1) = 0,
/// discretised with the 3-point stencil on the interior nodes of the grid.
///
/// The state is solved by Newton's method: an undamped step first, halving the
/// step while the residual norm fails to decrease. The derivative F'(q) is the
/// solution operator of -w'' + xi'(u) w = dir, symmetric positive definite, and
/// (F'(q) + alpha I) z = r is solved as (I + alpha J) z = J r with the
/// tridiagonal J = -Delta_h + diag(xi'(u)).
///
/// Cubic xi has only a locally Lipschitz derivative; states stay bounded for
/// bounded sources, which is all the Newton solver needs.
class EllipticModel1D final : public ForwardModel {
 public:
  struct Options {
    double newton_tol = 1e-12;
    int max_newton_iters = 50;
  };

  EllipticModel1D(Grid grid, XiKind kind);
  EllipticModel1D(Grid grid, XiKind kind, Options options);

  const Grid& grid() const override { return grid_; }
  XiKind xi_kind() const noexcept { return kind_; }
  const Options& options() const noexcept { return options_; }

  DiscreteFunction apply(const DiscreteFunction& q) const override;
  DiscreteFunction derivative_apply(const DiscreteFunction& q,
                                    const DiscreteFunction& dir) const override;
  DiscreteFunction shifted_jacobian_solve(const DiscreteFunction& q, double alpha,
                                          const DiscreteFunction& r) const override;

  /// Discrete H^1 seminorm squared of F(q) - F(q~), boundary zeros included.
  double monotonicity_lower_bound(const DiscreteFunction& q,
                                  const DiscreteFunction& q_tilde) const override;

  /// Discrete Poincare-Friedrichs constant 1/lambda_min(-Delta_h), the
  /// Lipschitz constant of F.
  double poincare_constant() const;

  /// -Delta_h u with homogeneous boundary values.
  Vector laplacian(const Vector& u) const;

 private:
  Vector solve_state(const Vector& q) const;
  Vector solve_linearised(const Vector& u, const Vector& rhs) const;

  Grid grid_;
  XiKind kind_;
  Options options_;
};

DiscreteFunction elliptic_forward(const EllipticModel1D& model, const DiscreteFunction& q);
DiscreteFunction elliptic_derivative_apply(const EllipticModel1D& model, const DiscreteFunction& q,
                                           const DiscreteFunction& dir);

struct MonotonicityGap {
  double gap = 0.0;
  double grad_bound = 0.0;
};

/// gap = <F(x) - F(x~), x - x~>; grad_bound is the model's lower bound.
MonotonicityGap monotonicity_gap(const ForwardModel& f, const DiscreteFunction& x,
                                 const DiscreteFunction& x_tilde);

}  // namespace lavrentiev
