#include "lavrentiev/forward_models.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "lavrentiev/error.hpp"
#include "tridiagonal.hpp"

namespace lavrentiev {

double ForwardModel::monotonicity_lower_bound(const DiscreteFunction&,
                                              const DiscreteFunction&) const {
  return 0.0;
}

LinearForward::LinearForward(std::shared_ptr<const LinearOperator> op) : op_(std::move(op)) {
  if (!op_) throw StructuralError("linear_forward: null operator");
}

DiscreteFunction LinearForward::apply(const DiscreteFunction& x) const { return (*op_)(x); }

DiscreteFunction LinearForward::derivative_apply(const DiscreteFunction&,
                                                 const DiscreteFunction& dir) const {
  return (*op_)(dir);
}

DiscreteFunction LinearForward::shifted_jacobian_solve(const DiscreteFunction&, double alpha,
                                                       const DiscreteFunction& r) const {
  return resolvent_apply(*op_, alpha, r);
}

std::shared_ptr<const LinearForward> linear_forward(std::shared_ptr<const LinearOperator> op) {
  return std::make_shared<const LinearForward>(std::move(op));
}

double xi(XiKind kind, double u) {
  switch (kind) {
    case XiKind::linear: return u;
    case XiKind::cubic: return u * u * u;
    case XiKind::arctan: return std::atan(u);
  }
  return u;
}

double xi_prime(XiKind kind, double u) {
  switch (kind) {
    case XiKind::linear: return 1.0;
    case XiKind::cubic: return 3.0 * u * u;
    case XiKind::arctan: return 1.0 / (1.0 + u * u);
  }
  return 1.0;
}

EllipticModel1D::EllipticModel1D(Grid grid, XiKind kind) : EllipticModel1D(grid, kind, Options{}) {}

EllipticModel1D::EllipticModel1D(Grid grid, XiKind kind, Options options)
    : grid_(grid), kind_(kind), options_(options) {
  if (grid_.layout() != Grid::Layout::interior) {
    throw StructuralError("EllipticModel1D needs an interior-node grid");
  }
  if (!(options_.newton_tol > 0.0) || options_.max_newton_iters < 1) {
    throw DomainError("EllipticModel1D: newton_tol must be positive and max_newton_iters >= 1");
  }
}

Vector EllipticModel1D::laplacian(const Vector& u) const {
  const Eigen::Index n = u.size();
  const double ih2 = 1.0 / (grid_.h() * grid_.h());
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double left = i > 0 ? u[i - 1] : 0.0;
    const double right = i + 1 < n ? u[i + 1] : 0.0;
    out[i] = (2.0 * u[i] - left - right) * ih2;
  }
  return out;
}

namespace {

struct Residual {
  Vector value;
  double norm = 0.0;
  double floor = 0.0;
};

}  // namespace

Vector EllipticModel1D::solve_state(const Vector& q) const {
  if (q.size() != grid_.size()) throw StructuralError("elliptic_forward: grid mismatch");
  const Eigen::Index n = q.size();
  const double ih2 = 1.0 / (grid_.h() * grid_.h());
  const double qn = norm(grid_, q);

  // The stencil has entries of size 1/h^2, so the residual cannot be evaluated
  // more accurately than a few ulps of its largest terms. Those are the
  // stencil products before cancellation, |K| |u|, not K u itself.
  auto residual = [&](const Vector& u) {
    const Vector ku = laplacian(u);
    const Vector xu = u.unaryExpr([this](double v) { return xi(kind_, v); });
    Vector abs_ku(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double left = i > 0 ? std::abs(u[i - 1]) : 0.0;
      const double right = i + 1 < n ? std::abs(u[i + 1]) : 0.0;
      abs_ku[i] = (2.0 * std::abs(u[i]) + left + right) * ih2;
    }
    Residual r;
    r.value = ku + xu - q;
    r.norm = norm(grid_, r.value);
    r.floor = 8.0 * std::numeric_limits<double>::epsilon() *
              (norm(grid_, abs_ku) + norm(grid_, xu) + qn);
    return r;
  };

  Vector u = Vector::Zero(n);
  Residual r = residual(u);
  Vector lower = Vector::Constant(n, -ih2);
  Vector diag(n);
  for (int iter = 0; iter <= options_.max_newton_iters; ++iter) {
    if (r.norm <= std::max(options_.newton_tol, r.floor)) return u;
    if (iter == options_.max_newton_iters) break;
    for (Eigen::Index i = 0; i < n; ++i) diag[i] = 2.0 * ih2 + xi_prime(kind_, u[i]);
    const Vector step = detail::solve_tridiagonal(lower, diag, lower, -r.value);
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      Vector trial = u + t * step;
      Residual rt = residual(trial);
      if (rt.norm < r.norm) {
        u = std::move(trial);
        r = std::move(rt);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (r.norm <= 16.0 * r.floor) return u;
      break;
    }
  }
  throw SolverError(fmt::format("elliptic Newton did not converge in {} iterations (residual {:.3e})",
                                options_.max_newton_iters, r.norm),
                    r.norm);
}

Vector EllipticModel1D::solve_linearised(const Vector& u, const Vector& rhs) const {
  const Eigen::Index n = u.size();
  const double ih2 = 1.0 / (grid_.h() * grid_.h());
  Vector lower = Vector::Constant(n, -ih2);
  Vector diag(n);
  for (Eigen::Index i = 0; i < n; ++i) diag[i] = 2.0 * ih2 + xi_prime(kind_, u[i]);
  return detail::solve_tridiagonal(lower, diag, lower, rhs);
}

DiscreteFunction EllipticModel1D::apply(const DiscreteFunction& q) const {
  if (!(q.grid() == grid_)) throw StructuralError("elliptic_forward: grid mismatch");
  return {grid_, solve_state(q.values())};
}

// The state is recomputed per call instead of cached, which keeps the model
// immutable and safe to share between threads.
DiscreteFunction EllipticModel1D::derivative_apply(const DiscreteFunction& q,
                                                   const DiscreteFunction& dir) const {
  require_same_grid(q, dir);
  if (!(q.grid() == grid_)) throw StructuralError("elliptic_derivative_apply: grid mismatch");
  const Vector u = solve_state(q.values());
  return {grid_, solve_linearised(u, dir.values())};
}

DiscreteFunction EllipticModel1D::shifted_jacobian_solve(const DiscreteFunction& q, double alpha,
                                                         const DiscreteFunction& r) const {
  require_same_grid(q, r);
  if (!(q.grid() == grid_)) throw StructuralError("shifted_jacobian_solve: grid mismatch");
  if (!(alpha > 0.0)) throw DomainError("shifted_jacobian_solve: alpha must be positive");
  const Vector u = solve_state(q.values());
  const Eigen::Index n = u.size();
  const double ih2 = 1.0 / (grid_.h() * grid_.h());
  // (J^{-1} + alpha I) z = r  <=>  (I + alpha J) z = J r.
  Vector lower = Vector::Constant(n, -alpha * ih2);
  Vector diag(n);
  for (Eigen::Index i = 0; i < n; ++i) diag[i] = 1.0 + alpha * (2.0 * ih2 + xi_prime(kind_, u[i]));
  Vector jr = laplacian(r.values());
  for (Eigen::Index i = 0; i < n; ++i) jr[i] += xi_prime(kind_, u[i]) * r[i];
  return {grid_, detail::solve_tridiagonal(lower, diag, lower, jr)};
}

double EllipticModel1D::monotonicity_lower_bound(const DiscreteFunction& q,
                                                 const DiscreteFunction& q_tilde) const {
  require_same_grid(q, q_tilde);
  const Vector d = solve_state(q.values()) - solve_state(q_tilde.values());
  const Eigen::Index n = d.size();
  double s = d[0] * d[0] + d[n - 1] * d[n - 1];
  for (Eigen::Index i = 0; i + 1 < n; ++i) s += (d[i + 1] - d[i]) * (d[i + 1] - d[i]);
  return s / grid_.h();
}

double EllipticModel1D::poincare_constant() const {
  const double h = grid_.h();
  const double sn = std::sin(std::numbers::pi * h / 2.0);
  return h * h / (4.0 * sn * sn);
}

DiscreteFunction elliptic_forward(const EllipticModel1D& model, const DiscreteFunction& q) {
  return model.apply(q);
}

DiscreteFunction elliptic_derivative_apply(const EllipticModel1D& model, const DiscreteFunction& q,
                                           const DiscreteFunction& dir) {
  return model.derivative_apply(q, dir);
}

MonotonicityGap monotonicity_gap(const ForwardModel& f, const DiscreteFunction& x,
                                 const DiscreteFunction& x_tilde) {
  require_same_grid(x, x_tilde);
  MonotonicityGap out;
  out.gap = inner(f.apply(x) - f.apply(x_tilde), x - x_tilde);
  out.grad_bound = f.monotonicity_lower_bound(x, x_tilde);
  return out;
}

}  // namespace lavrentiev
