#pragma once

#include <cstdint>
#include <memory>

#include "lavrentiev/hilbert.hpp"

namespace lavrentiev {

/// Bounded linear operator on the discretised L^2(0,1) of a grid.
///
/// Adjoints are taken with respect to the weighted inner product h*sum(u_i v_i).
/// With uniform weights this is the matrix transpose; a non-uniform grid would
/// have to conjugate by the weight matrix here.
class LinearOperator {
 public:
  explicit LinearOperator(Grid grid) : grid_(grid) {}
  virtual ~LinearOperator() = default;

  const Grid& grid() const noexcept { return grid_; }

  virtual Vector apply(const Vector& x) const = 0;
  virtual Vector apply_adjoint(const Vector& x) const = 0;

  /// Solves (A + s I) x = b.
  virtual Vector shifted_solve(double s, const Vector& b) const = 0;

  /// Solves (A A^* + lambda I) z = b.
  virtual Vector normal_shifted_solve(double lambda, const Vector& b) const = 0;

  virtual Matrix to_dense() const = 0;

  DiscreteFunction operator()(const DiscreteFunction& x) const;

 protected:
  LinearOperator(const LinearOperator&) = default;
  LinearOperator& operator=(const LinearOperator&) = default;

 private:
  Grid grid_;
};

/// Operator stored as an explicit n x n matrix.
///
/// Shifted solves reuse a complex Schur factorisation and normal-equation
/// solves reuse an eigendecomposition of A A^T; both are computed on first
/// use and shared between copies.
class DenseOperator final : public LinearOperator {
 public:
  DenseOperator(Grid grid, Matrix entries);

  static DenseOperator identity(const Grid& grid, double scale = 1.0);

  const Matrix& entries() const noexcept { return entries_; }

  Vector apply(const Vector& x) const override;
  Vector apply_adjoint(const Vector& x) const override;
  Vector shifted_solve(double s, const Vector& b) const override;
  Vector normal_shifted_solve(double lambda, const Vector& b) const override;
  Matrix to_dense() const override { return entries_; }

 private:
  struct Factorizations;

  Matrix entries_;
  std::shared_ptr<Factorizations> cache_;
};

/// Integration operator (Ax)(t) = int_0^t x, discretised by the inclusive
/// rectangle rule (Ax)_i = h * sum_{j<=i} x_j.
///
/// The inclusive rule satisfies <Ax,x> = (h^2/2)[(sum x)^2 + sum x^2] >= 0,
/// so it is accretive. Every operation here is O(n).
class VolterraOperator final : public LinearOperator {
 public:
  explicit VolterraOperator(Grid grid);

  Vector apply(const Vector& x) const override;
  Vector apply_adjoint(const Vector& x) const override;

  /// (h+s) x_i - s x_{i-1} = b_i - b_{i-1}, a contractive recurrence.
  Vector shifted_solve(double s, const Vector& b) const override;

  /// Uses (L L^T)^{-1} = tridiag(-1; 1,2,...,2; -1), so
  /// (h^2 L L^T + lambda I)^{-1} = L^{-T} (h^2 I + lambda T)^{-1} L^{-1}.
  Vector normal_shifted_solve(double lambda, const Vector& b) const override;

  Matrix to_dense() const override;
};

std::shared_ptr<const VolterraOperator> volterra(const Grid& grid);

/// Adjoint w.r.t. the weighted inner product (the transpose for uniform weights).
DenseOperator adjoint(const LinearOperator& a);

/// Minimum of the Rayleigh quotient <Ax,x>/||x||^2 over `trials` Gaussian samples.
double accretivity_margin(const LinearOperator& a, int trials, std::uint64_t seed);

/// x with (A + sI) x = v. Throws SolverError if the residual exceeds 1e-10 ||v||.
DiscreteFunction resolvent_apply(const LinearOperator& a, double s, const DiscreteFunction& v);

}  // namespace lavrentiev
