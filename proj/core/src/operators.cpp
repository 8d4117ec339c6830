#include "lavrentiev/operators.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <random>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "lavrentiev/error.hpp"
#include "tridiagonal.hpp"

namespace lavrentiev {

namespace detail {

Vector solve_tridiagonal(const Vector& lower, const Vector& diag, const Vector& upper,
                         const Vector& rhs) {
  const Eigen::Index n = diag.size();
  Vector c(n);
  Vector x(n);
  double denom = diag[0];
  if (denom == 0.0) throw SolverError("singular tridiagonal system", 0.0);
  c[0] = n > 1 ? upper[0] / denom : 0.0;
  x[0] = rhs[0] / denom;
  for (Eigen::Index i = 1; i < n; ++i) {
    denom = diag[i] - lower[i] * c[i - 1];
    if (denom == 0.0) throw SolverError("singular tridiagonal system", 0.0);
    c[i] = i + 1 < n ? upper[i] / denom : 0.0;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / denom;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
  return x;
}

}  // namespace detail

namespace {

inline double flush_tiny(double v) { return std::abs(v) < 1e-290 ? 0.0 : v; }

void require_length(const LinearOperator& a, const Vector& x) {
  if (x.size() != a.grid().size()) {
    throw StructuralError(fmt::format("operator of dimension {} applied to vector of length {}",
                                      a.grid().size(), x.size()));
  }
}

}  // namespace

DiscreteFunction LinearOperator::operator()(const DiscreteFunction& x) const {
  if (!(x.grid() == grid_)) throw StructuralError("operator applied to function on another grid");
  return {grid_, apply(x.values())};
}

// --- DenseOperator -----------------------------------------------------------

struct DenseOperator::Factorizations {
  std::once_flag schur_once;
  Eigen::MatrixXcd schur_u;
  Eigen::MatrixXcd schur_t;

  std::once_flag normal_once;
  Matrix normal_vectors;
  Vector normal_values;
};

DenseOperator::DenseOperator(Grid grid, Matrix entries)
    : LinearOperator(grid), entries_(std::move(entries)),
      cache_(std::make_shared<Factorizations>()) {
  if (entries_.rows() != grid.size() || entries_.cols() != grid.size()) {
    throw StructuralError(fmt::format("dense operator must be {0}x{0}, got {1}x{2}", grid.size(),
                                      entries_.rows(), entries_.cols()));
  }
}

DenseOperator DenseOperator::identity(const Grid& grid, double scale) {
  return {grid, scale * Matrix::Identity(grid.size(), grid.size())};
}

Vector DenseOperator::apply(const Vector& x) const {
  require_length(*this, x);
  return entries_ * x;
}

Vector DenseOperator::apply_adjoint(const Vector& x) const {
  require_length(*this, x);
  return entries_.transpose() * x;
}

Vector DenseOperator::shifted_solve(double s, const Vector& b) const {
  require_length(*this, b);
  std::call_once(cache_->schur_once, [this] {
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(entries_.cast<std::complex<double>>());
    cache_->schur_u = schur.matrixU();
    cache_->schur_t = schur.matrixT();
  });
  const auto& t = cache_->schur_t;
  for (Eigen::Index k = 0; k < t.rows(); ++k) {
    if (std::abs(t(k, k) + s) == 0.0) {
      throw SolverError(fmt::format("A + {}I is singular", s), b.norm());
    }
  }
  Eigen::MatrixXcd shifted = t;
  shifted.diagonal().array() += s;
  Eigen::VectorXcd y = cache_->schur_u.adjoint() * b.cast<std::complex<double>>();
  shifted.triangularView<Eigen::Upper>().solveInPlace(y);
  return (cache_->schur_u * y).real();
}

Vector DenseOperator::normal_shifted_solve(double lambda, const Vector& b) const {
  require_length(*this, b);
  std::call_once(cache_->normal_once, [this] {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(entries_ * entries_.transpose());
    cache_->normal_vectors = eig.eigenvectors();
    cache_->normal_values = eig.eigenvalues().cwiseMax(0.0);
  });
  const Vector coeff = cache_->normal_vectors.transpose() * b;
  const Vector scaled = coeff.array() / (cache_->normal_values.array() + lambda);
  return cache_->normal_vectors * scaled;
}

// --- VolterraOperator --------------------------------------------------------

VolterraOperator::VolterraOperator(Grid grid) : LinearOperator(grid) {}

Vector VolterraOperator::apply(const Vector& x) const {
  require_length(*this, x);
  const double h = grid().h();
  Vector y(x.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    acc += x[i];
    y[i] = h * acc;
  }
  return y;
}

Vector VolterraOperator::apply_adjoint(const Vector& x) const {
  require_length(*this, x);
  const double h = grid().h();
  Vector y(x.size());
  double acc = 0.0;
  for (Eigen::Index i = x.size() - 1; i >= 0; --i) {
    acc += x[i];
    y[i] = h * acc;
  }
  return y;
}

Vector VolterraOperator::shifted_solve(double s, const Vector& b) const {
  require_length(*this, b);
  const double h = grid().h();
  const double denom = h + s;
  if (denom == 0.0) throw SolverError(fmt::format("A + {}I is singular", s), b.norm());
  Vector x(b.size());
  double prev_x = 0.0;
  double prev_b = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    prev_x = flush_tiny((b[i] - prev_b + s * prev_x) / denom);
    prev_b = b[i];
    x[i] = prev_x;
  }
  return x;
}

Vector VolterraOperator::normal_shifted_solve(double lambda, const Vector& b) const {
  require_length(*this, b);
  const Eigen::Index n = b.size();
  const double h2 = grid().h() * grid().h();

  // Thomas algorithm for (h^2 I + lambda T) y = L^{-1} b with constant
  // off-diagonal -lambda, fused with the differencing on both sides.
  //
  // The pivot ratios c_i = -lambda/(d + lambda c_{i-1}) converge to a fixed
  // point; once c_i repeats exactly, every later pivot is the same number and
  // the divisions (a serial latency chain at very large n) become a multiply
  // by one reciprocal. Both sweeps decay geometrically where b is
  // flat; flushing to zero keeps them out of the (very slow) subnormal range.
  Vector c(n);
  Vector y(n);
  const double d = h2 + 2.0 * lambda;
  double denom = h2 + lambda;
  c[0] = -lambda / denom;
  y[0] = b[0] / denom;
  Eigen::Index i = 1;
  for (; i < n; ++i) {
    denom = d + lambda * c[i - 1];
    c[i] = -lambda / denom;
    y[i] = flush_tiny((b[i] - b[i - 1] + lambda * y[i - 1]) / denom);
    if (c[i] == c[i - 1]) {
      ++i;
      break;
    }
  }
  const Eigen::Index settled = i;
  if (settled < n) {
    const double c_inf = c[settled - 1];
    const double inv = 1.0 / denom;
    for (; i < n; ++i) y[i] = flush_tiny((b[i] - b[i - 1] + lambda * y[i - 1]) * inv);
    for (i = n - 2; i >= settled - 1; --i) y[i] = flush_tiny(y[i] - c_inf * y[i + 1]);
  } else {
    i = n - 2;
  }
  for (; i >= 0; --i) y[i] = flush_tiny(y[i] - c[i] * y[i + 1]);

  for (i = 0; i + 1 < n; ++i) y[i] -= y[i + 1];
  return y;
}

Matrix VolterraOperator::to_dense() const {
  const int n = grid().size();
  Matrix m = Matrix::Zero(n, n);
  m.triangularView<Eigen::Lower>().setConstant(grid().h());
  return m;
}

std::shared_ptr<const VolterraOperator> volterra(const Grid& grid) {
  return std::make_shared<const VolterraOperator>(grid);
}

DenseOperator adjoint(const LinearOperator& a) {
  return {a.grid(), a.to_dense().transpose()};
}

double accretivity_margin(const LinearOperator& a, int trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("accretivity_margin needs at least one trial");
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Grid& grid = a.grid();
  double margin = std::numeric_limits<double>::infinity();
  Vector x(grid.size());
  for (int k = 0; k < trials; ++k) {
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = gauss(engine);
    const double nx2 = inner(grid, x, x);
    if (nx2 == 0.0) continue;
    margin = std::min(margin, inner(grid, a.apply(x), x) / nx2);
  }
  return margin;
}

DiscreteFunction resolvent_apply(const LinearOperator& a, double s, const DiscreteFunction& v) {
  if (!(s > 0.0)) throw DomainError(fmt::format("resolvent shift must be positive, got {}", s));
  if (!(v.grid() == a.grid())) throw StructuralError("resolvent applied to function on another grid");
#ifndef NDEBUG
  if (accretivity_margin(a, 4, 0x5eed) < -1e-10) {
    throw DomainError("resolvent_apply requires an accretive operator");
  }
#endif
  Vector x = a.shifted_solve(s, v.values());
  const double residual = norm(a.grid(), a.apply(x) + s * x - v.values());
  const double scale = norm(v);
  if (!(residual <= 1e-10 * scale) && residual != 0.0) {
    throw SolverError(fmt::format("resolvent residual {:.3e} exceeds 1e-10*||v|| = {:.3e}",
                                  residual, 1e-10 * scale),
                      residual);
  }
  return {a.grid(), std::move(x)};
}

}  // namespace lavrentiev
