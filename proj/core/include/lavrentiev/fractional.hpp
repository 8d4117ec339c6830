#pragma once

#include "lavrentiev/operators.hpp"

namespace lavrentiev {

/// Quadrature parameters for the Dunford integral
///   A^p v = sin(p pi)/pi * int_0^inf s^{p-1} (A + sI)^{-1} A v ds
/// after the substitution s = e^u. The integral over [log_s_min, log_s_max]
/// uses `panels` composite Gauss-Legendre panels of order 8; the two tails are
/// replaced by their leading asymptotic terms.
struct DunfordSpec {
  double p = 0.5;
  int panels = 400;
  double log_s_min = -40.0;
  double log_s_max = 40.0;
  /// Relative size of the first neglected tail terms above which the result
  /// is flagged.
  double tail_tolerance = 1e-6;

  void validate() const;
};

struct FractionalPowerResult {
  DiscreteFunction value;
  /// Estimated relative error of the tail approximation.
  double tail_estimate = 0.0;
  bool accuracy_warning = false;
};

/// A^p v for accretive A and 0 < p < 1, one resolvent solve per quadrature node.
FractionalPowerResult fractional_power_apply(const LinearOperator& a, const DunfordSpec& spec,
                                             const DiscreteFunction& v);

enum class RiemannLiouvilleRule {
  /// Weights h^p * Gamma(k+p)/(Gamma(p) k!), i.e. the exact p-th power
  /// (hL)^p = h^p (I - S)^{-p} of the inclusive-rectangle Volterra matrix.
  grunwald,
  /// Weights h^p * ((k+1)^p - k^p)/Gamma(p+1): the Abel kernel integrated
  /// exactly against the piecewise-constant interpolant of v.
  product_integration,
};

/// Riemann-Liouville integral (1/Gamma(p)) int_0^t (t-s)^{p-1} v(s) ds at the
/// grid nodes, O(n^2).
DiscreteFunction riemann_liouville(const Grid& grid, double p, const DiscreteFunction& v,
                                   RiemannLiouvilleRule rule = RiemannLiouvilleRule::grunwald);

/// v(t) = t^{-p}/Gamma(1-p), the Abel-equation solution of A^p v = 1.
DiscreteFunction abel_source(const Grid& grid, double p);

}  // namespace lavrentiev
