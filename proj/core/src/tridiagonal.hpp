#pragma once

#include "lavrentiev/hilbert.hpp"

namespace lavrentiev::detail {

/// Solves a tridiagonal system by the Thomas algorithm.
/// lower[i] multiplies x_{i-1} in row i (lower[0] unused), upper[i] multiplies
/// x_{i+1} (upper[n-1] unused). Intended for symmetric positive definite or
/// diagonally dominant matrices, where no pivoting is needed.
Vector solve_tridiagonal(const Vector& lower, const Vector& diag, const Vector& upper,
                         const Vector& rhs);

}  // namespace lavrentiev::detail
