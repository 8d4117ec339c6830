#pragma once

#include <span>
#include <vector>

#include "lavrentiev/solver.hpp"

namespace lavrentiev {

/// Psi of a variational source condition and Theta(alpha) = alpha^2 Psi(alpha).
///
///  - holder(mu):  Psi(a) = (1-mu) mu^{mu/(1-mu)} a^{mu/(1-mu)}, 0 < mu <= 1/2
///  - logarithmic: Psi(a) = 1/(-ln a) on (0,1)
///  - linear:      Psi(a) = a
struct PsiSpec {
  enum class Kind { holder, logarithmic, linear };
  Kind kind = Kind::linear;
  double mu = 0.5;

  static PsiSpec holder(double mu);
  static PsiSpec logarithmic() { return {Kind::logarithmic, 0.0}; }
  static PsiSpec linear() { return {Kind::linear, 0.5}; }

  double psi(double alpha) const;
  double theta(double alpha) const;
  /// Exponent e of the error rate O(delta^e) under the a priori choice;
  /// mu/(2-mu) for Hoelder-type Psi, NaN for the logarithmic case.
  double rate_exponent() const;
  /// Exponent of alpha(delta) = Theta^{-1}(delta^2), NaN for the logarithmic case.
  double alpha_exponent() const;
};

struct APrioriRule {
  enum class Kind { power_law, theta_inverse };
  Kind kind = Kind::power_law;
  double c = 1.0;
  double theta = 0.5;
  PsiSpec psi{};

  static APrioriRule power_law(double c, double theta);
  static APrioriRule theta_inverse(PsiSpec psi);
  void validate() const;
};

/// power_law: C delta^theta. theta_inverse: the alpha in [1e-16, 1e2] with
/// Theta(alpha) = delta^2, by bisection in log(alpha).
double apriori_alpha(double delta, const APrioriRule& rule);

struct DiscrepancyRule {
  double tau = 1.5;
  double kappa = 0.9;
  double q = 0.5;
  double alpha0 = 1.0;
  int max_steps = 200;
  void validate() const;
};

struct AuditEntry {
  double alpha = 0.0;
  double discrepancy = 0.0;
};

struct DiscrepancyResult {
  double alpha = 0.0;
  int index = 0;
  RegularizedSolution solution;
  double threshold = 0.0;
  /// (alpha_k, discrepancy) for k = 0..index.
  std::vector<AuditEntry> trail;
};

/// Sequential discrepancy principle: scans alpha_k = q^k alpha0 downward with
/// warm-started solves and returns the first alpha_k whose discrepancy is at
/// most tau delta^kappa. Every larger grid value has already failed the test,
/// so the first hit is the maximum of the admissible set.
///
/// Throws DomainError("alpha0 below discrepancy threshold") when alpha0
/// already passes, and SolverError when max_steps is exhausted.
DiscrepancyResult discrepancy_alpha(const ForwardModel& f, const DiscreteFunction& xbar,
                                    const DiscreteFunction& ydelta, double delta,
                                    const DiscrepancyRule& rule, const LavrentievConfig& solver);

struct LepskiiRule {
  double beta = 0.0;
  double q = 0.5;
  double alpha0 = 1.0;
  int j_max = 60;
  void validate() const;
};

/// Sigma(alpha, delta) = sqrt(3 - 2 beta)/(1 - beta) * delta/alpha.
double sigma(double alpha, double delta, double beta);

/// alpha_j = alpha0 / q^j for j = 0..j_max.
std::vector<double> lepskii_grid(const LepskiiRule& rule);

struct PairTest {
  int i = 0;
  int j = 0;
  double distance = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct LepskiiResult {
  double alpha = 0.0;
  int index = 0;
  RegularizedSolution solution;
  std::vector<PairTest> trail;
};

/// Balancing principle on an ascending path: the largest alpha_j with
/// ||x_{alpha_i} - x_{alpha_j}|| <= 2 Sigma(alpha_i, delta) for all i <= j.
/// Candidates are scanned upward and the scan stops at the first j with a
/// violated pair, returning j - 1.
LepskiiResult lepskii_alpha(std::span<const RegularizedSolution> path, double delta,
                            const LepskiiRule& rule);

/// Solves the path lazily on lepskii_grid(rule), stopping after the first
/// failing candidate; the result equals lepskii_alpha on the full path.
LepskiiResult lepskii_select(const ForwardModel& f, const DiscreteFunction& xbar,
                             const DiscreteFunction& ydelta, double delta, const LepskiiRule& rule,
                             const LavrentievConfig& solver);

/// Lower bound q (tau - 1) delta^kappa / ||x+ - xbar|| on the discrepancy choice.
double discrepancy_alpha_lower_bound(double delta, const DiscrepancyRule& rule,
                                     double source_distance);

}  // namespace lavrentiev
