#pragma once

#include <span>
#include <vector>

#include "plap/exponents.hpp"
#include "plap/radial_ops.hpp"
#include "plap/report.hpp"

namespace plap {

/// Recursion φ_n ≤ c^n φ_{n-1}^k with k > 1.
struct RecursionSpec {
  double c = 2.0;
  double k = 2.0;
  double phi0 = 1.0;
  int n_max = 10;

  void validate() const;
};

/// log(φ_n^(k^-n)) for the extremal sequence φ_n = c^n φ_{n-1}^k, n = 0..n_max.
/// Accumulated as x_n = x_{n-1} + n log c / k^n, so nothing overflows.
std::vector<double> moser_normalized_logs(const RecursionSpec& spec);

/// Checks φ_n^(k^-n) ≤ c^(k/(k-1)²) φ0 along the extremal sequence.
/// residual = min_n (log bound - log φ_n^(k^-n)); extras carry max_ratio.
IdentityReport moser_recursion_bound(const RecursionSpec& spec);

/// Same bound for an arbitrary sequence given by log φ_0..log φ_n. Throws
/// InvalidParams if the sequence violates the recursion hypothesis.
IdentityReport moser_sequence_bound(std::span<const double> log_phi, double c, double k);

/// Piecewise-linear radial cutoff: 0 outside (r_a, r_b), 1 on
/// [plateau_lo, plateau_hi], linear in between.
struct RadialCutoff {
  double r_a = 1.0;
  double plateau_lo = 2.0;
  double plateau_hi = 2.0;
  double r_b = 3.0;

  static RadialCutoff tent(double r_a, double r_b);
  double value(double r) const;
  double slope(double r) const;
};

/// ∫|u'|^p ζ^p r^(N-1) dr ≤ p^p ∫|u|^p |ζ'|^p r^(N-1) dr for p-harmonic u.
/// lhs/rhs are the two sides (rhs includes p^p); extras carry the ratio and
/// the gap in the underlying energy identity
/// ∫|u'|^p ζ^p = -p ∫|u'|^(p-2) u' ζ' ζ^(p-1) u.
IdentityReport caccioppoli_check(const ProfileSpec& profile, const ProblemParams& params,
                                 const RadialCutoff& cutoff);

}  // namespace plap
