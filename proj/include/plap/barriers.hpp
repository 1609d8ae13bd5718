#pragma once

#include <span>
#include <utility>

#include "plap/exponents.hpp"
#include "plap/radial_ops.hpp"
#include "plap/report.hpp"

namespace plap {

/// Constants of the supersolution Γ = c (1 + r)^(-α) for q above q_S.
struct CounterexampleConstants {
  double epsilon = 0.0;
  double alpha = 0.0;
  double c = 0.0;

  Counterexample profile() const { return {c, alpha}; }
};

/// Sound: c^(q-p+1) = α^(p-1) ε / a. Printed: α^(p-1)(ε + γ)/a, which
/// coincides for γ = 0 and overshoots for γ > 0, leaving a negative
/// residual at large r.
enum class AmplitudeRecipe { Sound, Printed };

/// ε solves q = (N + γ - ε)(p - 1)/(N - p - ε); α = (N - p - ε)/(p - 1).
/// Dividing by a makes Γ a supersolution for any amplitude.
CounterexampleConstants build_counterexample(const ProblemParams& params,
                                             AmplitudeRecipe recipe = AmplitudeRecipe::Sound);

/// -Δ_p Γ = (αc)^(p-1) (1+r)^(-(α+1)(p-1)) [(N-1)/r - (α+1)(p-1)/(1+r)].
double counterexample_minus_plap(const CounterexampleConstants& consts, const ProblemParams& params, double r);

/// residual = -Δ_p Γ(r) - a r^γ Γ(r)^q, passed iff residual ≥ 0.
/// Throws OriginSingularity at r = 0 where -Δ_p Γ is +∞.
IdentityReport counterexample_residual(const CounterexampleConstants& consts, const ProblemParams& params,
                                       double r);

/// -Δ_p ζ for the cutoff barrier, by the chain rule:
/// [m1(k+1)/(R-r1)^(k+1)]^(p-1) ((r-r1)+)^(k(p-1)-1) [k(p-1) + (N-1)(r-r1)+/r].
double cutoff_barrier_plap(const CutoffBarrier& spec, const ProblemParams& params, double r);

/// (k+1)^(p-1) (N+2p-3) m1^(p-1) (R-r1)^(-p), the bound used downstream of
/// the cutoff barrier in the nonexistence argument.
double cutoff_barrier_printed_bound(const CutoffBarrier& spec, const ProblemParams& params);

/// (k+1)^(p-1) (k(p-1)+N-1) m1^(p-1) (R-r1)^(-p): supremum of -Δ_p ζ over
/// (r1, R) implied by the chain-rule expression.
double cutoff_barrier_sup_bound(const CutoffBarrier& spec, const ProblemParams& params);

/// Δ_p ψ for ψ = γ1 r^λ log^β r + γ2 on r > 1:
/// γ1^(p-1) r^(-N) |λL^β + βL^(β-1)|^(p-2) (p-1)β [λ L^(β-1) + (β-1) L^(β-2)], L = log r.
double log_barrier_plap(const LogBarrier& spec, const ProblemParams& params, double r);

/// Admissible exponent for the critical-case barrier: 0 < β < 1/(p-1) when
/// p > 2, β = 1 when p ≤ 2.
bool log_beta_admissible(double beta, double p);

/// Smallest K with Δ_p ψ ≥ -γ1^(p-1) K r^(-N) (log r)^(β(p-1)-1) on n
/// log-spaced points of [r_lo, r_hi].
double log_barrier_decay_constant(const LogBarrier& spec, const ProblemParams& params, double r_lo, double r_hi,
                                  int n = 400);

struct HadamardInput {
  double r1 = 1.0;
  double r2 = 2.0;
  double m1 = 1.0;
  double m2 = 0.0;
  double lambda = -1.0;
  bool log_mode = false;  // N = p

  static HadamardInput make(const ProblemParams& params, double r1, double m1, double r2, double m2);
};

/// The p-harmonic interpolant through (r1, m1), (r2, m2): a lower bound for
/// the sphere minimum of a nonnegative p-superharmonic function.
/// Throws RangeError for r outside [r1, r2].
double hadamard_lower_bound(const HadamardInput& input, double r);

/// residual = min_i [g(r_{i+1}) - g(r_i)] with g = m r^(-λ); passed iff
/// residual ≥ -tol. Throws RegimeError unless λ < 0.
IdentityReport hadamard_monotonicity_check(std::span<const std::pair<double, double>> samples, double lambda,
                                           double tol = 1e-8);

}  // namespace plap
