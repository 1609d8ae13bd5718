#pragma once

#include <string>
#include <variant>
#include <vector>

#include "plap/dopri5.hpp"
#include "plap/exponents.hpp"
#include "plap/report.hpp"

namespace plap {

/// Minus: -Δ_p u = a r^γ u^q. Plus: Δ_p u = a r^γ u^q.
enum class EquationSign { Minus, Plus };

/// Radial initial-value problem u(0) = u0, u'(0) = 0.
struct IvpSpec {
  ProblemParams params;
  double u0 = 1.0;
  EquationSign sign = EquationSign::Minus;
  double r_max = 100.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  double delta0 = 0.0;  // 0 selects 1e-6 min(1, r_max)
  double blowup_factor = 1e8;

  void validate() const;
  double start_radius() const;
  double blowup_threshold() const { return blowup_factor * u0; }
};

enum class StopReason { ReachedEnd, ZeroCrossing, BlowUpThreshold, StepCollapse, NonFinite, MaxSteps };

/// Accepted integration nodes r_i with u and w = r^(N-1)|u'|^(p-2)u', plus
/// the dense interpolant of every step. The origin segment [0, r_0] is
/// covered by the regular series expansion.
class Trajectory {
 public:
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> w;
  std::vector<ode::DenseSegment<2>> segments;  // segments[i] covers [r[i], r[i+1]]
  bool dense = true;
  StopReason stop = StopReason::ReachedEnd;
  double r_event = 0.0;  // crossing or blow-up radius when stop says so
  IvpSpec spec;

  /// (u, w) at radius x in [0, r.back()].
  ode::State<2> eval(double x) const;
  double u_at(double x) const { return eval(x)[0]; }
  /// u' recovered from w.
  double du_from_w(double x, double w_value) const;
  double du_at(double x) const { return du_from_w(x, eval(x)[1]); }
  double du(std::size_t i) const { return du_from_w(r[i], w[i]); }

  /// ∫_0^x s^(N-1+γ) |u|^power ds over the series and the dense segments.
  double weighted_integral(double x, double power) const;
};

/// Regular expansion at the origin: u ≈ u0 ∓ (p-1)/(p+γ) (a u0^q/(N+γ))^(1/(p-1)) r^((p+γ)/(p-1)),
/// w ≈ ∓ a u0^q r^(N+γ)/(N+γ) (upper signs for Minus).
ode::State<2> origin_series(const IvpSpec& spec, double r);

/// Integrates u' = sign(w)(|w|/r^(N-1))^(1/(p-1)), w' = ∓ a r^(N-1+γ)|u|^(q-1)u
/// from delta0 to r_max, halting at a zero of u (bisected on the dense
/// output to 1e-10 relative) or when u passes the blow-up threshold.
Trajectory integrate_ivp(const IvpSpec& spec);

struct CrossesZero {
  double r_cross = 0.0;
};
struct PositiveDecaying {
  double tail_slope = 0.0;
};
struct BlowsUp {
  double r_blow = 0.0;
};
struct Indeterminate {
  std::string reason;
};
using Outcome = std::variant<CrossesZero, PositiveDecaying, BlowsUp, Indeterminate>;

std::string outcome_name(const Outcome& outcome);

Outcome classify_outcome(const Trajectory& traj, const IvpSpec& spec);

/// Least-squares slope of log|f| against log r over [r_lo, r_hi] from n
/// log-spaced dense samples.
double loglog_slope(const Trajectory& traj, double r_lo, double r_hi, bool derivative, int n = 64);

inline constexpr double kSlopeTolerance = 0.05;

/// Compares the fitted tail slopes of u and |u'| over the final decade with
/// (γ+p)/(p-1-q) and (γ+q+1)/(p-1-q). Throws NotDecaying unless the
/// trajectory is PositiveDecaying.
IdentityReport decay_slope_report(const Trajectory& traj, const IvpSpec& spec,
                                  double slope_tol = kSlopeTolerance);

/// Radial Pohozaev balance at R = r_eval:
///   a (N - p - (γ+N)p/(q+1)) ∫_0^R r^(γ+N-1) u^(q+1) dr
///     = -(N-p) w u + (1-p)|u'|^p R^N - a p/(q+1) R^(γ+N) u^(q+1).
/// With u' < 0 the first term is (N-p)|u'|^(p-1) u R^(N-1).
IdentityReport pohozaev_residual(const Trajectory& traj, const IvpSpec& spec, double r_eval);

/// max over nodes of |w(r) ± a ∫_0^r s^(N-1+γ)|u|^(q-1)u ds| / max(|w|, atol).
IdentityReport conservation_check(const Trajectory& traj);

}  // namespace plap
