#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "plap/exponents.hpp"
#include "plap/report.hpp"

namespace plap {

/// Value and first two derivatives of a radial profile at r.
struct EvalPoint {
  double r = 1.0;
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// C2 r^λ + C1, or C2 log r + C1 when N = p (log_mode).
struct PowerBarrier {
  double c2 = 1.0;
  double c1 = 0.0;
  double lambda = -1.0;
  bool log_mode = false;

  static PowerBarrier fundamental(const ProblemParams& params, double c2, double c1);
};

/// γ1 r^λ log^β r + γ2 on r > 1, λ = (p - N)/(p - 1).
struct LogBarrier {
  double gamma1 = 1.0;
  double gamma2 = 0.0;
  double beta = 1.0;
  double lambda = -1.0;

  static LogBarrier make(const ProblemParams& params, double gamma1, double gamma2, double beta);
};

/// m1 {1 - ((r - r1)+)^(k+1) / (R - r1)^(k+1)}.
struct CutoffBarrier {
  double m1 = 1.0;
  double r1 = 1.0;
  double r_big = 2.0;
  int k = 3;
};

/// C (1 + r)^(-α).
struct Counterexample {
  double c = 1.0;
  double alpha = 1.0;
};

/// Sampled profile; derivatives from a local quadratic least-squares fit.
class GridProfile {
 public:
  GridProfile(std::vector<double> r, std::vector<double> u);

  std::span<const double> r() const { return r_; }
  std::span<const double> u() const { return u_; }
  std::size_t size() const { return r_.size(); }

  EvalPoint eval(double r) const;

 private:
  std::vector<double> r_;
  std::vector<double> u_;
};

/// Arbitrary smooth profile given by value and derivative callables.
struct AnalyticProfile {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
};

using ProfileSpec =
    std::variant<PowerBarrier, LogBarrier, CutoffBarrier, Counterexample, GridProfile, AnalyticProfile>;

/// Throws InvalidParams unless k ≥ 3, 1/k < p - 1 and 0 < r1 < R, m1 > 0.
void validate_cutoff(const CutoffBarrier& spec, const ProblemParams& params);

EvalPoint eval_profile(const ProfileSpec& spec, double r);

inline constexpr double kGradientFloor = 1e-12;

/// Δ_p v = |V'|^(p-2) ((p-1)V'' + (N-1)/r V') for v(x) = V(|x|).
///
/// Where |V'| falls below the floor the formula is degenerate: p > 2 gives
/// 0, p < 2 throws SingularGradient, p = 2 is evaluated as the Laplacian.
double p_laplacian_radial(const EvalPoint& point, const ProblemParams& params,
                          double gradient_floor = kGradientFloor);

/// |V'|^(p-2) (|(p-1)V''| + |(N-1)V'/r|): magnitude of the two terms whose
/// sum is Δ_p v. Used to normalise comparisons where they cancel.
double p_laplacian_term_scale(const EvalPoint& point, const ProblemParams& params);

/// Conservative-form oracle r^(1-N) d/dr [r^(N-1) |u'|^(p-2) u'] built from
/// central differences only (no derivative information from the profile).
/// Second-order stencils at steps h and 2h are combined by one Richardson
/// step; samples are taken on [r - 2h, r + 2h]. h <= 0 walks a halving
/// ladder from 1e-2 of the local length scale min(r, |u/u'|, |u'/u''|) and
/// returns the estimate that best agrees with its neighbour.
double p_laplacian_fd(const std::function<double(double)>& u, double r, const ProblemParams& params,
                      double h = 0.0);
/// Same oracle on a profile, with the additive constant of the power, log
/// and cutoff families removed before sampling.
double p_laplacian_fd(const ProfileSpec& spec, double r, const ProblemParams& params, double h = 0.0);

/// Checks Δ_p(u^α) = α^(p-1) u^((α-1)(p-1)) [Δ_p u + (α-1)(p-1) |u'|^p / u]
/// at r. residual = LHS - RHS, scale = max(|LHS|, |RHS|, 1).
IdentityReport power_transform_residual(const ProfileSpec& spec, double alpha, double r,
                                        const ProblemParams& params);

/// Derivatives of u^α from those of u.
EvalPoint power_of(const EvalPoint& point, double alpha);

}  // namespace plap
