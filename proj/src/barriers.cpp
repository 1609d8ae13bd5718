#include "plap/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "plap/errors.hpp"

namespace plap {

CounterexampleConstants build_counterexample(const ProblemParams& params, AmplitudeRecipe recipe) {
  params.validate();
  if (params.gamma < 0.0) {
    throw Error(ErrorKind::NegativeWeightExponent, "counterexample construction needs gamma >= 0");
  }
  const double q_s = serrin_critical(params);
  if (!(params.q > q_s)) {
    std::ostringstream os;
    os << "q = " << params.q << " is not above the critical exponent " << q_s;
    throw Error(ErrorKind::NotSupercritical, os.str());
  }
  const double n = params.dim();
  const double p = params.p;
  const double q = params.q;
  CounterexampleConstants consts;
  consts.epsilon = (q * (n - p) - (n + params.gamma) * (p - 1.0)) / (q - (p - 1.0));
  consts.alpha = (n - p - consts.epsilon) / (p - 1.0);
  // N - 1 - (α+1)(p-1) = ε is the bracket left after dropping (N-1)/r.
  const double bracket = recipe == AmplitudeRecipe::Sound ? consts.epsilon : consts.epsilon + params.gamma;
  consts.c = std::pow(std::pow(consts.alpha, p - 1.0) * bracket / params.amplitude, 1.0 / (q - p + 1.0));
  return consts;
}

double counterexample_minus_plap(const CounterexampleConstants& consts, const ProblemParams& params, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "-Δ_p Γ needs r > 0");
  const double p = params.p;
  const double a1 = consts.alpha + 1.0;
  return std::pow(consts.alpha * consts.c, p - 1.0) * std::pow(1.0 + r, -a1 * (p - 1.0)) *
         ((params.dim() - 1.0) / r - a1 * (p - 1.0) / (1.0 + r));
}

IdentityReport counterexample_residual(const CounterexampleConstants& consts, const ProblemParams& params,
                                       double r) {
  if (r == 0.0) {
    throw Error(ErrorKind::OriginSingularity, "-Δ_p Γ has a 1/r term at the origin (residual is +inf)");
  }
  IdentityReport report;
  report.lhs = counterexample_minus_plap(consts, params, r);
  report.rhs = params.amplitude * std::pow(r, params.gamma) * std::pow(consts.c * std::pow(1.0 + r, -consts.alpha), params.q);
  report.residual = report.lhs - report.rhs;
  report.scale = std::max(std::abs(report.lhs), std::abs(report.rhs));
  report.passed = report.residual >= 0.0;
  return report;
}

double cutoff_barrier_plap(const CutoffBarrier& spec, const ProblemParams& params, double r) {
  validate_cutoff(spec, params);
  if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "cutoff barrier needs r > 0");
  const double shift = r - spec.r1;
  if (shift <= 0.0) return 0.0;
  const double p = params.p;
  const double k = static_cast<double>(spec.k);
  const double amp = spec.m1 * (k + 1.0) / std::pow(spec.r_big - spec.r1, k + 1.0);
  return std::pow(amp, p - 1.0) * std::pow(shift, k * (p - 1.0) - 1.0) *
         (k * (p - 1.0) + (params.dim() - 1.0) * shift / r);
}

double cutoff_barrier_printed_bound(const CutoffBarrier& spec, const ProblemParams& params) {
  const double p = params.p;
  return std::pow(spec.k + 1.0, p - 1.0) * (params.dim() + 2.0 * p - 3.0) * std::pow(spec.m1, p - 1.0) *
         std::pow(spec.r_big - spec.r1, -p);
}

double cutoff_barrier_sup_bound(const CutoffBarrier& spec, const ProblemParams& params) {
  const double p = params.p;
  const double k = static_cast<double>(spec.k);
  return std::pow(k + 1.0, p - 1.0) * (k * (p - 1.0) + params.dim() - 1.0) * std::pow(spec.m1, p - 1.0) *
         std::pow(spec.r_big - spec.r1, -p);
}

double log_barrier_plap(const LogBarrier& spec, const ProblemParams& params, double r) {
  if (!(r > 1.0)) {
    std::ostringstream os;
    os << "log barrier is defined for r > 1, got " << r;
    throw Error(ErrorKind::DomainError, os.str());
  }
  const double p = params.p;
  const double lg = std::log(r);
  const double b = spec.beta;
  const double lam = spec.lambda;
  const double grad = lam * std::pow(lg, b) + b * std::pow(lg, b - 1.0);
  if (grad == 0.0 && p < 2.0) {
    throw Error(ErrorKind::SingularGradient, "log barrier gradient vanishes with p < 2");
  }
  const double weight = p == 2.0 ? 1.0 : (grad == 0.0 ? 0.0 : std::pow(std::abs(grad), p - 2.0));
  const double bracket = (p - 1.0) * b * (lam * std::pow(lg, b - 1.0) + (b - 1.0) * std::pow(lg, b - 2.0));
  return std::pow(spec.gamma1, p - 1.0) * std::pow(r, -params.dim()) * weight * bracket;
}

bool log_beta_admissible(double beta, double p) {
  if (p > 2.0) return beta > 0.0 && beta < 1.0 / (p - 1.0);
  return beta == 1.0;
}

double log_barrier_decay_constant(const LogBarrier& spec, const ProblemParams& params, double r_lo, double r_hi,
                                  int n) {
  if (!(r_lo > 1.0) || !(r_hi > r_lo) || n < 2) {
    throw Error(ErrorKind::InvalidParams, "decay constant needs 1 < r_lo < r_hi and n >= 2");
  }
  const double power = spec.beta * (params.p - 1.0) - 1.0;
  const double norm = std::pow(spec.gamma1, params.p - 1.0);
  double k_fit = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (n - 1));
    const double shape = std::pow(r, -params.dim()) * std::pow(std::log(r), power);
    k_fit = std::max(k_fit, -log_barrier_plap(spec, params, r) / (norm * shape));
  }
  return k_fit;
}

HadamardInput HadamardInput::make(const ProblemParams& params, double r1, double m1, double r2, double m2) {
  if (!(r1 > 0.0) || !(r2 > r1) || !(m1 >= 0.0) || !(m2 >= 0.0)) {
    throw Error(ErrorKind::InvalidParams, "Hadamard input needs 0 < r1 < r2 and m1, m2 >= 0");
  }
  return {r1, r2, m1, m2, lambda_exponent(params), params.dim() == params.p};
}

double hadamard_lower_bound(const HadamardInput& in, double r) {
  if (!(r >= in.r1 && r <= in.r2)) {
    std::ostringstream os;
    os << "r = " << r << " outside [" << in.r1 << ", " << in.r2 << "]";
    throw Error(ErrorKind::RangeError, os.str());
  }
  if (in.log_mode) {
    return (in.m1 * std::log(r / in.r2) + in.m2 * std::log(in.r1 / r)) / std::log(in.r1 / in.r2);
  }
  const double a = std::pow(in.r1, in.lambda);
  const double b = std::pow(in.r2, in.lambda);
  const double x = std::pow(r, in.lambda);
  return (in.m1 * (x - b) + in.m2 * (a - x)) / (a - b);
}

IdentityReport hadamard_monotonicity_check(std::span<const std::pair<double, double>> samples, double lambda,
                                           double tol) {
  if (!(lambda < 0.0)) {
    throw Error(ErrorKind::RegimeError, "monotonicity of m(r) r^(-lambda) needs lambda < 0 (p < N)");
  }
  if (samples.size() < 2) throw Error(ErrorKind::InvalidParams, "need at least two samples");
  IdentityReport report;
  double worst = std::numeric_limits<double>::infinity();
  double g_prev = samples[0].second * std::pow(samples[0].first, -lambda);
  double g_max = std::abs(g_prev);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].first > samples[i - 1].first)) {
      throw Error(ErrorKind::InvalidParams, "samples must be sorted by strictly increasing r");
    }
    const double g = samples[i].second * std::pow(samples[i].first, -lambda);
    worst = std::min(worst, g - g_prev);
    g_max = std::max(g_max, std::abs(g));
    g_prev = g;
  }
  report.lhs = worst;
  report.rhs = -tol;
  report.residual = worst;
  report.scale = std::max(g_max, 1.0);
  report.passed = worst >= -tol;
  return report;
}

}  // namespace plap
