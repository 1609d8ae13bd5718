#include "plap/radial_ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>
#include <limits>

#include "plap/errors.hpp"

namespace plap {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// |d|^(p-2) d, with the removable value 0 at d = 0.
double signed_power(double d, double exponent) {
  if (d == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(d), exponent), d);
}

void require_positive_radius(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    std::ostringstream os;
    os << "radius must be positive and finite, got " << r;
    throw Error(ErrorKind::DomainError, os.str());
  }
}

EvalPoint eval_power(const PowerBarrier& s, double r) {
  require_positive_radius(r);
  if (s.log_mode) {
    return {r, s.c2 * std::log(r) + s.c1, s.c2 / r, -s.c2 / (r * r)};
  }
  const double rl = std::pow(r, s.lambda);
  return {r, s.c2 * rl + s.c1, s.c2 * s.lambda * rl / r, s.c2 * s.lambda * (s.lambda - 1.0) * rl / (r * r)};
}

EvalPoint eval_log(const LogBarrier& s, double r) {
  if (!(r > 1.0)) {
    std::ostringstream os;
    os << "log barrier is defined for r > 1, got " << r;
    throw Error(ErrorKind::DomainError, os.str());
  }
  const double lg = std::log(r);
  const double lam = s.lambda;
  const double b = s.beta;
  const double lb = std::pow(lg, b);
  const double lb1 = std::pow(lg, b - 1.0);
  const double lb2 = std::pow(lg, b - 2.0);
  const double rl = std::pow(r, lam);
  const double value = s.gamma1 * rl * lb + s.gamma2;
  const double d1 = s.gamma1 * rl / r * (lam * lb + b * lb1);
  const double d2 = s.gamma1 * rl / (r * r) *
                    (lam * (lam - 1.0) * lb + b * (2.0 * lam - 1.0) * lb1 + b * (b - 1.0) * lb2);
  return {r, value, d1, d2};
}

EvalPoint eval_cutoff(const CutoffBarrier& s, double r) {
  require_positive_radius(r);
  const double span = s.r_big - s.r1;
  const double shift = std::max(r - s.r1, 0.0);
  const double k = static_cast<double>(s.k);
  const double norm = std::pow(span, k + 1.0);
  const double value = s.m1 * (1.0 - std::pow(shift, k + 1.0) / norm);
  const double d1 = -s.m1 * (k + 1.0) * std::pow(shift, k) / norm;
  const double d2 = -s.m1 * (k + 1.0) * k * std::pow(shift, k - 1.0) / norm;
  return {r, value, d1, d2};
}

EvalPoint eval_counterexample(const Counterexample& s, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw Error(ErrorKind::DomainError, "counterexample profile needs r >= 0");
  }
  const double base = std::pow(1.0 + r, -s.alpha);
  return {r, s.c * base, -s.c * s.alpha * base / (1.0 + r),
          s.c * s.alpha * (s.alpha + 1.0) * base / ((1.0 + r) * (1.0 + r))};
}

EvalPoint eval_analytic(const AnalyticProfile& s, double r) {
  require_positive_radius(r);
  return {r, s.value(r), s.d1(r), s.d2(r)};
}

}  // namespace

PowerBarrier PowerBarrier::fundamental(const ProblemParams& params, double c2, double c1) {
  PowerBarrier barrier{c2, c1, lambda_exponent(params), params.dim() == params.p};
  return barrier;
}

LogBarrier LogBarrier::make(const ProblemParams& params, double gamma1, double gamma2, double beta) {
  if (params.dim() <= params.p) {
    throw Error(ErrorKind::DimensionRegime, "log barrier requires N > p");
  }
  if (!(gamma1 > 0.0) || !(gamma2 >= 0.0) || !(beta > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "log barrier needs gamma1 > 0, gamma2 >= 0, beta > 0");
  }
  return {gamma1, gamma2, beta, lambda_exponent(params)};
}

void validate_cutoff(const CutoffBarrier& spec, const ProblemParams& params) {
  if (spec.k < 3 || !(1.0 / spec.k < params.p - 1.0)) {
    throw Error(ErrorKind::InvalidParams, "cutoff barrier needs k >= 3 and 1/k < p - 1");
  }
  if (!(spec.r1 > 0.0) || !(spec.r_big > spec.r1) || !(spec.m1 > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "cutoff barrier needs m1 > 0 and 0 < r1 < R");
  }
}

GridProfile::GridProfile(std::vector<double> r, std::vector<double> u) : r_(std::move(r)), u_(std::move(u)) {
  if (r_.size() != u_.size() || r_.size() < 4) {
    throw Error(ErrorKind::InvalidParams, "grid profile needs equal-length arrays with at least 4 samples");
  }
  for (std::size_t i = 0; i < r_.size(); ++i) {
    if (!(r_[i] > 0.0) || (i > 0 && !(r_[i] > r_[i - 1]))) {
      throw Error(ErrorKind::InvalidParams, "grid radii must be positive and strictly increasing");
    }
  }
}

EvalPoint GridProfile::eval(double r) const {
  if (!(r >= r_.front() && r <= r_.back())) {
    std::ostringstream os;
    os << "query r=" << r << " outside sampled range [" << r_.front() << ", " << r_.back() << "]";
    throw Error(ErrorKind::InterpolationError, os.str());
  }
  // Five nearest samples.
  const std::size_t n = r_.size();
  const std::size_t width = std::min<std::size_t>(5, n);
  std::size_t hi = static_cast<std::size_t>(std::lower_bound(r_.begin(), r_.end(), r) - r_.begin());
  std::size_t lo = hi;
  while (hi - lo < width) {
    if (lo == 0) {
      ++hi;
    } else if (hi == n) {
      --lo;
    } else if (r - r_[lo - 1] <= r_[hi] - r) {
      --lo;
    } else {
      ++hi;
    }
  }
  const double scale = std::max(r - r_[lo], r_[hi - 1] - r);
  // Normal equations for u ≈ c0 + c1 x + c2 x², x = (r_j - r)/scale.
  std::array<std::array<double, 4>, 3> m{};
  for (std::size_t j = lo; j < hi; ++j) {
    const double x = (r_[j] - r) / scale;
    const std::array<double, 3> basis{1.0, x, x * x};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) m[a][b] += basis[a] * basis[b];
      m[a][3] += basis[a] * u_[j];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    }
    std::swap(m[col], m[pivot]);
    for (int row = col + 1; row < 3; ++row) {
      const double f = m[row][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[row][c] -= f * m[col][c];
    }
  }
  std::array<double, 3> coef{};
  for (int row = 2; row >= 0; --row) {
    double acc = m[row][3];
    for (int c = row + 1; c < 3; ++c) acc -= m[row][c] * coef[c];
    coef[row] = acc / m[row][row];
  }
  return {r, coef[0], coef[1] / scale, 2.0 * coef[2] / (scale * scale)};
}

EvalPoint eval_profile(const ProfileSpec& spec, double r) {
  return std::visit(overloaded{
                        [r](const PowerBarrier& s) { return eval_power(s, r); },
                        [r](const LogBarrier& s) { return eval_log(s, r); },
                        [r](const CutoffBarrier& s) { return eval_cutoff(s, r); },
                        [r](const Counterexample& s) { return eval_counterexample(s, r); },
                        [r](const GridProfile& s) { return s.eval(r); },
                        [r](const AnalyticProfile& s) { return eval_analytic(s, r); },
                    },
                    spec);
}

double p_laplacian_radial(const EvalPoint& point, const ProblemParams& params, double gradient_floor) {
  require_positive_radius(point.r);
  const double p = params.p;
  const double bracket = (p - 1.0) * point.d2 + (params.dim() - 1.0) / point.r * point.d1;
  if (p == 2.0) return bracket;
  const double floor = gradient_floor * std::max(1.0, std::abs(point.d2) * point.r);
  if (std::abs(point.d1) < floor) {
    if (p > 2.0) return 0.0;
    std::ostringstream os;
    os << "|u'| = " << std::abs(point.d1) << " below floor at r = " << point.r << " with p = " << p << " < 2";
    throw Error(ErrorKind::SingularGradient, os.str());
  }
  return std::pow(std::abs(point.d1), p - 2.0) * bracket;
}

double p_laplacian_term_scale(const EvalPoint& point, const ProblemParams& params) {
  const double p = params.p;
  double weight = 1.0;
  if (p != 2.0) weight = point.d1 == 0.0 ? 0.0 : std::pow(std::abs(point.d1), p - 2.0);
  return weight * (std::abs((p - 1.0) * point.d2) + std::abs((params.dim() - 1.0) / point.r * point.d1));
}

namespace {

// Second-order conservative stencil at steps h and 2h, one Richardson step.
double fd_richardson(const std::function<double(double)>& u, double r, const ProblemParams& params, double h) {
  const double nm1 = params.dim() - 1.0;
  const double p = params.p;
  const double u0 = u(r);
  auto stencil = [&](double s) {
    const double d_plus = (u(r + s) - u0) / s;
    const double d_minus = (u0 - u(r - s)) / s;
    const double f_plus = std::pow((r + 0.5 * s) / r, nm1) * signed_power(d_plus, p - 1.0);
    const double f_minus = std::pow((r - 0.5 * s) / r, nm1) * signed_power(d_minus, p - 1.0);
    return (f_plus - f_minus) / s;
  };
  return (4.0 * stencil(h) - stencil(2.0 * h)) / 3.0;
}

}  // namespace

double p_laplacian_fd(const std::function<double(double)>& u, double r, const ProblemParams& params, double h) {
  if (h > 0.0) {
    if (!(r > 2.0 * h)) {
      std::ostringstream os;
      os << "finite-difference stencil needs r > 2h (r=" << r << ", h=" << h << ")";
      throw Error(ErrorKind::DomainError, os.str());
    }
    return fd_richardson(u, r, params, h);
  }
  // Halving ladder: truncation error shrinks and rounding error grows along
  // it, so the step where consecutive estimates agree best wins. It starts
  // at 1e-2 of the local length scale min(r, |u/u'|, |u'/u''|) so no stencil
  // reaches a nearby critical point, where the flux is not smooth. Levels
  // whose stencil leaves the profile's domain are skipped.
  const double h0 = 1e-4 * r;
  const double up = u(r + h0), um = u(r - h0), mid = u(r);
  const double slope = (up - um) / (2.0 * h0);
  const double curvature = (up - 2.0 * mid + um) / (h0 * h0);
  double length = r;
  if (slope != 0.0) length = std::min(length, std::abs(mid / slope));
  if (curvature != 0.0) length = std::min(length, std::abs(slope / curvature));
  constexpr int kLevels = 12;
  std::vector<double> est(kLevels, std::numeric_limits<double>::quiet_NaN());
  double step = 1e-2 * std::max(length, 1e-2 * r);
  for (int j = 0; j < kLevels; ++j, step *= 0.5) {
    try {
      est[j] = fd_richardson(u, r, params, step);
    } catch (const Error&) {
    }
  }
  double best_gap = std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::quiet_NaN();
  for (int j = 0; j + 1 < kLevels; ++j) {
    if (!std::isfinite(est[j]) || !std::isfinite(est[j + 1])) continue;
    const double gap = std::abs(est[j] - est[j + 1]);
    if (gap < best_gap) {
      best_gap = gap;
      best = est[j + 1];
    }
  }
  if (!std::isfinite(best)) {
    std::ostringstream os;
    os << "finite-difference oracle found no valid stencil at r = " << r;
    throw Error(ErrorKind::DomainError, os.str());
  }
  return best;
}

double p_laplacian_fd(const ProfileSpec& spec, double r, const ProblemParams& params, double h) {
  // Additive constants do not change Δ_p but swamp the differences of a
  // fast-decaying part, so closed-form families are sampled without them.
  const ProfileSpec shifted = std::visit(overloaded{
                                             [](PowerBarrier s) -> ProfileSpec {
                                               s.c1 = 0.0;
                                               return s;
                                             },
                                             [](LogBarrier s) -> ProfileSpec {
                                               s.gamma2 = 0.0;
                                               return s;
                                             },
                                             [](const auto& s) -> ProfileSpec { return s; },
                                         },
                                         spec);
  if (const auto* cut = std::get_if<CutoffBarrier>(&shifted)) {
    return p_laplacian_fd(
        [&cut](double x) {
          const double k1 = cut->k + 1.0;
          return -cut->m1 * std::pow(std::max(x - cut->r1, 0.0), k1) / std::pow(cut->r_big - cut->r1, k1);
        },
        r, params, h);
  }
  return p_laplacian_fd([&shifted](double x) { return eval_profile(shifted, x).value; }, r, params, h);
}

EvalPoint power_of(const EvalPoint& point, double alpha) {
  const double u = point.value;
  const double ua1 = std::pow(u, alpha - 1.0);
  const double ua2 = alpha == 1.0 ? 0.0 : std::pow(u, alpha - 2.0);
  return {point.r, std::pow(u, alpha), alpha * ua1 * point.d1,
          alpha * (alpha - 1.0) * ua2 * point.d1 * point.d1 + alpha * ua1 * point.d2};
}

IdentityReport power_transform_residual(const ProfileSpec& spec, double alpha, double r,
                                        const ProblemParams& params) {
  if (!(alpha >= 1.0)) throw Error(ErrorKind::InvalidParams, "power transform needs alpha >= 1");
  const EvalPoint point = eval_profile(spec, r);
  if (!(point.value > 0.0)) {
    std::ostringstream os;
    os << "u(" << r << ") = " << point.value << " is not positive";
    throw Error(ErrorKind::NonPositiveValue, os.str());
  }
  if (point.d1 == 0.0 && params.p != 2.0) {
    throw Error(ErrorKind::SingularGradient, "power transform needs u' != 0");
  }
  const double p = params.p;
  const double lhs = p_laplacian_radial(power_of(point, alpha), params);
  const double base = p_laplacian_radial(point, params);
  const double gradient_term = (alpha - 1.0) * (p - 1.0) * std::pow(std::abs(point.d1), p) / point.value;
  const double rhs = std::pow(alpha, p - 1.0) * std::pow(point.value, (alpha - 1.0) * (p - 1.0)) *
                     (base + gradient_term);
  IdentityReport report;
  report.lhs = lhs;
  report.rhs = rhs;
  report.residual = lhs - rhs;
  report.scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  report.passed = report.relative() <= 1e-8;
  return report;
}

}  // namespace plap
