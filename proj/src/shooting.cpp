#include "plap/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "plap/errors.hpp"

namespace plap {

namespace {

constexpr std::size_t kMaxSteps = 5'000'000;
constexpr double kEventRelTol = 1e-10;

double signed_pow(double x, double k) {
  if (x == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(x), k), x);
}

double sign_factor(EquationSign sign) { return sign == EquationSign::Minus ? -1.0 : 1.0; }

// Bisection for the first point in (lo, hi] where f changes sign relative
// to f(lo); the interval is shrunk to kEventRelTol relative width.
template <class F>
double bisect(F&& f, double lo, double hi) {
  const bool lo_positive = f(lo) > 0.0;
  while (hi - lo > kEventRelTol * std::abs(hi)) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) > 0.0) == lo_positive) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void IvpSpec::validate() const {
  params.validate();
  std::ostringstream why;
  if (!(u0 > 0.0)) why << "u0 must be positive; ";
  if (!(r_max > 0.0)) why << "r_max must be positive; ";
  if (!(rtol > 0.0) || !(atol > 0.0)) why << "rtol and atol must be positive; ";
  if (delta0 < 0.0 || (delta0 > 0.0 && !(delta0 < 1e-2 * r_max))) why << "delta0 must be much smaller than r_max; ";
  if (!(blowup_factor > 1.0)) why << "blowup_factor must exceed 1; ";
  const auto msg = why.str();
  if (!msg.empty()) throw Error(ErrorKind::InvalidParams, msg);
}

double IvpSpec::start_radius() const { return delta0 > 0.0 ? delta0 : 1e-6 * std::min(1.0, r_max); }

ode::State<2> origin_series(const IvpSpec& spec, double r) {
  const auto& prm = spec.params;
  const double s = sign_factor(spec.sign);
  const double ng = prm.dim() + prm.gamma;
  const double source = prm.amplitude * std::pow(spec.u0, prm.q);
  const double slope = std::pow(source / ng, 1.0 / (prm.p - 1.0));
  const double u =
      spec.u0 + s * (prm.p - 1.0) / (prm.p + prm.gamma) * slope * std::pow(r, (prm.p + prm.gamma) / (prm.p - 1.0));
  const double w = s * source * std::pow(r, ng) / ng;
  return {u, w};
}

double Trajectory::du_from_w(double x, double w_value) const {
  if (x <= 0.0) return 0.0;
  const auto& prm = spec.params;
  return signed_pow(w_value / std::pow(x, prm.dim() - 1.0), 1.0 / (prm.p - 1.0));
}

ode::State<2> Trajectory::eval(double x) const {
  if (x <= r.front()) return origin_series(spec, std::max(x, 0.0));
  if (x > r.back()) {
    std::ostringstream os;
    os << "r = " << x << " beyond trajectory end " << r.back();
    throw Error(ErrorKind::RangeError, os.str());
  }
  const auto it = std::lower_bound(r.begin(), r.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - r.begin());
  if (*it == x) return {u[i], w[i]};
  return segments[i - 1].eval(x);
}

double Trajectory::weighted_integral(double x, double power) const {
  const auto& prm = spec.params;
  const double weight_power = prm.dim() - 1.0 + prm.gamma;
  const double ng = prm.dim() + prm.gamma;
  const double r0 = r.front();
  double total = signed_pow(spec.u0, power) * std::pow(std::min(x, r0), ng) / ng;
  for (std::size_t i = 0; i + 1 < r.size() && r[i] < x; ++i) {
    const auto& seg = segments[i];
    const double b = std::min(r[i + 1], x);
    total += boost::math::quadrature::gauss<double, 10>::integrate(
        [&](double s) { return std::pow(s, weight_power) * signed_pow(seg.eval(s)[0], power); }, r[i], b);
  }
  return total;
}

Trajectory integrate_ivp(const IvpSpec& spec) {
  spec.validate();
  const auto& prm = spec.params;
  const double nm1 = prm.dim() - 1.0;
  const double inv_p1 = 1.0 / (prm.p - 1.0);
  const double s = sign_factor(spec.sign);
  const double source_power = nm1 + prm.gamma;

  auto rhs = [&](double x, const ode::State<2>& y, ode::State<2>& dy) {
    dy[0] = signed_pow(y[1] / std::pow(x, nm1), inv_p1);
    dy[1] = s * prm.amplitude * std::pow(x, source_power) * signed_pow(y[0], prm.q);
  };

  Trajectory traj;
  traj.spec = spec;
  const double r0 = spec.start_radius();
  const ode::State<2> y0 = origin_series(spec, r0);
  traj.r.push_back(r0);
  traj.u.push_back(y0[0]);
  traj.w.push_back(y0[1]);

  ode::Options opts;
  opts.rtol = spec.rtol;
  opts.atol = spec.atol;
  // The coefficient r^(1-N) varies on the scale r itself.
  opts.h_max_relative = 1.0;
  // w keeps one sign until u vanishes and scales like r^(N+γ) near the
  // origin, so it is controlled relatively.
  opts.atol_component = {spec.atol, 0.0};
  ode::Dopri5<2> solver(rhs, r0, y0, opts);
  const double threshold = spec.blowup_threshold();

  auto push = [&](const ode::DenseSegment<2>& seg, double x, const ode::State<2>& y) {
    traj.segments.push_back(seg);
    traj.r.push_back(x);
    traj.u.push_back(y[0]);
    traj.w.push_back(y[1]);
  };

  for (std::size_t n = 0;; ++n) {
    if (n >= kMaxSteps) {
      traj.stop = StopReason::MaxSteps;
      break;
    }
    const auto status = solver.step(spec.r_max);
    if (status == ode::StepStatus::StepCollapse) {
      traj.stop = StopReason::StepCollapse;
      break;
    }
    if (status == ode::StepStatus::NonFinite) {
      traj.stop = StopReason::NonFinite;
      break;
    }
    const auto& seg = solver.last_segment();
    const double x = solver.t();
    const auto& y = solver.y();
    if (traj.u.back() > 0.0 && y[0] <= 0.0) {
      const double rc = bisect([&](double t) { return seg.eval(t)[0]; }, seg.t0, x);
      auto yc = seg.eval(rc);
      push(seg, rc, yc);
      traj.stop = StopReason::ZeroCrossing;
      traj.r_event = rc;
      break;
    }
    if (y[0] >= threshold) {
      const double rb = bisect([&](double t) { return seg.eval(t)[0] - threshold; }, seg.t0, x);
      push(seg, rb, seg.eval(rb));
      traj.stop = StopReason::BlowUpThreshold;
      traj.r_event = rb;
      break;
    }
    push(seg, x, y);
    if (x >= spec.r_max) {
      traj.stop = StopReason::ReachedEnd;
      break;
    }
  }
  return traj;
}

std::string outcome_name(const Outcome& outcome) {
  switch (outcome.index()) {
    case 0: return "crosses_zero";
    case 1: return "positive_decaying";
    case 2: return "blows_up";
    default: return "indeterminate";
  }
}

double loglog_slope(const Trajectory& traj, double r_lo, double r_hi, bool derivative, int n) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (n - 1));
    const auto y = traj.eval(std::min(x, traj.r.back()));
    const double f = derivative ? traj.du_from_w(x, y[1]) : y[0];
    if (!(std::abs(f) > 0.0) || !std::isfinite(f)) return std::nan("");
    const double lx = std::log(x);
    const double ly = std::log(std::abs(f));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome classify_outcome(const Trajectory& traj, const IvpSpec& spec) {
  switch (traj.stop) {
    case StopReason::ZeroCrossing:
      return CrossesZero{traj.r_event};
    case StopReason::BlowUpThreshold:
      return BlowsUp{traj.r_event};
    case StopReason::StepCollapse:
    case StopReason::NonFinite:
      if (spec.sign == EquationSign::Plus && traj.w.back() > 0.0 && traj.u.back() > 1e3 * spec.u0) {
        return BlowsUp{traj.r.back()};
      }
      return Indeterminate{"step size collapsed at r = " + std::to_string(traj.r.back())};
    case StopReason::MaxSteps:
      return Indeterminate{"step budget exhausted"};
    case StopReason::ReachedEnd:
      break;
  }
  if (spec.sign == EquationSign::Plus) {
    return Indeterminate{"reached r_max without blow-up"};
  }
  const double window = spec.r_max / 10.0;
  for (std::size_t i = 0; i < traj.r.size(); ++i) {
    if (traj.r[i] < window) continue;
    if (!(traj.u[i] > 0.0) || !(traj.w[i] < 0.0)) {
      return Indeterminate{"not positive and decreasing on the final decade"};
    }
  }
  const double slope = loglog_slope(traj, window, spec.r_max, false);
  if (!(slope < 0.0)) return Indeterminate{"no decay over the final decade"};
  return PositiveDecaying{slope};
}

IdentityReport decay_slope_report(const Trajectory& traj, const IvpSpec& spec, double slope_tol) {
  const Outcome outcome = classify_outcome(traj, spec);
  if (!std::holds_alternative<PositiveDecaying>(outcome)) {
    throw Error(ErrorKind::NotDecaying, "trajectory classified " + outcome_name(outcome));
  }
  const auto& prm = spec.params;
  const double denom = prm.p - 1.0 - prm.q;
  const double target_u = (prm.gamma + prm.p) / denom;
  const double target_du = (prm.gamma + prm.q + 1.0) / denom;
  const double lo = spec.r_max / 10.0;
  const double slope_u = loglog_slope(traj, lo, spec.r_max, false);
  const double slope_du = loglog_slope(traj, lo, spec.r_max, true);
  IdentityReport report;
  report.lhs = slope_u;
  report.rhs = target_u;
  report.residual = std::max(slope_u - target_u, slope_du - target_du);
  report.scale = 1.0;
  report.passed = slope_u <= target_u + slope_tol && slope_du <= target_du + slope_tol;
  report.extras = {{"slope_u", slope_u}, {"slope_du", slope_du}, {"target_u", target_u}, {"target_du", target_du}};
  return report;
}

IdentityReport pohozaev_residual(const Trajectory& traj, const IvpSpec& spec, double r_eval) {
  if (spec.sign != EquationSign::Minus) {
    throw Error(ErrorKind::InvalidParams, "Pohozaev balance is stated for -Δ_p u = a r^γ u^q");
  }
  if (!(r_eval > 0.0) || r_eval > traj.r.back()) {
    std::ostringstream os;
    os << "r_eval = " << r_eval << " outside (0, " << traj.r.back() << "]";
    throw Error(ErrorKind::RangeError, os.str());
  }
  if (traj.stop == StopReason::ZeroCrossing && r_eval >= traj.r_event) {
    throw Error(ErrorKind::CrossedZero, "u changes sign before r_eval");
  }
  const auto& prm = spec.params;
  const auto y = traj.eval(r_eval);
  if (!(y[0] > 0.0)) throw Error(ErrorKind::CrossedZero, "u is not positive at r_eval");
  const double n = prm.dim();
  const double a = prm.amplitude;
  const double du = traj.du_from_w(r_eval, y[1]);
  const double integral = traj.weighted_integral(r_eval, prm.q + 1.0);
  const double t1 = -(n - prm.p) * y[1] * y[0];
  const double t2 = (1.0 - prm.p) * std::pow(std::abs(du), prm.p) * std::pow(r_eval, n);
  const double t3 = -a * prm.p / (prm.q + 1.0) * std::pow(r_eval, prm.gamma + n) * std::pow(y[0], prm.q + 1.0);
  IdentityReport report;
  report.lhs = a * pohozaev_coefficient(prm) * integral;
  report.rhs = t1 + t2 + t3;
  report.residual = report.lhs - report.rhs;
  report.scale = std::max({std::abs(report.lhs), std::abs(report.rhs), a * integral, std::abs(t1), std::abs(t2),
                           std::abs(t3)});
  report.passed = report.relative() <= 1e-6;
  report.extras = {{"integral", integral}, {"boundary_flux", t1}, {"boundary_gradient", t2},
                   {"boundary_source", t3}};
  return report;
}

IdentityReport conservation_check(const Trajectory& traj) {
  const auto& spec = traj.spec;
  const auto& prm = spec.params;
  const double s = sign_factor(spec.sign);
  const double weight_power = prm.dim() - 1.0 + prm.gamma;
  const double ng = prm.dim() + prm.gamma;
  double cumulative = std::pow(spec.u0, prm.q) * std::pow(traj.r.front(), ng) / ng;
  double worst = 0.0;
  double worst_w = 0.0;
  double worst_int = 0.0;
  for (std::size_t i = 0; i < traj.r.size(); ++i) {
    if (i > 0) {
      const auto& seg = traj.segments[i - 1];
      cumulative += boost::math::quadrature::gauss<double, 10>::integrate(
          [&](double x) { return std::pow(x, weight_power) * signed_pow(seg.eval(x)[0], prm.q); }, traj.r[i - 1],
          traj.r[i]);
    }
    const double predicted = s * prm.amplitude * cumulative;
    const double rel = std::abs(traj.w[i] - predicted) / std::max(std::abs(traj.w[i]), spec.atol);
    if (rel > worst) {
      worst = rel;
      worst_w = traj.w[i];
      worst_int = predicted;
    }
  }
  IdentityReport report;
  report.lhs = worst_w;
  report.rhs = worst_int;
  report.residual = worst;
  report.scale = 1.0;
  report.passed = worst <= 10.0 * spec.rtol;
  return report;
}

}  // namespace plap
