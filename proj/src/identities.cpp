#include "plap/identities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "plap/errors.hpp"

namespace plap {

void RecursionSpec::validate() const {
  if (!(c > 0.0) || !(k > 1.0) || !(phi0 > 0.0) || n_max < 1) {
    throw Error(ErrorKind::InvalidParams, "recursion needs c > 0, k > 1, phi0 > 0, n_max >= 1");
  }
}

std::vector<double> moser_normalized_logs(const RecursionSpec& spec) {
  spec.validate();
  std::vector<double> x(spec.n_max + 1);
  x[0] = std::log(spec.phi0);
  const double log_c = std::log(spec.c);
  double k_pow = 1.0;
  for (int n = 1; n <= spec.n_max; ++n) {
    k_pow *= spec.k;
    x[n] = x[n - 1] + n * log_c / k_pow;
  }
  return x;
}

namespace {

IdentityReport bound_report(std::span<const double> normalized, double log_bound) {
  IdentityReport report;
  double margin = std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < normalized.size(); ++n) {
    margin = std::min(margin, log_bound - normalized[n]);
    worst = std::max(worst, normalized[n]);
  }
  report.lhs = worst;
  report.rhs = log_bound;
  report.residual = margin;
  report.scale = std::max(1.0, std::abs(log_bound));
  report.passed = margin >= 0.0;
  report.extras = {{"max_ratio", std::exp(-margin)}};
  return report;
}

}  // namespace

IdentityReport moser_recursion_bound(const RecursionSpec& spec) {
  const auto x = moser_normalized_logs(spec);
  const double k = spec.k;
  const double log_c = std::log(spec.c);
  const double log_bound = k / ((k - 1.0) * (k - 1.0)) * log_c + std::log(spec.phi0);
  IdentityReport report = bound_report(x, log_bound);
  // The margin at n is log c times the series tail Σ_{j>n} j k^-j, which is
  // summed in closed form instead of subtracting two nearly equal logs.
  double margin = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= spec.n_max; ++n) {
    const double tail = std::pow(k, -n) * ((n + 1.0) * k - n) / ((k - 1.0) * (k - 1.0));
    margin = std::min(margin, log_c * tail);
  }
  report.residual = margin;
  report.passed = margin >= 0.0;
  report.extras = {{"max_ratio", std::exp(-margin)}};
  return report;
}

IdentityReport moser_sequence_bound(std::span<const double> log_phi, double c, double k) {
  if (!(c > 0.0) || !(k > 1.0) || log_phi.size() < 2) {
    throw Error(ErrorKind::InvalidParams, "sequence bound needs c > 0, k > 1 and at least two terms");
  }
  const double log_c = std::log(c);
  std::vector<double> normalized(log_phi.size());
  normalized[0] = log_phi[0];
  double k_pow = 1.0;
  for (std::size_t n = 1; n < log_phi.size(); ++n) {
    const double allowed = n * log_c + k * log_phi[n - 1];
    if (log_phi[n] > allowed + 1e-12 * std::max(1.0, std::abs(allowed))) {
      std::ostringstream os;
      os << "term " << n << " violates phi_n <= c^n phi_{n-1}^k";
      throw Error(ErrorKind::InvalidParams, os.str());
    }
    k_pow *= k;
    normalized[n] = log_phi[n] / k_pow;
  }
  const double log_bound = k / ((k - 1.0) * (k - 1.0)) * log_c + log_phi[0];
  return bound_report(normalized, log_bound);
}

RadialCutoff RadialCutoff::tent(double r_a, double r_b) {
  const double mid = 0.5 * (r_a + r_b);
  return {r_a, mid, mid, r_b};
}

double RadialCutoff::value(double r) const {
  if (r <= r_a || r >= r_b) return 0.0;
  if (r < plateau_lo) return (r - r_a) / (plateau_lo - r_a);
  if (r <= plateau_hi) return 1.0;
  return (r_b - r) / (r_b - plateau_hi);
}

double RadialCutoff::slope(double r) const {
  if (r <= r_a || r >= r_b) return 0.0;
  if (r < plateau_lo) return 1.0 / (plateau_lo - r_a);
  if (r <= plateau_hi) return 0.0;
  return -1.0 / (r_b - plateau_hi);
}

IdentityReport caccioppoli_check(const ProfileSpec& profile, const ProblemParams& params,
                                 const RadialCutoff& cutoff) {
  if (!(cutoff.r_a >= 0.0) || !(cutoff.r_a < cutoff.plateau_lo) || !(cutoff.plateau_lo <= cutoff.plateau_hi) ||
      !(cutoff.plateau_hi < cutoff.r_b)) {
    throw Error(ErrorKind::InvalidParams, "cutoff needs 0 <= r_a < plateau_lo <= plateau_hi < r_b");
  }
  const double p = params.p;
  const double nm1 = params.dim() - 1.0;

  constexpr int kProbes = 64;
  for (int i = 1; i < kProbes; ++i) {
    const double r = cutoff.r_a + (cutoff.r_b - cutoff.r_a) * i / kProbes;
    const EvalPoint point = eval_profile(profile, r);
    double defect = 0.0;
    double scale = 1e-300;
    if (point.d1 != 0.0) {
      defect = std::abs(p_laplacian_radial(point, params));
      scale = std::max(scale, p_laplacian_term_scale(point, params));
    } else {
      defect = std::abs(point.d2);
    }
    if (defect > 1e-8 * scale) {
      std::ostringstream os;
      os << "profile is not p-harmonic at r = " << r << " (|Δ_p u| = " << defect << ")";
      throw Error(ErrorKind::NotPHarmonic, os.str());
    }
  }

  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  const std::array<double, 4> knots{cutoff.r_a, cutoff.plateau_lo, cutoff.plateau_hi, cutoff.r_b};
  auto integrate = [&](auto&& integrand) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      if (knots[i + 1] > knots[i]) total += Quad::integrate(integrand, knots[i], knots[i + 1], 15, 1e-13);
    }
    return total;
  };
  auto measure = [nm1](double r) { return nm1 == 0.0 ? 1.0 : std::pow(r, nm1); };

  const double energy = integrate([&](double r) {
    const EvalPoint pt = eval_profile(profile, r);
    return std::pow(std::abs(pt.d1), p) * std::pow(cutoff.value(r), p) * measure(r);
  });
  const double mass = integrate([&](double r) {
    const EvalPoint pt = eval_profile(profile, r);
    return std::pow(std::abs(pt.value), p) * std::pow(std::abs(cutoff.slope(r)), p) * measure(r);
  });
  const double cross = integrate([&](double r) {
    const EvalPoint pt = eval_profile(profile, r);
    const double flux = pt.d1 == 0.0 ? 0.0 : std::pow(std::abs(pt.d1), p - 2.0) * pt.d1;
    return -p * flux * cutoff.slope(r) * std::pow(cutoff.value(r), p - 1.0) * pt.value * measure(r);
  });

  IdentityReport report;
  report.lhs = energy;
  report.rhs = std::pow(p, p) * mass;
  report.residual = report.lhs - report.rhs;
  report.scale = std::max({std::abs(report.lhs), std::abs(report.rhs), 1e-300});
  report.passed = report.lhs <= report.rhs * (1.0 + 1e-8);
  const double ratio = report.rhs > 0.0 ? report.lhs / report.rhs : 0.0;
  const double gap = std::abs(energy - cross) / std::max({std::abs(energy), std::abs(cross), 1e-300});
  report.extras = {{"ratio", ratio}, {"identity_gap", energy == 0.0 && cross == 0.0 ? 0.0 : gap}};
  return report;
}

}  // namespace plap
