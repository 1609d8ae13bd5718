#include "plap/exponents.hpp"

#include <cmath>
#include <sstream>

#include "plap/errors.hpp"

namespace plap {

void ProblemParams::validate() const {
  std::ostringstream why;
  if (n_dim < 1) why << "n_dim must be >= 1; ";
  if (!(p > 1.0)) why << "p must exceed 1; ";
  if (!(gamma > -p)) why << "gamma must exceed -p; ";
  if (!(q > p - 1.0)) why << "q must exceed p - 1; ";
  if (!(amplitude > 0.0)) why << "amplitude must be positive; ";
  if (!std::isfinite(p) || !std::isfinite(q) || !std::isfinite(gamma) || !std::isfinite(amplitude)) {
    why << "parameters must be finite; ";
  }
  const auto msg = why.str();
  if (!msg.empty()) throw Error(ErrorKind::InvalidParams, msg);
}

namespace {

void require_high_dimension(const ProblemParams& params, const char* what) {
  if (params.dim() <= params.p) {
    throw Error(ErrorKind::DimensionRegime,
                std::string(what) + " is undefined for N <= p (every bounded-below supersolution is constant)");
  }
}

}  // namespace

double lambda_exponent(const ProblemParams& params) {
  return (params.p - params.dim()) / (params.p - 1.0);
}

double serrin_critical(const ProblemParams& params) {
  require_high_dimension(params, "serrin_critical");
  return (params.dim() + params.gamma) * (params.p - 1.0) / (params.dim() - params.p);
}

double equation_critical(const ProblemParams& params) {
  require_high_dimension(params, "equation_critical");
  const double n = params.dim();
  return ((n + params.gamma) * (params.p - 1.0) + params.p + params.gamma) / (n - params.p);
}

double pohozaev_coefficient(const ProblemParams& params) {
  require_high_dimension(params, "pohozaev_coefficient");
  const double n = params.dim();
  return n - params.p - (params.gamma + n) * params.p / (params.q + 1.0);
}

Regime classify_regime(const ProblemParams& params) {
  params.validate();
  Regime regime;
  regime.lambda = lambda_exponent(params);
  if (params.dim() <= params.p) {
    regime.low_dimension = true;
    return regime;
  }
  const double q_s = serrin_critical(params);
  const double q_e = equation_critical(params);
  regime.q_serrin = q_s;
  regime.q_equation = q_e;
  regime.inequality_nonexistence = params.q <= q_s;
  regime.counterexample_exists = params.gamma >= 0.0 && params.q > q_s;
  regime.equation_radial_nonexistence = params.gamma >= 0.0 && params.q <= q_e;
  regime.equation_boundary_case = std::abs(params.q - q_e) < kBoundaryTolerance;
  return regime;
}

}  // namespace plap
