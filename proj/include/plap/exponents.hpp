#pragma once

#include <optional>

namespace plap {

/// Parameters of -Δ_p u ⋛ a r^γ u^q in R^N.
///
/// The weight is the pure power a·r^γ for every r > 0.
struct ProblemParams {
  int n_dim = 3;
  double p = 2.0;
  double q = 3.0;
  double gamma = 0.0;
  double amplitude = 1.0;

  /// Throws Error{InvalidParams} unless p > 1, γ > -p, q > p - 1, a > 0, N ≥ 1.
  void validate() const;

  double dim() const { return static_cast<double>(n_dim); }
};

struct Regime {
  bool low_dimension = false;             // N ≤ p
  bool inequality_nonexistence = false;   // N > p, q ≤ q_S
  bool counterexample_exists = false;     // N > p, γ ≥ 0, q > q_S
  bool equation_radial_nonexistence = false;  // N > p, γ ≥ 0, q ≤ q_E
  // q within boundary_tolerance of q_E: nonexistence at q = q_E relies on the
  // closed condition of the theorem while the argument itself is strict.
  bool equation_boundary_case = false;
  double lambda = 0.0;
  std::optional<double> q_serrin;
  std::optional<double> q_equation;
};

inline constexpr double kBoundaryTolerance = 1e-9;

/// (p - N)/(p - 1), the exponent of the radial fundamental solution.
double lambda_exponent(const ProblemParams& params);

/// (N + γ)(p - 1)/(N - p). Throws DimensionRegime when N ≤ p.
double serrin_critical(const ProblemParams& params);

/// ((N + γ)(p - 1) + p + γ)/(N - p). Throws DimensionRegime when N ≤ p.
double equation_critical(const ProblemParams& params);

/// N - p - (γ + N)p/(q + 1): the factor multiplying the volume integral in
/// the radial Pohozaev identity. Throws DimensionRegime when N ≤ p.
double pohozaev_coefficient(const ProblemParams& params);

Regime classify_regime(const ProblemParams& params);

}  // namespace plap
