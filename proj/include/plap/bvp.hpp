#pragma once

#include <functional>
#include <vector>

#include "plap/exponents.hpp"
#include "plap/radial_ops.hpp"
#include "plap/report.hpp"

namespace plap {

/// -Δ_p u = f(r) on r_inner < r < r_outer with Dirichlet data. q and the
/// weight in `params` are not used.
struct AnnulusProblem {
  ProblemParams params;
  double r_inner = 1.0;
  double r_outer = 2.0;
  double boundary_inner = 0.0;
  double boundary_outer = 0.0;
  std::function<double(double)> rhs;  // empty means f = 0
  int mesh_size = 256;

  void validate() const;
  double f(double r) const { return rhs ? rhs(r) : 0.0; }
};

struct BvpOptions {
  double newton_tol = 1e-11;
  double flux_eps_start = 1e-2;
  double flux_eps_end = 1e-10;
  double flux_eps_factor = 0.1;
  int max_newton = 100;
  int max_halvings = 40;
};

struct AnnulusSolution {
  GridProfile profile;
  double residual = 0.0;    // final scaled Newton residual
  double flux_eps = 0.0;    // last continuation level reached
  int newton_iterations = 0;
};

/// Uniform mesh, midpoint fluxes r_{i+1/2}^(N-1) (D² + ε²)^((p-2)/2) D with
/// D the one-sided difference; damped Newton (Armijo halving) on each level
/// of the ε continuation. Throws NewtonDivergence with the last residual.
AnnulusSolution solve_annulus_dirichlet(const AnnulusProblem& prob, const BvpOptions& options = {});

inline constexpr double kComparisonTolerance = 1e-8;

/// Solves `prob` and reports min over the mesh of (u - φ). φ must be
/// p-harmonic on the annulus and dominated by the boundary data.
IdentityReport comparison_check(const AnnulusProblem& prob, const ProfileSpec& phi,
                                double tol = kComparisonTolerance);

}  // namespace plap
