#include "plap/bvp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "plap/errors.hpp"

namespace plap {

namespace {

struct Mesh {
  std::vector<double> r;       // nodes 0..M
  std::vector<double> weight;  // r_{j+1/2}^(N-1), j = 0..M-1
  std::vector<double> source;  // r_i^(N-1) f(r_i)
  double h = 0.0;
};

Mesh build_mesh(const AnnulusProblem& prob) {
  Mesh mesh;
  const int m = prob.mesh_size;
  const double nm1 = prob.params.dim() - 1.0;
  mesh.h = (prob.r_outer - prob.r_inner) / m;
  mesh.r.resize(m + 1);
  mesh.source.resize(m + 1);
  for (int i = 0; i <= m; ++i) {
    mesh.r[i] = i == m ? prob.r_outer : prob.r_inner + i * mesh.h;
    mesh.source[i] = std::pow(mesh.r[i], nm1) * prob.f(mesh.r[i]);
  }
  mesh.weight.resize(m);
  for (int j = 0; j < m; ++j) mesh.weight[j] = std::pow(0.5 * (mesh.r[j] + mesh.r[j + 1]), nm1);
  return mesh;
}

class FluxSystem {
 public:
  FluxSystem(const Mesh& mesh, double p) : mesh_(mesh), p_(p) {}

  void set_eps(double eps) { eps_ = eps; }

  double flux(double d) const {
    if (p_ == 2.0) return d;
    return std::pow(d * d + eps_ * eps_, 0.5 * (p_ - 2.0)) * d;
  }

  double flux_slope(double d) const {
    if (p_ == 2.0) return 1.0;
    const double s = d * d + eps_ * eps_;
    return std::pow(s, 0.5 * (p_ - 4.0)) * ((p_ - 1.0) * d * d + eps_ * eps_);
  }

  // Residual h R_i = -(F_{i+1/2} - F_{i-1/2}) - h r_i^(N-1) f_i at interior nodes,
  // together with the flux scale max |F|.
  double residual(const std::vector<double>& u, std::vector<double>& res, double& scale) const {
    const std::size_t m = mesh_.weight.size();
    std::vector<double> fl(m);
    scale = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      fl[j] = mesh_.weight[j] * flux((u[j + 1] - u[j]) / mesh_.h);
      scale = std::max(scale, std::abs(fl[j]));
    }
    double norm = 0.0;
    res.assign(m + 1, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
      res[i] = -(fl[i] - fl[i - 1]) - mesh_.h * mesh_.source[i];
      norm = std::max(norm, std::abs(res[i]));
      scale = std::max(scale, mesh_.h * std::abs(mesh_.source[i]));
    }
    return norm;
  }

  // Newton correction: tridiagonal Jacobian of h R, solved by the Thomas algorithm.
  std::vector<double> correction(const std::vector<double>& u, const std::vector<double>& res) const {
    const std::size_t m = mesh_.weight.size();
    std::vector<double> g(m);
    for (std::size_t j = 0; j < m; ++j) {
      g[j] = mesh_.weight[j] * flux_slope((u[j + 1] - u[j]) / mesh_.h) / mesh_.h;
    }
    // Unknowns 1..m-1: diag g_{i-1} + g_i, off-diagonals -g_{i-1}, -g_i.
    std::vector<double> c(m + 1, 0.0), d(m + 1, 0.0), delta(m + 1, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
      const double lower = i > 1 ? -g[i - 1] : 0.0;
      const double diag = g[i - 1] + g[i];
      const double upper = i + 1 < m ? -g[i] : 0.0;
      const double denom = diag - lower * c[i - 1];
      c[i] = upper / denom;
      d[i] = (-res[i] - lower * d[i - 1]) / denom;
    }
    for (std::size_t i = m - 1; i >= 1; --i) {
      delta[i] = d[i] - c[i] * delta[i + 1];
    }
    return delta;
  }

 private:
  const Mesh& mesh_;
  double p_;
  double eps_ = 0.0;
};

double l2_norm(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

void AnnulusProblem::validate() const {
  if (!(params.p > 1.0) || params.n_dim < 1) throw Error(ErrorKind::InvalidParams, "need p > 1 and N >= 1");
  if (!(r_inner > 0.0) || !(r_outer > r_inner)) {
    throw Error(ErrorKind::InvalidParams, "annulus needs 0 < r_inner < r_outer");
  }
  if (mesh_size < 16) throw Error(ErrorKind::InvalidParams, "mesh_size must be at least 16");
  if (!std::isfinite(boundary_inner) || !std::isfinite(boundary_outer)) {
    throw Error(ErrorKind::InvalidParams, "boundary values must be finite");
  }
}

AnnulusSolution solve_annulus_dirichlet(const AnnulusProblem& prob, const BvpOptions& options) {
  prob.validate();
  const Mesh mesh = build_mesh(prob);
  for (double s : mesh.source) {
    if (s < 0.0) throw Error(ErrorKind::InvalidParams, "right-hand side must be nonnegative");
  }
  const int m = prob.mesh_size;
  std::vector<double> u(m + 1);
  for (int i = 0; i <= m; ++i) {
    const double t = static_cast<double>(i) / m;
    u[i] = (1.0 - t) * prob.boundary_inner + t * prob.boundary_outer;
  }
  u[m] = prob.boundary_outer;

  FluxSystem system(mesh, prob.params.p);
  std::vector<double> res, trial_res;
  double scale = 0.0;
  double scaled = std::numeric_limits<double>::infinity();
  int iterations = 0;
  double eps = options.flux_eps_start;
  double eps_reached = eps;
  const bool linear = prob.params.p == 2.0;

  for (;;) {
    system.set_eps(eps);
    eps_reached = eps;
    double norm = system.residual(u, res, scale);
    for (int it = 0;; ++it) {
      scaled = scale > 0.0 ? norm / scale : 0.0;
      if (scaled <= options.newton_tol) break;
      if (it >= options.max_newton) {
        std::ostringstream os;
        os << "no convergence after " << it << " iterations at flux_eps " << eps << ", residual " << scaled;
        throw Error(ErrorKind::NewtonDivergence, os.str());
      }
      const auto delta = system.correction(u, res);
      // The Newton direction descends the Euclidean norm, not the max norm.
      const double merit = l2_norm(res);
      double step = 1.0;
      bool accepted = false;
      std::vector<double> trial(u);
      for (int halving = 0; halving <= options.max_halvings; ++halving) {
        for (int i = 1; i < m; ++i) trial[i] = u[i] + step * delta[i];
        double trial_scale = 0.0;
        const double trial_norm = system.residual(trial, trial_res, trial_scale);
        if (l2_norm(trial_res) <= (1.0 - 1e-4 * step) * merit) {
          u.swap(trial);
          res.swap(trial_res);
          norm = trial_norm;
          scale = trial_scale;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      ++iterations;
      if (!accepted) {
        std::ostringstream os;
        os << "line search failed at flux_eps " << eps << ", residual " << scaled;
        throw Error(ErrorKind::NewtonDivergence, os.str());
      }
    }
    if (linear || eps <= options.flux_eps_end * (1.0 + 1e-12)) break;
    eps = std::max(eps * options.flux_eps_factor, options.flux_eps_end);
  }
  return {GridProfile(mesh.r, u), scaled, eps_reached, iterations};
}

IdentityReport comparison_check(const AnnulusProblem& prob, const ProfileSpec& phi, double tol) {
  prob.validate();
  const int probes = 16;
  for (int i = 0; i <= probes; ++i) {
    const double r = prob.r_inner + (prob.r_outer - prob.r_inner) * i / probes;
    const EvalPoint point = eval_profile(phi, r);
    const double lap = p_laplacian_radial(point, prob.params);
    if (std::abs(lap) > 1e-8 * std::max(p_laplacian_term_scale(point, prob.params), 1e-300)) {
      std::ostringstream os;
      os << "comparison profile has Δ_p φ = " << lap << " at r = " << r;
      throw Error(ErrorKind::NotPHarmonic, os.str());
    }
  }
  const double phi_in = eval_profile(phi, prob.r_inner).value;
  const double phi_out = eval_profile(phi, prob.r_outer).value;
  const double slack = 1e-14 * std::max({1.0, std::abs(phi_in), std::abs(phi_out)});
  if (prob.boundary_inner < phi_in - slack || prob.boundary_outer < phi_out - slack) {
    std::ostringstream os;
    os << "boundary data (" << prob.boundary_inner << ", " << prob.boundary_outer << ") below profile ("
       << phi_in << ", " << phi_out << ")";
    throw Error(ErrorKind::BoundaryDominanceViolated, os.str());
  }
  const AnnulusSolution sol = solve_annulus_dirichlet(prob);
  double worst = std::numeric_limits<double>::infinity();
  double at = 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < sol.profile.size(); ++i) {
    const double r = sol.profile.r()[i];
    const double phi_r = eval_profile(phi, r).value;
    const double gap = sol.profile.u()[i] - phi_r;
    scale = std::max(scale, std::abs(phi_r));
    if (gap < worst) {
      worst = gap;
      at = r;
    }
  }
  IdentityReport report;
  report.lhs = worst;
  report.rhs = -tol;
  report.residual = worst;
  report.scale = scale;
  report.passed = worst >= -tol;
  report.extras = {{"r_at_min", at}, {"newton_residual", sol.residual}};
  return report;
}

}  // namespace plap
