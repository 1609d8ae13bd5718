#include <doctest.h>

#include <cmath>
#include <random>

#include "plap/barriers.hpp"
#include "plap/bvp.hpp"
#include "support.hpp"

using namespace plap;
using testing::params;

namespace {

AnnulusProblem annulus(const ProblemParams& prm, double r_in, double r_out, double u_in, double u_out, int mesh) {
  AnnulusProblem prob;
  prob.params = prm;
  prob.r_inner = r_in;
  prob.r_outer = r_out;
  prob.boundary_inner = u_in;
  prob.boundary_outer = u_out;
  prob.mesh_size = mesh;
  return prob;
}

template <class F>
double max_error(const AnnulusSolution& sol, F&& exact) {
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.profile.size(); ++i) {
    worst = std::max(worst, std::abs(sol.profile.u()[i] - exact(sol.profile.r()[i])));
  }
  return worst;
}

struct ClosedForm {
  AnnulusProblem prob;
  double (*exact)(double);
};

std::vector<ClosedForm> closed_forms(int mesh) {
  return {
      {annulus(params(3, 2), 1.0, 2.0, 1.0, 0.0, mesh), [](double r) { return 2.0 / r - 1.0; }},
      {annulus(params(3, 3), 1.0, 2.0, 1.0, 0.0, mesh), [](double r) { return std::log(r / 2.0) / std::log(0.5); }},
      {annulus(params(2, 3), 1.0, 4.0, 0.0, 1.0, mesh), [](double r) { return std::sqrt(r) - 1.0; }},
  };
}

}  // namespace

TEST_SUITE("bvp") {
  TEST_CASE("closed-form p-harmonic solutions at mesh 512") {
    const auto cases = closed_forms(512);
    const double at[] = {1.5, std::sqrt(2.0), 2.25};
    const double want[] = {1.0 / 3.0, 0.5, 0.5};
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const auto sol = solve_annulus_dirichlet(cases[i].prob);
      CHECK(max_error(sol, cases[i].exact) <= 1e-6);
      CHECK(std::abs(sol.profile.eval(at[i]).value - want[i]) <= 1e-6);
      CHECK(sol.residual <= 1e-11);
      if (cases[i].prob.params.p != 2.0) CHECK(sol.flux_eps == doctest::Approx(1e-10));
    }
  }

  TEST_CASE("mesh refinement order") {
    const auto coarse = closed_forms(64);
    const auto fine = closed_forms(128);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
      const double e1 = max_error(solve_annulus_dirichlet(coarse[i].prob), coarse[i].exact);
      const double e2 = max_error(solve_annulus_dirichlet(fine[i].prob), fine[i].exact);
      const double need = coarse[i].prob.params.p == 2.0 ? 3.0 : 1.8;
      CHECK(e1 / e2 >= need);
    }
  }

  TEST_CASE("discrete maximum principle without source") {
    std::mt19937_64 rng(51);
    for (int i = 0; i < 20; ++i) {
      const auto prm = params(testing::uniform_int(rng, 1, 6), testing::uniform(rng, 1.3, 4.0));
      const double a = testing::uniform(rng, -2.0, 2.0);
      const double b = testing::uniform(rng, -2.0, 2.0);
      const double r_in = testing::uniform(rng, 0.2, 2.0);
      const auto sol = solve_annulus_dirichlet(annulus(prm, r_in, r_in * testing::uniform(rng, 1.5, 10.0), a, b, 128));
      for (double u : sol.profile.u()) {
        CHECK(u >= std::min(a, b));
        CHECK(u <= std::max(a, b));
      }
    }
  }

  TEST_CASE("solver input validation") {
    CHECK(testing::error_kind([] { solve_annulus_dirichlet(annulus(params(3, 2), 2.0, 1.0, 0, 0, 64)); }) ==
          ErrorKind::InvalidParams);
    CHECK(testing::error_kind([] { solve_annulus_dirichlet(annulus(params(3, 2), 1.0, 2.0, 0, 0, 8)); }) ==
          ErrorKind::InvalidParams);
    auto negative = annulus(params(3, 2), 1.0, 2.0, 0, 0, 64);
    negative.rhs = [](double) { return -1.0; };
    CHECK(testing::error_kind([&] { solve_annulus_dirichlet(negative); }) == ErrorKind::InvalidParams);
    CHECK(testing::error_kind([] {
            BvpOptions o;
            o.max_newton = 1;
            solve_annulus_dirichlet(annulus(params(3, 3.5), 1.0, 2.0, 1.0, 0.0, 64), o);
          }) == ErrorKind::NewtonDivergence);
  }

  TEST_CASE("comparison worked cases") {
    const auto phi = PowerBarrier::fundamental(params(3, 2), 2.0, -1.0);
    const auto equal = comparison_check(annulus(params(3, 2), 1.0, 2.0, 1.0, 0.0, 256), phi);
    CHECK(equal.passed);
    CHECK(std::abs(equal.residual) <= 1e-10);

    auto lifted = annulus(params(3, 2), 1.0, 2.0, 1.1, 0.1, 512);
    lifted.rhs = [](double) { return 1.0; };
    const auto rep = comparison_check(lifted, phi);
    CHECK(rep.passed);
    CHECK(rep.residual >= 0.1 - 1e-6);

    CHECK(testing::error_kind([&] { comparison_check(annulus(params(3, 2), 1.0, 2.0, 0.9, 0.0, 64), phi); }) ==
          ErrorKind::BoundaryDominanceViolated);
    const Counterexample not_harmonic{1.0, 1.0};
    CHECK(testing::error_kind([&] {
            comparison_check(annulus(params(3, 2), 1.0, 2.0, 5.0, 5.0, 64), not_harmonic);
          }) == ErrorKind::NotPHarmonic);
  }

  TEST_CASE("comparison principle on random dominating problems") {
    std::mt19937_64 rng(52);
    for (int i = 0; i < 20; ++i) {
      const int n = testing::uniform_int(rng, 2, 6);
      const double p = testing::uniform(rng, 1.3, 4.0);
      const auto prm = params(n, p);
      const double r_in = testing::uniform(rng, 0.3, 2.0);
      const double r_out = r_in * testing::uniform(rng, 1.5, 6.0);
      const auto phi = PowerBarrier::fundamental(prm, testing::uniform(rng, -2.0, 2.0), testing::uniform(rng, -1, 1));
      auto prob = annulus(prm, r_in, r_out, eval_profile(phi, r_in).value + testing::uniform(rng, 0.0, 0.5),
                          eval_profile(phi, r_out).value + testing::uniform(rng, 0.0, 0.5), 256);
      const double amp = testing::uniform(rng, 0.1, 2.0);
      const double center = testing::uniform(rng, r_in, r_out);
      prob.rhs = [amp, center](double r) { return amp * (1.0 + std::sin(3.0 * (r - center))); };
      const auto rep = comparison_check(prob, phi);
      CHECK(rep.passed);
      CHECK(rep.residual >= -1e-8);
    }
  }

  TEST_CASE("hadamard bound under superharmonic BVP solutions") {
    std::mt19937_64 rng(53);
    for (int i = 0; i < 10; ++i) {
      const int n = testing::uniform_int(rng, 2, 6);
      const double p = testing::uniform(rng, 1.3, 4.0);
      const auto prm = params(n, p);
      const double r_in = testing::uniform(rng, 0.3, 2.0);
      const double r_out = r_in * testing::uniform(rng, 1.5, 6.0);
      auto prob = annulus(prm, r_in, r_out, testing::uniform(rng, 0.0, 2.0), testing::uniform(rng, 0.0, 2.0), 256);
      const double amp = testing::uniform(rng, 0.0, 2.0);
      prob.rhs = [amp](double r) { return amp / (1.0 + r); };
      const auto sol = solve_annulus_dirichlet(prob);
      const auto in = HadamardInput::make(prm, r_in, prob.boundary_inner, r_out, prob.boundary_outer);
      for (std::size_t j = 0; j < sol.profile.size(); ++j) {
        const double r = std::clamp(sol.profile.r()[j], r_in, r_out);
        CHECK(hadamard_lower_bound(in, r) <= sol.profile.u()[j] + 1e-6);
      }
    }
  }

  TEST_CASE("BVP restriction of an entire supersolution keeps m r^(-lambda) increasing") {
    for (const auto& prm : {params(3, 2, 4), params(4, 3, 10), params(5, 2.5, 5, 0.5)}) {
      const auto consts = build_counterexample(prm);
      const auto gamma = consts.profile();
      const double r_in = 0.5;
      const double r_out = 6.0;
      auto prob = annulus(prm, r_in, r_out, eval_profile(gamma, r_in).value, eval_profile(gamma, r_out).value, 512);
      prob.rhs = [gamma, prm](double r) { return -p_laplacian_radial(eval_profile(gamma, r), prm); };
      const auto sol = solve_annulus_dirichlet(prob);
      std::vector<std::pair<double, double>> samples;
      for (std::size_t j = 0; j < sol.profile.size(); ++j) samples.emplace_back(sol.profile.r()[j], sol.profile.u()[j]);
      const auto rep = hadamard_monotonicity_check(samples, lambda_exponent(prm), 1e-6);
      CHECK(rep.passed);
      const auto in = HadamardInput::make(prm, r_in, samples.front().second, r_out, samples.back().second);
      for (const auto& [r, m] : samples) CHECK(hadamard_lower_bound(in, std::clamp(r, r_in, r_out)) <= m + 1e-6);
    }
  }
}
