#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle.hpp"
#include "plap/shooting.hpp"
#include "support.hpp"

using namespace plap;
using testing::params;

namespace {

IvpSpec ivp(const ProblemParams& prm, double u0, double r_max = 100.0, EquationSign sign = EquationSign::Minus) {
  IvpSpec spec;
  spec.params = prm;
  spec.u0 = u0;
  spec.r_max = r_max;
  spec.sign = sign;
  return spec;
}

oracle::Problem oracle_for(const IvpSpec& spec) {
  oracle::Problem pr;
  pr.n = spec.params.n_dim;
  pr.p = spec.params.p;
  pr.q = spec.params.q;
  pr.gamma = spec.params.gamma;
  pr.a = spec.params.amplitude;
  pr.u0 = spec.u0;
  pr.sign = spec.sign == EquationSign::Minus ? -1.0 : 1.0;
  pr.r_max = spec.r_max;
  pr.blowup = spec.blowup_factor;
  return pr;
}

double aubin_talenti(double r) { return std::pow(3.0, 0.25) / std::sqrt(1.0 + r * r); }

}  // namespace

TEST_SUITE("shooting") {
  TEST_CASE("spec validation and defaults") {
    auto spec = ivp(params(3, 2, 3), 1.0);
    CHECK(spec.start_radius() == doctest::Approx(1e-6));
    spec.r_max = 0.5;
    CHECK(spec.start_radius() == doctest::Approx(5e-7));
    CHECK(spec.blowup_threshold() == doctest::Approx(1e8));
    CHECK(testing::error_kind([] { ivp(params(3, 2, 3), 0.0).validate(); }) == ErrorKind::InvalidParams);
    CHECK(testing::error_kind([] { ivp(params(3, 2, 3), 1.0, -1.0).validate(); }) == ErrorKind::InvalidParams);
    auto bad = ivp(params(3, 2, 3), 1.0);
    bad.delta0 = 10.0;
    CHECK(testing::error_kind([&] { bad.validate(); }) == ErrorKind::InvalidParams);
  }

  TEST_CASE("origin series agrees with the integrated trajectory") {
    const auto spec = ivp(params(4, 3, 6, 0.5), 1.2);
    const auto traj = integrate_ivp(spec);
    for (double r : {1e-4, 1e-3}) {
      const auto s = origin_series(spec, r);
      CHECK(testing::rel_err(traj.u_at(r), s[0]) < 1e-9);
      CHECK(testing::rel_err(traj.eval(r)[1], s[1]) < 1e-3);
    }
    // Below the hand-off radius the series itself is returned.
    const double tiny = 0.5 * traj.r.front();
    CHECK(traj.u_at(tiny) == origin_series(spec, tiny)[0]);
    CHECK(testing::error_kind([&] { traj.eval(2.0 * spec.r_max); }) == ErrorKind::RangeError);
  }

  TEST_CASE("critical exponent reproduces the Aubin-Talenti profile") {
    const auto spec = ivp(params(3, 2, 5), std::pow(3.0, 0.25));
    const auto traj = integrate_ivp(spec);
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.r.size(); ++i) {
      worst = std::max(worst, testing::rel_err(traj.u[i], aubin_talenti(traj.r[i])));
    }
    for (int i = 0; i < 500; ++i) {
      const double r = 1e-6 * std::pow(1e8, i / 499.0);
      worst = std::max(worst, testing::rel_err(traj.u_at(r), aubin_talenti(r)));
    }
    CHECK(worst <= 1e-6);
    CHECK(std::holds_alternative<PositiveDecaying>(classify_outcome(traj, spec)));

    const auto far = ivp(params(3, 2, 5), std::pow(3.0, 0.25), 1e4);
    const auto long_traj = integrate_ivp(far);
    CHECK(long_traj.stop == StopReason::ReachedEnd);
    const auto outcome = classify_outcome(long_traj, far);
    REQUIRE(std::holds_alternative<PositiveDecaying>(outcome));
    CHECK(std::get<PositiveDecaying>(outcome).tail_slope == doctest::Approx(-1.0).epsilon(1e-3));
  }

  TEST_CASE("subcritical trajectories cross zero where the oracle does") {
    for (double u0 : {0.5, 1.0, 2.0}) {
      const auto spec = ivp(params(3, 2, 3), u0);
      const auto traj = integrate_ivp(spec);
      const auto outcome = classify_outcome(traj, spec);
      REQUIRE(std::holds_alternative<CrossesZero>(outcome));
      const auto ref = oracle::integrate(oracle_for(spec));
      REQUIRE(ref.kind == oracle::Result::Crossing);
      CHECK(testing::rel_err(std::get<CrossesZero>(outcome).r_cross, ref.r_event) <= 1e-4);
    }
  }

  TEST_CASE("plus sign blows up where the oracle does") {
    const auto spec = ivp(params(3, 2, 3), 1.0, 100.0, EquationSign::Plus);
    const auto traj = integrate_ivp(spec);
    const auto outcome = classify_outcome(traj, spec);
    REQUIRE(std::holds_alternative<BlowsUp>(outcome));
    const auto ref = oracle::integrate(oracle_for(spec));
    REQUIRE(ref.kind == oracle::Result::Blowup);
    CHECK(testing::rel_err(std::get<BlowsUp>(outcome).r_blow, ref.r_event) <= 1e-3);
    for (std::size_t i = 1; i < traj.r.size(); ++i) CHECK(traj.du(i) > 0.0);
  }

  TEST_CASE("plus sign stopped before blow-up is undecided") {
    const auto spec = ivp(params(3, 2, 3), 1.0, 1.0, EquationSign::Plus);
    const auto traj = integrate_ivp(spec);
    CHECK(std::holds_alternative<Indeterminate>(classify_outcome(traj, spec)));
  }

  TEST_CASE("decay slopes") {
    const auto spec = ivp(params(3, 2, 5), std::pow(3.0, 0.25), 1e4);
    const auto traj = integrate_ivp(spec);
    const auto rep = decay_slope_report(traj, spec);
    CHECK(rep.passed);
    CHECK(rep.extra("slope_u") == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(rep.extra("slope_du") == doctest::Approx(-2.0).epsilon(1e-3));
    CHECK(rep.extra("target_u") == doctest::Approx(-0.5));
    CHECK(rep.extra("target_du") == doctest::Approx(-1.5));

    const auto sub = ivp(params(3, 2, 3), 1.0);
    CHECK(testing::error_kind([&] { decay_slope_report(integrate_ivp(sub), sub); }) == ErrorKind::NotDecaying);

    const auto super = ivp(params(4, 2.5, 9, 0.5), 1.0, 1e4);
    CHECK(decay_slope_report(integrate_ivp(super), super).passed);
  }

  TEST_CASE("pohozaev balance") {
    const auto at = ivp(params(3, 2, 5), std::pow(3.0, 0.25));
    const auto at_traj = integrate_ivp(at);
    for (double r : {1.0, 5.0, 50.0}) {
      const auto rep = pohozaev_residual(at_traj, at, r);
      CHECK(rep.relative() <= 1e-6);
      CHECK(rep.lhs == 0.0);
    }

    const auto sub = ivp(params(3, 2, 3), 1.0);
    const auto sub_traj = integrate_ivp(sub);
    for (double frac : {0.1, 0.5, 0.9, 0.99}) {
      const auto rep = pohozaev_residual(sub_traj, sub, frac * sub_traj.r_event);
      CHECK(rep.relative() <= 1e-4);
    }
    CHECK(testing::error_kind([&] { pohozaev_residual(sub_traj, sub, 1.01 * sub_traj.r_event); }) ==
          ErrorKind::RangeError);

    auto degenerate = params(4, 2.5, 0.0, 0.5);
    degenerate.q = equation_critical(degenerate) - 0.05;
    const auto deg = ivp(degenerate, 1.0, 1.0);
    const auto deg_traj = integrate_ivp(deg);
    for (double r : {0.05, 0.2, 1.0}) CHECK(pohozaev_residual(deg_traj, deg, r).relative() <= 1e-4);

    const auto plus = ivp(params(3, 2, 3), 1.0, 1.0, EquationSign::Plus);
    CHECK(testing::error_kind([&] { pohozaev_residual(integrate_ivp(plus), plus, 0.5); }) ==
          ErrorKind::InvalidParams);
  }

  TEST_CASE("pohozaev residual shrinks under tolerance refinement") {
    const auto base = ivp(params(3, 2, 3), 1.0);
    std::vector<double> tols{1e-5, 1e-6, 1e-7, 1e-8};
    std::vector<double> res;
    for (double tol : tols) {
      auto spec = base;
      spec.rtol = tol;
      spec.atol = 1e-2 * tol;
      const auto traj = integrate_ivp(spec);
      res.push_back(pohozaev_residual(traj, spec, 5.0).relative());
    }
    for (std::size_t i = 1; i < res.size(); ++i) CHECK(res[i] < res[i - 1]);
    const double order = std::log(res.front() / res.back()) / std::log(tols.front() / tols.back());
    CHECK(order >= 1.0);
  }

  TEST_CASE("flux conservation and monotonicity") {
    const std::vector<IvpSpec> specs{ivp(params(3, 2, 5), std::pow(3.0, 0.25)), ivp(params(3, 2, 3), 1.0),
                                     ivp(params(4, 3, 12), 1.0), ivp(params(5, 2.5, 3, 0.7), 2.0),
                                     ivp(params(3, 1.5, 2, 0.0, 2.0), 1.0)};
    for (const auto& spec : specs) {
      const auto traj = integrate_ivp(spec);
      const auto rep = conservation_check(traj);
      CHECK(rep.passed);
      CHECK(rep.residual <= 10.0 * spec.rtol);
      for (std::size_t i = 0; i < traj.r.size(); ++i) {
        if (traj.u[i] > 0.0) CHECK(traj.w[i] < 0.0);
      }
    }
  }

  TEST_CASE("scaling covariance with lambda = 2") {
    std::mt19937_64 rng(41);
    const double lam = 2.0;
    for (int i = 0; i < 10; ++i) {
      const int n = testing::uniform_int(rng, 3, 6);
      const double p = testing::uniform(rng, 1.5, n - 0.5);
      auto prm = params(n, p, 0.0, testing::uniform(rng, 0.0, 1.0));
      const double qe = equation_critical(prm);
      prm.q = i % 2 == 0 ? testing::uniform(rng, p - 1.0 + 0.3, qe - 0.2) : testing::uniform(rng, qe + 0.2, qe + 3.0);
      const double u0 = testing::uniform(rng, 0.5, 2.0);
      const double factor = std::pow(lam, (p + prm.gamma) / (prm.q - p + 1.0));
      const auto base = integrate_ivp(ivp(prm, u0, 20.0));
      const auto scaled = integrate_ivp(ivp(prm, factor * u0, 10.0));
      const double end = std::min(scaled.r.back(), base.r.back() / lam);
      double worst = 0.0;
      for (int j = 0; j < 200; ++j) {
        const double r = 1e-3 * std::pow(0.95 * end / 1e-3, j / 199.0);
        const double expect = factor * base.u_at(lam * r);
        worst = std::max(worst, std::abs(scaled.u_at(r) - expect) / std::abs(factor * u0));
      }
      CHECK(worst <= 1e-6);
    }
  }

  TEST_CASE("halving rtol moves r_cross by less than ten old error estimates") {
    const auto tight = [] {
      auto s = ivp(params(3, 2, 3), 1.0);
      s.rtol = 1e-13;
      s.atol = 1e-15;
      return integrate_ivp(s).r_event;
    }();
    for (double tol : {1e-6, 1e-7, 1e-8}) {
      auto a = ivp(params(3, 2, 3), 1.0);
      a.rtol = tol;
      a.atol = 1e-2 * tol;
      auto b = a;
      b.rtol = tol / 2;
      b.atol = a.atol / 2;
      const double ra = integrate_ivp(a).r_event;
      const double rb = integrate_ivp(b).r_event;
      const double old_error = std::abs(ra - tight);
      CHECK(std::abs(rb - ra) <= 10.0 * std::max(old_error, 1e-10 * tight));
    }
  }
}
