#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "plap/identities.hpp"
#include "support.hpp"

using namespace plap;
using testing::params;

namespace {

RecursionSpec recursion(double c, double k, double phi0, int n) {
  RecursionSpec s;
  s.c = c;
  s.k = k;
  s.phi0 = phi0;
  s.n_max = n;
  return s;
}

}  // namespace

TEST_SUITE("identities") {
  TEST_CASE("recursion bound worked values") {
    const auto x = moser_normalized_logs(recursion(2, 2, 1, 3));
    CHECK(std::abs(x[3] - 11.0 / 8.0 * std::log(2.0)) <= 1e-12);
    const auto rep = moser_recursion_bound(recursion(2, 2, 1, 3));
    CHECK(rep.passed);
    CHECK(std::abs(rep.rhs - 2.0 * std::log(2.0)) <= 1e-12);

    const auto y = moser_normalized_logs(recursion(3, 3, 1, 2));
    CHECK(std::abs(y[2] - 5.0 / 9.0 * std::log(3.0)) <= 1e-12);
    const auto rep3 = moser_recursion_bound(recursion(3, 3, 1, 2));
    CHECK(rep3.passed);
    CHECK(std::abs(rep3.rhs - 0.75 * std::log(3.0)) <= 1e-12);

    for (double k : {1.1, 2.0, 4.5}) {
      const auto one = moser_recursion_bound(recursion(1, k, 5, 20));
      CHECK(one.passed);
      CHECK(one.residual == 0.0);
      CHECK(one.extra("max_ratio") == 1.0);
      for (double v : moser_normalized_logs(recursion(1, k, 5, 20))) CHECK(v == std::log(5.0));
    }
  }

  TEST_CASE("recursion validation") {
    CHECK(testing::error_kind([] { moser_recursion_bound(recursion(2, 1, 1, 3)); }) == ErrorKind::InvalidParams);
    CHECK(testing::error_kind([] { moser_recursion_bound(recursion(0, 2, 1, 3)); }) == ErrorKind::InvalidParams);
    CHECK(testing::error_kind([] { moser_recursion_bound(recursion(2, 2, -1, 3)); }) == ErrorKind::InvalidParams);
    CHECK(testing::error_kind([] { moser_recursion_bound(recursion(2, 2, 1, 0)); }) == ErrorKind::InvalidParams);
    const std::vector<double> too_big{0.0, 10.0};
    CHECK(testing::error_kind([&] { moser_sequence_bound(too_big, 2.0, 2.0); }) == ErrorKind::InvalidParams);
  }

  TEST_CASE("recursion bound holds for c >= 1 over the parameter grid") {
    for (int ic = 0; ic < 10; ++ic) {
      const double c = 1.0 + 9.0 * ic / 9.0;
      for (int ik = 0; ik < 10; ++ik) {
        const double k = 1.1 + 3.9 * ik / 9.0;
        for (double phi0 : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
          const auto rep = moser_recursion_bound(recursion(c, k, phi0, 30));
          CHECK(rep.passed);
          CHECK(rep.residual >= 0.0);
        }
      }
    }
  }

  TEST_CASE("recursion bound is violated for c < 1") {
    // The normalized logs are log φ0 + log c · Σ j k^-j, and the partial
    // sums stay below k/(k-1)², so a negative log c overshoots the bound.
    for (double c : {0.5, 0.9}) {
      for (double k : {1.1, 2.0, 5.0}) {
        const auto rep = moser_recursion_bound(recursion(c, k, 1.0, 30));
        CHECK_FALSE(rep.passed);
        CHECK(rep.extra("max_ratio") > 1.0);
      }
    }
  }

  TEST_CASE("sequences below the extremal recursion satisfy the bound") {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 100; ++i) {
      const double c = testing::uniform(rng, 1.0, 10.0);
      const double k = testing::uniform(rng, 1.1, 5.0);
      const int n = testing::uniform_int(rng, 1, 30);
      std::vector<double> logs{std::log(testing::uniform(rng, 1e-2, 1e2))};
      for (int j = 1; j <= n; ++j) {
        logs.push_back(j * std::log(c) + k * logs.back() - testing::uniform(rng, 0.0, 2.0));
      }
      const auto rep = moser_sequence_bound(logs, c, k);
      CHECK(rep.passed);
      const auto extremal = moser_recursion_bound(recursion(c, k, std::exp(logs[0]), n));
      CHECK(rep.lhs <= extremal.lhs + 1e-12 * std::max(1.0, std::abs(extremal.lhs)));
    }
  }

  TEST_CASE("caccioppoli worked values") {
    const PowerBarrier constant{0.0, 1.0, -1.0, false};
    const auto flat = caccioppoli_check(constant, params(3, 2), RadialCutoff::tent(1.0, 3.0));
    CHECK(flat.passed);
    CHECK(flat.lhs == 0.0);

    // u = x in one dimension: ∫ζ² = 2/3, 4∫x²|ζ'|² = 4·26/3.
    const AnalyticProfile line{[](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
    const auto lin = caccioppoli_check(line, params(1, 2), RadialCutoff::tent(1.0, 3.0));
    CHECK(lin.passed);
    CHECK(lin.lhs == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(lin.rhs == doctest::Approx(104.0 / 3.0).epsilon(1e-12));

    const auto inverse = PowerBarrier::fundamental(params(3, 2), 1.0, 0.0);
    const RadialCutoff trapezoid{1.0, 2.0, 4.0, 8.0};
    const auto rep = caccioppoli_check(inverse, params(3, 2), trapezoid);
    CHECK(rep.passed);
    // ∫_1^2 r^-4 (r-1)² r² dr + ∫_2^4 r^-2 dr + ∫_4^8 r^-4 ((8-r)/4)² r² dr, by hand.
    const double lhs = (1.5 - 2.0 * std::log(2.0)) + 0.25 + (0.75 - std::log(2.0));
    CHECK(rep.lhs == doctest::Approx(lhs).epsilon(1e-10));
    CHECK(rep.extra("ratio") < 1.0);
  }

  TEST_CASE("caccioppoli ratio stays below one and is homogeneous") {
    std::mt19937_64 rng(62);
    for (int i = 0; i < 40; ++i) {
      const int n = testing::uniform_int(rng, 1, 6);
      const double p = i % 8 == 0 ? static_cast<double>(n) : testing::uniform(rng, 1.3, 4.0);
      const auto prm = params(n, p);
      const double c2 = testing::uniform(rng, 0.5, 2.0) * (i % 2 ? 1.0 : -1.0);
      const double c1 = testing::uniform(rng, -1.0, 3.0);
      const auto u = PowerBarrier::fundamental(prm, c2, c1);
      const double r_a = testing::uniform(rng, 0.2, 2.0);
      const double lo = r_a * testing::uniform(rng, 1.1, 2.0);
      const double hi = lo * testing::uniform(rng, 1.0, 2.0);
      const RadialCutoff zeta{r_a, lo, hi, hi * testing::uniform(rng, 1.1, 2.0)};
      const auto rep = caccioppoli_check(u, prm, zeta);
      CHECK(rep.passed);
      CHECK(rep.extra("ratio") <= 1.0);
      CHECK(rep.extra("identity_gap") <= 1e-9);

      const double s = testing::uniform(rng, 0.1, 10.0);
      const auto scaled = caccioppoli_check(PowerBarrier::fundamental(prm, s * c2, s * c1), prm, zeta);
      CHECK(std::abs(scaled.extra("ratio") - rep.extra("ratio")) <= 1e-12 * rep.extra("ratio"));
    }
  }

  TEST_CASE("caccioppoli rejects non-harmonic profiles and bad cutoffs") {
    const Counterexample bump{1.0, 1.0};
    CHECK(testing::error_kind([&] { caccioppoli_check(bump, params(3, 2), RadialCutoff::tent(1, 3)); }) ==
          ErrorKind::NotPHarmonic);
    const auto inverse = PowerBarrier::fundamental(params(3, 2), 1.0, 0.0);
    CHECK(testing::error_kind([&] { caccioppoli_check(inverse, params(3, 2), RadialCutoff{2, 1, 3, 4}); }) ==
          ErrorKind::InvalidParams);
  }
}
