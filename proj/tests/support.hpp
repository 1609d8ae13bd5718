#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include "plap/errors.hpp"
#include "plap/exponents.hpp"

namespace testing {

inline plap::ProblemParams params(int n, double p, double q = 3.0, double gamma = 0.0, double a = 1.0) {
  plap::ProblemParams prm;
  prm.n_dim = n;
  prm.p = p;
  prm.q = q;
  prm.gamma = gamma;
  prm.amplitude = a;
  return prm;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Kind of the plap::Error thrown by f, or nullopt if it returns normally.
template <class F>
std::optional<plap::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const plap::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace testing
