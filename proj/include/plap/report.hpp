#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace plap {

/// Outcome of checking an identity or inequality numerically.
///
/// `residual` is always lhs - rhs (or the quantity named by the producing
/// check); `scale` is the magnitude used to normalise it.
struct IdentityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double scale = 1.0;
  bool passed = false;
  // Named auxiliary quantities (ratios, fitted slopes, ...).
  std::vector<std::pair<std::string, double>> extras;

  double relative() const { return std::abs(residual) / scale; }

  double extra(const std::string& name) const {
    for (const auto& [key, value] : extras) {
      if (key == name) return value;
    }
    return std::nan("");
  }
};

}  // namespace plap
