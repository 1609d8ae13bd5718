#pragma once

// Dormand-Prince 5(4) with the 4th-order continuous extension of Hairer,
// Nørsett & Wanner and their PI step-size controller.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace plap::ode {

template <std::size_t Dim>
using State = std::array<double, Dim>;

/// Dense interpolant over one accepted step [t0, t0 + h].
template <std::size_t Dim>
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State<Dim>, 5> coef{};

  double t1() const { return t0 + h; }

  State<Dim> eval(double t) const {
    const double s = (t - t0) / h;
    const double s1 = 1.0 - s;
    State<Dim> y{};
    for (std::size_t i = 0; i < Dim; ++i) {
      y[i] = coef[0][i] + s * (coef[1][i] + s1 * (coef[2][i] + s * (coef[3][i] + s1 * coef[4][i])));
    }
    return y;
  }
};

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  std::vector<double> atol_component;  // overrides atol per component when non-empty
  double h_max = 0.0;            // 0: unbounded
  double h_max_relative = 0.0;   // 0: unbounded; else h <= h_max_relative |t|
  double h_min_relative = 1e-14;  // step collapse threshold relative to |t|
};

enum class StepStatus { Accepted, StepCollapse, NonFinite };

template <std::size_t Dim>
class Dopri5 {
 public:
  using Rhs = std::function<void(double, const State<Dim>&, State<Dim>&)>;

  Dopri5(Rhs rhs, double t0, const State<Dim>& y0, Options options)
      : rhs_(std::move(rhs)), t_(t0), y_(y0), opt_(options) {
    rhs_(t_, y_, k1_);
  }

  double t() const { return t_; }
  const State<Dim>& y() const { return y_; }
  const DenseSegment<Dim>& last_segment() const { return segment_; }
  std::size_t accepted() const { return n_accepted_; }
  std::size_t rejected() const { return n_rejected_; }

  double atol(std::size_t i) const { return opt_.atol_component.empty() ? opt_.atol : opt_.atol_component[i]; }

  /// Advances by one accepted step without passing t_end.
  StepStatus step(double t_end) {
    if (h_ == 0.0) h_ = initial_step(t_end);
    for (;;) {
      double h = std::min(h_, t_end - t_);
      if (opt_.h_max > 0.0) h = std::min(h, opt_.h_max);
      if (opt_.h_max_relative > 0.0) h = std::min(h, opt_.h_max_relative * std::abs(t_));
      if (h < opt_.h_min_relative * std::max(std::abs(t_), 1e-300)) return StepStatus::StepCollapse;

      State<Dim> y1{}, k7{}, err{};
      attempt(h, y1, k7, err);
      double norm = 0.0;
      bool finite = true;
      for (std::size_t i = 0; i < Dim; ++i) {
        const double sc = atol(i) + opt_.rtol * std::max(std::abs(y_[i]), std::abs(y1[i]));
        norm += (err[i] / sc) * (err[i] / sc);
        finite = finite && std::isfinite(y1[i]) && std::isfinite(k7[i]);
      }
      norm = std::sqrt(norm / Dim);
      if (!finite || !std::isfinite(norm)) {
        ++n_rejected_;
        h_ = 0.1 * h;
        if (h_ < opt_.h_min_relative * std::max(std::abs(t_), 1e-300)) return StepStatus::NonFinite;
        continue;
      }
      const double fac11 = std::pow(norm, kExpo1);
      if (norm <= 1.0) {
        double fac = fac11 / std::pow(fac_old_, kBeta);
        fac = std::clamp(fac / kSafe, 1.0 / kFacMax, 1.0 / kFacMin);
        fac_old_ = std::max(norm, 1e-4);
        build_dense(h, y1, k7);
        t_ = (h == t_end - t_) ? t_end : t_ + h;
        y_ = y1;
        k1_ = k7;
        h_ = h / fac;
        ++n_accepted_;
        return StepStatus::Accepted;
      }
      ++n_rejected_;
      h_ = h / std::min(1.0 / kFacMin, fac11 / kSafe);
    }
  }

 private:
  static constexpr double kSafe = 0.9;
  static constexpr double kBeta = 0.04;
  static constexpr double kExpo1 = 0.2 - kBeta * 0.75;
  static constexpr double kFacMin = 0.2;
  static constexpr double kFacMax = 10.0;

  static constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
  static constexpr double a21 = 0.2;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                          a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                          a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  void attempt(double h, State<Dim>& y1, State<Dim>& k7, State<Dim>& err) {
    State<Dim> tmp{};
    for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y_[i] + h * a21 * k1_[i];
    rhs_(t_ + c2 * h, tmp, k2_);
    for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    rhs_(t_ + c3 * h, tmp, k3_);
    for (std::size_t i = 0; i < Dim; ++i) tmp[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    rhs_(t_ + c4 * h, tmp, k4_);
    for (std::size_t i = 0; i < Dim; ++i) {
      tmp[i] = y_[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    }
    rhs_(t_ + c5 * h, tmp, k5_);
    for (std::size_t i = 0; i < Dim; ++i) {
      tmp[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
    }
    rhs_(t_ + h, tmp, k6_);
    for (std::size_t i = 0; i < Dim; ++i) {
      y1[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
    }
    rhs_(t_ + h, y1, k7);
    for (std::size_t i = 0; i < Dim; ++i) {
      err[i] = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7[i]);
    }
  }

  void build_dense(double h, const State<Dim>& y1, const State<Dim>& k7) {
    segment_.t0 = t_;
    segment_.h = h;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double ydiff = y1[i] - y_[i];
      const double bspl = h * k1_[i] - ydiff;
      segment_.coef[0][i] = y_[i];
      segment_.coef[1][i] = ydiff;
      segment_.coef[2][i] = bspl;
      segment_.coef[3][i] = ydiff - h * k7[i] - bspl;
      segment_.coef[4][i] =
          h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] + d7 * k7[i]);
    }
  }

  // Starting step from the Hairer-Wanner heuristic.
  double initial_step(double t_end) {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double sk = atol(i) + opt_.rtol * std::abs(y_[i]);
      dnf += (k1_[i] / sk) * (k1_[i] / sk);
      dny += (y_[i] / sk) * (y_[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 * std::max(std::abs(t_), 1e-6)
                                              : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, t_end - t_);
    State<Dim> y1{}, f1{};
    for (std::size_t i = 0; i < Dim; ++i) y1[i] = y_[i] + h * k1_[i];
    rhs_(t_ + h, y1, f1);
    double der2 = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) {
      const double sk = atol(i) + opt_.rtol * std::abs(y_[i]);
      der2 += ((f1[i] - k1_[i]) / sk) * ((f1[i] - k1_[i]) / sk);
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, std::abs(h) * 1e-3) : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, t_end - t_});
  }

  Rhs rhs_;
  double t_;
  State<Dim> y_;
  Options opt_;
  double h_ = 0.0;
  double fac_old_ = 1e-4;
  State<Dim> k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{};
  DenseSegment<Dim> segment_{};
  std::size_t n_accepted_ = 0;
  std::size_t n_rejected_ = 0;
};

}  // namespace plap::ode
