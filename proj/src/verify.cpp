#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "plap/barriers.hpp"
#include "plap/bvp.hpp"
#include "plap/cli.hpp"
#include "plap/errors.hpp"
#include "plap/identities.hpp"
#include "plap/radial_ops.hpp"

namespace plap::cli {

namespace {

struct Case {
  std::string name;
  std::function<std::pair<bool, std::string>()> run;
};

std::string show(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

std::pair<bool, std::string> close(double got, double want, double tol, bool relative = false) {
  const double err = relative ? std::abs(got - want) / std::abs(want) : std::abs(got - want);
  return {err <= tol, "got " + show(got) + " want " + show(want) + " err " + show(err)};
}

std::pair<bool, std::string> all_of(std::initializer_list<std::pair<bool, std::string>> parts) {
  bool ok = true;
  std::string detail;
  for (const auto& [pass, text] : parts) {
    ok = ok && pass;
    if (!pass && detail.empty()) detail = text;
  }
  return {ok, detail};
}

ProblemParams pp(int n, double p, double q = 3.0, double gamma = 0.0) {
  ProblemParams params;
  params.n_dim = n;
  params.p = p;
  params.q = q;
  params.gamma = gamma;
  return params;
}

std::vector<Case> cases() {
  std::vector<Case> list;

  list.push_back({"exponents.critical", [] {
                    return all_of({close(serrin_critical(pp(3, 2)), 3.0, 1e-12),
                                   close(equation_critical(pp(3, 2)), 5.0, 1e-12),
                                   close(equation_critical(pp(5, 2)), 7.0 / 3.0, 1e-12),
                                   close(equation_critical(pp(5, 3, 3, 1)), 8.0, 1e-12),
                                   close(serrin_critical(pp(4, 2, 3, -1)), 1.5, 1e-12)});
                  }});
  list.push_back({"exponents.lambda", [] {
                    return all_of({close(lambda_exponent(pp(3, 2)), -1.0, 1e-15),
                                   close(lambda_exponent(pp(4, 4)), 0.0, 1e-15),
                                   close(lambda_exponent(pp(2, 3)), 0.5, 1e-15)});
                  }});
  list.push_back({"exponents.pohozaev_coefficient", [] {
                    return all_of({close(pohozaev_coefficient(pp(3, 2, 5)), 0.0, 1e-12),
                                   close(pohozaev_coefficient(pp(3, 2, 3)), -0.5, 1e-12),
                                   close(pohozaev_coefficient(pp(5, 2, 7.0 / 3.0)), 0.0, 1e-12)});
                  }});
  list.push_back({"exponents.regimes", [] {
                    const auto a = classify_regime(pp(3, 2, 3));
                    const auto b = classify_regime(pp(3, 2, 4));
                    const auto c = classify_regime(pp(2, 3, 10));
                    const bool ok = a.inequality_nonexistence && a.equation_radial_nonexistence &&
                                    b.counterexample_exists && b.equation_radial_nonexistence && c.low_dimension &&
                                    !c.q_serrin && !c.q_equation;
                    return std::pair<bool, std::string>{ok, ok ? "" : "regime flags differ from the theorem cases"};
                  }});
  list.push_back({"radial_ops.closed_forms", [] {
                    const auto params = pp(3, 2);
                    const auto pt = eval_profile(PowerBarrier::fundamental(params, 1.0, 0.0), 2.0);
                    return all_of({close(pt.value, 0.5, 1e-15), close(pt.d1, -0.25, 1e-15),
                                   close(pt.d2, 0.25, 1e-15),
                                   close(p_laplacian_radial({1.0, 1.0, 2.0, 2.0}, params), 6.0, 1e-14),
                                   close(p_laplacian_radial({2.0, 2.0, 1.0, 0.0}, pp(2, 3)), 0.5, 1e-14)});
                  }});
  list.push_back({"radial_ops.fd_oracle", [] {
                    const auto params = pp(3, 2);
                    const AnalyticProfile square{[](double r) { return r * r; }, [](double r) { return 2 * r; },
                                                 [](double) { return 2.0; }};
                    const double fundamental =
                        p_laplacian_fd(PowerBarrier::fundamental(params, 1.0, 0.0), 1.5, params, 1e-4);
                    return all_of({close(p_laplacian_fd(square, 1.0, params, 1e-4), 6.0, 1e-6),
                                   close(fundamental, 0.0, 1e-6)});
                  }});
  list.push_back({"radial_ops.power_transform", [] {
                    const AnalyticProfile decay{[](double r) { return std::exp(-r); },
                                                [](double r) { return -std::exp(-r); },
                                                [](double r) { return std::exp(-r); }};
                    const auto a = power_transform_residual(decay, 2.0, 1.0, pp(3, 2));
                    const auto b = power_transform_residual(Counterexample{0.6, 2.0 / 3.0}, 3.0, 2.0, pp(4, 2.5));
                    const auto c = power_transform_residual(decay, 1.0, 1.0, pp(3, 2));
                    return all_of({{a.relative() < 1e-10, "e^-r: " + show(a.relative())},
                                   {b.relative() < 1e-8, "counterexample: " + show(b.relative())},
                                   {c.residual == 0.0, "alpha=1: " + show(c.residual)}});
                  }});
  list.push_back({"barriers.counterexample_constants", [] {
                    const auto a = build_counterexample(pp(3, 2, 4));
                    const auto b = build_counterexample(pp(5, 3, 8, 1), AmplitudeRecipe::Printed);
                    const auto sound = build_counterexample(pp(5, 3, 8, 1));
                    return all_of({close(a.epsilon, 1.0 / 3.0, 1e-12), close(a.alpha, 2.0 / 3.0, 1e-12),
                                   close(a.c, std::cbrt(2.0 / 9.0), 1e-12), close(b.epsilon, 2.0 / 3.0, 1e-12),
                                   close(b.alpha, 2.0 / 3.0, 1e-12),
                                   close(b.c, std::pow(20.0 / 27.0, 1.0 / 6.0), 1e-12),
                                   close(sound.c, std::pow(8.0 / 27.0, 1.0 / 6.0), 1e-12)});
                  }});
  list.push_back({"barriers.counterexample_residual", [] {
                    const auto params = pp(3, 2, 4);
                    const auto consts = build_counterexample(params);
                    const auto at_one = counterexample_residual(consts, params, 1.0);
                    const auto far = counterexample_residual(build_counterexample(pp(5, 3, 8, 1)), pp(5, 3, 8, 1), 10.0);
                    return all_of({close(at_one.residual, std::pow(2.0, -8.0 / 3.0) * 4.0 / 3.0 * consts.c, 1e-10),
                                   {far.residual > 0.0, "(5,3,1,8) at r=10: " + show(far.residual)}});
                  }});
  list.push_back({"barriers.cutoff", [] {
                    const auto params = pp(3, 2);
                    const CutoffBarrier cut{1.0, 1.0, 2.0, 3};
                    const double closed = cutoff_barrier_plap(cut, params, 1.5);
                    const double fd = -p_laplacian_fd(cut, 1.5, params);
                    return all_of({close(closed, fd, 1e-6, true), close(cutoff_barrier_plap(cut, params, 1.0), 0.0, 0.0),
                                   close(cutoff_barrier_plap(cut, params, 0.5), 0.0, 0.0)});
                  }});
  list.push_back({"barriers.log_barrier", [] {
                    const auto params = pp(3, 2);
                    const auto spec = LogBarrier::make(params, 0.1, 0.0, 1.0);
                    const double e = std::numbers::e;
                    return close(log_barrier_plap(spec, params, e), p_laplacian_fd(spec, e, params), 1e-6, true);
                  }});
  list.push_back({"barriers.hadamard", [] {
                    const auto power = HadamardInput::make(pp(3, 2), 1.0, 1.0, 4.0, 0.25);
                    const double e = std::numbers::e;
                    const auto logm = HadamardInput::make(pp(3, 3), 1.0, 1.0, e * e, 0.0);
                    return all_of({close(hadamard_lower_bound(power, 2.0), 0.5, 1e-12),
                                   close(hadamard_lower_bound(power, 1.0), 1.0, 1e-15),
                                   close(hadamard_lower_bound(logm, e), 0.5, 1e-12)});
                  }});
  list.push_back({"shooting.aubin_talenti", [] {
                    IvpSpec spec;
                    spec.params = pp(3, 2, 5);
                    spec.u0 = std::pow(3.0, 0.25);
                    spec.r_max = 100.0;
                    const auto traj = integrate_ivp(spec);
                    double worst = 0.0;
                    for (std::size_t i = 0; i < traj.r.size(); ++i) {
                      const double exact = spec.u0 / std::sqrt(1.0 + traj.r[i] * traj.r[i]);
                      worst = std::max(worst, std::abs(traj.u[i] - exact) / exact);
                    }
                    const auto outcome = outcome_name(classify_outcome(traj, spec));
                    return all_of({{worst <= 1e-6, "max rel error " + show(worst)},
                                   {outcome == "positive_decaying", "outcome " + outcome}});
                  }});
  list.push_back({"shooting.outcomes", [] {
                    IvpSpec minus;
                    minus.params = pp(3, 2, 3);
                    IvpSpec plus = minus;
                    plus.sign = EquationSign::Plus;
                    const auto a = outcome_name(classify_outcome(integrate_ivp(minus), minus));
                    const auto b = outcome_name(classify_outcome(integrate_ivp(plus), plus));
                    return all_of({{a == "crosses_zero", "minus: " + a}, {b == "blows_up", "plus: " + b}});
                  }});
  list.push_back({"shooting.pohozaev", [] {
                    IvpSpec spec;
                    spec.params = pp(3, 2, 5);
                    spec.u0 = std::pow(3.0, 0.25);
                    spec.r_max = 50.0;
                    const auto traj = integrate_ivp(spec);
                    double worst = 0.0;
                    for (double r : {1.0, 5.0, 50.0}) worst = std::max(worst, pohozaev_residual(traj, spec, r).relative());
                    return std::pair<bool, std::string>{worst <= 1e-6, "max relative residual " + show(worst)};
                  }});
  list.push_back({"bvp.closed_forms", [] {
                    AnnulusProblem a;
                    a.params = pp(3, 2);
                    a.boundary_inner = 1.0;
                    a.mesh_size = 512;
                    AnnulusProblem b = a;
                    b.params = pp(3, 3);
                    AnnulusProblem c = a;
                    c.params = pp(2, 3);
                    c.r_outer = 4.0;
                    c.boundary_inner = 0.0;
                    c.boundary_outer = 1.0;
                    return all_of({close(solve_annulus_dirichlet(a).profile.eval(1.5).value, 1.0 / 3.0, 1e-6),
                                   close(solve_annulus_dirichlet(b).profile.eval(std::sqrt(2.0)).value, 0.5, 1e-6),
                                   close(solve_annulus_dirichlet(c).profile.eval(2.25).value, 0.5, 1e-6)});
                  }});
  list.push_back({"bvp.comparison", [] {
                    AnnulusProblem prob;
                    prob.params = pp(3, 2);
                    prob.boundary_inner = 1.1;
                    prob.boundary_outer = 0.1;
                    prob.rhs = [](double) { return 1.0; };
                    prob.mesh_size = 512;
                    const auto rep = comparison_check(prob, PowerBarrier::fundamental(prob.params, 2.0, -1.0));
                    return std::pair<bool, std::string>{rep.passed && rep.residual >= 0.1 - 1e-6,
                                                        "min(u - phi) " + show(rep.residual)};
                  }});
  list.push_back({"identities.moser_examples", [] {
                    const auto a = moser_normalized_logs({2.0, 2.0, 1.0, 3});
                    const auto b = moser_normalized_logs({1.0, 2.5, 5.0, 6});
                    const auto c = moser_normalized_logs({3.0, 3.0, 1.0, 2});
                    const auto bound_a = moser_recursion_bound({2.0, 2.0, 1.0, 3});
                    return all_of({close(a[3], 11.0 / 8.0 * std::log(2.0), 1e-12),
                                   close(bound_a.rhs, std::log(4.0), 1e-12), close(b[6], std::log(5.0), 1e-12),
                                   close(c[2], 5.0 / 9.0 * std::log(3.0), 1e-12),
                                   {bound_a.passed, "bound violated"}});
                  }});
  list.push_back({"identities.caccioppoli", [] {
                    const AnalyticProfile line{[](double x) { return x; }, [](double) { return 1.0; },
                                               [](double) { return 0.0; }};
                    const auto one_d = caccioppoli_check(line, pp(1, 2), RadialCutoff::tent(1.0, 3.0));
                    const auto constant =
                        caccioppoli_check(PowerBarrier::fundamental(pp(3, 2), 0.0, 1.0), pp(3, 2), {1.0, 2.0, 4.0, 8.0});
                    const auto newton =
                        caccioppoli_check(PowerBarrier::fundamental(pp(3, 2), 1.0, 0.0), pp(3, 2), {1.0, 2.0, 4.0, 8.0});
                    return all_of({{one_d.passed, "tent: lhs " + show(one_d.lhs) + " rhs " + show(one_d.rhs)},
                                   {constant.passed && constant.lhs == 0.0, "constant profile"},
                                   {newton.passed, "1/r: ratio " + show(newton.extra("ratio"))}});
                  }});
  return list;
}

}  // namespace

std::vector<VerifyResult> run_verification() {
  std::vector<VerifyResult> results;
  for (const auto& c : cases()) {
    VerifyResult r{c.name, false, ""};
    try {
      auto [ok, detail] = c.run();
      r.passed = ok;
      r.detail = std::move(detail);
    } catch (const std::exception& e) {
      r.detail = std::string("threw ") + e.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace plap::cli
