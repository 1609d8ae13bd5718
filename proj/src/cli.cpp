#include "plap/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "plap/barriers.hpp"
#include "plap/bvp.hpp"
#include "plap/csv.hpp"
#include "plap/errors.hpp"

namespace plap::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string field(double x) { return format_double(x); }

bool near_equation_boundary(const ProblemParams& params) {
  if (params.dim() <= params.p) return false;
  return std::abs(params.q - equation_critical(params)) < kBoundaryTolerance;
}

}  // namespace

void SweepSpec::validate() const {
  if (!(from < to) || steps < 2) {
    throw Error(ErrorKind::InvalidParams, "sweep needs from < to and steps >= 2");
  }
}

double SweepSpec::value(int i) const {
  if (i == steps - 1) return to;
  return from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

IvpSpec SweepSpec::point(int i) const {
  IvpSpec spec;
  spec.params = base;
  spec.u0 = u0;
  spec.sign = sign;
  spec.r_max = r_max;
  spec.rtol = rtol;
  spec.atol = atol;
  const double v = value(i);
  switch (axis) {
    case SweepAxis::Q: spec.params.q = v; break;
    case SweepAxis::U0: spec.u0 = v; break;
    case SweepAxis::Gamma: spec.params.gamma = v; break;
  }
  return spec;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  const int n = spec.steps;
  std::vector<SweepRow> rows(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<int> next{0};

  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        const IvpSpec ivp = spec.point(i);
        const Trajectory traj = integrate_ivp(ivp);
        const Outcome outcome = classify_outcome(traj, ivp);
        SweepRow row;
        row.axis_value = spec.value(i);
        row.outcome = outcome_name(outcome);
        row.r_event = kNaN;
        row.tail_slope = kNaN;
        if (const auto* c = std::get_if<CrossesZero>(&outcome)) row.r_event = c->r_cross;
        if (const auto* b = std::get_if<BlowsUp>(&outcome)) row.r_event = b->r_blow;
        if (const auto* d = std::get_if<PositiveDecaying>(&outcome)) row.tail_slope = d->tail_slope;
        row.boundary_case = near_equation_boundary(ivp.params);
        rows[i] = std::move(row);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return rows;
}

unsigned thread_count_from_env() {
  if (const char* env = std::getenv("PLAP_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::string> read_config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidParams, "cannot read config file " + path);
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidParams, path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    if (key.empty()) throw Error(ErrorKind::InvalidParams, path + ":" + std::to_string(lineno) + ": empty key");
    args.push_back("--" + key);
    args.push_back(value);
  }
  return args;
}

namespace {

struct IvpFlags {
  IvpSpec spec;
  std::string sign = "minus";

  IvpSpec resolved() const {
    IvpSpec s = spec;
    s.sign = sign == "plus" ? EquationSign::Plus : EquationSign::Minus;
    return s;
  }
};

void add_params(CLI::App* app, ProblemParams& params) {
  app->add_option("--n", params.n_dim, "dimension N")->capture_default_str();
  app->add_option("--p", params.p, "operator exponent p")->capture_default_str();
  app->add_option("--q", params.q, "nonlinearity exponent q")->capture_default_str();
  app->add_option("--gamma", params.gamma, "weight exponent")->capture_default_str();
  app->add_option("--a", params.amplitude, "weight amplitude")->capture_default_str();
}

void add_ivp(CLI::App* app, IvpFlags& flags) {
  app->add_option("--u0", flags.spec.u0, "central value u(0)")->capture_default_str();
  app->add_option("--sign", flags.sign, "minus: -Δ_p u = f, plus: Δ_p u = f")
      ->check(CLI::IsMember({"minus", "plus"}))
      ->capture_default_str();
  app->add_option("--r-max", flags.spec.r_max, "outer radius")->capture_default_str();
  app->add_option("--rtol", flags.spec.rtol)->capture_default_str();
  app->add_option("--atol", flags.spec.atol)->capture_default_str();
  app->add_option("--delta0", flags.spec.delta0, "series hand-off radius (0: automatic)")->capture_default_str();
}

// Writes to --out when given, otherwise to the command's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorKind::InvalidParams, "cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

json report_json(const IdentityReport& report) {
  json j;
  j["lhs"] = number(report.lhs);
  j["rhs"] = number(report.rhs);
  j["residual"] = number(report.residual);
  j["scale"] = number(report.scale);
  j["relative"] = number(report.relative());
  j["passed"] = report.passed;
  for (const auto& [key, value] : report.extras) j[key] = number(value);
  return j;
}

int run_classify(const ProblemParams& params, std::ostream& out) {
  const Regime regime = classify_regime(params);
  json j;
  j["n"] = params.n_dim;
  j["p"] = params.p;
  j["q"] = params.q;
  j["gamma"] = params.gamma;
  j["amplitude"] = params.amplitude;
  j["lambda"] = regime.lambda;
  j["q_serrin"] = regime.q_serrin ? json(*regime.q_serrin) : json(nullptr);
  j["q_equation"] = regime.q_equation ? json(*regime.q_equation) : json(nullptr);
  j["low_dimension"] = regime.low_dimension;
  j["inequality_nonexistence"] = regime.inequality_nonexistence;
  j["counterexample_exists"] = regime.counterexample_exists;
  j["equation_radial_nonexistence"] = regime.equation_radial_nonexistence;
  j["boundary_case"] = regime.equation_boundary_case;
  if (regime.equation_boundary_case) j["note"] = "boundary: proof uses strict inequality";
  out << j.dump(2) << '\n';
  return 0;
}

int run_shoot(const IvpSpec& spec, std::ostream& out, std::ostream& err) {
  const Trajectory traj = integrate_ivp(spec);
  const Outcome outcome = classify_outcome(traj, spec);
  write_csv_row(out, {"r", "u", "du", "w"});
  for (std::size_t i = 0; i < traj.r.size(); ++i) {
    write_csv_row(out, {field(traj.r[i]), field(traj.u[i]), field(traj.du(i)), field(traj.w[i])});
  }
  err << "outcome=" << outcome_name(outcome);
  if (traj.stop == StopReason::ZeroCrossing || traj.stop == StopReason::BlowUpThreshold) {
    err << " r_event=" << field(traj.r_event);
  }
  err << '\n';
  const bool collapsed = traj.stop == StopReason::StepCollapse || traj.stop == StopReason::NonFinite;
  return collapsed && std::holds_alternative<Indeterminate>(outcome) ? 2 : 0;
}

int run_sweep_command(const SweepSpec& spec, std::ostream& out) {
  const auto rows = run_sweep(spec, thread_count_from_env());
  write_csv_row(out, {"axis_value", "outcome", "r_event", "tail_slope", "boundary_case"});
  for (const auto& row : rows) {
    write_csv_row(out, {field(row.axis_value), row.outcome, field(row.r_event), field(row.tail_slope),
                        row.boundary_case ? "true" : "false"});
  }
  return 0;
}

int run_counterexample(const ProblemParams& params, AmplitudeRecipe recipe, double r_lo, double r_hi, int points,
                       std::ostream& out) {
  if (!(r_lo > 0.0) || !(r_lo < r_hi) || points < 2) {
    throw Error(ErrorKind::InvalidParams, "counterexample grid needs 0 < r-lo < r-hi and points >= 2");
  }
  const auto consts = build_counterexample(params, recipe);
  double min_residual = std::numeric_limits<double>::infinity();
  double argmin = r_lo;
  const double step = std::log(r_hi / r_lo) / (points - 1);
  for (int i = 0; i < points; ++i) {
    const double r = i == points - 1 ? r_hi : r_lo * std::exp(step * i);
    const auto rep = counterexample_residual(consts, params, r);
    if (rep.residual < min_residual) {
      min_residual = rep.residual;
      argmin = r;
    }
  }
  json j;
  j["epsilon"] = consts.epsilon;
  j["alpha"] = consts.alpha;
  j["c"] = consts.c;
  j["points"] = points;
  j["min_residual"] = number(min_residual);
  j["argmin_r"] = argmin;
  j["passed"] = min_residual >= 0.0;
  out << j.dump(2) << '\n';
  return 0;
}

int run_hadamard(const ProblemParams& params, double r1, double m1, double r2, double m2, int points,
                 std::ostream& out) {
  if (points < 2) throw Error(ErrorKind::InvalidParams, "hadamard needs points >= 2");
  const auto input = HadamardInput::make(params, r1, m1, r2, m2);
  write_csv_row(out, {"r", "bound"});
  for (int i = 0; i < points; ++i) {
    const double r = i == points - 1 ? r2 : r1 + (r2 - r1) * i / (points - 1);
    write_csv_row(out, {field(r), field(hadamard_lower_bound(input, r))});
  }
  return 0;
}

int run_pohozaev(const IvpSpec& spec, const std::vector<double>& radii, std::ostream& out) {
  if (radii.empty()) throw Error(ErrorKind::InvalidParams, "pohozaev needs at least one --r-eval");
  IvpSpec s = spec;
  s.r_max = std::max(s.r_max, *std::max_element(radii.begin(), radii.end()));
  const Trajectory traj = integrate_ivp(s);
  json rows = json::array();
  for (double r : radii) {
    json j = report_json(pohozaev_residual(traj, s, r));
    j["r_eval"] = r;
    rows.push_back(std::move(j));
  }
  out << rows.dump(2) << '\n';
  return 0;
}

int run_bvp(const AnnulusProblem& prob, std::ostream& out, std::ostream& err) {
  const auto sol = solve_annulus_dirichlet(prob);
  write_csv_row(out, {"r", "u"});
  const auto r = sol.profile.r();
  const auto u = sol.profile.u();
  for (std::size_t i = 0; i < r.size(); ++i) write_csv_row(out, {field(r[i]), field(u[i])});
  err << "newton_residual=" << field(sol.residual) << " flux_eps=" << field(sol.flux_eps)
      << " iterations=" << sol.newton_iterations << '\n';
  return 0;
}

int run_verify(std::ostream& out) {
  const auto results = run_verification();
  int failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) out << "  " << r.detail;
    out << '\n';
    failed += r.passed ? 0 : 1;
  }
  out << (failed ? "verification failed: " : "verification passed: ") << results.size() - failed << "/"
      << results.size() << '\n';
  return failed ? 3 : 0;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NewtonDivergence:
    case ErrorKind::StepCollapse:
    case ErrorKind::SingularGradient:
    case ErrorKind::InterpolationError:
      return 2;
    default:
      return 1;
  }
}

// Moves "--config PATH" out of args and splices the file's pairs in right
// after the subcommand name, so explicit flags (parsed later) win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> from_file;
  for (std::size_t i = 0; i < args.size();) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
    } else {
      ++i;
      continue;
    }
    auto extra = read_config_args(path);
    from_file.insert(from_file.end(), extra.begin(), extra.end());
  }
  if (from_file.empty()) return args;
  const std::size_t at = args.empty() ? 0 : 1;
  args.insert(args.begin() + at, from_file.begin(), from_file.end());
  return args;
}

}  // namespace

int dispatch(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radial p-Laplacian laboratory", "plap"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  std::string out_path;
  std::string config_path;  // consumed by expand_config; declared for --help
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value file; explicit flags override it");
  };
  auto with_out = [&](CLI::App* sub) { sub->add_option("--out", out_path, "output file (default: stdout)"); };

  ProblemParams params;
  IvpFlags ivp;
  SweepSpec sweep;
  std::string axis = "q";
  double ce_lo = 1e-3, ce_hi = 1e6;
  int ce_points = 2000;
  std::string ce_recipe = "sound";
  double h_r1 = 1.0, h_m1 = 1.0, h_r2 = 2.0, h_m2 = 0.5;
  int h_points = 11;
  std::vector<double> r_eval{1.0};
  AnnulusProblem annulus;
  double rhs_const = 0.0;

  auto* classify = app.add_subcommand("classify", "critical exponents and regime flags (JSON)");
  add_params(classify, params);
  common(classify);
  with_out(classify);

  auto* shoot = app.add_subcommand("shoot", "integrate from the origin (CSV r,u,du,w)");
  add_params(shoot, params);
  add_ivp(shoot, ivp);
  common(shoot);
  with_out(shoot);

  auto* sweep_cmd = app.add_subcommand("sweep", "classify trajectories along one axis (CSV)");
  add_params(sweep_cmd, params);
  add_ivp(sweep_cmd, ivp);
  sweep_cmd->add_option("--axis", axis)->check(CLI::IsMember({"q", "u0", "gamma"}))->capture_default_str();
  sweep_cmd->add_option("--from", sweep.from)->capture_default_str();
  sweep_cmd->add_option("--to", sweep.to)->capture_default_str();
  sweep_cmd->add_option("--steps", sweep.steps)->capture_default_str();
  common(sweep_cmd);
  with_out(sweep_cmd);

  auto* counter = app.add_subcommand("counterexample", "supercritical supersolution and its residual (JSON)");
  add_params(counter, params);
  counter->add_option("--r-lo", ce_lo)->capture_default_str();
  counter->add_option("--r-hi", ce_hi)->capture_default_str();
  counter->add_option("--points", ce_points)->capture_default_str();
  counter->add_option("--recipe", ce_recipe, "amplitude bracket: sound (ε) or printed (ε + γ)")
      ->check(CLI::IsMember({"sound", "printed"}))
      ->capture_default_str();
  common(counter);
  with_out(counter);

  auto* hadamard = app.add_subcommand("hadamard", "p-harmonic lower bound between two spheres (CSV r,bound)");
  add_params(hadamard, params);
  hadamard->add_option("--r1", h_r1)->capture_default_str();
  hadamard->add_option("--m1", h_m1)->capture_default_str();
  hadamard->add_option("--r2", h_r2)->capture_default_str();
  hadamard->add_option("--m2", h_m2)->capture_default_str();
  hadamard->add_option("--points", h_points)->capture_default_str();
  common(hadamard);
  with_out(hadamard);

  auto* pohozaev = app.add_subcommand("pohozaev", "radial Pohozaev balance along a trajectory (JSON)");
  add_params(pohozaev, params);
  add_ivp(pohozaev, ivp);
  pohozaev->add_option("--r-eval", r_eval, "evaluation radii")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  common(pohozaev);
  with_out(pohozaev);

  auto* bvp = app.add_subcommand("bvp", "Dirichlet problem -Δ_p u = f on an annulus (CSV r,u)");
  add_params(bvp, params);
  bvp->add_option("--r-inner", annulus.r_inner)->capture_default_str();
  bvp->add_option("--r-outer", annulus.r_outer)->capture_default_str();
  bvp->add_option("--u-inner", annulus.boundary_inner)->capture_default_str();
  bvp->add_option("--u-outer", annulus.boundary_outer)->capture_default_str();
  bvp->add_option("--mesh", annulus.mesh_size)->capture_default_str();
  bvp->add_option("--rhs", rhs_const, "constant source f >= 0")->capture_default_str();
  common(bvp);
  with_out(bvp);

  auto* verify = app.add_subcommand("verify", "run the worked-example suite");

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 1;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return 1;
  }

  try {
    if (*verify) return run_verify(out);
    Sink sink(out_path, out);
    if (*classify) return run_classify(params, *sink);
    if (*shoot) {
      IvpSpec spec = ivp.resolved();
      spec.params = params;
      return run_shoot(spec, *sink, err);
    }
    if (*sweep_cmd) {
      const IvpSpec base = ivp.resolved();
      sweep.base = params;
      sweep.axis = axis == "u0" ? SweepAxis::U0 : axis == "gamma" ? SweepAxis::Gamma : SweepAxis::Q;
      sweep.sign = base.sign;
      sweep.r_max = base.r_max;
      sweep.u0 = base.u0;
      sweep.rtol = base.rtol;
      sweep.atol = base.atol;
      return run_sweep_command(sweep, *sink);
    }
    if (*counter) return run_counterexample(params,
                                            ce_recipe == "printed" ? AmplitudeRecipe::Printed : AmplitudeRecipe::Sound,
                                            ce_lo, ce_hi, ce_points, *sink);
    if (*hadamard) return run_hadamard(params, h_r1, h_m1, h_r2, h_m2, h_points, *sink);
    if (*pohozaev) {
      IvpSpec spec = ivp.resolved();
      spec.params = params;
      return run_pohozaev(spec, r_eval, *sink);
    }
    if (*bvp) {
      annulus.params = params;
      if (rhs_const < 0.0) throw Error(ErrorKind::InvalidParams, "--rhs must be nonnegative");
      if (rhs_const != 0.0) annulus.rhs = [rhs_const](double) { return rhs_const; };
      return run_bvp(annulus, *sink, err);
    }
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace plap::cli
