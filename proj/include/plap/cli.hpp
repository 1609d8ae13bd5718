#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "plap/exponents.hpp"
#include "plap/shooting.hpp"

namespace plap::cli {

enum class SweepAxis { Q, U0, Gamma };

struct SweepSpec {
  ProblemParams base;
  SweepAxis axis = SweepAxis::Q;
  double from = 2.0;
  double to = 6.0;
  int steps = 9;
  EquationSign sign = EquationSign::Minus;
  double r_max = 1e3;
  double u0 = 1.0;
  double rtol = 1e-10;
  double atol = 1e-12;

  void validate() const;
  double value(int i) const;
  IvpSpec point(int i) const;
};

struct SweepRow {
  double axis_value = 0.0;
  std::string outcome;
  double r_event = 0.0;     // NaN unless crossing or blow-up
  double tail_slope = 0.0;  // NaN unless positive decaying
  bool boundary_case = false;
};

/// Rows in axis order regardless of thread count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads);

/// PLAP_THREADS if set to a positive integer, else the hardware concurrency.
unsigned thread_count_from_env();

struct VerifyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Worked examples across all modules; fast enough to run on every build.
std::vector<VerifyResult> run_verification();

/// key=value lines ('#' comments, blank lines ignored) turned into
/// "--key value" pairs.
std::vector<std::string> read_config_args(const std::string& path);

/// Full command line without the program name. Exit codes: 0 success,
/// 1 usage, 2 numerical failure, 3 verification failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plap::cli
