#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gdof/achievability.hpp"
#include "gdof/region.hpp"

namespace gdof::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitIo = 3,
};

using Theorem1Fn = std::function<std::optional<double>(AlphaPair)>;

/// min, min + step, ... up to max (inclusive within 1e-9), each value rounded
/// to 9 decimals so that grid coordinates print cleanly.
std::vector<double> grid_values(double min, double max, double step);

/// "%.9f", with negative zero printed as zero.
std::string format_number(double v);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t checked = 0;
  std::string counterexample;  // first failure only
};

struct VerifyOptions {
  double step = 0.05;         // tightness grid over [0, 3]^2
  double tol = 1e-9;
  double grid_step_a = 0.01;  // (A1, A2) grid inside each maximin search
  std::uint64_t seed = 42;
  double maximin_pair_step = 0.1;
  double maximin_tol = 0.04;
  double a_sum_tol = 0.02;
  std::size_t lp_programs = 200;
  std::size_t lp_samples = 2000;
  Theorem1Fn theorem1;  // empty: the library closed form
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
};

VerifyReport run_verify(const VerifyOptions& options);

struct MaximinCheck {
  AlphaPair pair;
  RegionCase region = RegionCase::kBothStrong;
  MaximinResult search;
  LowerBound closed;
};

/// maximin_search at every canonical BOTH_STRONG / MIXED_COVERED point of the
/// pair grid over [0, max_alpha]^2, spread over hardware threads. Output order
/// is the grid order (alpha1 outer, alpha2 inner) regardless of scheduling.
std::vector<MaximinCheck> maximin_campaign(double pair_step, double grid_step,
                                           double max_alpha = 3.0);

/// Entry point behind the `gdof` binary. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Same as run, with a replacement Theorem 1 for mutation tests of `verify`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Theorem1Fn& theorem1);

}  // namespace gdof::cli
