#include "gdof/achievability.hpp"

#include <algorithm>
#include <cmath>

namespace gdof {

namespace {

void check_split(AlphaPair a, PowerSplit p) {
  const bool ok = p.a1 >= 0.0 && p.a2 >= 0.0 && p.a1 <= a.alpha1 && p.a2 <= a.alpha2;
  if (!ok) throw DomainError("power split must lie in [0, alpha1] x [0, alpha2]");
}

void require_region(AlphaPair a, RegionCase expected, const char* what) {
  if (classify_region(a) != expected) {
    throw DomainError(std::string(what) + " requires region " + std::string(to_string(expected)));
  }
}

lp::LinearProgram sum_program() {
  lp::LinearProgram prog;
  prog.variables = {"d1", "d2"};
  prog.objective = {1.0, 1.0};
  return prog;
}

std::vector<double> grid_axis(double limit, double step) {
  std::vector<double> axis;
  const auto count = static_cast<std::size_t>(std::floor(limit / step + 1e-9));
  axis.reserve(count + 2);
  for (std::size_t i = 0; i <= count; ++i) axis.push_back(std::min(i * step, limit));
  if (limit - axis.back() > 1e-12) axis.push_back(limit);
  return axis;
}

}  // namespace

GdofTuple common_allocation(AlphaPair canonical, PowerSplit p) {
  return GdofTuple{canonical.alpha2 - p.a2, canonical.alpha1 - p.a1, 0.0, 0.0};
}

std::optional<lp::LinearProgram> case_constraints_strong(AlphaPair a, PowerSplit p) {
  require_region(a, RegionCase::kBothStrong, "case_constraints_strong");
  check_split(a, p);
  const double a1 = a.alpha1, a2 = a.alpha2;
  const double A1 = p.a1, A2 = p.a2;
  if (a1 - A1 > 1.0 || a2 - A2 > 1.0 || a1 + a2 > A1 + A2 + 1.0) return std::nullopt;

  auto prog = sum_program();
  prog.upper(0, a1 + 1.0 - 2.0 * A1)
      .upper(1, a2 + 1.0 - 2.0 * A2)
      .upper(0, a1 - A1 + A2)
      .upper(1, a2 - A2 + A1)
      .upper(0, 1.0)
      .upper(1, 1.0)
      .upper(0, A2)
      .upper(1, A1)
      .lower(0, 0.0)
      .lower(1, 0.0);
  return prog;
}

std::optional<lp::LinearProgram> case_constraints_mixed(AlphaPair a, PowerSplit p) {
  require_region(a, RegionCase::kMixedCovered, "case_constraints_mixed");
  check_split(a, p);
  const double a1 = a.alpha1, a2 = a.alpha2;
  const double A1 = p.a1, A2 = p.a2;
  if (a1 - A1 > 1.0 || a1 + a2 > 1.0 + A1 + A2) return std::nullopt;

  // The Rx1 private bound switches once the residual power 1 - A1 drops
  // below the interference level alpha2.
  const double rx1_mac =
      (1.0 - A1 <= a2) ? a1 - A1 + A2 : a1 - a2 + A2 + 1.0 - 2.0 * A1;

  auto prog = sum_program();
  prog.upper(0, a1 + 1.0 - 2.0 * A1)
      .upper(1, a2 + 1.0 - 2.0 * A2)
      .upper(0, rx1_mac)
      .upper(1, a2 - A2 + A1)
      .upper(0, 1.0)
      .upper(1, 1.0)
      .upper(0, A2 - a2 + 1.0)
      .upper(1, A1)
      .lower(0, 0.0)
      .lower(1, 0.0);
  return prog;
}

std::optional<GdofTuple> evaluate_split(AlphaPair a, PowerSplit p) {
  std::optional<lp::LinearProgram> prog;
  switch (classify_region(a)) {
    case RegionCase::kBothStrong:
      prog = case_constraints_strong(a, p);
      break;
    case RegionCase::kMixedCovered:
      prog = case_constraints_mixed(a, p);
      break;
    default:
      throw DomainError("evaluate_split requires BOTH_STRONG or MIXED_COVERED");
  }
  if (!prog) return std::nullopt;
  const auto sol = lp::solve(*prog);
  if (sol.status != lp::Status::kOptimal) return std::nullopt;
  GdofTuple t = common_allocation(a, p);
  t.d1 = sol.point[0];
  t.d2 = sol.point[1];
  return t;
}

std::optional<LowerBound> closed_form_lower(AlphaPair a) {
  const double a1 = a.alpha1, a2 = a.alpha2;
  switch (classify_region(a)) {
    case RegionCase::kBothWeak:
      return LowerBound{2.0 - (a1 + a2) / 3.0, std::nullopt};
    case RegionCase::kMixedCovered:
      // Capped at 2 as in the closed form; (4 + a1 - a2) / 3 alone exceeds
      // two receivers' worth of GDoF once a1 - a2 > 2.
      return LowerBound{std::min((4.0 + a1 - a2) / 3.0, 2.0), (a1 + 2.0 * a2 + 1.0) / 3.0};
    case RegionCase::kBothStrong: {
      const double v = std::min((2.0 + a1 + a2) / 3.0, 2.0);
      return LowerBound{v, v};
    }
    case RegionCase::kMixedOpen:
      return std::nullopt;
  }
  return std::nullopt;
}

MaximinResult maximin_search(AlphaPair a, double grid_step) {
  const RegionCase region = classify_region(a);
  if (region != RegionCase::kBothStrong && region != RegionCase::kMixedCovered) {
    throw DomainError("maximin_search requires BOTH_STRONG or MIXED_COVERED");
  }
  if (!(grid_step > 0.0 && grid_step <= 0.1)) {
    throw DomainError("grid step must lie in (0, 0.1]");
  }

  MaximinResult result;
  const auto axis1 = grid_axis(a.alpha1, grid_step);
  const auto axis2 = grid_axis(a.alpha2, grid_step);
  for (double A1 : axis1) {
    for (double A2 : axis2) {
      ++result.grid_points;
      const PowerSplit split{A1, A2};
      const auto tuple = evaluate_split(a, split);
      if (!tuple) continue;
      ++result.feasible_points;
      const double value = tuple->d1 + tuple->d2;
      if (!result.found || value > result.sum + kTol) {
        result.found = true;
        result.sum = value;
        result.best = split;
        result.tuple = *tuple;
      }
    }
  }
  return result;
}

Ledger three_slot_ledger(AlphaPair a) {
  require_region(a, RegionCase::kBothWeak, "three_slot_ledger");
  const double a1 = a.alpha1, a2 = a.alpha2;
  using enum LedgerSource;
  Ledger ledger;
  ledger.entries = {
      {1, 1, kImmediate, 1.0 - a1, "a3"},
      {2, 1, kImmediate, 1.0 - a2, "a4"},
      {3, 1, kImmediate, 1.0 - a1, "a5"},
      {3, 1, kDelayed, 2.0 * a1, "a1,a2 via c1"},
      {1, 2, kImmediate, 1.0 - a1, "b1"},
      {2, 2, kImmediate, 1.0 - a2, "b4"},
      {3, 2, kImmediate, 1.0 - a2, "b5"},
      {3, 2, kDelayed, 2.0 * a2, "b2,b3 via c2"},
  };
  double rx1 = 0.0, rx2 = 0.0;
  for (const auto& e : ledger.entries) (e.receiver == 1 ? rx1 : rx2) += e.gdof;
  ledger.d1 = rx1 / 3.0;
  ledger.d2 = rx2 / 3.0;
  return ledger;
}

std::string to_string(LedgerSource s) {
  return s == LedgerSource::kImmediate ? "IMMEDIATE" : "DELAYED";
}

}  // namespace gdof
