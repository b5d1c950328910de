#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gdof/lp.hpp"
#include "gdof/region.hpp"

namespace gdof {

/// Power-reduction exponents of the private vectors, u_i ~ CN(0, rho^-A_i I).
/// Valid splits lie in [0, alpha1] x [0, alpha2].
struct PowerSplit {
  double a1 = 0.0;
  double a2 = 0.0;

  double sum() const noexcept { return a1 + a2; }
};

/// GDoF carried by the two common streams and the two private streams.
struct GdofTuple {
  double d_eta1 = 0.0;
  double d_eta2 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Common-stream GDoF implied by the quantized interference: d_eta1 is the
/// size of the Tx2 -> Rx1 interference (alpha2 - A2), d_eta2 likewise.
GdofTuple common_allocation(AlphaPair canonical, PowerSplit p);

// Achievable (d1, d2) polytope for one split. nullopt is the INFEASIBLE
// outcome of the split-level predicate; it is not an error. Both throw
// DomainError for the wrong region or a split outside the box.
std::optional<lp::LinearProgram> case_constraints_strong(AlphaPair canonical, PowerSplit p);
std::optional<lp::LinearProgram> case_constraints_mixed(AlphaPair canonical, PowerSplit p);

/// Dispatches on region and solves; nullopt when the predicate or the LP is
/// infeasible.
std::optional<GdofTuple> evaluate_split(AlphaPair canonical, PowerSplit p);

struct LowerBound {
  double sum = 0.0;
  // Optimal A1 + A2; absent on BOTH_WEAK, where the 3-slot scheme is used.
  std::optional<double> a_sum_star;
};

/// nullopt on MIXED_OPEN.
std::optional<LowerBound> closed_form_lower(AlphaPair canonical);

struct MaximinResult {
  bool found = false;
  double sum = 0.0;
  PowerSplit best;
  GdofTuple tuple;
  std::size_t grid_points = 0;
  std::size_t feasible_points = 0;
};

/// Exhaustive search over the (A1, A2) grid {0, step, 2 step, ...} plus the
/// box corner, each feasible split solved as an LP. Row order is A1 outer,
/// A2 inner, ascending; a later split must beat the incumbent by more than
/// 1e-9 to replace it.
///
/// Requires BOTH_STRONG or MIXED_COVERED and 0 < step <= 0.1.
MaximinResult maximin_search(AlphaPair canonical, double grid_step);

enum class LedgerSource { kImmediate, kDelayed };

struct LedgerEntry {
  int slot = 0;
  int receiver = 0;
  LedgerSource source = LedgerSource::kImmediate;
  double gdof = 0.0;
  std::string symbols;
};

struct Ledger {
  std::vector<LedgerEntry> entries;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// GDoF bookkeeping of the three-slot retrospective scheme (BOTH_WEAK only):
/// six immediately decoded symbols plus the two slot-3 common symbols that
/// resolve the slot-1/slot-2 overheard interference.
Ledger three_slot_ledger(AlphaPair canonical);

std::string to_string(LedgerSource s);

}  // namespace gdof
