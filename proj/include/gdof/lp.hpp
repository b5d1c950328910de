#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gdof::lp {

inline constexpr std::size_t kMaxVariables = 6;

/// coeffs . x <= bound
struct Constraint {
  std::vector<double> coeffs;
  double bound = 0.0;
};

/// Maximize objective . x subject to every constraint. Nonnegativity is not
/// implied; add it as -x_i <= 0 like any other row.
struct LinearProgram {
  std::vector<std::string> variables;
  std::vector<Constraint> constraints;
  std::vector<double> objective;

  std::size_t dimension() const noexcept { return variables.size(); }

  LinearProgram& add(std::vector<double> coeffs, double bound);
  // Shorthand for single-variable rows: x_j <= bound and x_j >= bound.
  LinearProgram& upper(std::size_t j, double bound);
  LinearProgram& lower(std::size_t j, double bound);
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Solution {
  Status status = Status::kInfeasible;
  double value = 0.0;
  std::vector<double> point;
  // Constraint indices whose equalities pin the returned vertex, ascending.
  std::vector<std::size_t> active_set;
};

/// Exhaustive vertex enumeration: every dimension-sized subset of constraints
/// is solved as an equality system (partial-pivot elimination), feasible
/// points within 1e-9 are kept, and the best objective wins. Ties keep the
/// lexicographically first subset. Unboundedness is detected with a recession
/// LP over A d <= 0 inside the unit box.
///
/// Throws DomainError on dimension mismatch and CapacityError above
/// kMaxVariables.
Solution solve(const LinearProgram& lp);

/// Largest violation of any constraint at x (<= 0 means feasible).
double max_violation(const LinearProgram& lp, std::span<const double> x);

double objective_value(const LinearProgram& lp, std::span<const double> x);

struct SamplingEstimate {
  bool conclusive = false;  // false: no feasible sample was drawn
  double value = 0.0;
  std::vector<double> point;
  std::size_t accepted = 0;
};

/// Rejection sampling inside the box implied by the single-variable rows.
/// Samples are accepted only if they satisfy every row exactly, so a
/// conclusive estimate never exceeds the true optimum.
///
/// Throws DomainError when some variable has no finite box bound.
SamplingEstimate solve_by_sampling(const LinearProgram& lp, std::size_t samples,
                                   std::uint64_t seed);

/// Random feasible, bounded problem for self-checks: a box [0, U_j] on every
/// variable plus general rows built to hold at an interior point. Dimension is
/// drawn from 1..max_variables. Deterministic in seed.
LinearProgram random_bounded_program(std::uint64_t seed, std::size_t max_variables = 4);

std::string to_string(Status s);

}  // namespace gdof::lp
