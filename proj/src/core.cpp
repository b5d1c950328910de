#include "gdof/core.hpp"

#include <algorithm>

namespace gdof {

namespace {

void check_rank_deficiency(int k) {
  if (k < 0 || k > 2) throw DomainError("rank deficiency k must be 0, 1 or 2");
}

double positive_part(double x) { return std::max(x, 0.0); }

}  // namespace

std::optional<double> theorem1_sum_gdof(AlphaPair canonical) {
  const double a1 = canonical.alpha1;
  const double a2 = canonical.alpha2;
  switch (classify_region(canonical)) {
    case RegionCase::kBothWeak:
      return 2.0 - (a1 + a2) / 3.0;
    case RegionCase::kMixedCovered:
      return std::min((4.0 + a1 - a2) / 3.0, 2.0);
    case RegionCase::kBothStrong:
      return std::min((2.0 + a1 + a2) / 3.0, 2.0);
    case RegionCase::kMixedOpen:
      return std::nullopt;
  }
  return std::nullopt;
}

double converse_weighted_rhs(double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("interference exponent must be nonnegative");
  return alpha <= 1.0 ? (3.0 - alpha) / 2.0 : (1.0 + alpha) / 2.0;
}

double f_be6(int k, double alpha2) {
  check_rank_deficiency(k);
  const double lead = std::min(2.0 - k, 1.0);
  const double second = std::min(positive_part(1.0 - k), 1.0);
  return alpha2 <= 1.0 ? lead + second * alpha2 : lead * alpha2 + second;
}

double f_be7(int k, double alpha2) {
  check_rank_deficiency(k);
  return std::min(2.0 - k, 1.0) * alpha2;
}

double f_be5(int k, double alpha2) {
  check_rank_deficiency(k);
  if (alpha2 <= 1.0) return 1.0;
  return std::min(2.0 - k, 1.0) * alpha2 + std::min(positive_part(1.0 - (2.0 - k)), 2.0);
}

double weighted_rate_coeff(int k, double alpha2) {
  return f_be5(k, alpha2) + f_be6(k, alpha2) / 2.0 - f_be7(k, alpha2);
}

lp::LinearProgram converse_program(AlphaPair canonical, SingleUserCap cap) {
  if (!is_canonical(canonical)) throw DomainError("converse_program expects a canonical pair");
  lp::LinearProgram prog;
  prog.variables = {"d1", "d2"};
  prog.objective = {1.0, 1.0};
  // Rx1 sees interference at alpha2, Rx2 at alpha1.
  prog.add({1.0, 0.5}, converse_weighted_rhs(canonical.alpha2));
  prog.add({0.5, 1.0}, converse_weighted_rhs(canonical.alpha1));
  if (cap == SingleUserCap::kSummed) {
    prog.add({1.0, 1.0}, 2.0);
  } else {
    prog.upper(0, 1.0).upper(1, 1.0);
  }
  prog.lower(0, 0.0).lower(1, 0.0);
  return prog;
}

double converse_sum_upper(AlphaPair canonical, SingleUserCap cap) {
  const auto sol = lp::solve(converse_program(canonical, cap));
  // The program always contains the origin and is bounded by the cap rows.
  return sol.value;
}

}  // namespace gdof
