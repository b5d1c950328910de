#include "gdof/region.hpp"

#include <cmath>
#include <utility>

namespace gdof {

Canonical canonicalize(AlphaPair a) {
  if (!std::isfinite(a.alpha1) || !std::isfinite(a.alpha2)) {
    throw DomainError("interference exponents must be finite");
  }
  if (a.alpha1 < 0.0 || a.alpha2 < 0.0) {
    throw DomainError("interference exponents must be nonnegative");
  }
  if (a.alpha2 > a.alpha1) {
    std::swap(a.alpha1, a.alpha2);
    return {a, true};
  }
  return {a, false};
}

bool is_canonical(AlphaPair a) noexcept {
  return std::isfinite(a.alpha1) && std::isfinite(a.alpha2) && a.alpha2 >= 0.0 &&
         a.alpha2 <= a.alpha1;
}

RegionCase classify_region(AlphaPair a) {
  if (!is_canonical(a)) {
    throw DomainError("classify_region expects a canonical pair (0 <= alpha2 <= alpha1)");
  }
  if (a.alpha1 <= 1.0) {
    // alpha2 <= alpha1 <= 1
    return RegionCase::kBothWeak;
  }
  if (a.alpha2 > 1.0) {
    return RegionCase::kBothStrong;
  }
  return (a.alpha1 + 2.0 * a.alpha2 >= 2.0) ? RegionCase::kMixedCovered
                                             : RegionCase::kMixedOpen;
}

std::string_view to_string(RegionCase r) noexcept {
  switch (r) {
    case RegionCase::kBothWeak:
      return "BOTH_WEAK";
    case RegionCase::kMixedCovered:
      return "MIXED_COVERED";
    case RegionCase::kBothStrong:
      return "BOTH_STRONG";
    case RegionCase::kMixedOpen:
      return "MIXED_OPEN";
  }
  return "UNKNOWN";
}

}  // namespace gdof
