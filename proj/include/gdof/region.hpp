#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gdof {

// Closed-form comparisons (tightness, continuity, LP feasibility) share this.
inline constexpr double kTol = 1e-9;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Interference exponents. alpha1 scales Tx1 -> Rx2, alpha2 scales Tx2 -> Rx1
/// (INR = rho^alpha while SNR = rho).
struct AlphaPair {
  double alpha1 = 0.0;
  double alpha2 = 0.0;

  friend bool operator==(const AlphaPair&, const AlphaPair&) = default;
};

struct Canonical {
  AlphaPair pair;
  bool swapped = false;
};

enum class RegionCase { kBothWeak, kMixedCovered, kBothStrong, kMixedOpen };

/// Orders the pair so that alpha2 <= alpha1 by relabeling users.
/// Throws DomainError on negative or non-finite exponents.
Canonical canonicalize(AlphaPair a);

bool is_canonical(AlphaPair a) noexcept;

/// Requires a canonical pair; ties resolve exactly as the case predicates
/// are written (alpha <= 1 is weak, alpha1 + 2 alpha2 >= 2 is covered).
RegionCase classify_region(AlphaPair a);

std::string_view to_string(RegionCase r) noexcept;

}  // namespace gdof
