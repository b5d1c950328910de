#pragma once

#include <optional>

#include "gdof/region.hpp"

namespace gdof {

struct GdofBounds {
  std::optional<double> lower;
  double upper = 0.0;
  RegionCase region = RegionCase::kBothWeak;
  bool tight = false;
};

/// Everything known about one (alpha1, alpha2) point. Raw input is accepted in
/// either order; all quantities refer to the canonical labeling.
struct PointReport {
  AlphaPair input;
  AlphaPair canonical;
  bool swapped = false;
  std::optional<double> theorem1;
  std::optional<double> a_sum_star;
  GdofBounds bounds;
};

PointReport evaluate_point(AlphaPair raw);

}  // namespace gdof
