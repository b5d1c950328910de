#include "gdof/bounds.hpp"

#include <cmath>

#include "gdof/achievability.hpp"
#include "gdof/core.hpp"

namespace gdof {

PointReport evaluate_point(AlphaPair raw) {
  const Canonical c = canonicalize(raw);
  PointReport r;
  r.input = raw;
  r.canonical = c.pair;
  r.swapped = c.swapped;
  r.theorem1 = theorem1_sum_gdof(c.pair);

  r.bounds.region = classify_region(c.pair);
  r.bounds.upper = converse_sum_upper(c.pair);
  if (const auto lower = closed_form_lower(c.pair)) {
    r.bounds.lower = lower->sum;
    r.a_sum_star = lower->a_sum_star;
  }
  r.bounds.tight = r.bounds.lower && std::abs(r.bounds.upper - *r.bounds.lower) <= kTol;
  return r;
}

}  // namespace gdof
