#pragma once

#include <optional>

#include "gdof/lp.hpp"
#include "gdof/region.hpp"

namespace gdof {

/// Closed-form sum-GDoF on the three covered regions; nullopt on MIXED_OPEN.
std::optional<double> theorem1_sum_gdof(AlphaPair canonical);

/// Right-hand side of the weighted-sum bound d_i + d_j / 2 <= w(alpha), where
/// alpha is the exponent of the interference seen at receiver i.
/// (3 - alpha) / 2 up to alpha = 1, (1 + alpha) / 2 beyond.
double converse_weighted_rhs(double alpha);

// Pre-log coefficients of the log-det terms in the weighted-sum bound, for a
// transmit covariance with k zero singular values (k in {0, 1, 2}).
// Throws DomainError for other k.

/// log|I + rho^a2 h12~^H h12~ + rho h22~^H h22~|
double f_be6(int k, double alpha2);
/// log(1 + rho^a2 h12 K h12^H)
double f_be7(int k, double alpha2);
/// log(1 + rho h11 h11^H + rho^a2 h12~ h12~^H)
double f_be5(int k, double alpha2);

/// Per-slot coefficient of R1 + R2/2: f_be5 + f_be6 / 2 - f_be7.
double weighted_rate_coeff(int k, double alpha2);

/// How the single-user bound d_i <= 1 enters the converse program.
enum class SingleUserCap {
  kSummed,   // d1 + d2 <= 2, reproduces the closed form on every covered region
  kPerUser,  // d1 <= 1 and d2 <= 1 separately
};

/// max d1 + d2 over d >= 0 subject to both weighted-sum bounds and the
/// single-user cap. Variables are (d1, d2).
lp::LinearProgram converse_program(AlphaPair canonical,
                                   SingleUserCap cap = SingleUserCap::kSummed);

/// Optimum of converse_program, solved by vertex enumeration. Defined on every
/// region, MIXED_OPEN included.
double converse_sum_upper(AlphaPair canonical, SingleUserCap cap = SingleUserCap::kSummed);

}  // namespace gdof
