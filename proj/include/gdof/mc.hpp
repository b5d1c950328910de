#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gdof/region.hpp"

namespace gdof::mc {

using cplx = std::complex<double>;
using RowVec = std::array<cplx, 2>;

/// Counter-based generator: the n-th draw is a pure function of
/// (seed, trial, stream, n), so any trial can be regenerated on its own and
/// results do not depend on evaluation order. Each draw is the splitmix64
/// finalizer applied to a key derived from the triple plus a draw counter.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream);

  std::uint64_t next_u64() noexcept;
  /// Uniform on (0, 1].
  double uniform() noexcept;
  /// Circularly-symmetric complex Gaussian with E|z|^2 = 1 (Box-Muller).
  cplx complex_normal() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Rows h_ji (receiver j, transmitter i), entries i.i.d. CN(0, 1).
struct ChannelSample {
  RowVec h11;
  RowVec h12;
  RowVec h21;
  RowVec h22;
};

ChannelSample draw_channel(CounterRng& rng);
ChannelSample sample_channel(std::uint64_t seed, std::uint64_t trial);

enum class LogDetTerm { kBe6, kBe7, kBe5 };

struct CovarianceSpec {
  int rank_deficiency = 0;  // number of zero singular values of K, 0..2
  LogDetTerm term = LogDetTerm::kBe6;
  double alpha2 = 0.0;
};

/// Square-root factor F of a unit-trace transmit covariance K = F F^H.
/// Column j is u_j sqrt(sigma_j); columns at or beyond `rank` are zero.
struct CovarianceFactor {
  std::array<RowVec, 2> columns{};
  int rank = 2;
};

/// Random unitary (Gram-Schmidt on a Gaussian matrix) times a random positive
/// diagonal with the trailing k entries zeroed, normalized to unit trace.
CovarianceFactor random_covariance(int rank_deficiency, CounterRng& rng);

/// Natural-log value of the selected log-det expression at SNR rho.
double log_measure(const CovarianceSpec& spec, const ChannelSample& h,
                   const CovarianceFactor& k, double rho);

/// Asymptotic pre-log coefficient the closed-form expansions predict.
double expected_coefficient(const CovarianceSpec& spec);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;  // 1 when y is constant (zero residual)
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Sum in a fixed binary-tree order so that totals do not depend on how the
/// inputs were produced.
double pairwise_sum(std::span<const double> values);

struct SlopeEstimate {
  double slope = 0.0;
  double r_squared = 0.0;
  std::vector<double> rho_points;
  std::size_t trials = 0;
  std::vector<double> mean_log;  // one per rho point
};

/// Averages the selected log-det over trials at each rho (channel and
/// covariance held fixed across rho within a trial) and regresses the means
/// on log rho. Requires >= 3 strictly increasing positive rho values and
/// >= 100 trials.
SlopeEstimate logdet_slope(const CovarianceSpec& spec, std::span<const double> rhos,
                           std::size_t trials, std::uint64_t seed);

struct AuditRow {
  int slot = 0;
  int receiver = 0;
  std::string term;
  double measured = 0.0;
  double expected = 0.0;
  // Exponent printed under the term in the scheme description, if any.
  std::optional<double> paper_exponent;
  // Printed as O(rho^0): claimed to sit at the noise floor.
  bool noise_level = false;
  // Printed exponent disagrees with unit-power symbols under the link gain;
  // `expected` follows the audit power convention instead.
  bool ambiguous = false;
};

/// Mean received power of every additive term of the three-slot scheme,
/// regressed on log rho. BOTH_WEAK only.
std::vector<AuditRow> scheme_power_audit(AlphaPair canonical, std::span<const double> rhos,
                                         std::size_t trials, std::uint64_t seed);

/// 1e2, 1e3, ..., 1e6.
std::vector<double> default_rhos();

std::string to_string(LogDetTerm t);
LogDetTerm parse_term(const std::string& name);

}  // namespace gdof::mc
