#include "gdof/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gdof/core.hpp"

namespace gdof::mc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Stream ids keep the channel, covariance and symbol draws of one trial
// independent of each other.
constexpr std::uint64_t kChannelStream = 0;
constexpr std::uint64_t kCovarianceStream = 1;
constexpr std::uint64_t kAuditChannelStream = 16;  // + slot
constexpr std::uint64_t kAuditSymbolStream = 32;

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double norm2(const RowVec& v) { return std::norm(v[0]) + std::norm(v[1]); }

cplx dot(const RowVec& row, const RowVec& col) { return row[0] * col[0] + row[1] * col[1]; }

// h F restricted to the nonzero columns of F.
RowVec project(const RowVec& h, const CovarianceFactor& k) {
  return {dot(h, k.columns[0]), dot(h, k.columns[1])};
}

void validate_sweep(std::span<const double> rhos, std::size_t trials) {
  if (rhos.size() < 3) throw DomainError("need at least 3 rho points");
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (!(rhos[i] > 0.0) || !std::isfinite(rhos[i])) {
      throw DomainError("rho points must be positive and finite");
    }
    if (i > 0 && !(rhos[i] > rhos[i - 1])) {
      throw DomainError("rho points must be strictly increasing");
    }
  }
  if (trials < 100) throw DomainError("need at least 100 trials");
}

std::vector<double> log_axis(std::span<const double> rhos) {
  std::vector<double> x(rhos.size());
  std::transform(rhos.begin(), rhos.end(), x.begin(), [](double r) { return std::log(r); });
  return x;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream)
    : key_(splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ (stream * kGolden))) {}

std::uint64_t CounterRng::next_u64() noexcept {
  return splitmix64(key_ ^ splitmix64(counter_++));
}

double CounterRng::uniform() noexcept {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

cplx CounterRng::complex_normal() noexcept {
  const double u1 = uniform();
  const double u2 = uniform();
  // Each component has variance 1/2.
  const double radius = std::sqrt(-std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

ChannelSample draw_channel(CounterRng& rng) {
  ChannelSample h;
  for (RowVec* row : {&h.h11, &h.h12, &h.h21, &h.h22}) {
    (*row)[0] = rng.complex_normal();
    (*row)[1] = rng.complex_normal();
  }
  return h;
}

ChannelSample sample_channel(std::uint64_t seed, std::uint64_t trial) {
  CounterRng rng(seed, trial, kChannelStream);
  return draw_channel(rng);
}

CovarianceFactor random_covariance(int rank_deficiency, CounterRng& rng) {
  if (rank_deficiency < 0 || rank_deficiency > 2) {
    throw DomainError("rank deficiency k must be 0, 1 or 2");
  }
  // Gram-Schmidt on two Gaussian columns.
  RowVec g0{rng.complex_normal(), rng.complex_normal()};
  RowVec g1{rng.complex_normal(), rng.complex_normal()};
  const double n0 = std::sqrt(norm2(g0));
  RowVec q0{g0[0] / n0, g0[1] / n0};
  const cplx proj = std::conj(q0[0]) * g1[0] + std::conj(q0[1]) * g1[1];
  RowVec v{g1[0] - proj * q0[0], g1[1] - proj * q0[1]};
  const double n1 = std::sqrt(norm2(v));
  RowVec q1{v[0] / n1, v[1] / n1};

  std::array<double, 2> sigma{rng.uniform(), rng.uniform()};
  const int rank = 2 - rank_deficiency;
  for (int j = rank; j < 2; ++j) sigma[j] = 0.0;
  const double trace = sigma[0] + sigma[1];
  if (trace > 0.0) {
    sigma[0] /= trace;
    sigma[1] /= trace;
  }

  CovarianceFactor k;
  k.rank = rank;
  for (int j = 0; j < 2; ++j) {
    const RowVec& q = (j == 0) ? q0 : q1;
    const double s = std::sqrt(sigma[j]);
    // Stored as column j of F: entry i is F(i, j).
    k.columns[j] = {q[0] * s, q[1] * s};
  }
  // columns[j] holds column j; dot(h, columns[j]) = (h F)_j.
  return k;
}

double log_measure(const CovarianceSpec& spec, const ChannelSample& h,
                   const CovarianceFactor& k, double rho) {
  const double interf = std::pow(rho, spec.alpha2);
  const RowVec h12t = project(h.h12, k);
  switch (spec.term) {
    case LogDetTerm::kBe6: {
      // |I + G^H G| with rows g1 = sqrt(rho^a2) h12~, g2 = sqrt(rho) h22~,
      // expanded as 1 + |g1|^2 + |g2|^2 + |det G|^2 (the last term only
      // exists when K has full rank).
      const RowVec h22t = project(h.h22, k);
      double value = 1.0 + interf * norm2(h12t) + rho * norm2(h22t);
      if (k.rank == 2) {
        value += interf * rho * std::norm(h12t[0] * h22t[1] - h12t[1] * h22t[0]);
      }
      return std::log(value);
    }
    case LogDetTerm::kBe7:
      return std::log1p(interf * norm2(h12t));
    case LogDetTerm::kBe5:
      return std::log1p(rho * norm2(h.h11) + interf * norm2(h12t));
  }
  return 0.0;
}

double expected_coefficient(const CovarianceSpec& spec) {
  switch (spec.term) {
    case LogDetTerm::kBe6:
      return f_be6(spec.rank_deficiency, spec.alpha2);
    case LogDetTerm::kBe7:
      return f_be7(spec.rank_deficiency, spec.alpha2);
    case LogDetTerm::kBe5:
      return f_be5(spec.rank_deficiency, spec.alpha2);
  }
  return 0.0;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("line fit needs matching x, y with at least 2 points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("line fit needs distinct x values");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

SlopeEstimate logdet_slope(const CovarianceSpec& spec, std::span<const double> rhos,
                           std::size_t trials, std::uint64_t seed) {
  validate_sweep(rhos, trials);
  if (spec.rank_deficiency < 0 || spec.rank_deficiency > 2) {
    throw DomainError("rank deficiency k must be 0, 1 or 2");
  }
  if (!(spec.alpha2 >= 0.0)) throw DomainError("alpha2 must be nonnegative");

  // samples[r][t]: trial t evaluated at rho point r.
  std::vector<std::vector<double>> samples(rhos.size(), std::vector<double>(trials));
  for (std::size_t t = 0; t < trials; ++t) {
    const ChannelSample h = sample_channel(seed, t);
    CounterRng cov_rng(seed, t, kCovarianceStream);
    const CovarianceFactor k = random_covariance(spec.rank_deficiency, cov_rng);
    for (std::size_t r = 0; r < rhos.size(); ++r) {
      samples[r][t] = log_measure(spec, h, k, rhos[r]);
    }
  }

  SlopeEstimate est;
  est.rho_points.assign(rhos.begin(), rhos.end());
  est.trials = trials;
  for (const auto& column : samples) {
    est.mean_log.push_back(pairwise_sum(column) / static_cast<double>(trials));
  }
  const auto fit = fit_line(log_axis(rhos), est.mean_log);
  est.slope = fit.slope;
  est.r_squared = fit.r_squared;
  return est;
}

namespace {

// One additive term sqrt(rho^gain) h [s0 rho^(-e0/2); s1 rho^(-e1/2)].
struct TermModel {
  int slot;
  int receiver;
  std::string label;
  double gain;
  const RowVec* channel;
  cplx s0;
  double e0;
  cplx s1;
  double e1;
};

double term_power(const TermModel& m, double rho) {
  const cplx v0 = m.s0 * std::pow(rho, -m.e0 / 2.0);
  const cplx v1 = m.s1 * std::pow(rho, -m.e1 / 2.0);
  const cplx y = std::sqrt(std::pow(rho, m.gain)) * ((*m.channel)[0] * v0 + (*m.channel)[1] * v1);
  return std::norm(y);
}

struct TermMeta {
  double expected;
  std::optional<double> paper;
  bool noise;
  bool ambiguous;
};

}  // namespace

std::vector<AuditRow> scheme_power_audit(AlphaPair a, std::span<const double> rhos,
                                         std::size_t trials, std::uint64_t seed) {
  if (classify_region(a) != RegionCase::kBothWeak) {
    throw DomainError("scheme_power_audit requires region BOTH_WEAK");
  }
  validate_sweep(rhos, trials);
  const double a1 = a.alpha1, a2 = a.alpha2;

  // Expectations under the audit convention. Ambiguous rows carry unit-power
  // symbols under a sqrt(rho) gain, which the printed O(rho^alpha) label does
  // not match.
  const std::vector<TermMeta> meta = {
      // slot 1
      {1.0, a1, false, true},          // Rx1 a1,a2
      {1.0 - a1, 1.0 - a1, false, false},  // Rx1 a3
      {a2 - a1, 0.0, true, false},     // Rx1 b1
      {a1, a1, false, false},          // Rx2 a1,a2
      {0.0, 0.0, true, false},         // Rx2 a3
      {1.0 - a1, 1.0 - a1, false, false},  // Rx2 b1
      // slot 2
      {1.0 - a2, 1.0 - a2, false, false},  // Rx1 a4
      {a2, a2, false, false},          // Rx1 b2,b3
      {0.0, 0.0, true, false},         // Rx1 b4
      {0.0, 0.0, true, false},         // Rx2 a4
      {1.0, a2, false, true},          // Rx2 b2,b3
      {1.0 - a2, 1.0 - a2, false, false},  // Rx2 b4
      // slot 3
      {1.0, a1, false, true},          // Rx1 c1
      {1.0 - a1, 1.0 - a1, false, false},  // Rx1 a5
      {a2, std::nullopt, false, false},  // Rx1 c2 (known, subtracted)
      {0.0, 0.0, true, false},         // Rx1 b5
      {1.0, a2, false, true},          // Rx2 c2
      {1.0 - a2, 1.0 - a2, false, false},  // Rx2 b5
      {a1, std::nullopt, false, false},  // Rx2 c1 (known, subtracted)
      {0.0, 0.0, true, false},         // Rx2 a5
  };

  std::vector<std::vector<std::vector<double>>> power;  // [term][rho][trial]
  std::vector<AuditRow> rows;

  for (std::size_t t = 0; t < trials; ++t) {
    std::array<ChannelSample, 3> h;
    for (std::uint64_t s = 0; s < 3; ++s) {
      CounterRng rng(seed, t, kAuditChannelStream + s);
      h[s] = draw_channel(rng);
    }
    CounterRng sym(seed, t, kAuditSymbolStream);
    std::array<cplx, 6> sa{}, sb{};  // index 1..5
    for (int i = 1; i <= 5; ++i) sa[i] = sym.complex_normal();
    for (int i = 1; i <= 5; ++i) sb[i] = sym.complex_normal();
    // Common symbols normalized by their interference amplitude:
    // c1 / rho^(a1/2) = h21[1] [a1; a2], c2 / rho^(a2/2) = h12[2] [b2; b3].
    const cplx c1 = dot(h[0].h21, {sa[1], sa[2]});
    const cplx c2 = dot(h[1].h12, {sb[2], sb[3]});
    const cplx none{0.0, 0.0};

    const std::vector<TermModel> terms = {
        {1, 1, "a1,a2", 1.0, &h[0].h11, sa[1], 0.0, sa[2], 0.0},
        {1, 1, "a3", 1.0, &h[0].h11, sa[3], a1, none, 0.0},
        {1, 1, "b1", a2, &h[0].h12, sb[1], a1, none, 0.0},
        {1, 2, "a1,a2", a1, &h[0].h21, sa[1], 0.0, sa[2], 0.0},
        {1, 2, "a3", a1, &h[0].h21, sa[3], a1, none, 0.0},
        {1, 2, "b1", 1.0, &h[0].h22, sb[1], a1, none, 0.0},

        {2, 1, "a4", 1.0, &h[1].h11, sa[4], a2, none, 0.0},
        {2, 1, "b2,b3", a2, &h[1].h12, sb[2], 0.0, sb[3], 0.0},
        {2, 1, "b4", a2, &h[1].h12, sb[4], a2, none, 0.0},
        // Gain as printed for this term (rho^(a2/2)), not the Tx1 -> Rx2
        // link gain rho^(a1/2).
        {2, 2, "a4", a2, &h[1].h21, sa[4], a2, none, 0.0},
        {2, 2, "b2,b3", 1.0, &h[1].h22, sb[2], 0.0, sb[3], 0.0},
        {2, 2, "b4", 1.0, &h[1].h22, sb[4], a2, none, 0.0},

        {3, 1, "c1", 1.0, &h[2].h11, c1, 0.0, none, 0.0},
        {3, 1, "a5", 1.0, &h[2].h11, sa[5], a1, none, 0.0},
        {3, 1, "c2", a2, &h[2].h12, c2, 0.0, none, 0.0},
        {3, 1, "b5", a2, &h[2].h12, sb[5], a2, none, 0.0},
        {3, 2, "c2", 1.0, &h[2].h22, c2, 0.0, none, 0.0},
        {3, 2, "b5", 1.0, &h[2].h22, sb[5], a2, none, 0.0},
        {3, 2, "c1", a1, &h[2].h21, c1, 0.0, none, 0.0},
        {3, 2, "a5", a1, &h[2].h21, sa[5], a1, none, 0.0},
    };

    if (t == 0) {
      power.assign(terms.size(),
                   std::vector<std::vector<double>>(rhos.size(), std::vector<double>(trials)));
      for (std::size_t i = 0; i < terms.size(); ++i) {
        AuditRow row;
        row.slot = terms[i].slot;
        row.receiver = terms[i].receiver;
        row.term = terms[i].label;
        row.expected = meta[i].expected;
        row.paper_exponent = meta[i].paper;
        row.noise_level = meta[i].noise;
        row.ambiguous = meta[i].ambiguous;
        rows.push_back(std::move(row));
      }
    }
    for (std::size_t i = 0; i < terms.size(); ++i) {
      for (std::size_t r = 0; r < rhos.size(); ++r) {
        power[i][r][t] = term_power(terms[i], rhos[r]);
      }
    }
  }

  const auto x = log_axis(rhos);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<double> y(rhos.size());
    for (std::size_t r = 0; r < rhos.size(); ++r) {
      y[r] = std::log(pairwise_sum(power[i][r]) / static_cast<double>(trials));
    }
    rows[i].measured = fit_line(x, y).slope;
  }
  return rows;
}

std::vector<double> default_rhos() { return {1e2, 1e3, 1e4, 1e5, 1e6}; }

std::string to_string(LogDetTerm t) {
  switch (t) {
    case LogDetTerm::kBe6:
      return "BE6";
    case LogDetTerm::kBe7:
      return "BE7";
    case LogDetTerm::kBe5:
      return "BE5";
  }
  return "UNKNOWN";
}

LogDetTerm parse_term(const std::string& name) {
  if (name == "BE6") return LogDetTerm::kBe6;
  if (name == "BE7") return LogDetTerm::kBe7;
  if (name == "BE5") return LogDetTerm::kBe5;
  throw DomainError("unknown log-det selector '" + name + "' (expected BE5, BE6 or BE7)");
}

}  // namespace gdof::mc
