#include "gdof/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <utility>

#include "gdof/region.hpp"

namespace gdof::lp {

namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kTieEps = 1e-12;
// Half-width of the box used to find a feasible point when the polyhedron
// has no vertex (it contains a line).
constexpr double kProbeBox = 1e6;

struct Vertex {
  double value = 0.0;
  std::vector<double> point;
  std::vector<std::size_t> subset;
};

// Solves the n x n system in place; false when (numerically) singular.
bool solve_square(std::vector<double>& m, std::vector<double>& rhs, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(m[r * n + col]) > std::abs(m[pivot * n + col])) pivot = r;
    }
    if (std::abs(m[pivot * n + col]) < kPivotEps) return false;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m[col * n + c], m[pivot * n + c]);
      std::swap(rhs[col], rhs[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r * n + col] / m[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) acc -= m[i * n + c] * rhs[c];
    rhs[i] = acc / m[i * n + i];
  }
  return true;
}

double row_slack(const Constraint& row, std::span<const double> x) {
  double lhs = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) lhs += row.coeffs[j] * x[j];
  return lhs - row.bound;
}

bool feasible(std::span<const Constraint> rows, std::span<const double> x, double tol) {
  return std::all_of(rows.begin(), rows.end(),
                     [&](const Constraint& row) { return row_slack(row, x) <= tol; });
}

// Best feasible vertex over all n-subsets of rows, in lexicographic subset
// order.
std::optional<Vertex> best_vertex(std::span<const Constraint> rows,
                                  std::span<const double> objective) {
  const std::size_t n = objective.size();
  const std::size_t m = rows.size();
  if (m < n) return std::nullopt;

  std::optional<Vertex> best;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::vector<double> mat(n * n);
  std::vector<double> rhs(n);

  while (true) {
    for (std::size_t r = 0; r < n; ++r) {
      const Constraint& row = rows[idx[r]];
      std::copy(row.coeffs.begin(), row.coeffs.end(), mat.begin() + r * n);
      rhs[r] = row.bound;
    }
    if (solve_square(mat, rhs, n) && feasible(rows, rhs, kTol)) {
      double value = 0.0;
      for (std::size_t j = 0; j < n; ++j) value += objective[j] * rhs[j];
      if (!best || value > best->value + kTieEps) {
        best = Vertex{value, rhs, idx};
      }
    }

    // next combination
    std::size_t pos = n;
    while (pos > 0 && idx[pos - 1] == m - n + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < n; ++i) idx[i] = idx[i - 1] + 1;
  }
  return best;
}

std::vector<Constraint> with_box(std::span<const Constraint> rows, std::size_t n, double half) {
  std::vector<Constraint> out(rows.begin(), rows.end());
  for (std::size_t j = 0; j < n; ++j) {
    Constraint up{std::vector<double>(n, 0.0), half};
    up.coeffs[j] = 1.0;
    Constraint down{std::vector<double>(n, 0.0), half};
    down.coeffs[j] = -1.0;
    out.push_back(std::move(up));
    out.push_back(std::move(down));
  }
  return out;
}

bool has_improving_ray(const LinearProgram& lp) {
  const std::size_t n = lp.dimension();
  std::vector<Constraint> cone;
  cone.reserve(lp.constraints.size());
  for (const auto& row : lp.constraints) cone.push_back({row.coeffs, 0.0});
  const auto rows = with_box(cone, n, 1.0);
  const auto ray = best_vertex(rows, lp.objective);
  return ray && ray->value > kTol;
}

void validate(const LinearProgram& lp) {
  const std::size_t n = lp.dimension();
  if (n == 0) throw DomainError("linear program has no variables");
  if (n > kMaxVariables) {
    throw CapacityError("vertex enumeration supports at most 6 variables");
  }
  if (lp.objective.size() != n) throw DomainError("objective length does not match variables");
  for (const auto& row : lp.constraints) {
    if (row.coeffs.size() != n) {
      throw DomainError("constraint length does not match variables");
    }
  }
}

}  // namespace

LinearProgram& LinearProgram::add(std::vector<double> coeffs, double bound) {
  constraints.push_back({std::move(coeffs), bound});
  return *this;
}

LinearProgram& LinearProgram::upper(std::size_t j, double bound) {
  std::vector<double> c(dimension(), 0.0);
  c.at(j) = 1.0;
  return add(std::move(c), bound);
}

LinearProgram& LinearProgram::lower(std::size_t j, double bound) {
  std::vector<double> c(dimension(), 0.0);
  c.at(j) = -1.0;
  return add(std::move(c), -bound);
}

Solution solve(const LinearProgram& lp) {
  validate(lp);
  const std::size_t n = lp.dimension();

  auto vertex = best_vertex(lp.constraints, lp.objective);
  std::optional<Vertex> probe;
  if (!vertex) {
    probe = best_vertex(with_box(lp.constraints, n, kProbeBox), lp.objective);
    if (!probe) return Solution{Status::kInfeasible, 0.0, {}, {}};
  }

  if (has_improving_ray(lp)) {
    return Solution{Status::kUnbounded, std::numeric_limits<double>::infinity(), {}, {}};
  }

  if (vertex) {
    return Solution{Status::kOptimal, vertex->value, std::move(vertex->point),
                    std::move(vertex->subset)};
  }

  // Feasible without vertices: the objective is constant along the lineality
  // space, so the boxed optimum is a true optimum. Box rows are dropped from
  // the reported active set.
  std::vector<std::size_t> active;
  for (std::size_t i : probe->subset) {
    if (i < lp.constraints.size()) active.push_back(i);
  }
  return Solution{Status::kOptimal, probe->value, std::move(probe->point), std::move(active)};
}

double max_violation(const LinearProgram& lp, std::span<const double> x) {
  if (x.size() != lp.dimension()) throw DomainError("point length does not match variables");
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& row : lp.constraints) worst = std::max(worst, row_slack(row, x));
  return worst;
}

double objective_value(const LinearProgram& lp, std::span<const double> x) {
  if (x.size() != lp.dimension()) throw DomainError("point length does not match variables");
  double v = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) v += lp.objective[j] * x[j];
  return v;
}

SamplingEstimate solve_by_sampling(const LinearProgram& lp, std::size_t samples,
                                   std::uint64_t seed) {
  validate(lp);
  const std::size_t n = lp.dimension();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> lo(n, -kInf);
  std::vector<double> hi(n, kInf);
  for (const auto& row : lp.constraints) {
    std::size_t nonzero = 0;
    std::size_t var = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (row.coeffs[j] != 0.0) {
        ++nonzero;
        var = j;
      }
    }
    if (nonzero != 1) continue;
    const double limit = row.bound / row.coeffs[var];
    if (row.coeffs[var] > 0.0) {
      hi[var] = std::min(hi[var], limit);
    } else {
      lo[var] = std::max(lo[var], limit);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(lo[j]) || !std::isfinite(hi[j])) {
      throw DomainError("sampling needs a finite box bound on every variable");
    }
  }

  SamplingEstimate est;
  for (std::size_t j = 0; j < n; ++j) {
    if (lo[j] > hi[j]) return est;
  }

  std::mt19937_64 engine(seed);
  auto unit = [&engine] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
  std::vector<double> x(n);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t j = 0; j < n; ++j) x[j] = lo[j] + unit() * (hi[j] - lo[j]);
    if (!feasible(lp.constraints, x, 0.0)) continue;
    const double v = objective_value(lp, x);
    if (!est.conclusive || v > est.value) {
      est.value = v;
      est.point = x;
    }
    est.conclusive = true;
    ++est.accepted;
  }
  return est;
}

LinearProgram random_bounded_program(std::uint64_t seed, std::size_t max_variables) {
  if (max_variables == 0 || max_variables > kMaxVariables) {
    throw DomainError("max_variables must lie in 1..kMaxVariables");
  }
  std::mt19937_64 engine(seed);
  auto unit = [&engine] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
  auto between = [&unit](double lo, double hi) { return lo + unit() * (hi - lo); };

  const std::size_t n = 1 + static_cast<std::size_t>(engine() % max_variables);
  LinearProgram prog;
  std::vector<double> anchor(n);
  for (std::size_t j = 0; j < n; ++j) prog.variables.push_back("x" + std::to_string(j + 1));
  for (std::size_t j = 0; j < n; ++j) {
    const double cap = between(0.5, 3.0);
    anchor[j] = between(0.1, 0.9) * cap;
    prog.upper(j, cap).lower(j, 0.0);
  }
  const std::size_t rows = 1 + static_cast<std::size_t>(engine() % 4);
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> coeffs(n);
    double at_anchor = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      coeffs[j] = between(-1.0, 1.0);
      at_anchor += coeffs[j] * anchor[j];
    }
    prog.add(std::move(coeffs), at_anchor + between(0.05, 1.0));
  }
  for (std::size_t j = 0; j < n; ++j) prog.objective.push_back(between(-1.0, 1.0));
  return prog;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::kOptimal:
      return "OPTIMAL";
    case Status::kInfeasible:
      return "INFEASIBLE";
    case Status::kUnbounded:
      return "UNBOUNDED";
  }
  return "UNKNOWN";
}

}  // namespace gdof::lp
