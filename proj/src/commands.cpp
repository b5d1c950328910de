#include "gdof/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdof/bounds.hpp"
#include "gdof/core.hpp"
#include "gdof/lp.hpp"
#include "gdof/mc.hpp"

namespace gdof::cli {

namespace {

using Json = nlohmann::ordered_json;

enum class Format { kCsv, kJson };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double round9(double v) {
  const double r = std::round(v * 1e9) / 1e9;
  return r == 0.0 ? 0.0 : r;
}

Json json_number(std::optional<double> v) {
  return v ? Json(round9(*v)) : Json(nullptr);
}

std::string csv_number(std::optional<double> v) { return v ? format_number(*v) : ""; }

std::string pair_text(AlphaPair a) {
  return "(" + format_number(a.alpha1) + ", " + format_number(a.alpha2) + ")";
}

// Writes to --out when given, to `out` otherwise.
template <typename Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  write(file);
  file.flush();
  if (!file) throw IoError("write to '" + path + "' failed");
}

Theorem1Fn resolve(const Theorem1Fn& fn) {
  return fn ? fn : Theorem1Fn(theorem1_sum_gdof);
}

// --- bounds ---------------------------------------------------------------

void write_bounds(const PointReport& r, Format format, std::ostream& os) {
  const std::string region(to_string(r.bounds.region));
  if (format == Format::kJson) {
    Json j;
    j["alpha1"] = round9(r.input.alpha1);
    j["alpha2"] = round9(r.input.alpha2);
    j["swapped"] = r.swapped;
    j["region"] = region;
    j["theorem1"] = r.theorem1 ? Json(round9(*r.theorem1)) : Json("OPEN");
    j["lower"] = json_number(r.bounds.lower);
    j["upper"] = round9(r.bounds.upper);
    j["tight"] = r.bounds.tight;
    j["a_sum_star"] = json_number(r.a_sum_star);
    os << j.dump(2) << '\n';
    return;
  }
  os << "alpha1,alpha2,swapped,region,theorem1,lower,upper,tight,a_sum_star\n";
  os << format_number(r.input.alpha1) << ',' << format_number(r.input.alpha2) << ','
     << (r.swapped ? 1 : 0) << ',' << region << ','
     << (r.theorem1 ? format_number(*r.theorem1) : "OPEN") << ',' << csv_number(r.bounds.lower)
     << ',' << format_number(r.bounds.upper) << ',' << (r.bounds.tight ? 1 : 0) << ','
     << csv_number(r.a_sum_star) << '\n';
}

// --- sweep ----------------------------------------------------------------

void write_sweep(const std::vector<PointReport>& rows, Format format, std::ostream& os) {
  if (format == Format::kJson) {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json j;
      j["alpha1"] = round9(r.input.alpha1);
      j["alpha2"] = round9(r.input.alpha2);
      j["region"] = std::string(to_string(r.bounds.region));
      j["lower"] = json_number(r.bounds.lower);
      j["upper"] = round9(r.bounds.upper);
      j["tight"] = r.bounds.tight ? 1 : 0;
      j["a_sum_star"] = json_number(r.a_sum_star);
      arr.push_back(std::move(j));
    }
    os << arr.dump(2) << '\n';
    return;
  }
  os << "alpha1,alpha2,region,lower,upper,tight,a_sum_star\n";
  for (const auto& r : rows) {
    os << format_number(r.input.alpha1) << ',' << format_number(r.input.alpha2) << ','
       << to_string(r.bounds.region) << ',' << csv_number(r.bounds.lower) << ','
       << format_number(r.bounds.upper) << ',' << (r.bounds.tight ? 1 : 0) << ','
       << csv_number(r.a_sum_star) << '\n';
  }
}

// --- slopes ---------------------------------------------------------------

struct SlopeRow {
  std::string selector;
  int k;
  double alpha2;
  double slope;
  double expected;
  double r2;
};

void write_slopes(const std::vector<SlopeRow>& rows, Format format, std::ostream& os) {
  if (format == Format::kJson) {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json j;
      j["selector"] = r.selector;
      j["k"] = r.k;
      j["alpha2"] = round9(r.alpha2);
      j["slope"] = round9(r.slope);
      j["expected"] = round9(r.expected);
      j["abs_err"] = round9(std::abs(r.slope - r.expected));
      j["r2"] = round9(r.r2);
      arr.push_back(std::move(j));
    }
    os << arr.dump(2) << '\n';
    return;
  }
  os << "selector,k,alpha2,slope,expected,abs_err,r2\n";
  for (const auto& r : rows) {
    os << r.selector << ',' << r.k << ',' << format_number(r.alpha2) << ','
       << format_number(r.slope) << ',' << format_number(r.expected) << ','
       << format_number(std::abs(r.slope - r.expected)) << ',' << format_number(r.r2) << '\n';
  }
}

// --- ledger ---------------------------------------------------------------

void write_ledger(const Ledger& ledger, bool swapped, Format format, std::ostream& os) {
  if (format == Format::kJson) {
    Json j;
    j["swapped"] = swapped;
    Json entries = Json::array();
    for (const auto& e : ledger.entries) {
      Json row;
      row["slot"] = e.slot;
      row["receiver"] = e.receiver;
      row["source"] = to_string(e.source);
      row["gdof"] = round9(e.gdof);
      row["symbols"] = e.symbols;
      entries.push_back(std::move(row));
    }
    j["entries"] = std::move(entries);
    j["d1"] = round9(ledger.d1);
    j["d2"] = round9(ledger.d2);
    j["sum"] = round9(ledger.d1 + ledger.d2);
    os << j.dump(2) << '\n';
    return;
  }
  os << "slot,receiver,source,gdof,symbols\n";
  for (const auto& e : ledger.entries) {
    os << e.slot << ',' << e.receiver << ',' << to_string(e.source) << ','
       << format_number(e.gdof) << ",\"" << e.symbols << "\"\n";
  }
  os << "total,1,," << format_number(ledger.d1) << ",\n";
  os << "total,2,," << format_number(ledger.d2) << ",\n";
  os << "total,sum,," << format_number(ledger.d1 + ledger.d2) << ",\n";
}

// --- verify checks ----------------------------------------------------------

CheckResult check_tightness(const VerifyOptions& o, const Theorem1Fn& theorem1) {
  CheckResult c{"tightness", true, 0, {}};
  const auto axis = grid_values(0.0, 3.0, o.step);
  for (double x : axis) {
    for (double y : axis) {
      ++c.checked;
      if (!c.passed) continue;
      const PointReport r = evaluate_point({x, y});
      const auto t1 = theorem1(r.canonical);
      std::ostringstream why;
      if (r.bounds.region == RegionCase::kMixedOpen) {
        if (t1) why << "closed form defined on MIXED_OPEN";
      } else if (!r.bounds.lower) {
        why << "no achievable lower bound";
      } else if (std::abs(r.bounds.upper - *r.bounds.lower) > o.tol) {
        why << "upper " << format_number(r.bounds.upper) << " != lower "
            << format_number(*r.bounds.lower);
      } else if (!t1 || std::abs(*t1 - r.bounds.upper) > o.tol) {
        why << "closed form " << (t1 ? format_number(*t1) : "absent") << " != upper "
            << format_number(r.bounds.upper);
      }
      if (!why.str().empty()) {
        c.passed = false;
        c.counterexample = pair_text({x, y}) + ": " + why.str();
      }
    }
  }
  return c;
}

CheckResult check_kt_exhaustion(const VerifyOptions& o) {
  CheckResult c{"kt-exhaustion", true, 0, {}};
  for (double a2 : grid_values(0.0, 3.0, 0.01)) {
    ++c.checked;
    int best_k = 0;
    double best = weighted_rate_coeff(0, a2);
    for (int k = 1; k <= 2; ++k) {
      const double v = weighted_rate_coeff(k, a2);
      if (v > best + o.tol) {
        best = v;
        best_k = k;
      }
    }
    const double rhs = converse_weighted_rhs(a2);
    if (c.passed && (best_k != 0 || std::abs(best - rhs) > o.tol)) {
      c.passed = false;
      c.counterexample = "alpha2 = " + format_number(a2) + ": argmax k = " +
                         std::to_string(best_k) + ", max " + format_number(best) +
                         " vs rhs " + format_number(rhs);
    }
  }
  return c;
}

CheckResult check_continuity(const VerifyOptions& o, const Theorem1Fn& theorem1) {
  CheckResult c{"boundary-continuity", true, 0, {}};
  constexpr double kEps = 1e-7;
  auto value_at = [&theorem1](AlphaPair raw) { return theorem1(canonicalize(raw).pair); };
  auto probe = [&](AlphaPair on, AlphaPair off) {
    ++c.checked;
    if (!c.passed) return;
    const auto v_on = value_at(on);
    const auto v_off = value_at(off);
    if (!v_on || !v_off || std::abs(*v_on - *v_off) > o.tol + kEps) {
      c.passed = false;
      c.counterexample = pair_text(on) + " vs " + pair_text(off) + ": " +
                         (v_on ? format_number(*v_on) : "absent") + " / " +
                         (v_off ? format_number(*v_off) : "absent");
    }
  };
  // alpha1 = 1 separates BOTH_WEAK from MIXED_COVERED for alpha2 >= 1/2.
  for (double a2 : grid_values(0.5, 1.0, o.step)) probe({1.0, a2}, {1.0 + kEps, a2});
  // alpha2 = 1 separates MIXED_COVERED from BOTH_STRONG.
  for (double a1 : grid_values(1.0, 3.0, o.step)) probe({a1, 1.0}, {a1, 1.0 + kEps});
  return c;
}

CheckResult check_maximin(const VerifyOptions& o) {
  CheckResult c{"maximin-vs-closed-form", true, 0, {}};
  for (const auto& m : maximin_campaign(o.maximin_pair_step, o.grid_step_a)) {
    ++c.checked;
    if (!c.passed) continue;
    std::ostringstream why;
    if (!m.search.found) {
      why << "no feasible split";
    } else if (std::abs(m.search.sum - m.closed.sum) > o.maximin_tol) {
      why << "maximin " << format_number(m.search.sum) << " vs closed form "
          << format_number(m.closed.sum);
    } else if (m.closed.a_sum_star &&
               std::abs(m.search.best.sum() - *m.closed.a_sum_star) > o.a_sum_tol) {
      why << "A1+A2 " << format_number(m.search.best.sum()) << " vs "
          << format_number(*m.closed.a_sum_star);
    }
    if (!why.str().empty()) {
      c.passed = false;
      c.counterexample = pair_text(m.pair) + " " + std::string(to_string(m.region)) + ": " +
                         why.str();
    }
  }
  return c;
}

CheckResult check_lp_sampling(const VerifyOptions& o) {
  CheckResult c{"lp-vs-sampling", true, 0, {}};
  for (std::size_t i = 0; i < o.lp_programs; ++i) {
    ++c.checked;
    if (!c.passed) continue;
    const std::uint64_t seed = o.seed * 1000003ULL + i;
    const auto prog = lp::random_bounded_program(seed);
    const auto sol = lp::solve(prog);
    std::ostringstream why;
    if (sol.status != lp::Status::kOptimal) {
      why << "status " << lp::to_string(sol.status);
    } else if (lp::max_violation(prog, sol.point) > kTol) {
      why << "returned point violates a row by " << lp::max_violation(prog, sol.point);
    } else {
      const auto est = lp::solve_by_sampling(prog, o.lp_samples, seed ^ 0x5A5A5A5AULL);
      if (est.conclusive && est.value > sol.value + kTol) {
        why << "sampling found " << format_number(est.value) << " above optimum "
            << format_number(sol.value);
      }
    }
    if (!why.str().empty()) {
      c.passed = false;
      c.counterexample = "program seed " + std::to_string(seed) + ": " + why.str();
    }
  }
  return c;
}

// --- command line -----------------------------------------------------------

Format parse_format(const std::string& s) { return s == "json" ? Format::kJson : Format::kCsv; }

}  // namespace

std::vector<double> grid_values(double min, double max, double step) {
  if (!(step > 0.0) || !std::isfinite(min) || !std::isfinite(max) || !(min <= max)) {
    throw DomainError("grid needs min <= max and step > 0");
  }
  std::vector<double> v;
  for (std::size_t i = 0;; ++i) {
    const double x = min + static_cast<double>(i) * step;
    if (x > max + 1e-9) break;
    v.push_back(std::min(round9(x), max));
  }
  return v;
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  std::string s(buf);
  // Values that round to zero keep no sign.
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

VerifyReport run_verify(const VerifyOptions& options) {
  if (!(options.step > 0.0) || !(options.tol > 0.0)) {
    throw DomainError("verify needs step > 0 and tol > 0");
  }
  const Theorem1Fn theorem1 = resolve(options.theorem1);
  VerifyReport report;
  report.checks.push_back(check_tightness(options, theorem1));
  report.checks.push_back(check_kt_exhaustion(options));
  report.checks.push_back(check_continuity(options, theorem1));
  report.checks.push_back(check_maximin(options));
  report.checks.push_back(check_lp_sampling(options));
  return report;
}

std::vector<MaximinCheck> maximin_campaign(double pair_step, double grid_step,
                                           double max_alpha) {
  std::vector<MaximinCheck> jobs;
  const auto axis = grid_values(0.0, max_alpha, pair_step);
  for (double a1 : axis) {
    for (double a2 : axis) {
      const AlphaPair p{a1, a2};
      if (!is_canonical(p)) continue;
      const RegionCase r = classify_region(p);
      if (r != RegionCase::kBothStrong && r != RegionCase::kMixedCovered) continue;
      MaximinCheck m;
      m.pair = p;
      m.region = r;
      m.closed = *closed_form_lower(p);
      jobs.push_back(m);
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      jobs[i].search = maximin_search(jobs[i].pair, grid_step);
    }
  };
  const unsigned n = std::max(1u, std::min(std::thread::hardware_concurrency(), 64u));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return jobs;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return run(args, out, err, Theorem1Fn{});
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const Theorem1Fn& theorem1) {
  CLI::App app{"Sum-GDoF bounds for the two-user interference channel with delayed CSIT"};
  app.name("gdof");
  app.require_subcommand(1);

  const std::vector<std::string> formats{"csv", "json"};

  double alpha1 = 0.0, alpha2 = 0.0;
  std::string format = "csv";
  auto* bounds = app.add_subcommand("bounds", "Region, converse upper and achievable lower at one point");
  bounds->add_option("--alpha1", alpha1, "Tx1 -> Rx2 interference exponent")->required();
  bounds->add_option("--alpha2", alpha2, "Tx2 -> Rx1 interference exponent")->required();
  bounds->add_option("--format", format)->check(CLI::IsMember(formats));

  double min = 0.0, max = 3.0, step = 0.05;
  std::string out_path;
  auto* sweep = app.add_subcommand("sweep", "Bounds over a square grid");
  sweep->add_option("--min", min)->capture_default_str();
  sweep->add_option("--max", max)->capture_default_str();
  sweep->add_option("--step", step)->capture_default_str();
  sweep->add_option("--out", out_path, "Output file (default stdout)");
  sweep->add_option("--format", format)->check(CLI::IsMember(formats));

  VerifyOptions vo;
  vo.theorem1 = theorem1;
  auto* verify = app.add_subcommand("verify", "Run the invariant battery");
  verify->add_option("--step", vo.step)->capture_default_str();
  verify->add_option("--tol", vo.tol)->capture_default_str();
  verify->add_option("--grid-step-a", vo.grid_step_a)->capture_default_str();
  verify->add_option("--seed", vo.seed)->capture_default_str();

  std::vector<std::string> selectors{"BE6", "BE7", "BE5"};
  std::vector<int> ks{0, 1, 2};
  std::vector<double> alphas{0.3, 0.7, 1.0, 1.5, 2.5};
  std::vector<double> rhos = mc::default_rhos();
  std::size_t trials = 2000;
  std::uint64_t seed = 42;
  auto* slopes = app.add_subcommand("slopes", "Monte Carlo pre-log slopes of the log-det terms");
  slopes->add_option("--selector", selectors)->delimiter(',')->check(CLI::IsMember({"BE5", "BE6", "BE7"}));
  slopes->add_option("--k", ks)->delimiter(',');
  slopes->add_option("--alpha2", alphas)->delimiter(',');
  slopes->add_option("--rhos", rhos)->delimiter(',');
  slopes->add_option("--trials", trials)->capture_default_str();
  slopes->add_option("--seed", seed)->capture_default_str();
  slopes->add_option("--out", out_path);
  slopes->add_option("--format", format)->check(CLI::IsMember(formats));

  auto* ledger = app.add_subcommand("ledger", "Three-slot GDoF ledger (BOTH_WEAK only)");
  ledger->add_option("--alpha1", alpha1)->required();
  ledger->add_option("--alpha2", alpha2)->required();
  ledger->add_option("--format", format)->check(CLI::IsMember(formats));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Format fmt = parse_format(format);
    if (*bounds) {
      write_bounds(evaluate_point({alpha1, alpha2}), fmt, out);
    } else if (*sweep) {
      if (!(min >= 0.0) || !(min < max) || !(step > 0.0)) {
        throw DomainError("sweep needs 0 <= min < max and step > 0");
      }
      std::vector<PointReport> rows;
      const auto axis = grid_values(min, max, step);
      for (double x : axis) {
        for (double y : axis) rows.push_back(evaluate_point({x, y}));
      }
      emit(out_path, out, [&](std::ostream& os) { write_sweep(rows, fmt, os); });
    } else if (*verify) {
      const VerifyReport report = run_verify(vo);
      for (const auto& c : report.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.checked << " checked)";
        if (!c.passed) out << ": " << c.counterexample;
        out << '\n';
      }
      out << (report.passed() ? "RESULT PASS" : "RESULT FAIL") << '\n';
      return report.passed() ? kExitOk : kExitVerifyFailed;
    } else if (*slopes) {
      std::vector<SlopeRow> rows;
      for (const auto& sel : selectors) {
        for (int k : ks) {
          for (double a2 : alphas) {
            const mc::CovarianceSpec spec{k, mc::parse_term(sel), a2};
            const auto est = mc::logdet_slope(spec, rhos, trials, seed);
            rows.push_back({sel, k, a2, est.slope, mc::expected_coefficient(spec), est.r_squared});
          }
        }
      }
      emit(out_path, out, [&](std::ostream& os) { write_slopes(rows, fmt, os); });
    } else if (*ledger) {
      const Canonical c = canonicalize({alpha1, alpha2});
      const RegionCase region = classify_region(c.pair);
      if (region != RegionCase::kBothWeak) {
        err << "error: the three-slot ledger applies to BOTH_WEAK pairs only; "
            << pair_text({alpha1, alpha2}) << " is " << to_string(region)
            << ". Use `gdof bounds` for this pair.\n";
        return kExitUsage;
      }
      if (c.swapped) err << "note: users relabeled so that alpha2 <= alpha1\n";
      write_ledger(three_slot_ledger(c.pair), c.swapped, fmt, out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace gdof::cli
