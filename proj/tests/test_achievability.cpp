#include <doctest.h>

#include <cmath>
#include <random>

#include "gdof/achievability.hpp"
#include "gdof/bounds.hpp"
#include "gdof/core.hpp"
#include "oracle.hpp"

using namespace gdof;

TEST_CASE("common streams carry the quantized interference") {
  const auto t = common_allocation({2.0, 1.5}, {0.5, 0.25});
  CHECK(t.d_eta1 == doctest::Approx(1.25));
  CHECK(t.d_eta2 == doctest::Approx(1.5));
}

TEST_CASE("strong-case split at the balanced point") {
  const AlphaPair a{1.2, 1.2};
  const double A = 2.2 / 3.0;
  const auto t = evaluate_split(a, {A, A});
  REQUIRE(t);
  CHECK(t->d1 + t->d2 == doctest::Approx(4.4 / 3.0).epsilon(1e-12));

  CHECK_FALSE(case_constraints_strong(a, {0.0, 0.0}).has_value());
  // Residual interference 4 exceeds 1 + A1 + A2 = 3.
  CHECK_FALSE(case_constraints_strong({2.0, 2.0}, {1.0, 1.0}).has_value());
}

TEST_CASE("mixed-case split reaches 5/3 at the balanced point") {
  const AlphaPair a{1.5, 0.5};
  const auto t = evaluate_split(a, {5.0 / 6.0, 1.0 / 3.0});
  REQUIRE(t);
  CHECK(t->d1 == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(t->d2 == doctest::Approx(5.0 / 6.0).epsilon(1e-12));

  const auto skewed = evaluate_split(a, {0.9, 4.0 / 15.0});
  REQUIRE(skewed);
  CHECK(skewed->d1 + skewed->d2 < 5.0 / 3.0 - 1e-6);

  CHECK_FALSE(case_constraints_mixed(a, {0.0, 0.0}).has_value());
}

TEST_CASE("case constraints guard region and split box") {
  CHECK_THROWS_AS(case_constraints_strong({1.5, 0.5}, {0.5, 0.2}), DomainError);
  CHECK_THROWS_AS(case_constraints_mixed({2.0, 2.0}, {0.5, 0.5}), DomainError);
  CHECK_THROWS_AS(case_constraints_strong({2.0, 2.0}, {2.5, 0.5}), DomainError);
  CHECK_THROWS_AS(case_constraints_mixed({1.5, 0.5}, {0.5, -0.1}), DomainError);
  CHECK_THROWS_AS(evaluate_split({0.5, 0.5}, {0.1, 0.1}), DomainError);
}

TEST_CASE("split LPs agree with the nested-search oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int compared = 0;
  for (int i = 0; i < 400; ++i) {
    const double a1 = 1.0 + 2.0 * u(rng);
    const double a2 = a1 * u(rng);
    const AlphaPair a{a1, a2};
    const RegionCase r = classify_region(a);
    if (r != RegionCase::kBothStrong && r != RegionCase::kMixedCovered) continue;
    const PowerSplit p{a1 * u(rng), a2 * u(rng)};
    const auto prog = r == RegionCase::kBothStrong ? case_constraints_strong(a, p)
                                                   : case_constraints_mixed(a, p);
    if (!prog) continue;
    const auto ref = oracle::polygon_max(*prog);
    const auto t = evaluate_split(a, p);
    CHECK(ref.has_value() == t.has_value());
    if (ref && t) {
      CHECK(t->d1 + t->d2 == doctest::Approx(*ref).epsilon(1e-7));
      ++compared;
    }
  }
  CHECK(compared > 20);
}

TEST_CASE("closed-form lower bounds") {
  auto lb = closed_form_lower({1.0, 1.0});
  REQUIRE(lb);
  CHECK(lb->sum == doctest::Approx(4.0 / 3.0));
  CHECK_FALSE(lb->a_sum_star.has_value());

  lb = closed_form_lower({1.5, 0.5});
  REQUIRE(lb);
  CHECK(lb->sum == doctest::Approx(5.0 / 3.0));
  CHECK(*lb->a_sum_star == doctest::Approx(3.5 / 3.0));

  lb = closed_form_lower({2.0, 2.0});
  REQUIRE(lb);
  CHECK(lb->sum == doctest::Approx(2.0));
  CHECK(*lb->a_sum_star == doctest::Approx(2.0));

  CHECK_FALSE(closed_form_lower({1.5, 0.2}).has_value());
  // Capped at 2 far into the mixed region.
  CHECK(closed_form_lower({3.0, 0.5})->sum == doctest::Approx(2.0));
}

TEST_CASE("maximin search on the grid") {
  const auto mixed = maximin_search({1.5, 0.5}, 0.01);
  REQUIRE(mixed.found);
  CHECK(std::abs(mixed.sum - 5.0 / 3.0) <= 0.04);
  CHECK(std::abs(mixed.best.a1 - 5.0 / 6.0) <= 0.1);
  CHECK(std::abs(mixed.best.a2 - 1.0 / 3.0) <= 0.1);
  CHECK(mixed.grid_points == 151u * 51u);

  CHECK_THROWS_AS(maximin_search({0.5, 0.5}, 0.01), DomainError);
  CHECK_THROWS_AS(maximin_search({2.0, 2.0}, 0.2), DomainError);
  CHECK_THROWS_AS(maximin_search({2.0, 2.0}, 0.0), DomainError);
}

TEST_CASE("maximin agrees with a brute-force scan") {
  for (const AlphaPair a : {AlphaPair{2.0, 2.0}, AlphaPair{1.4, 1.2}, AlphaPair{1.5, 0.5},
                            AlphaPair{2.5, 1.5}, AlphaPair{1.2, 0.9}}) {
    const double step = 0.05;
    std::optional<double> best;
    for (int i = 0; i * step <= a.alpha1 + 1e-12; ++i) {
      for (int j = 0; j * step <= a.alpha2 + 1e-12; ++j) {
        const PowerSplit p{std::min(i * step, a.alpha1), std::min(j * step, a.alpha2)};
        const auto prog = classify_region(a) == RegionCase::kBothStrong
                              ? case_constraints_strong(a, p)
                              : case_constraints_mixed(a, p);
        if (!prog) continue;
        if (const auto v = oracle::polygon_max(*prog)) best = std::max(best.value_or(*v), *v);
      }
    }
    const auto m = maximin_search(a, step);
    CAPTURE(a.alpha1);
    CAPTURE(a.alpha2);
    CHECK(m.found == best.has_value());
    if (best && m.found) CHECK(m.sum == doctest::Approx(*best).epsilon(1e-7));
  }
}

TEST_CASE("three-slot ledger") {
  auto l = three_slot_ledger({1.0, 1.0});
  CHECK(l.entries.size() == 8);
  CHECK(l.d1 == doctest::Approx(2.0 / 3.0));
  CHECK(l.d2 == doctest::Approx(2.0 / 3.0));

  l = three_slot_ledger({0.0, 0.0});
  CHECK(l.d1 == doctest::Approx(1.0));
  CHECK(l.d2 == doctest::Approx(1.0));

  l = three_slot_ledger({0.6, 0.3});
  CHECK(l.d1 == doctest::Approx(0.9));
  CHECK(l.d2 == doctest::Approx(0.8));
  CHECK(l.d1 + l.d2 == doctest::Approx(1.7));

  int delayed = 0;
  for (const auto& e : l.entries) delayed += e.source == LedgerSource::kDelayed;
  CHECK(delayed == 2);

  CHECK_THROWS_AS(three_slot_ledger({1.5, 0.5}), DomainError);
}

TEST_CASE("evaluate_point canonicalizes and reports bounds") {
  const auto r = evaluate_point({0.5, 1.5});
  CHECK(r.swapped);
  CHECK(r.canonical == AlphaPair{1.5, 0.5});
  CHECK(r.bounds.region == RegionCase::kMixedCovered);
  CHECK(r.bounds.tight);
  CHECK(*r.bounds.lower == doctest::Approx(5.0 / 3.0));

  const auto open = evaluate_point({1.5, 0.2});
  CHECK_FALSE(open.bounds.lower.has_value());
  CHECK_FALSE(open.bounds.tight);
  CHECK(open.bounds.upper == doctest::Approx(1.766666667).epsilon(1e-9));
}
