#include "peakcheck/rules.hpp"

#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "peakcheck/domain.hpp"

using namespace peakcheck;
using oracle::align;
using oracle::pref;

namespace {

std::uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_SUITE("rules") {

TEST_CASE("eval_median_rule worked examples") {
  MedianRule r1(align("abc"), {0, 2});
  CHECK(eval_median_rule(r1, std::vector<Pos>{0, 2, 2}) == 2);
  MedianRule r2(align("abc"), {0, 0});
  CHECK(eval_median_rule(r2, std::vector<Pos>{1, 2, 2}) == 1);
  CHECK_THROWS_AS(eval_median_rule(r1, std::vector<Pos>{0, 1}), ArityError);
}

TEST_CASE("unanimous peaks always win, for every rule") {
  for (const Alignment& a : all_canonical_alignments(4)) {
    for (const MedianRule& r : enumerate_median_rules(4, a, false)) {
      for (Pos x = 0; x < 4; ++x) {
        std::vector<Pos> peaks(4, x);
        CHECK(eval_median_rule(r, peaks) == x);
      }
    }
  }
}

TEST_CASE("eval agrees with a sort-based median") {
  Alignment a = align("abcd");
  for (const MedianRule& r : enumerate_median_rules(3, a, false)) {
    for (Pos p1 = 0; p1 < 4; ++p1)
      for (Pos p2 = 0; p2 < 4; ++p2)
        for (Pos p3 = 0; p3 < 4; ++p3) {
          std::vector<int> all = {p1, p2, p3};
          for (Pos ph : r.phantoms) all.push_back(ph);
          CHECK(eval_median_rule(r, std::vector<Pos>{p1, p2, p3}) ==
                oracle::brute_median(all));
        }
  }
}

TEST_CASE("raising one peak never lowers the outcome") {
  Alignment a = align("abcd");
  for (const MedianRule& r : enumerate_median_rules(4, a, false)) {
    for_each_profile(4, 4, [&](std::span<const int> digits) {
      std::vector<Pos> peaks(digits.begin(), digits.end());
      for (int i = 0; i < 4; ++i) {
        if (peaks[i] + 1 >= 4) continue;
        std::vector<Pos> higher = peaks;
        ++higher[i];
        CHECK(eval_median_rule(r, higher) >= eval_median_rule(r, peaks));
      }
    });
  }
}

TEST_CASE("rule enumeration counts match the binomial formula") {
  for (int m = 3; m <= 5; ++m) {
    Alignment a = all_canonical_alignments(m).front();
    for (int n = 3; n <= 6; ++n)
      CHECK(enumerate_median_rules(n, a, false).size() == binom(m + n - 2, n - 1));
  }
  // m=3, n=3: six rules, exactly one of which touches both ends.
  auto nvp = enumerate_median_rules(3, align("abc"), true);
  REQUIRE(nvp.size() == 1);
  CHECK(nvp.front().phantoms == std::vector<Pos>{0, 2});
  CHECK(enumerate_median_rules(4, align("abcd"), false).size() == 20);
}

TEST_CASE("make_true_median") {
  auto s3 = SupportSpec::of({align("abc")});
  auto f3 = make_true_median(3, s3);
  CHECK(f3.rule_for(align("abc")).phantoms == std::vector<Pos>{0, 2});

  auto s4 = SupportSpec::of({align("abcd"), align("bdac")});
  auto f5 = make_true_median(5, s4);
  for (const auto& r : f5.rules) CHECK(r.phantoms == std::vector<Pos>{0, 0, 3, 3});

  CHECK_THROWS_AS(make_true_median(4, s3), PremiseNotMet);
}

TEST_CASE("true median equals the plain peak median on every profile") {
  for (int m = 3; m <= 4; ++m) {
    for (int n : {3, 5}) {
      auto s = SupportSpec::of({all_canonical_alignments(m).front()});
      auto tab = to_tabular(make_true_median(n, s));
      const auto& t = tab.tables.front();
      for_each_profile(n, static_cast<int>(t.domain.size()), [&](std::span<const int> d) {
        std::vector<int> peaks;
        for (int i : d) peaks.push_back(t.alignment.position_of(t.domain[i].peak()));
        std::sort(peaks.begin(), peaks.end());
        const Alt direct = t.alignment.order[peaks[peaks.size() / 2]];
        CHECK(t.outcomes[TabularSCF::profile_index(t, d)] == direct);
      });
    }
  }
}

TEST_CASE("make_symmetric_order_statistic") {
  auto s = SupportSpec::of(all_canonical_alignments(3));
  SUBCASE("k=1, n=3 coincides with the true median") {
    auto f = make_symmetric_order_statistic(3, 1, s);
    CHECK(f == make_true_median(3, s));
  }
  SUBCASE("n=5, k=2 places two phantoms per end") {
    auto f = make_symmetric_order_statistic(5, 2, s);
    for (const auto& r : f.rules) {
      CHECK(r.phantoms.size() == 4);
      CHECK(r.is_nvp());
    }
  }
  SUBCASE("k out of range") {
    CHECK_THROWS_AS(make_symmetric_order_statistic(3, 2, s), PremiseNotMet);
    auto s4 = SupportSpec::of({align("abcd")});
    CHECK_THROWS_AS(make_symmetric_order_statistic(3, 1, s4), PremiseNotMet);
  }
}

TEST_CASE("constructed families are NVP") {
  auto s = SupportSpec::of(all_canonical_alignments(3));
  for (int n : {3, 5}) CHECK(make_true_median(n, s).is_nvpms());
  for (int n = 3; n <= 5; ++n)
    for (int k = 1; k <= n - 2; ++k)
      CHECK(make_symmetric_order_statistic(n, k, s).is_nvpms());
}

TEST_CASE("to_tabular worked examples") {
  auto s = SupportSpec::of({align("abc")});
  auto tab = to_tabular(make_true_median(3, s));
  const auto& t = tab.tables.front();
  CHECK(t.outcomes.size() == 64);

  // Profile (b>c>a, c>b>a, c>b>a) has peaks (1,2,2); median with {0,2} is c.
  std::vector<Preference> profile = {pref("bca"), pref("cba"), pref("cba")};
  std::vector<int> digits;
  for (const auto& p : profile)
    digits.push_back(static_cast<int>(
        std::lower_bound(t.domain.begin(), t.domain.end(), p) - t.domain.begin()));
  CHECK(t.outcomes[TabularSCF::profile_index(t, digits)] == oracle::ids("c")[0]);
}

TEST_CASE("order_statistic_value agrees with eval wherever it applies") {
  Alignment a = align("abc");
  auto s = SupportSpec::of({a});

  auto f = make_symmetric_order_statistic(3, 1, s);
  CHECK(order_statistic_value(f, a, std::vector<Pos>{0, 1, 2}) == 1);

  ProjectedSCF all_left(3, {MedianRule(a, {0, 0})});
  CHECK(order_statistic_value(all_left, a, std::vector<Pos>{1, 2, 2}) == 1);

  auto s5 = SupportSpec::of({align("abcd")});
  auto f5 = make_true_median(5, s5);
  CHECK(order_statistic_value(f5, align("abcd"), std::vector<Pos>{0, 0, 3, 3, 3}) == 3);

  ProjectedSCF interior(3, {MedianRule(a, {0, 1})});
  CHECK_THROWS_AS(order_statistic_value(interior, a, std::vector<Pos>{0, 1, 2}),
                  PremiseNotMet);

  // Exhaustive agreement for two-ended rules.
  for (int n : {3, 4, 5}) {
    for (int k = 1; k <= n - 1; ++k) {
      std::vector<Pos> ph;
      for (int i = 0; i < k; ++i) ph.push_back(0);
      for (int i = 0; i < n - 1 - k; ++i) ph.push_back(2);
      ProjectedSCF g(n, {MedianRule(a, ph)});
      for_each_profile(n, 3, [&](std::span<const int> d) {
        std::vector<Pos> peaks(d.begin(), d.end());
        CHECK(order_statistic_value(g, a, peaks) ==
              eval_median_rule(g.rules.front(), peaks));
      });
    }
  }
}

}  // TEST_SUITE
