#include "peakcheck/search.hpp"

#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "peakcheck/domain.hpp"

using namespace peakcheck;
using oracle::align;

namespace {

// Pruning-free oracle: the full product of NVP rules filtered through the
// public composite check.
std::vector<ProjectedSCF> brute_force_nvpms(int n, const SupportSpec& s) {
  std::vector<std::vector<MedianRule>> candidates;
  for (const Alignment& a : s.alignments)
    candidates.push_back(enumerate_median_rules(n, a, true));
  std::vector<ProjectedSCF> found;
  std::vector<int> pick(s.size(), 0);
  while (true) {
    std::vector<MedianRule> rules;
    for (int i = 0; i < s.size(); ++i) rules.push_back(candidates[i][pick[i]]);
    ProjectedSCF f(n, std::move(rules));
    if (check_implementable(f, s).implementable()) found.push_back(std::move(f));
    int i = s.size() - 1;
    while (i >= 0 && pick[i] + 1 == static_cast<int>(candidates[i].size())) pick[i--] = 0;
    if (i < 0) break;
    ++pick[i];
  }
  std::sort(found.begin(), found.end());
  return found;
}

}  // namespace

TEST_SUITE("search") {

TEST_CASE("consistency verifier holds at m = 3 and m = 4") {
  CHECK(verify_lemma_consistency(3).holds);
  CHECK(verify_lemma_consistency(4).holds);
  CHECK_THROWS_AS(verify_lemma_consistency(7), PremiseNotMet);
}

TEST_CASE("symmetry verifier holds at (n, m) = (3, 3)") {
  CHECK(verify_lemma_symmetry(3, 3).holds);
}

TEST_CASE("full m=3 support at n=3 admits exactly the both-ends rule everywhere") {
  auto s = SupportSpec::of(all_canonical_alignments(3));
  auto report = search_implementable_nvpms(3, s);
  REQUIRE(report.found.size() == 1);
  for (const auto& r : report.found.front().rules)
    CHECK(r.phantoms == std::vector<Pos>{0, 2});
  CHECK(report.nodes_explored > 0);
}

TEST_CASE("disjoint pair at n=3 keeps the single NVP combination") {
  auto s = SupportSpec::of({align("abcd"), align("bdac")});
  auto report = search_implementable_nvpms(3, s);
  CHECK(report.found.size() == 1);
}

TEST_CASE("backtracking agrees with the pruning-free product") {
  for (int n : {3, 4, 5}) {
    auto s = SupportSpec::of(all_canonical_alignments(3));
    CHECK(search_implementable_nvpms(n, s).found == brute_force_nvpms(n, s));
  }
  auto s4 = SupportSpec::of(all_canonical_alignments(4));
  CHECK(search_implementable_nvpms(3, s4).found == brute_force_nvpms(3, s4));
}

TEST_CASE("every survivor re-passes the composite check") {
  auto s = SupportSpec::of(all_canonical_alignments(3));
  for (const auto& f : search_implementable_nvpms(4, s).found)
    CHECK(check_implementable(f, s).implementable());
}

TEST_CASE("enlarging the support never enlarges the found set") {
  auto full = SupportSpec::of(all_canonical_alignments(3));
  auto pair = SupportSpec::of({align("abc"), align("acb")});
  auto single = SupportSpec::of({align("abc")});
  for (int n : {3, 4}) {
    auto found_full = search_implementable_nvpms(n, full).found;
    auto found_pair = search_implementable_nvpms(n, pair).found;
    auto found_single = search_implementable_nvpms(n, single).found;

    auto project = [n](const std::vector<ProjectedSCF>& fs, const SupportSpec& onto) {
      std::set<ProjectedSCF> out;
      for (const auto& f : fs) {
        std::vector<MedianRule> rules;
        for (const auto& r : f.rules)
          if (onto.contains(r.alignment)) rules.push_back(r);
        out.insert(ProjectedSCF(n, std::move(rules)));
      }
      return out;
    };
    auto as_set = [](const std::vector<ProjectedSCF>& fs) {
      return std::set<ProjectedSCF>(fs.begin(), fs.end());
    };
    for (const auto& f : project(found_full, pair)) CHECK(as_set(found_pair).count(f));
    for (const auto& f : project(found_pair, single)) CHECK(as_set(found_single).count(f));
  }
}

TEST_CASE("full-support characterization at m = 3") {
  for (int n : {3, 4}) {
    auto res = verify_full_support_theorem(n, 3);
    CHECK(res.verdict.expected_family == Family::SymmetricOrderStatistic);
    CHECK(res.verdict.matches);
    CHECK(res.report.found.size() == static_cast<std::size_t>(n - 2));
    CHECK(res.deviation_replay.holds);
  }
}

TEST_CASE("full-support characterization at m = 4, n = 3 is the true median") {
  auto res = verify_full_support_theorem(3, 4);
  CHECK(res.verdict.expected_family == Family::TrueMedianOnly);
  CHECK(res.verdict.matches);
  REQUIRE(res.report.found.size() == 1);
  auto support = SupportSpec::of(all_canonical_alignments(4));
  CHECK(res.report.found.front() == make_true_median(3, support));
  CHECK(res.deviation_replay.holds);
}

TEST_CASE("reverse-pair observation") {
  CHECK(verify_reverse_pair(3, align("abc")).holds);
  CHECK(verify_reverse_pair(4, align("abc")).holds);
  CHECK(verify_reverse_pair(4, align("abcd")).holds);
  // The raw pair is deliberately accepted in either orientation.
  CHECK(verify_reverse_pair(3, align("cba")).holds);
}

TEST_CASE("disjoint-support proposition") {
  auto s = SupportSpec::of({align("abcd"), align("bdac")});
  CHECK(verify_disjoint_support(3, s).holds);
  CHECK(verify_disjoint_support(4, s).holds);
  auto overlapping = SupportSpec::of({align("abc"), align("bca")});
  CHECK_THROWS_AS(verify_disjoint_support(3, overlapping), PremiseNotMet);
}

TEST_CASE("constant-shared-peaks proposition") {
  CHECK(verify_constant_shared_peaks(3, SupportSpec::of({align("abcd"), align("bacd")}))
            .holds);
  CHECK(verify_constant_shared_peaks(5, SupportSpec::of({align("abcd"), align("abdc")}))
            .holds);
  auto diverging = SupportSpec::of({align("abc"), align("acb"), align("bac")});
  CHECK_THROWS_AS(verify_constant_shared_peaks(3, diverging), PremiseNotMet);
}

TEST_CASE("count-mismatched NVP assignments do break shared-monotonicity") {
  // {abcd, abdc} share T = {c, d}; an unconditioned pair of NVP rules at
  // n = 5 must fail the composite check.
  auto s = SupportSpec::of({align("abcd"), align("abdc")});
  ProjectedSCF f(5, {MedianRule(align("abcd"), {0, 0, 0, 3}),
                     MedianRule(align("abdc"), {0, 0, 3, 3})});
  auto v = check_implementable(f, s);
  CHECK(v.conclusion == Conclusion::NotImplementable);
  CHECK_FALSE(v.shared_monotonic.holds);
}

TEST_CASE("scale guard refuses huge instances unless overridden") {
  auto s = SupportSpec::of(all_canonical_alignments(3));
  CHECK_THROWS_AS(search_implementable_nvpms(7, s), ScaleExceeded);
}

}  // TEST_SUITE
