#include "peakcheck/domain.hpp"

#include <set>

#include "doctest.h"
#include "oracles.hpp"

using namespace peakcheck;
using oracle::align;
using oracle::pref;

TEST_SUITE("domain") {

TEST_CASE("canonicalize_alignment picks the lexicographically smaller orientation") {
  CHECK(canonicalize_alignment(align("abc")) == align("abc"));
  CHECK(canonicalize_alignment(align("cba")) == align("abc"));
  // bdac vs its reverse cadb: direct comparison of the id sequences.
  Alignment bdac = align("bdac");
  Alignment expected = bdac.order <= bdac.reversed().order ? bdac : bdac.reversed();
  CHECK(canonicalize_alignment(bdac) == expected);
  CHECK(canonicalize_alignment(bdac) == align("bdac"));
  // Idempotent.
  CHECK(canonicalize_alignment(canonicalize_alignment(bdac)) ==
        canonicalize_alignment(bdac));
}

TEST_CASE("malformed permutations are rejected") {
  CHECK_THROWS_AS(Alignment({0, 0, 1}), InvalidAlignment);
  CHECK_THROWS_AS(Alignment({0, 2}), InvalidAlignment);
  CHECK_THROWS_AS(Alignment(std::vector<Alt>{}), InvalidAlignment);
  CHECK_THROWS_AS(Preference({1, 1, 0}), InvalidAlignment);
}

TEST_CASE("is_single_peaked matches the pairwise definition exhaustively") {
  for (int m = 3; m <= 5; ++m) {
    std::vector<Alt> base(m);
    std::iota(base.begin(), base.end(), Alt{0});
    std::vector<Alignment> aligns;
    std::vector<Alt> perm = base;
    do {
      aligns.emplace_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (const Alignment& a : aligns)
      for (const Preference& p : oracle::all_linear_orders(m))
        CHECK(is_single_peaked(p, a) == oracle::brute_single_peaked(p, a));
  }
}

TEST_CASE("is_single_peaked worked examples") {
  CHECK(is_single_peaked(pref("bca"), align("abc")));
  CHECK_FALSE(is_single_peaked(pref("acb"), align("abc")));
  // Ranking equal to the alignment itself: peak at the left end.
  CHECK(is_single_peaked(pref("abcd"), align("abcd")));
  CHECK_THROWS_AS(is_single_peaked(pref("ab"), align("abc")), DomainMismatch);
}

TEST_CASE("enumerate_single_peaked has 2^(m-1) members, equal to brute force") {
  for (int m = 3; m <= 5; ++m) {
    for (const Alignment& a : all_canonical_alignments(m)) {
      auto domain = enumerate_single_peaked(a);
      CHECK(domain.size() == (std::size_t{1} << (m - 1)));
      CHECK(domain == oracle::brute_domain(a));
      CHECK(domain == enumerate_single_peaked(a.reversed()));
    }
  }
}

TEST_CASE("domain of abc is the frozen four-preference set") {
  auto d = enumerate_single_peaked(align("abc"));
  std::vector<Preference> expected = {pref("abc"), pref("bac"), pref("bca"), pref("cba")};
  std::sort(expected.begin(), expected.end());
  CHECK(d == expected);
}

TEST_CASE("domain_intersection worked examples") {
  auto i1 = domain_intersection(align("abc"), align("bca"));
  std::vector<Preference> expected = {pref("bca"), pref("cba")};
  CHECK(i1 == expected);

  auto self = domain_intersection(align("abc"), align("abc"));
  CHECK(self.size() == 4);

  CHECK(domain_intersection(align("abcd"), align("bdac")).empty());
  CHECK_THROWS_AS(domain_intersection(align("abc"), align("abcd")), DomainMismatch);
}

TEST_CASE("shared_peaks worked examples and symmetry") {
  CHECK(shared_peaks(align("abc"), align("bca")) == oracle::ids("bc"));
  CHECK(shared_peaks(align("abcd"), align("abdc")) == oracle::ids("cd"));
  CHECK(shared_peaks(align("abcd"), align("bdac")).empty());
  for (const Alignment& a : all_canonical_alignments(4))
    for (const Alignment& b : all_canonical_alignments(4))
      CHECK(shared_peaks(a, b) == shared_peaks(b, a));
}

TEST_CASE("shared peak sets obey contiguity, size and order agreement") {
  for (int m = 3; m <= 4; ++m) {
    auto classes = all_canonical_alignments(m);
    for (std::size_t i = 0; i < classes.size(); ++i) {
      for (std::size_t j = i + 1; j < classes.size(); ++j) {
        auto t = shared_peaks(classes[i], classes[j]);
        if (t.empty()) continue;
        CHECK(t.size() >= 2);
        auto run1 = contiguous_run(classes[i], t);
        auto run2 = contiguous_run(classes[j], t);
        REQUIRE(run1.has_value());
        REQUIRE(run2.has_value());
        std::vector<Alt> rev2(run2->rbegin(), run2->rend());
        CHECK((*run1 == *run2 || *run1 == rev2));
      }
    }
  }
}

TEST_CASE("intersection is closed under swapping the two best alternatives") {
  auto classes = all_canonical_alignments(4);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t j = i + 1; j < classes.size(); ++j) {
      auto inter = domain_intersection(classes[i], classes[j]);
      std::set<Preference> members(inter.begin(), inter.end());
      for (const Preference& p : inter) {
        std::vector<Alt> swapped = p.ranking;
        std::swap(swapped[0], swapped[1]);
        CHECK(members.count(Preference(swapped)) == 1);
      }
    }
  }
}

TEST_CASE("has_constant_shared_peaks") {
  SUBCASE("single pair meets the premise automatically") {
    auto s = SupportSpec::of({align("abcd"), align("abdc")});
    auto v = has_constant_shared_peaks(s);
    CHECK(v.constant);
    CHECK(v.shared == oracle::ids("cd"));
  }
  SUBCASE("diverging pairs are reported with a witness") {
    auto s = SupportSpec::of({align("abc"), align("acb"), align("bac")});
    auto v = has_constant_shared_peaks(s);
    CHECK_FALSE(v.constant);
    REQUIRE(v.witness_pair.has_value());
    CHECK(v.witness_first != v.witness_second);
  }
  SUBCASE("duplicate reversal classes collapse and fail the premise") {
    auto s = SupportSpec::of({align("abc"), align("cba")});
    CHECK(s.size() == 1);
    CHECK_THROWS_AS(has_constant_shared_peaks(s), PremiseNotMet);
  }
}

TEST_CASE("support collapses reversal duplicates and reports them") {
  std::vector<Alignment> collapsed;
  auto s = SupportSpec::of({align("abc"), align("bca"), align("acb")}, &collapsed);
  CHECK(s.size() == 2);  // bca and acb are the same class
  CHECK(collapsed.size() == 1);
}

TEST_CASE("all_canonical_alignments counts m!/2 classes") {
  CHECK(all_canonical_alignments(3).size() == 3);
  CHECK(all_canonical_alignments(4).size() == 12);
  CHECK(all_canonical_alignments(5).size() == 60);
}

}  // TEST_SUITE
