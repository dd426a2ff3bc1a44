#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "peakcheck/checker.hpp"
#include "peakcheck/rules.hpp"
#include "peakcheck/types.hpp"

namespace peakcheck {

struct SearchOptions {
  bool allow_large = false;  // lift the m <= 5 / n <= 6 desk-scale guard
};

/// Result of a backtracking search over per-alignment NVP median-rule
/// assignments under pairwise shared-monotonicity constraints.
struct AssignmentSearchReport {
  SupportSpec support;
  int n = 0;
  std::vector<ProjectedSCF> found;  // sorted; each re-passes check_implementable
  std::uint64_t nodes_explored = 0;
  std::chrono::milliseconds elapsed{0};
};

/// Enumerates NVP rule assignments per support alignment depth-first,
/// pruning a partial assignment as soon as two assigned alignments violate
/// shared-monotonicity on a shared profile. Every survivor is re-checked
/// through check_implementable before being reported.
AssignmentSearchReport search_implementable_nvpms(int n, const SupportSpec& s,
                                                  const SearchOptions& opts = {});

enum class Family {
  SymmetricOrderStatistic,
  TrueMedianOnly,
  Empty,
  AllNVPMS,
  ConditionedFamily,
};

std::string to_string(Family f);

struct CharacterizationVerdict {
  Family expected_family = Family::Empty;
  bool matches = false;
  std::vector<ProjectedSCF> extras;   // found but not expected
  std::vector<ProjectedSCF> missing;  // expected but not found
};

struct CharacterizationResult {
  CharacterizationVerdict verdict;
  AssignmentSearchReport report;
  // Replay of the no-veto-power necessity construction: an
  // all-phantoms-one-side assignment admits a strictly profitable cross-state
  // deviation for the agent peaking at the far end.
  Verdict deviation_replay;
};

/// Full-support characterization: m = 3 expects the symmetric
/// order-statistic family (size n-2); m > 3 expects no survivors for even n
/// and exactly the true median for odd n.
CharacterizationResult verify_full_support_theorem(int n, int m,
                                                   const SearchOptions& opts = {});

/// Exhaustive consistency check over all canonical alignment pairs with a
/// nonempty domain intersection: shared peaks number at least two, occupy
/// consecutive positions in both alignments, and agree in order up to
/// reversal.
Verdict verify_lemma_consistency(int m);

/// For every alignment pair sharing peaks and every pair of median rules:
/// outcome agreement over two-preference profiles at an adjacent shared-peak
/// pair holds iff the phantom counts on-or-before the earlier peak agree, and
/// full shared-monotonicity over the intersection holds iff the counts agree
/// at every adjacent pair.
Verdict verify_lemma_symmetry(int n, int m);

/// For the raw pair {alignment, exact reverse}: identical rules (as outcome
/// functions) are implementable, differing rules break shared-monotonicity on
/// a concrete profile.
Verdict verify_reverse_pair(int n, const Alignment& a);

/// Premise: all pairwise domain intersections in the support are empty.
/// Asserts every NVP rule assignment passes check_implementable.
Verdict verify_disjoint_support(int n, const SupportSpec& s);

/// Premise: constant shared peaks T across the support. Asserts T is a
/// contiguous run of every alignment and that every NVP assignment whose
/// phantom counts agree at each adjacent pair inside T (across every
/// alignment pair) passes check_implementable.
Verdict verify_constant_shared_peaks(int n, const SupportSpec& s);

/// Number of phantoms of `r` with positions on or before `alt`, reading the
/// rule's alignment left-to-right, or right-to-left when `reversed` is set.
int phantoms_on_or_before(const MedianRule& r, Alt alt, bool reversed);

}  // namespace peakcheck
