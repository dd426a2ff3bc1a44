#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "peakcheck/types.hpp"

namespace peakcheck {

/// Returns the canonical representative of `a`'s reversal class: the
/// lexicographically smaller of the sequence and its reverse. Idempotent.
/// Throws InvalidAlignment on a malformed permutation.
Alignment canonicalize_alignment(const Alignment& a);

/// True iff `p` is single-peaked with respect to `a`: walking down the
/// ranking always extends a contiguous interval of positions around the peak.
/// Throws DomainMismatch when the alternative sets differ.
bool is_single_peaked(const Preference& p, const Alignment& a);

/// All 2^(m-1) preferences single-peaked with respect to `a`, sorted
/// lexicographically by ranking. Identical for `a` and its reverse.
std::vector<Preference> enumerate_single_peaked(const Alignment& a);

/// Set intersection of the two single-peaked domains, sorted.
std::vector<Preference> domain_intersection(const Alignment& a1, const Alignment& a2);

/// Peaks of the preferences shared by both domains, sorted by id. When
/// nonempty this set has size >= 2 and is contiguous in both alignments.
std::vector<Alt> shared_peaks(const Alignment& a1, const Alignment& a2);

struct ConstantSharedPeaksVerdict {
  bool constant = false;
  std::vector<Alt> shared;  // the common T when constant
  // First witness pair with diverging shared-peak sets otherwise.
  std::optional<std::pair<Alignment, Alignment>> witness_pair;
  std::vector<Alt> witness_first, witness_second;
};

/// Checks whether every unordered pair in the support shares the same
/// nonempty peak set T. Requires at least two reversal classes.
ConstantSharedPeaksVerdict has_constant_shared_peaks(const SupportSpec& s);

/// All canonical reversal classes over m alternatives (m!/2 of them), sorted.
std::vector<Alignment> all_canonical_alignments(int m);

/// Ordered list of T's elements as they appear left-to-right along `a`, or
/// nullopt when T does not occupy consecutive positions of `a`.
std::optional<std::vector<Alt>> contiguous_run(const Alignment& a,
                                               const std::vector<Alt>& t);

}  // namespace peakcheck
