#pragma once

#include <functional>
#include <span>
#include <vector>

#include "peakcheck/types.hpp"

namespace peakcheck {

/// A generalized median rule for one alignment: n-1 fixed phantom peaks,
/// stored as sorted positions along the alignment's canonical orientation.
struct MedianRule {
  Alignment alignment;         // canonical representative
  std::vector<Pos> phantoms;   // sorted, size n-1

  MedianRule() = default;
  MedianRule(Alignment a, std::vector<Pos> ph);

  int n() const { return static_cast<int>(phantoms.size()) + 1; }
  /// At least one phantom on each extreme end.
  bool is_nvp() const;

  friend bool operator==(const MedianRule& x, const MedianRule& y) {
    return x.alignment == y.alignment && x.phantoms == y.phantoms;
  }
  friend std::strong_ordering operator<=>(const MedianRule& x, const MedianRule& y);
};

/// The n-th smallest element of the multiset of the n reported peak positions
/// and the rule's n-1 phantom positions. Throws ArityError on a wrong peak
/// count.
Pos eval_median_rule(const MedianRule& r, std::span<const Pos> peaks);

/// All multisets of n-1 phantom positions over 0..m-1 for the given
/// alignment, C(m+n-2, n-1) of them, in lexicographic order. With `nvp_only`
/// keeps only rules placing a phantom on both ends.
std::vector<MedianRule> enumerate_median_rules(int n, const Alignment& a, bool nvp_only);

/// One median rule per alignment in a support: a projected SCF. The keys are
/// exactly the support's canonical classes.
struct ProjectedSCF {
  int n = 0;
  std::vector<MedianRule> rules;  // sorted by alignment

  ProjectedSCF() = default;
  ProjectedSCF(int agents, std::vector<MedianRule> rs);

  SupportSpec support() const;
  const MedianRule& rule_for(const Alignment& canonical) const;
  bool is_nvpms() const;

  friend bool operator==(const ProjectedSCF&, const ProjectedSCF&) = default;
  friend std::strong_ordering operator<=>(const ProjectedSCF& x, const ProjectedSCF& y);
};

/// Phantoms split evenly between the two ends; equals the plain median of the
/// reported peaks. Requires n odd.
ProjectedSCF make_true_median(int n, const SupportSpec& s);

/// m = 3 only: k phantoms on the leftmost and n-1-k on the rightmost
/// alternative of each alignment, with 1 <= k <= n-2. "Leftmost" follows the
/// cyclic orientations abc, bca, cab of the three reversal classes, which is
/// the placement pattern that stays consistent across the full support.
ProjectedSCF make_symmetric_order_statistic(int n, int k, const SupportSpec& s);

/// An SCF in explicit state-to-alternative form. Per alignment, outcomes are
/// indexed by mixed-radix profile index over the sorted single-peaked domain
/// (agent 0 most significant).
struct TabularSCF {
  struct Table {
    Alignment alignment;
    std::vector<Preference> domain;  // sorted
    std::vector<Alt> outcomes;       // size |domain|^n
  };

  int n = 0;
  std::vector<Table> tables;  // sorted by alignment

  const Table& table_for(const Alignment& canonical) const;
  static std::size_t profile_index(const Table& t, std::span<const int> digits);
};

/// Expands a projected SCF into tabular form by evaluating the median rule on
/// every profile's peaks.
TabularSCF to_tabular(const ProjectedSCF& f);

/// Builds a tabular SCF from an arbitrary outcome function over profiles of
/// single-peaked preferences. Test and fixture plumbing.
TabularSCF tabulate(
    int n, const SupportSpec& s,
    const std::function<Alt(const Alignment&, const std::vector<Preference>&)>& outcome);

/// Closed form for rules with all phantoms at the two ends, k of them at
/// position 0: the (n-k)-th smallest peak. Must agree with eval_median_rule.
/// Throws PremiseNotMet when the rule has interior phantoms.
Pos order_statistic_value(const ProjectedSCF& f, const Alignment& a,
                          std::span<const Pos> peaks);

/// Visits every length-n digit vector with digits in 0..base-1, in
/// lexicographic order (digit 0 most significant).
void for_each_profile(int n, int base, const std::function<void(std::span<const int>)>& visit);

}  // namespace peakcheck
