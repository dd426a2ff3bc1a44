#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace peakcheck {

using Alt = std::uint8_t;  // dense alternative id, 0..m-1
using Pos = std::uint8_t;  // position along an alignment, 0..m-1

// Scale guards refuse anything beyond desk scale unless overridden.
inline constexpr int kMaxAlternatives = 8;
inline constexpr int kDefaultMaxM = 5;
inline constexpr int kDefaultMaxN = 6;

// ---------------------------------------------------------------------------
// Error taxonomy shared across modules.
// ---------------------------------------------------------------------------

struct InvalidAlignment : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct PremiseNotMet : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ArityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct IncompleteSCF : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SupportMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ScaleExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidMessage : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Core value types. All are immutable after construction; every operation on
// them is a pure function.
// ---------------------------------------------------------------------------

/// A strict order over all m alternatives; order[0] is the leftmost one.
/// An alignment and its exact reverse induce the same single-peaked domain,
/// so they form one reversal class. The canonical representative of a class
/// is the lexicographically smaller of the two id sequences.
struct Alignment {
  std::vector<Alt> order;
  bool canonical = false;

  Alignment() = default;
  explicit Alignment(std::vector<Alt> o);

  int m() const { return static_cast<int>(order.size()); }
  Pos position_of(Alt a) const;
  Alignment reversed() const;

  friend bool operator==(const Alignment& x, const Alignment& y) {
    return x.order == y.order;
  }
  friend std::strong_ordering operator<=>(const Alignment& x, const Alignment& y) {
    return x.order <=> y.order;
  }
};

/// A strict linear order over all alternatives, best first. The peak is the
/// first entry.
struct Preference {
  std::vector<Alt> ranking;

  Preference() = default;
  explicit Preference(std::vector<Alt> r);

  int m() const { return static_cast<int>(ranking.size()); }
  Alt peak() const { return ranking.front(); }
  /// 0 = best. Linear scan; m never exceeds kMaxAlternatives.
  int rank_of(Alt a) const;
  /// true iff this preference ranks x weakly above y.
  bool weakly_prefers(Alt x, Alt y) const { return rank_of(x) <= rank_of(y); }
  bool strictly_prefers(Alt x, Alt y) const { return rank_of(x) < rank_of(y); }

  friend bool operator==(const Preference& x, const Preference& y) {
    return x.ranking == y.ranking;
  }
  friend std::strong_ordering operator<=>(const Preference& x, const Preference& y) {
    return x.ranking <=> y.ranking;
  }
};

struct Profile {
  std::vector<Preference> prefs;

  int n() const { return static_cast<int>(prefs.size()); }
  friend bool operator==(const Profile&, const Profile&) = default;
};

struct State {
  Alignment alignment;
  Profile profile;
};

/// The set of alignments the designer deems possible, stored as canonical
/// representatives: sorted, one entry per reversal class. Only the support
/// is housed; the prior's probabilities are deliberately not modelled.
struct SupportSpec {
  std::vector<Alignment> alignments;

  /// Canonicalizes, sorts and collapses duplicate reversal classes.
  /// `collapsed`, when given, receives the raw entries that were dropped.
  static SupportSpec of(const std::vector<Alignment>& raw,
                        std::vector<Alignment>* collapsed = nullptr);

  int size() const { return static_cast<int>(alignments.size()); }
  bool empty() const { return alignments.empty(); }
  int m() const { return alignments.empty() ? 0 : alignments.front().m(); }
  bool contains(const Alignment& a) const;

  friend bool operator==(const SupportSpec&, const SupportSpec&) = default;
};

// Presentation-only labels. id i gets labels[i]; domain logic never looks at
// them.
std::vector<std::string> default_labels(int m);

}  // namespace peakcheck
