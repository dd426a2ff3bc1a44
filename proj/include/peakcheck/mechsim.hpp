#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "peakcheck/rules.hpp"
#include "peakcheck/types.hpp"

namespace peakcheck {

enum class MechKind { Canonical, PartiallyHonest };

/// One admissible (alignment, preference) report. Alignments are carried in
/// raw orientation (either representative of a support class); agreement and
/// truth of a claim are judged at the reversal-class level, which is the
/// only level the induced domains can distinguish.
struct Claim {
  std::uint16_t class_idx;  // support class
  bool reversed;            // raw orientation relative to the canonical order
  std::uint16_t pref_idx;   // into the class's single-peaked domain
};

/// A concrete message. `favorite` is only read by the canonical construction,
/// `rule` only by the partially-honest one.
struct MsgOption {
  std::uint8_t z;
  Alt favorite;
  std::uint16_t claim;
  std::uint16_t rule;
};

/// An indirect mechanism over a finite message space. Integer messages are
/// truncated at int_cap: the outcome function only reads the argmax pattern
/// of the integers, and deviation scans additionally probe int_cap + 1, which
/// stands in for every larger integer. The truncated game therefore has
/// exactly the equilibria of the unbounded one.
struct Mechanism {
  MechKind kind = MechKind::Canonical;
  int n = 0;
  int int_cap = 2;
  ProjectedSCF f;
  SupportSpec support;
  std::optional<int> honest_agent;

  struct ClassData {
    Alignment alignment;                    // canonical
    std::vector<Preference> domain;         // sorted
    std::array<Pos, kMaxAlternatives> pos_of{};
    std::vector<MedianRule> rule_pool;      // descriptors for message rules
    std::uint16_t f_rule_idx = 0;           // f's own rule inside rule_pool
  };
  std::vector<ClassData> classes;
  std::vector<Claim> claims;
  std::vector<Alt> claim_peak;  // peak alternative per claim

  // Message-space shape: options enumerate (claim, favorite, rule, z).
  int fav_count = 1;   // m for the canonical mechanism, 1 otherwise
  int rule_count = 1;  // rule-pool size for the partially-honest mechanism

  std::size_t options_per_agent() const {
    return claims.size() * fav_count * rule_count * int_cap;
  }
  std::uint32_t option_index(std::uint16_t claim, int fav, int rule, int z) const;
  MsgOption option_at(std::uint32_t index) const;

  /// The outcome function g, on message indices. Throws InvalidMessage on a
  /// wrong arity or out-of-range component.
  Alt outcome(std::span<const std::uint32_t> message_profile) const;

  /// Fast path used by the scanners; no validation.
  Alt outcome_fast(std::span<const MsgOption> msgs) const;
};

/// The integer-game construction: report an integer, a favorite alternative
/// and a claim. With at least n-1 agents agreeing on the claimed class, the
/// projected rule for that class runs on all claimed peaks; otherwise the
/// lowest-indexed agent among those sending the largest integer gets their
/// favorite.
Mechanism canonical_mechanism(const ProjectedSCF& f, int int_cap);

/// The partially-honest construction: report a claim, a median-rule
/// descriptor and an integer. Agreement of n-1 claims runs f's rule for the
/// agreed class; otherwise the lowest-indexed max-integer sender's descriptor
/// runs on all claimed peaks along that sender's claimed class.
Mechanism partially_honest_mechanism(const ProjectedSCF& f, int honest_agent, int int_cap);

struct MechViolation {
  std::string kind;  // truthful_outcome_mismatch, profitable_deviation_from_truth,
                     // bad_truthful_equilibrium, dominance_failure
  std::vector<std::uint32_t> message_profile;
  int agent = -1;
  Alt outcome = 0;
  Alt expected = 0;
};

/// Per-state result of the exhaustive equilibrium analysis.
struct EquilibriumReport {
  int class_idx = 0;
  std::vector<int> profile_digits;  // true preferences, as domain indices
  Alt f_outcome = 0;
  Alt truthful_outcome = 0;
  bool truthful_equilibrium_ok = false;
  std::vector<Alt> truthful_nash_outcomes;  // over all-truthful-claim equilibria
  bool dominant_ok = false;
  bool strict_clause = false;  // reported, not part of the pass criterion
  int equilibria_scanned = 0;
  int honesty_killed = 0;       // profiles surviving every strict deviation but
                                // discarded by the honest agent's refinement
  int spurious_false_class = 0;  // equilibria with every claim on one false class
  bool near_unanimous = false;

  std::vector<MechViolation> violations;

  bool ok() const {
    return violations.empty() && truthful_equilibrium_ok && dominant_ok &&
           truthful_nash_outcomes.size() == 1 && truthful_nash_outcomes[0] == f_outcome;
  }
};

struct MechCheckOptions {
  int jobs = 1;
  bool honesty_refinement = true;  // control runs disable the refinement
  std::size_t max_options_per_agent = 4096;
  std::size_t max_states = 20000;
  std::size_t limit_states = 0;  // > 0: only scan the first k states (test plumbing)
};

/// For every state: locates the truthful message profile and verifies it
/// yields f(state) with no profitable unilateral deviation; scans all message
/// profiles in which every agent claims their true private preference and
/// verifies every Nash equilibrium among them reproduces f(state); and
/// verifies truthful private reporting weakly dominates under truthful public
/// reports, recording the strict-preference clause separately.
std::vector<EquilibriumReport> check_mixed_implementation(
    const Mechanism& mech, const ProjectedSCF& f, const SupportSpec& s,
    const MechCheckOptions& opts = {});

/// Same scan for the partially-honest construction: the honest agent
/// strictly prefers truthful-class claims whenever they cost nothing, which
/// removes the all-agents-on-a-false-class equilibria.
std::vector<EquilibriumReport> check_partially_honest_implementation(
    const ProjectedSCF& f, const SupportSpec& s, int honest_agent, int int_cap,
    const MechCheckOptions& opts = {});

bool all_reports_ok(const std::vector<EquilibriumReport>& reports);

}  // namespace peakcheck
