#pragma once

#include <optional>
#include <string>
#include <vector>

#include "peakcheck/rules.hpp"
#include "peakcheck/types.hpp"

namespace peakcheck {

/// A counterexample found by one of the axiom checks. Only the fields that
/// the given kind needs are populated; replaying a witness through the public
/// operations reproduces the violation.
struct Witness {
  std::string kind;                    // "strategy_proofness", "unanimity", ...
  std::vector<Alignment> alignments;   // one, or two for shared-monotonicity
  std::vector<Preference> profile;
  std::optional<int> agent;
  std::optional<Preference> misreport;
  std::vector<int> permutation;        // anonymity only
  std::optional<Alt> outcome;
  std::optional<Alt> deviation_outcome;
  std::optional<Alt> required;
};

struct Verdict {
  bool holds = true;
  std::optional<Witness> witness;

  static Verdict ok() { return {}; }
  static Verdict fail(Witness w) { return {false, std::move(w)}; }
};

struct CheckOptions {
  bool all_witnesses = false;  // diagnostics: keep scanning past the first hit
};

/// Scans agents x profiles x misreports in lexicographic order; holds iff no
/// agent can obtain a strictly preferred outcome by misreporting within the
/// alignment's single-peaked domain.
Verdict check_strategy_proof(const TabularSCF& f, const Alignment& a,
                             std::vector<Witness>* all = nullptr);

/// Every profile whose peaks all coincide at a maps to a.
Verdict check_unanimous(const TabularSCF& f, std::vector<Witness>* all = nullptr);

/// Outcomes are invariant under every permutation of the agents.
Verdict check_anonymous(const TabularSCF& f, std::vector<Witness>* all = nullptr);

/// Whenever at least n-1 agents share a peak, that peak wins.
Verdict check_nvp(const TabularSCF& f, std::vector<Witness>* all = nullptr);

/// For every pair of support alignments and every profile drawn from the
/// intersection of their domains, the two outcomes agree.
Verdict check_shared_monotonic(const TabularSCF& f, const SupportSpec& s,
                               std::vector<Witness>* all = nullptr);

enum class Conclusion { NotImplementable, Implementable, Undetermined };

std::string to_string(Conclusion c);

/// Composite verdict: strategy-proofness per alignment plus
/// shared-monotonicity are necessary; adding no-veto-power is sufficient.
/// The gap (SP and SM hold, NVP fails) is reported as Undetermined.
struct ImplementabilityVerdict {
  std::vector<std::pair<Alignment, Verdict>> sp_per_alignment;
  Verdict shared_monotonic;
  Verdict nvp;
  Conclusion conclusion = Conclusion::Undetermined;

  bool implementable() const { return conclusion == Conclusion::Implementable; }
};

ImplementabilityVerdict check_implementable(const ProjectedSCF& f, const SupportSpec& s);

/// Re-runs the violated comparison recorded in `w` against `f` and returns
/// true when it reproduces. Test plumbing for the witness-replay invariant.
bool witness_replays(const Witness& w, const TabularSCF& f);

}  // namespace peakcheck
