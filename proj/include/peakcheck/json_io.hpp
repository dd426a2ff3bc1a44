#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "peakcheck/checker.hpp"
#include "peakcheck/mechsim.hpp"
#include "peakcheck/search.hpp"
#include "peakcheck/types.hpp"

namespace peakcheck {

/// Presentation names for the alternatives; ids are assigned by sorted label.
struct LabelSet {
  std::vector<std::string> labels;

  static LabelSet standard(int m) { return {default_labels(m)}; }
  int m() const { return static_cast<int>(labels.size()); }
  const std::string& of(Alt a) const { return labels[a]; }
  /// Concatenated labels of the alignment, e.g. "abdc".
  std::string alignment_key(const Alignment& a) const;
  std::vector<std::string> ranking_of(const Preference& p) const;
};

struct LoadedSupport {
  SupportSpec support;
  LabelSet labels;
  std::vector<std::string> collapsed;  // duplicate reversal classes that were dropped
};

/// Support file: {"m": 4, "alignments": [["a","b","c","d"], ...]}. Labels must
/// be unique and consistent across entries; entries are canonicalized and
/// duplicate reversal classes collapse with a notice in `collapsed`.
LoadedSupport load_support(const nlohmann::json& j);
LoadedSupport load_support_file(const std::string& path);
nlohmann::json support_to_json(const SupportSpec& s, const LabelSet& labels);

/// SCF file: {"n": 3, "rules": {"abc": [0, 2], ...}} with canonical alignment
/// keys and sorted phantom position lists.
ProjectedSCF load_scf(const nlohmann::json& j, const LabelSet& labels);
ProjectedSCF load_scf_file(const std::string& path, const LabelSet& labels);
nlohmann::json scf_to_json(const ProjectedSCF& f, const LabelSet& labels);

nlohmann::json witness_to_json(const Witness& w, const LabelSet& labels);
nlohmann::json verdict_to_json(const Verdict& v, const LabelSet& labels);
nlohmann::json implementability_to_json(const ImplementabilityVerdict& v,
                                        const LabelSet& labels);
nlohmann::json search_report_to_json(const AssignmentSearchReport& r, const LabelSet& labels,
                                     bool with_timing);
nlohmann::json characterization_to_json(const CharacterizationResult& r,
                                        const LabelSet& labels, bool with_timing);
nlohmann::json equilibrium_report_to_json(const EquilibriumReport& r, const Mechanism& mech,
                                          const LabelSet& labels);

/// Scenario file for the simulator:
/// {"scf": <SCF object>, "support": <support object>, "int_cap": 2,
///  "honest_agent": 0 | null}.
struct Scenario {
  ProjectedSCF scf;
  SupportSpec support;
  LabelSet labels;
  int int_cap = 2;
  std::optional<int> honest_agent;
};

Scenario load_scenario_file(const std::string& path);

}  // namespace peakcheck
