#include "peakcheck/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "peakcheck/domain.hpp"

namespace peakcheck {

using nlohmann::json;

std::string LabelSet::alignment_key(const Alignment& a) const {
  std::string key;
  for (Alt x : a.order) key += labels[x];
  return key;
}

std::vector<std::string> LabelSet::ranking_of(const Preference& p) const {
  std::vector<std::string> out;
  for (Alt x : p.ranking) out.push_back(labels[x]);
  return out;
}

namespace {

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  return j;
}

}  // namespace

LoadedSupport load_support(const json& j) {
  if (!j.is_object() || !j.contains("m") || !j.contains("alignments"))
    throw InvalidInput("support file needs fields m and alignments");
  const int m = j.at("m").get<int>();
  if (m < 3 || m > kMaxAlternatives)
    throw InvalidInput("supported alternative counts are 3..8");
  const auto& entries = j.at("alignments");
  if (!entries.is_array() || entries.empty())
    throw InvalidInput("alignments must be a nonempty array");

  // The label set comes from the first entry, ids by sorted label.
  std::vector<std::string> labels = entries.front().get<std::vector<std::string>>();
  if (static_cast<int>(labels.size()) != m)
    throw InvalidInput("alignment length does not match m");
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
    throw InvalidInput("labels must be unique");
  std::map<std::string, Alt> id_of;
  for (int i = 0; i < m; ++i) id_of[labels[i]] = static_cast<Alt>(i);

  LoadedSupport out;
  out.labels = {labels};
  std::vector<Alignment> raw;
  for (const auto& entry : entries) {
    auto seq = entry.get<std::vector<std::string>>();
    if (static_cast<int>(seq.size()) != m)
      throw InvalidInput("alignment length does not match m");
    std::vector<Alt> ids;
    for (const auto& label : seq) {
      auto it = id_of.find(label);
      if (it == id_of.end()) throw InvalidInput("unknown label: " + label);
      ids.push_back(it->second);
    }
    try {
      raw.emplace_back(std::move(ids));
    } catch (const InvalidAlignment& e) {
      throw InvalidInput(std::string("bad alignment entry: ") + e.what());
    }
  }
  std::vector<Alignment> collapsed;
  out.support = SupportSpec::of(raw, &collapsed);
  for (const auto& a : collapsed) out.collapsed.push_back(out.labels.alignment_key(a));
  return out;
}

LoadedSupport load_support_file(const std::string& path) {
  return load_support(read_json_file(path));
}

json support_to_json(const SupportSpec& s, const LabelSet& labels) {
  json entries = json::array();
  for (const Alignment& a : s.alignments) {
    json seq = json::array();
    for (Alt x : a.order) seq.push_back(labels.of(x));
    entries.push_back(std::move(seq));
  }
  return json{{"m", s.m()}, {"alignments", std::move(entries)}};
}

ProjectedSCF load_scf(const json& j, const LabelSet& labels) {
  if (!j.is_object() || !j.contains("n") || !j.contains("rules"))
    throw InvalidInput("SCF file needs fields n and rules");
  const int n = j.at("n").get<int>();
  if (n < 3 || n > kDefaultMaxN + 2) throw InvalidInput("supported agent counts are 3..8");

  std::map<std::string, Alignment> by_key;
  for (const Alignment& a : all_canonical_alignments(labels.m()))
    by_key.emplace(labels.alignment_key(a), a);

  std::vector<MedianRule> rules;
  for (const auto& [key, value] : j.at("rules").items()) {
    auto it = by_key.find(key);
    if (it == by_key.end())
      throw InvalidInput("rules key is not a canonical alignment: " + key);
    auto positions = value.get<std::vector<int>>();
    std::vector<Pos> phantoms;
    for (int p : positions) {
      if (p < 0 || p >= labels.m()) throw InvalidInput("phantom position out of range");
      phantoms.push_back(static_cast<Pos>(p));
    }
    if (static_cast<int>(phantoms.size()) != n - 1)
      throw InvalidInput("each rule needs exactly n-1 phantoms");
    rules.emplace_back(it->second, std::move(phantoms));
  }
  if (rules.empty()) throw InvalidInput("rules must be nonempty");
  return ProjectedSCF(n, std::move(rules));
}

ProjectedSCF load_scf_file(const std::string& path, const LabelSet& labels) {
  return load_scf(read_json_file(path), labels);
}

json scf_to_json(const ProjectedSCF& f, const LabelSet& labels) {
  json rules = json::object();
  for (const MedianRule& r : f.rules) {
    json positions = json::array();
    for (Pos p : r.phantoms) positions.push_back(static_cast<int>(p));
    rules[labels.alignment_key(r.alignment)] = std::move(positions);
  }
  return json{{"n", f.n}, {"rules", std::move(rules)}};
}

json witness_to_json(const Witness& w, const LabelSet& labels) {
  json out{{"kind", w.kind}};
  if (w.alignments.size() == 1) {
    out["alignment"] = labels.alignment_key(w.alignments[0]);
  } else if (!w.alignments.empty()) {
    json keys = json::array();
    for (const auto& a : w.alignments) keys.push_back(labels.alignment_key(a));
    out["alignments"] = std::move(keys);
  }
  if (!w.profile.empty()) {
    json profile = json::array();
    for (const auto& p : w.profile) profile.push_back(labels.ranking_of(p));
    out["profile"] = std::move(profile);
  }
  if (w.agent) out["agent"] = *w.agent;
  if (w.misreport) out["misreport"] = labels.ranking_of(*w.misreport);
  if (!w.permutation.empty()) out["permutation"] = w.permutation;
  if (w.outcome) out["outcome"] = labels.of(*w.outcome);
  if (w.deviation_outcome) out["deviation_outcome"] = labels.of(*w.deviation_outcome);
  if (w.required) out["required"] = labels.of(*w.required);
  return out;
}

json verdict_to_json(const Verdict& v, const LabelSet& labels) {
  json out{{"holds", v.holds}};
  if (v.witness) out["witness"] = witness_to_json(*v.witness, labels);
  return out;
}

json implementability_to_json(const ImplementabilityVerdict& v, const LabelSet& labels) {
  json sp = json::object();
  for (const auto& [alignment, verdict] : v.sp_per_alignment)
    sp[labels.alignment_key(alignment)] = verdict_to_json(verdict, labels);
  return json{{"conclusion", to_string(v.conclusion)},
              {"strategy_proof", std::move(sp)},
              {"shared_monotonic", verdict_to_json(v.shared_monotonic, labels)},
              {"no_veto_power", verdict_to_json(v.nvp, labels)}};
}

json search_report_to_json(const AssignmentSearchReport& r, const LabelSet& labels,
                           bool with_timing) {
  json support = json::array();
  for (const auto& a : r.support.alignments) support.push_back(labels.alignment_key(a));
  json found = json::array();
  for (const auto& f : r.found) found.push_back(scf_to_json(f, labels));
  json out{{"support", std::move(support)},
           {"n", r.n},
           {"found", std::move(found)},
           {"nodes_explored", r.nodes_explored}};
  if (with_timing) out["elapsed_ms"] = r.elapsed.count();
  return out;
}

json characterization_to_json(const CharacterizationResult& r, const LabelSet& labels,
                              bool with_timing) {
  json out = search_report_to_json(r.report, labels, with_timing);
  out["expected_family"] = to_string(r.verdict.expected_family);
  out["matches"] = r.verdict.matches;
  json extras = json::array(), missing = json::array();
  for (const auto& f : r.verdict.extras) extras.push_back(scf_to_json(f, labels));
  for (const auto& f : r.verdict.missing) missing.push_back(scf_to_json(f, labels));
  out["extras"] = std::move(extras);
  out["missing"] = std::move(missing);
  out["deviation_replay"] = verdict_to_json(r.deviation_replay, labels);
  return out;
}

namespace {

json message_to_json(const Mechanism& mech, std::uint32_t option_id, const LabelSet& labels) {
  const MsgOption o = mech.option_at(option_id);
  const Claim& cl = mech.claims[o.claim];
  const auto& cd = mech.classes[cl.class_idx];
  const Alignment raw = cl.reversed ? cd.alignment.reversed() : cd.alignment;
  json msg{{"z", static_cast<int>(o.z)},
           {"alignment", labels.alignment_key(raw)},
           {"preference", labels.ranking_of(cd.domain[cl.pref_idx])}};
  if (mech.kind == MechKind::Canonical) {
    msg["favorite"] = labels.of(o.favorite);
  } else {
    json positions = json::array();
    for (Pos p : cd.rule_pool[o.rule].phantoms) positions.push_back(static_cast<int>(p));
    msg["rule"] = std::move(positions);
  }
  return msg;
}

}  // namespace

json equilibrium_report_to_json(const EquilibriumReport& r, const Mechanism& mech,
                                const LabelSet& labels) {
  const auto& cd = mech.classes[r.class_idx];
  json profile = json::array();
  for (int d : r.profile_digits) profile.push_back(labels.ranking_of(cd.domain[d]));

  json outcomes = json::array();
  for (Alt a : r.truthful_nash_outcomes) outcomes.push_back(labels.of(a));

  json violations = json::array();
  for (const auto& v : r.violations) {
    json vj{{"kind", v.kind},
            {"outcome", labels.of(v.outcome)},
            {"expected", labels.of(v.expected)}};
    if (v.agent >= 0) vj["agent"] = v.agent;
    if (!v.message_profile.empty()) {
      json msgs = json::array();
      for (std::uint32_t id : v.message_profile)
        msgs.push_back(message_to_json(mech, id, labels));
      vj["message_profile"] = std::move(msgs);
    }
    violations.push_back(std::move(vj));
  }

  return json{{"alignment", labels.alignment_key(cd.alignment)},
              {"profile", std::move(profile)},
              {"f_outcome", labels.of(r.f_outcome)},
              {"truthful_outcome", labels.of(r.truthful_outcome)},
              {"truthful_equilibrium", r.truthful_equilibrium_ok},
              {"truthful_nash_outcomes", std::move(outcomes)},
              {"dominant_strategy", r.dominant_ok},
              {"strict_clause", r.strict_clause},
              {"equilibria", r.equilibria_scanned},
              {"honesty_killed", r.honesty_killed},
              {"spurious_false_alignment", r.spurious_false_class},
              {"near_unanimous", r.near_unanimous},
              {"ok", r.ok()},
              {"violations", std::move(violations)}};
}

Scenario load_scenario_file(const std::string& path) {
  const json j = read_json_file(path);
  if (!j.is_object() || !j.contains("scf") || !j.contains("support"))
    throw InvalidInput("scenario file needs fields scf and support");
  Scenario sc;
  LoadedSupport loaded = load_support(j.at("support"));
  sc.support = loaded.support;
  sc.labels = loaded.labels;
  sc.scf = load_scf(j.at("scf"), sc.labels);
  sc.int_cap = j.value("int_cap", 2);
  if (j.contains("honest_agent") && !j.at("honest_agent").is_null())
    sc.honest_agent = j.at("honest_agent").get<int>();
  return sc;
}

}  // namespace peakcheck
