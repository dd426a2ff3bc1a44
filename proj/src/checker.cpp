#include "peakcheck/checker.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "peakcheck/domain.hpp"

namespace peakcheck {

namespace {

void require_total(const TabularSCF::Table& t, int n) {
  std::size_t expect = 1;
  for (int i = 0; i < n; ++i) expect *= t.domain.size();
  if (t.outcomes.size() != expect)
    throw IncompleteSCF("SCF table does not cover its profile space");
}

std::vector<Preference> materialize(const TabularSCF::Table& t, std::span<const int> digits) {
  std::vector<Preference> profile;
  profile.reserve(digits.size());
  for (int d : digits) profile.push_back(t.domain[d]);
  return profile;
}

// Reports a violation; returns true when scanning should stop.
bool report(Verdict& v, std::vector<Witness>* all, Witness w) {
  if (v.holds) v = Verdict::fail(w);
  if (all) {
    all->push_back(std::move(w));
    return false;
  }
  return true;
}

}  // namespace

std::string to_string(Conclusion c) {
  switch (c) {
    case Conclusion::NotImplementable: return "NotImplementable";
    case Conclusion::Implementable: return "Implementable";
    case Conclusion::Undetermined: return "Undetermined";
  }
  return "?";
}

Verdict check_strategy_proof(const TabularSCF& f, const Alignment& a,
                             std::vector<Witness>* all) {
  const auto& t = f.table_for(canonicalize_alignment(a));
  require_total(t, f.n);
  const int d = static_cast<int>(t.domain.size());
  Verdict v;
  bool stop = false;
  for_each_profile(f.n, d, [&](std::span<const int> digits) {
    if (stop) return;
    const std::size_t base = TabularSCF::profile_index(t, digits);
    const Alt truthful = t.outcomes[base];
    // Stride of agent i's digit in the mixed-radix index.
    std::size_t stride = 1;
    for (int i = f.n - 1; i >= 0 && !stop; --i) {
      const Preference& own = t.domain[digits[i]];
      const std::size_t row = base - digits[i] * stride;
      for (int mis = 0; mis < d; ++mis) {
        if (mis == digits[i]) continue;
        const Alt dev = t.outcomes[row + mis * stride];
        if (own.strictly_prefers(dev, truthful)) {
          Witness w{"strategy_proofness", {t.alignment}, materialize(t, digits),
                    i,    t.domain[mis],  {},           truthful,
                    dev,  std::nullopt};
          if (report(v, all, std::move(w))) { stop = true; break; }
        }
      }
      stride *= d;
    }
  });
  return v;
}

Verdict check_unanimous(const TabularSCF& f, std::vector<Witness>* all) {
  Verdict v;
  for (const auto& t : f.tables) {
    require_total(t, f.n);
    bool stop = false;
    for_each_profile(f.n, static_cast<int>(t.domain.size()), [&](std::span<const int> digits) {
      if (stop) return;
      const Alt first = t.domain[digits[0]].peak();
      for (int i = 1; i < f.n; ++i)
        if (t.domain[digits[i]].peak() != first) return;
      const Alt got = t.outcomes[TabularSCF::profile_index(t, digits)];
      if (got != first) {
        Witness w{"unanimity", {t.alignment}, materialize(t, digits), std::nullopt,
                  std::nullopt, {}, got, std::nullopt, first};
        if (report(v, all, std::move(w))) stop = true;
      }
    });
    if (!v.holds && !all) return v;
  }
  return v;
}

Verdict check_anonymous(const TabularSCF& f, std::vector<Witness>* all) {
  Verdict v;
  for (const auto& t : f.tables) {
    require_total(t, f.n);
    std::vector<int> sigma(f.n);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<std::vector<int>> perms;
    do {
      perms.push_back(sigma);
    } while (std::next_permutation(sigma.begin(), sigma.end()));

    bool stop = false;
    std::vector<int> permuted(f.n);
    for_each_profile(f.n, static_cast<int>(t.domain.size()), [&](std::span<const int> digits) {
      if (stop) return;
      const Alt got = t.outcomes[TabularSCF::profile_index(t, digits)];
      for (const auto& perm : perms) {
        for (int i = 0; i < f.n; ++i) permuted[i] = digits[perm[i]];
        const Alt other = t.outcomes[TabularSCF::profile_index(t, permuted)];
        if (other != got) {
          Witness w{"anonymity", {t.alignment}, materialize(t, digits), std::nullopt,
                    std::nullopt, perm, got, other, std::nullopt};
          if (report(v, all, std::move(w))) { stop = true; return; }
        }
      }
    });
    if (!v.holds && !all) return v;
  }
  return v;
}

Verdict check_nvp(const TabularSCF& f, std::vector<Witness>* all) {
  Verdict v;
  for (const auto& t : f.tables) {
    require_total(t, f.n);
    bool stop = false;
    std::array<int, kMaxAlternatives> count{};
    for_each_profile(f.n, static_cast<int>(t.domain.size()), [&](std::span<const int> digits) {
      if (stop) return;
      count.fill(0);
      for (int i = 0; i < f.n; ++i) ++count[t.domain[digits[i]].peak()];
      for (int a = 0; a < t.alignment.m(); ++a) {
        if (count[a] < f.n - 1) continue;
        const Alt got = t.outcomes[TabularSCF::profile_index(t, digits)];
        if (got != a) {
          Witness w{"no_veto_power", {t.alignment}, materialize(t, digits), std::nullopt,
                    std::nullopt, {}, got, std::nullopt, static_cast<Alt>(a)};
          if (report(v, all, std::move(w))) { stop = true; return; }
        }
      }
    });
    if (!v.holds && !all) return v;
  }
  return v;
}

Verdict check_shared_monotonic(const TabularSCF& f, const SupportSpec& s,
                               std::vector<Witness>* all) {
  Verdict v;
  for (int i = 0; i < s.size() && (v.holds || all); ++i) {
    for (int j = i + 1; j < s.size() && (v.holds || all); ++j) {
      const auto& ti = f.table_for(s.alignments[i]);
      const auto& tj = f.table_for(s.alignments[j]);
      require_total(ti, f.n);
      require_total(tj, f.n);
      std::vector<Preference> shared = domain_intersection(ti.alignment, tj.alignment);
      if (shared.empty()) continue;  // vacuous for this pair
      // Indices of the shared preferences inside each table's domain.
      std::vector<int> into_i, into_j;
      for (const Preference& p : shared) {
        into_i.push_back(static_cast<int>(
            std::lower_bound(ti.domain.begin(), ti.domain.end(), p) - ti.domain.begin()));
        into_j.push_back(static_cast<int>(
            std::lower_bound(tj.domain.begin(), tj.domain.end(), p) - tj.domain.begin()));
      }
      bool stop = false;
      std::vector<int> di(f.n), dj(f.n);
      for_each_profile(f.n, static_cast<int>(shared.size()), [&](std::span<const int> digits) {
        if (stop) return;
        for (int k = 0; k < f.n; ++k) {
          di[k] = into_i[digits[k]];
          dj[k] = into_j[digits[k]];
        }
        const Alt oi = ti.outcomes[TabularSCF::profile_index(ti, di)];
        const Alt oj = tj.outcomes[TabularSCF::profile_index(tj, dj)];
        if (oi != oj) {
          std::vector<Preference> profile;
          for (int d : digits) profile.push_back(shared[d]);
          Witness w{"shared_monotonicity", {ti.alignment, tj.alignment}, std::move(profile),
                    std::nullopt, std::nullopt, {}, oi, oj, std::nullopt};
          if (report(v, all, std::move(w))) stop = true;
        }
      });
    }
  }
  return v;
}

ImplementabilityVerdict check_implementable(const ProjectedSCF& f, const SupportSpec& s) {
  if (f.support() != s)
    throw SupportMismatch("SCF rules and support name different reversal classes");
  TabularSCF tab = to_tabular(f);

  ImplementabilityVerdict out;
  bool sp_all = true;
  for (const Alignment& a : s.alignments) {
    Verdict v = check_strategy_proof(tab, a);
    sp_all = sp_all && v.holds;
    out.sp_per_alignment.emplace_back(a, std::move(v));
  }
  out.shared_monotonic = check_shared_monotonic(tab, s);
  out.nvp = check_nvp(tab);

  if (!sp_all || !out.shared_monotonic.holds)
    out.conclusion = Conclusion::NotImplementable;
  else if (out.nvp.holds)
    out.conclusion = Conclusion::Implementable;
  else
    out.conclusion = Conclusion::Undetermined;
  return out;
}

bool witness_replays(const Witness& w, const TabularSCF& f) {
  auto outcome_of = [&](const Alignment& a, const std::vector<Preference>& profile) {
    const auto& t = f.table_for(a);
    std::vector<int> digits;
    for (const Preference& p : profile)
      digits.push_back(static_cast<int>(
          std::lower_bound(t.domain.begin(), t.domain.end(), p) - t.domain.begin()));
    return t.outcomes[TabularSCF::profile_index(t, digits)];
  };

  if (w.kind == "strategy_proofness") {
    if (!w.agent || !w.misreport || !w.outcome || !w.deviation_outcome) return false;
    const Preference& own = w.profile[*w.agent];
    std::vector<Preference> deviated = w.profile;
    deviated[*w.agent] = *w.misreport;
    return outcome_of(w.alignments[0], w.profile) == *w.outcome &&
           outcome_of(w.alignments[0], deviated) == *w.deviation_outcome &&
           own.strictly_prefers(*w.deviation_outcome, *w.outcome);
  }
  if (w.kind == "unanimity" || w.kind == "no_veto_power") {
    if (!w.outcome || !w.required) return false;
    return outcome_of(w.alignments[0], w.profile) == *w.outcome && *w.outcome != *w.required;
  }
  if (w.kind == "anonymity") {
    if (!w.outcome || !w.deviation_outcome) return false;
    std::vector<Preference> permuted;
    for (int i : w.permutation) permuted.push_back(w.profile[i]);
    return outcome_of(w.alignments[0], w.profile) == *w.outcome &&
           outcome_of(w.alignments[0], permuted) == *w.deviation_outcome &&
           *w.outcome != *w.deviation_outcome;
  }
  if (w.kind == "shared_monotonicity") {
    if (!w.outcome || !w.deviation_outcome || w.alignments.size() != 2) return false;
    return outcome_of(w.alignments[0], w.profile) == *w.outcome &&
           outcome_of(w.alignments[1], w.profile) == *w.deviation_outcome &&
           *w.outcome != *w.deviation_outcome;
  }
  return false;
}

}  // namespace peakcheck
