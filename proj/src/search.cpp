#include "peakcheck/search.hpp"

#include <algorithm>
#include <numeric>

#include "peakcheck/domain.hpp"

namespace peakcheck {

namespace {

void guard_scale(int n, int m, const SearchOptions& opts) {
  if (opts.allow_large) return;
  if (m > kDefaultMaxM || n > kDefaultMaxN)
    throw ScaleExceeded("desk-scale guard: m <= 5 and n <= 6 (pass allow_large to override)");
}

// Distinct shared peak alternatives of an alignment pair, with their
// positions in both alignments. Outcome comparisons over the intersection
// reduce to peak multisets drawn from here.
struct SharedPeakSet {
  std::vector<Alt> alts;
  std::vector<Pos> pos1, pos2;

  bool empty() const { return alts.empty(); }
};

SharedPeakSet shared_peak_set(const Alignment& a1, const Alignment& a2) {
  SharedPeakSet sp;
  for (Alt x : shared_peaks(a1, a2)) {
    sp.alts.push_back(x);
    sp.pos1.push_back(a1.position_of(x));
    sp.pos2.push_back(a2.position_of(x));
  }
  return sp;
}

// Visits every multiset of size n over {0..k-1} as a nondecreasing vector.
template <typename F>
void for_each_multiset(int n, int k, F&& visit) {
  std::vector<int> pick(n, 0);
  while (true) {
    visit(std::span<const int>(pick));
    int i = n - 1;
    while (i >= 0 && pick[i] == k - 1) --i;
    if (i < 0) return;
    const int v = pick[i] + 1;
    for (int j = i; j < n; ++j) pick[j] = v;
  }
}

// Outcomes of the two rules agree on every profile drawn from the shared
// domain. Peak multisets suffice: median rules only read peaks.
bool sm_compatible(const MedianRule& r1, const MedianRule& r2, const SharedPeakSet& sp,
                   int n) {
  if (sp.empty()) return true;
  bool ok = true;
  std::vector<Pos> peaks1(n), peaks2(n);
  for_each_multiset(n, static_cast<int>(sp.alts.size()), [&](std::span<const int> pick) {
    if (!ok) return;
    for (int i = 0; i < n; ++i) {
      peaks1[i] = sp.pos1[pick[i]];
      peaks2[i] = sp.pos2[pick[i]];
    }
    const Alt o1 = r1.alignment.order[eval_median_rule(r1, peaks1)];
    const Alt o2 = r2.alignment.order[eval_median_rule(r2, peaks2)];
    if (o1 != o2) ok = false;
  });
  return ok;
}

}  // namespace

int phantoms_on_or_before(const MedianRule& r, Alt alt, bool reversed) {
  const Pos pos = r.alignment.position_of(alt);
  int count = 0;
  for (Pos p : r.phantoms)
    if (reversed ? p >= pos : p <= pos) ++count;
  return count;
}

AssignmentSearchReport search_implementable_nvpms(int n, const SupportSpec& s,
                                                  const SearchOptions& opts) {
  if (n < 3) throw PremiseNotMet("search assumes n >= 3");
  if (s.empty()) throw PremiseNotMet("search needs a nonempty support");
  guard_scale(n, s.m(), opts);

  const auto start = std::chrono::steady_clock::now();
  const int count = s.size();

  std::vector<std::vector<MedianRule>> candidates;
  for (const Alignment& a : s.alignments)
    candidates.push_back(enumerate_median_rules(n, a, /*nvp_only=*/true));

  // Pairwise compatibility tables for alignment pairs with shared profiles.
  struct Pair {
    int a, b;
    std::vector<char> compat;  // candidates[a].size() x candidates[b].size()
  };
  std::vector<Pair> pairs;
  std::vector<int> partner_count(count, 0);
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      SharedPeakSet sp = shared_peak_set(s.alignments[i], s.alignments[j]);
      if (sp.empty()) continue;
      Pair p{i, j, {}};
      p.compat.resize(candidates[i].size() * candidates[j].size());
      for (std::size_t ri = 0; ri < candidates[i].size(); ++ri)
        for (std::size_t rj = 0; rj < candidates[j].size(); ++rj)
          p.compat[ri * candidates[j].size() + rj] =
              sm_compatible(candidates[i][ri], candidates[j][rj], sp, n);
      ++partner_count[i];
      ++partner_count[j];
      pairs.push_back(std::move(p));
    }
  }

  // Assign the most constrained alignments first.
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (partner_count[x] != partner_count[y]) return partner_count[x] > partner_count[y];
    return s.alignments[x] < s.alignments[y];
  });
  std::vector<int> depth_of(count);
  for (int d = 0; d < count; ++d) depth_of[order[d]] = d;

  // For each variable, the constraints against earlier-assigned variables.
  struct Edge {
    const Pair* pair;
    int other;          // the earlier variable
    bool var_is_first;  // whether the later variable is pair->a
  };
  std::vector<std::vector<Edge>> earlier(count);
  for (const Pair& p : pairs) {
    if (depth_of[p.a] < depth_of[p.b])
      earlier[p.b].push_back({&p, p.a, false});
    else
      earlier[p.a].push_back({&p, p.b, true});
  }

  AssignmentSearchReport report;
  report.support = s;
  report.n = n;

  std::vector<int> chosen(count, -1);
  std::uint64_t nodes = 0;

  auto dfs = [&](auto&& self, int depth) -> void {
    if (depth == count) {
      std::vector<MedianRule> rules;
      for (int v = 0; v < count; ++v) rules.push_back(candidates[v][chosen[v]]);
      ProjectedSCF f(n, std::move(rules));
      // Survivors must re-pass the full composite check; pruning only ever
      // discards, so anything reaching this point is certified here.
      if (!check_implementable(f, s).implementable())
        throw std::logic_error("search survivor failed the implementability re-check");
      report.found.push_back(std::move(f));
      return;
    }
    const int var = order[depth];
    for (std::size_t c = 0; c < candidates[var].size(); ++c) {
      ++nodes;
      bool ok = true;
      for (const Edge& e : earlier[var]) {
        const std::size_t ri = e.var_is_first ? c : chosen[e.other];
        const std::size_t rj = e.var_is_first ? chosen[e.other] : c;
        if (!e.pair->compat[ri * candidates[e.pair->b].size() + rj]) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen[var] = static_cast<int>(c);
      self(self, depth + 1);
      chosen[var] = -1;
    }
  };
  dfs(dfs, 0);

  std::sort(report.found.begin(), report.found.end());
  report.nodes_explored = nodes;
  report.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  return report;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::SymmetricOrderStatistic: return "SymmetricOrderStatistic";
    case Family::TrueMedianOnly: return "TrueMedianOnly";
    case Family::Empty: return "Empty";
    case Family::AllNVPMS: return "AllNVPMS";
    case Family::ConditionedFamily: return "ConditionedFamily";
  }
  return "?";
}

Verdict verify_lemma_consistency(int m) {
  if (m < 3 || m > 6) throw PremiseNotMet("consistency check runs at 3 <= m <= 6");
  const auto classes = all_canonical_alignments(m);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t j = i + 1; j < classes.size(); ++j) {
      if (domain_intersection(classes[i], classes[j]).empty()) continue;
      const auto t = shared_peaks(classes[i], classes[j]);
      const auto run1 = contiguous_run(classes[i], t);
      const auto run2 = contiguous_run(classes[j], t);
      bool ok = t.size() >= 2 && run1.has_value() && run2.has_value();
      if (ok) {
        std::vector<Alt> rev2(run2->rbegin(), run2->rend());
        ok = (*run1 == *run2) || (*run1 == rev2);
      }
      if (!ok) {
        Witness w;
        w.kind = "lemma_consistency";
        w.alignments = {classes[i], classes[j]};
        return Verdict::fail(std::move(w));
      }
    }
  }
  return Verdict::ok();
}

namespace {

// T's traversal order in the second alignment relative to the first:
// false = same, true = reversed. Assumes consistency already holds.
bool orientation_flipped(const std::vector<Alt>& run1, const std::vector<Alt>& run2) {
  return run1 != run2;
}

}  // namespace

Verdict verify_lemma_symmetry(int n, int m) {
  if (n < 3 || n > 4 || m < 3 || m > 4)
    throw PremiseNotMet("symmetry check runs at desk scale (n, m <= 4)");
  const auto classes = all_canonical_alignments(m);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    for (std::size_t j = i + 1; j < classes.size(); ++j) {
      const auto t = shared_peaks(classes[i], classes[j]);
      if (t.empty()) continue;
      const auto run1 = *contiguous_run(classes[i], t);
      const auto run2 = *contiguous_run(classes[j], t);
      const bool flipped = orientation_flipped(run1, run2);

      const auto rules1 = enumerate_median_rules(n, classes[i], false);
      const auto rules2 = enumerate_median_rules(n, classes[j], false);
      const SharedPeakSet sp = shared_peak_set(classes[i], classes[j]);

      for (const MedianRule& r1 : rules1) {
        for (const MedianRule& r2 : rules2) {
          bool counts_all_equal = true;
          for (std::size_t k = 0; k + 1 < run1.size(); ++k) {
            const Alt x = run1[k];
            const Alt y = run1[k + 1];
            const int c1 = phantoms_on_or_before(r1, x, false);
            const int c2 = phantoms_on_or_before(r2, x, flipped);
            const bool counts_equal = (c1 == c2);
            counts_all_equal = counts_all_equal && counts_equal;

            // Two-preference profiles: q agents peak at x, n-q at y.
            const Pos x1 = classes[i].position_of(x), y1 = classes[i].position_of(y);
            const Pos x2 = classes[j].position_of(x), y2 = classes[j].position_of(y);
            bool two_pref_sm = true;
            for (int q = 0; q <= n && two_pref_sm; ++q) {
              std::vector<Pos> p1, p2;
              for (int z = 0; z < q; ++z) {
                p1.push_back(x1);
                p2.push_back(x2);
              }
              for (int z = q; z < n; ++z) {
                p1.push_back(y1);
                p2.push_back(y2);
              }
              const Alt o1 = classes[i].order[eval_median_rule(r1, p1)];
              const Alt o2 = classes[j].order[eval_median_rule(r2, p2)];
              two_pref_sm = (o1 == o2);
            }
            if (two_pref_sm != counts_equal) {
              Witness w;
              w.kind = "lemma_symmetry_adjacent_pair";
              w.alignments = {classes[i], classes[j]};
              return Verdict::fail(std::move(w));
            }
          }
          const bool full_sm = sm_compatible(r1, r2, sp, n);
          if (full_sm != counts_all_equal) {
            Witness w;
            w.kind = "lemma_symmetry_full";
            w.alignments = {classes[i], classes[j]};
            return Verdict::fail(std::move(w));
          }
        }
      }
    }
  }
  return Verdict::ok();
}

Verdict verify_reverse_pair(int n, const Alignment& a) {
  if (n < 3) throw PremiseNotMet("reverse-pair check assumes n >= 3");
  const Alignment fwd = a;
  const Alignment bwd = a.reversed();
  const Alignment canon = canonicalize_alignment(a);
  const int m = a.m();
  const auto s = SupportSpec::of({canon});

  // NVP phantom multisets, read along each raw orientation.
  const auto multisets = enumerate_median_rules(n, canon, true);
  auto mirror = [m](const std::vector<Pos>& ph) {
    std::vector<Pos> out;
    for (Pos p : ph) out.push_back(static_cast<Pos>(m - 1 - p));
    std::sort(out.begin(), out.end());
    return out;
  };
  auto to_canon = [&](const std::vector<Pos>& ph, const Alignment& raw) {
    return canon == raw ? ph : mirror(ph);
  };

  for (const MedianRule& c1 : multisets) {
    for (const MedianRule& c2 : multisets) {
      // c1's multiset placed along fwd, c2's along bwd.
      const std::vector<Pos> r1_canon = to_canon(c1.phantoms, fwd);
      const std::vector<Pos> r2_canon = to_canon(c2.phantoms, bwd);
      const bool same_function = (r1_canon == r2_canon);
      if (same_function) {
        ProjectedSCF f(n, {MedianRule(canon, r1_canon)});
        if (!check_implementable(f, s).implementable()) {
          Witness w;
          w.kind = "reverse_pair_identical_not_implementable";
          w.alignments = {fwd, bwd};
          return Verdict::fail(std::move(w));
        }
      } else {
        // Differing functions must disagree on a profile of the (identical)
        // shared domain.
        const MedianRule r1(canon, r1_canon), r2(canon, r2_canon);
        bool disagree = false;
        for_each_multiset(n, m, [&](std::span<const int> pick) {
          if (disagree) return;
          std::vector<Pos> peaks(pick.begin(), pick.end());
          if (eval_median_rule(r1, peaks) != eval_median_rule(r2, peaks)) disagree = true;
        });
        if (!disagree) {
          Witness w;
          w.kind = "reverse_pair_differing_rules_agree";
          w.alignments = {fwd, bwd};
          return Verdict::fail(std::move(w));
        }
      }
    }
  }
  return Verdict::ok();
}

Verdict verify_disjoint_support(int n, const SupportSpec& s) {
  if (s.size() < 2) throw PremiseNotMet("disjoint-support check needs >= 2 classes");
  for (int i = 0; i < s.size(); ++i)
    for (int j = i + 1; j < s.size(); ++j)
      if (!domain_intersection(s.alignments[i], s.alignments[j]).empty())
        throw PremiseNotMet("domains intersect within the support");

  std::vector<std::vector<MedianRule>> candidates;
  for (const Alignment& a : s.alignments)
    candidates.push_back(enumerate_median_rules(n, a, true));

  std::vector<int> pick(s.size(), 0);
  while (true) {
    std::vector<MedianRule> rules;
    for (int i = 0; i < s.size(); ++i) rules.push_back(candidates[i][pick[i]]);
    ProjectedSCF f(n, std::move(rules));
    if (!check_implementable(f, s).implementable()) {
      Witness w;
      w.kind = "disjoint_support_nvpms_not_implementable";
      w.alignments = s.alignments;
      return Verdict::fail(std::move(w));
    }
    int i = s.size() - 1;
    while (i >= 0 && pick[i] + 1 == static_cast<int>(candidates[i].size())) pick[i--] = 0;
    if (i < 0) break;
    ++pick[i];
  }
  return Verdict::ok();
}

Verdict verify_constant_shared_peaks(int n, const SupportSpec& s) {
  const auto csp = has_constant_shared_peaks(s);
  if (!csp.constant) throw PremiseNotMet("support does not have constant shared peaks");
  const std::vector<Alt>& t = csp.shared;

  // T must be a contiguous run of every alignment in the support.
  std::vector<std::vector<Alt>> runs;
  for (const Alignment& a : s.alignments) {
    auto run = contiguous_run(a, t);
    if (!run) {
      Witness w;
      w.kind = "shared_peaks_not_contiguous";
      w.alignments = {a};
      return Verdict::fail(std::move(w));
    }
    runs.push_back(*run);
  }

  std::vector<std::vector<MedianRule>> candidates;
  for (const Alignment& a : s.alignments)
    candidates.push_back(enumerate_median_rules(n, a, true));

  // An assignment is "conditioned" when, for every alignment pair, the
  // phantom counts on-or-before each non-final element of T agree.
  auto conditioned = [&](const std::vector<const MedianRule*>& rules) {
    for (int i = 0; i < s.size(); ++i) {
      for (int j = i + 1; j < s.size(); ++j) {
        const bool flipped = orientation_flipped(runs[i], runs[j]);
        for (std::size_t k = 0; k + 1 < runs[i].size(); ++k) {
          const Alt x = runs[i][k];
          if (phantoms_on_or_before(*rules[i], x, false) !=
              phantoms_on_or_before(*rules[j], x, flipped))
            return false;
        }
      }
    }
    return true;
  };

  bool saw_conditioned = false;
  std::vector<int> pick(s.size(), 0);
  while (true) {
    std::vector<const MedianRule*> rules;
    for (int i = 0; i < s.size(); ++i) rules.push_back(&candidates[i][pick[i]]);
    if (conditioned(rules)) {
      saw_conditioned = true;
      std::vector<MedianRule> owned;
      for (const MedianRule* r : rules) owned.push_back(*r);
      ProjectedSCF f(n, std::move(owned));
      if (!check_implementable(f, s).implementable()) {
        Witness w;
        w.kind = "conditioned_assignment_not_implementable";
        w.alignments = s.alignments;
        return Verdict::fail(std::move(w));
      }
    }
    int i = s.size() - 1;
    while (i >= 0 && pick[i] + 1 == static_cast<int>(candidates[i].size())) pick[i--] = 0;
    if (i < 0) break;
    ++pick[i];
  }
  if (!saw_conditioned) {
    Witness w;
    w.kind = "no_conditioned_assignment_exists";
    w.alignments = s.alignments;
    return Verdict::fail(std::move(w));
  }
  return Verdict::ok();
}

namespace {

// The no-veto-power necessity construction, run at the head of a base
// sequence: all n-1 phantoms on the head alternative, n-1 agents peaking on
// the first two alternatives, one agent peaking third. Shifting the public
// state to the alignment that pulls the third alternative to the front hands
// that agent its peak, a strict gain over the base outcome.
Verdict replay_one_side(int n, const std::vector<Alt>& base_seq) {
  auto fail = [&](const char* kind) {
    Witness w;
    w.kind = kind;
    w.alignments = {Alignment(base_seq)};
    return Verdict::fail(std::move(w));
  };

  const int m = static_cast<int>(base_seq.size());
  const Alt a = base_seq[0], b = base_seq[1], c = base_seq[2];
  const Alignment fwd{std::vector<Alt>(base_seq)};

  std::vector<Alt> pulled{c, a, b};
  for (int i = 3; i < m; ++i) pulled.push_back(base_seq[i]);
  const Alignment shifted{std::move(pulled)};

  const auto shared = shared_peaks(fwd, shifted);
  if (!std::binary_search(shared.begin(), shared.end(), a) ||
      !std::binary_search(shared.begin(), shared.end(), b))
    return fail("one_side_replay_shared_peaks");

  const auto inter = domain_intersection(fwd, shifted);
  auto first_with_peak = [](const std::vector<Preference>& d, Alt peak) {
    for (const Preference& p : d)
      if (p.peak() == peak) return p;
    throw PremiseNotMet("no preference with the requested peak");
  };
  const Preference pa = first_with_peak(inter, a);
  const Preference pb = first_with_peak(inter, b);
  const Preference pc_fwd = first_with_peak(enumerate_single_peaked(fwd), c);
  const Preference pc_shifted = first_with_peak(enumerate_single_peaked(shifted), c);

  // n-1 agents on {a, b} with at least one at a; the deviator goes last.
  std::vector<Preference> profile;
  profile.push_back(pa);
  for (int i = 1; i < n - 1; ++i) profile.push_back(i % 2 ? pb : pa);
  profile.push_back(pc_fwd);

  // All phantoms on the head alternative of each raw orientation, expressed
  // in canonical coordinates.
  auto all_at = [n](const Alignment& canon, Alt alt) {
    return MedianRule(canon, std::vector<Pos>(n - 1, canon.position_of(alt)));
  };
  const MedianRule rule_fwd = all_at(canonicalize_alignment(fwd), a);
  const MedianRule rule_shifted = all_at(canonicalize_alignment(shifted), c);

  auto outcome = [](const MedianRule& r, const std::vector<Preference>& prof) {
    std::vector<Pos> peaks;
    for (const Preference& p : prof) peaks.push_back(r.alignment.position_of(p.peak()));
    return r.alignment.order[eval_median_rule(r, peaks)];
  };

  const Alt before = outcome(rule_fwd, profile);
  if (before != a) return fail("one_side_replay_outcome_before");

  std::vector<Preference> deviated = profile;
  deviated.back() = pc_shifted;
  const Alt after = outcome(rule_shifted, deviated);
  if (after != c) return fail("one_side_replay_outcome_after");

  if (!pc_fwd.strictly_prefers(after, before))
    return fail("one_side_replay_not_profitable");

  // Within the phantoms-at-the-ends family on the shifted alignment, only the
  // all-at-c placement matches the base rule's on-or-before count at a. All
  // counts are read in the orientation that lists T the way the base
  // alignment does.
  const auto run_ref = *contiguous_run(fwd, shared);
  const int base_count = phantoms_on_or_before(
      rule_fwd, a,
      orientation_flipped(run_ref, *contiguous_run(rule_fwd.alignment, shared)));
  const Alignment canon_shifted = canonicalize_alignment(shifted);
  const bool flip_shifted =
      orientation_flipped(run_ref, *contiguous_run(canon_shifted, shared));
  const Alt tail = shifted.order.back();
  for (int k = 0; k <= n - 1; ++k) {
    std::vector<Pos> ph;
    for (int i = 0; i < k; ++i) ph.push_back(canon_shifted.position_of(c));
    for (int i = k; i < n - 1; ++i) ph.push_back(canon_shifted.position_of(tail));
    const MedianRule end_rule(canon_shifted, ph);
    if ((phantoms_on_or_before(end_rule, a, flip_shifted) == base_count) != (k == n - 1))
      return fail("one_side_replay_symmetry_force");
  }
  return Verdict::ok();
}

}  // namespace

CharacterizationResult verify_full_support_theorem(int n, int m,
                                                   const SearchOptions& opts) {
  if (n < 3 || m < 3) throw PremiseNotMet("full-support theorem assumes n >= 3, m >= 3");
  guard_scale(n, m, opts);

  CharacterizationResult out;
  const auto support = SupportSpec::of(all_canonical_alignments(m));
  out.report = search_implementable_nvpms(n, support, opts);

  std::vector<ProjectedSCF> expected;
  if (m == 3) {
    out.verdict.expected_family = Family::SymmetricOrderStatistic;
    for (int k = 1; k <= n - 2; ++k)
      expected.push_back(make_symmetric_order_statistic(n, k, support));
  } else if (n % 2 == 0) {
    out.verdict.expected_family = Family::Empty;
  } else {
    out.verdict.expected_family = Family::TrueMedianOnly;
    expected.push_back(make_true_median(n, support));
  }
  std::sort(expected.begin(), expected.end());

  std::set_difference(out.report.found.begin(), out.report.found.end(), expected.begin(),
                      expected.end(), std::back_inserter(out.verdict.extras));
  std::set_difference(expected.begin(), expected.end(), out.report.found.begin(),
                      out.report.found.end(), std::back_inserter(out.verdict.missing));
  out.verdict.matches = out.verdict.extras.empty() && out.verdict.missing.empty();

  // Replay the deviation that rules out all-phantoms-one-side placements,
  // once per end of the base alignment.
  std::vector<Alt> fwd(m), bwd(m);
  std::iota(fwd.begin(), fwd.end(), Alt{0});
  std::reverse_copy(fwd.begin(), fwd.end(), bwd.begin());
  out.deviation_replay = replay_one_side(n, fwd);
  if (out.deviation_replay.holds) out.deviation_replay = replay_one_side(n, bwd);
  return out;
}

}  // namespace peakcheck
