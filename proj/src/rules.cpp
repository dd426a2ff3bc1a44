#include "peakcheck/rules.hpp"

#include <algorithm>
#include <array>

#include "peakcheck/domain.hpp"

namespace peakcheck {

MedianRule::MedianRule(Alignment a, std::vector<Pos> ph)
    : alignment(std::move(a)), phantoms(std::move(ph)) {
  if (!alignment.canonical)
    throw InvalidAlignment("median rules are keyed by canonical alignments");
  std::sort(phantoms.begin(), phantoms.end());
  for (Pos p : phantoms)
    if (p >= alignment.m()) throw ArityError("phantom position out of range");
  if (phantoms.empty()) throw ArityError("a median rule needs n-1 >= 1 phantoms");
}

bool MedianRule::is_nvp() const {
  return phantoms.front() == 0 && phantoms.back() == alignment.m() - 1;
}

std::strong_ordering operator<=>(const MedianRule& x, const MedianRule& y) {
  if (auto c = x.alignment <=> y.alignment; c != 0) return c;
  return x.phantoms <=> y.phantoms;
}

Pos eval_median_rule(const MedianRule& r, std::span<const Pos> peaks) {
  const int n = r.n();
  if (static_cast<int>(peaks.size()) != n)
    throw ArityError("median rule expects exactly n peaks");
  // Counting median over the 2n-1 positions.
  std::array<int, kMaxAlternatives> count{};
  for (Pos p : peaks) {
    if (p >= r.alignment.m()) throw ArityError("peak position out of range");
    ++count[p];
  }
  for (Pos p : r.phantoms) ++count[p];
  int seen = 0;
  for (int pos = 0; pos < r.alignment.m(); ++pos) {
    seen += count[pos];
    if (seen >= n) return static_cast<Pos>(pos);
  }
  throw ArityError("unreachable: median of nonempty multiset");
}

namespace {

void gen_multisets(int slots, int lo, int m, std::vector<Pos>& cur,
                   std::vector<std::vector<Pos>>& out) {
  if (slots == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = lo; p < m; ++p) {
    cur.push_back(static_cast<Pos>(p));
    gen_multisets(slots - 1, p, m, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<MedianRule> enumerate_median_rules(int n, const Alignment& a, bool nvp_only) {
  if (n < 3) throw PremiseNotMet("rule enumeration assumes n >= 3");
  Alignment c = canonicalize_alignment(a);
  std::vector<std::vector<Pos>> multisets;
  std::vector<Pos> cur;
  gen_multisets(n - 1, 0, c.m(), cur, multisets);
  std::vector<MedianRule> out;
  out.reserve(multisets.size());
  for (auto& ph : multisets) {
    MedianRule r(c, std::move(ph));
    if (!nvp_only || r.is_nvp()) out.push_back(std::move(r));
  }
  return out;
}

ProjectedSCF::ProjectedSCF(int agents, std::vector<MedianRule> rs)
    : n(agents), rules(std::move(rs)) {
  std::sort(rules.begin(), rules.end());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (rules[i].n() != n) throw ArityError("rule phantom count inconsistent with n");
    if (i > 0 && rules[i].alignment == rules[i - 1].alignment)
      throw SupportMismatch("duplicate rule for one alignment");
  }
}

SupportSpec ProjectedSCF::support() const {
  std::vector<Alignment> as;
  for (const auto& r : rules) as.push_back(r.alignment);
  return SupportSpec::of(as);
}

const MedianRule& ProjectedSCF::rule_for(const Alignment& canonical) const {
  for (const auto& r : rules)
    if (r.alignment == canonical) return r;
  throw SupportMismatch("no rule for the requested alignment");
}

bool ProjectedSCF::is_nvpms() const {
  return std::all_of(rules.begin(), rules.end(),
                     [](const MedianRule& r) { return r.is_nvp(); });
}

std::strong_ordering operator<=>(const ProjectedSCF& x, const ProjectedSCF& y) {
  if (auto c = x.n <=> y.n; c != 0) return c;
  return x.rules <=> y.rules;
}

ProjectedSCF make_true_median(int n, const SupportSpec& s) {
  if (n < 3 || n % 2 == 0) throw PremiseNotMet("the true median SCF requires odd n");
  if (s.empty()) throw PremiseNotMet("empty support");
  std::vector<MedianRule> rules;
  for (const Alignment& a : s.alignments) {
    std::vector<Pos> ph;
    for (int i = 0; i < (n - 1) / 2; ++i) ph.push_back(0);
    for (int i = 0; i < (n - 1) / 2; ++i) ph.push_back(static_cast<Pos>(a.m() - 1));
    rules.emplace_back(a, std::move(ph));
  }
  return ProjectedSCF(n, std::move(rules));
}

namespace {

// The three m=3 reversal classes carry the cyclic orientations
// (0,1,2), (1,2,0), (2,0,1); placement of "leftmost" phantoms follows the
// orientation, not the canonical representative.
Alignment cyclic_orientation_of(const Alignment& canonical) {
  static const std::array<std::array<Alt, 3>, 3> rotations = {
      {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}};
  for (const auto& rot : rotations) {
    Alignment o(std::vector<Alt>(rot.begin(), rot.end()));
    if (canonicalize_alignment(o) == canonical) return o;
  }
  throw InvalidAlignment("not an m=3 alignment");
}

}  // namespace

ProjectedSCF make_symmetric_order_statistic(int n, int k, const SupportSpec& s) {
  if (s.empty() || s.m() != 3)
    throw PremiseNotMet("symmetric order-statistic SCFs are defined for m = 3");
  if (n < 3 || k < 1 || k > n - 2)
    throw PremiseNotMet("symmetric order-statistic SCFs require 1 <= k <= n-2");
  std::vector<MedianRule> rules;
  for (const Alignment& a : s.alignments) {
    Alignment oriented = cyclic_orientation_of(a);
    Alt left = oriented.order.front(), right = oriented.order.back();
    std::vector<Pos> ph;
    for (int i = 0; i < k; ++i) ph.push_back(a.position_of(left));
    for (int i = 0; i < n - 1 - k; ++i) ph.push_back(a.position_of(right));
    rules.emplace_back(a, std::move(ph));
  }
  return ProjectedSCF(n, std::move(rules));
}

const TabularSCF::Table& TabularSCF::table_for(const Alignment& canonical) const {
  for (const auto& t : tables)
    if (t.alignment == canonical) return t;
  throw SupportMismatch("no table for the requested alignment");
}

std::size_t TabularSCF::profile_index(const Table& t, std::span<const int> digits) {
  std::size_t idx = 0;
  for (int d : digits) idx = idx * t.domain.size() + static_cast<std::size_t>(d);
  return idx;
}

void for_each_profile(int n, int base,
                      const std::function<void(std::span<const int>)>& visit) {
  std::vector<int> digits(n, 0);
  while (true) {
    visit(digits);
    int i = n - 1;
    while (i >= 0 && digits[i] == base - 1) digits[i--] = 0;
    if (i < 0) return;
    ++digits[i];
  }
}

TabularSCF tabulate(
    int n, const SupportSpec& s,
    const std::function<Alt(const Alignment&, const std::vector<Preference>&)>& outcome) {
  TabularSCF f;
  f.n = n;
  for (const Alignment& a : s.alignments) {
    TabularSCF::Table t;
    t.alignment = a;
    t.domain = enumerate_single_peaked(a);
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= t.domain.size();
    t.outcomes.reserve(total);
    std::vector<Preference> profile(n);
    for_each_profile(n, static_cast<int>(t.domain.size()), [&](std::span<const int> digits) {
      for (int i = 0; i < n; ++i) profile[i] = t.domain[digits[i]];
      t.outcomes.push_back(outcome(a, profile));
    });
    f.tables.push_back(std::move(t));
  }
  std::sort(f.tables.begin(), f.tables.end(),
            [](const auto& x, const auto& y) { return x.alignment < y.alignment; });
  return f;
}

TabularSCF to_tabular(const ProjectedSCF& f) {
  return tabulate(f.n, f.support(),
                  [&](const Alignment& a, const std::vector<Preference>& profile) {
                    const MedianRule& r = f.rule_for(a);
                    std::vector<Pos> peaks;
                    peaks.reserve(profile.size());
                    for (const Preference& p : profile)
                      peaks.push_back(a.position_of(p.peak()));
                    return a.order[eval_median_rule(r, peaks)];
                  });
}

Pos order_statistic_value(const ProjectedSCF& f, const Alignment& a,
                          std::span<const Pos> peaks) {
  const MedianRule& r = f.rule_for(canonicalize_alignment(a));
  const Pos last = static_cast<Pos>(r.alignment.m() - 1);
  int k = 0;
  for (Pos p : r.phantoms) {
    if (p == 0)
      ++k;
    else if (p != last)
      throw PremiseNotMet("closed form requires all phantoms at the two ends");
  }
  if (static_cast<int>(peaks.size()) != f.n)
    throw ArityError("order statistic expects exactly n peaks");
  std::vector<Pos> sorted(peaks.begin(), peaks.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted[f.n - k - 1];  // the (n-k)-th smallest, 1-indexed
}

}  // namespace peakcheck
