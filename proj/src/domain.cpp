#include "peakcheck/domain.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace peakcheck {

namespace {

bool is_permutation_of_ids(const std::vector<Alt>& seq) {
  if (seq.empty() || seq.size() > kMaxAlternatives) return false;
  std::array<bool, kMaxAlternatives> seen{};
  for (Alt a : seq) {
    if (a >= seq.size() || seen[a]) return false;
    seen[a] = true;
  }
  return true;
}

std::vector<Alt> reversed_order(const std::vector<Alt>& o) {
  return {o.rbegin(), o.rend()};
}

}  // namespace

Alignment::Alignment(std::vector<Alt> o) : order(std::move(o)) {
  if (!is_permutation_of_ids(order))
    throw InvalidAlignment("alignment is not a permutation of 0..m-1");
  canonical = order <= reversed_order(order);
}

Pos Alignment::position_of(Alt a) const {
  for (int i = 0; i < m(); ++i)
    if (order[i] == a) return static_cast<Pos>(i);
  throw DomainMismatch("alternative not present in alignment");
}

Alignment Alignment::reversed() const { return Alignment(reversed_order(order)); }

Preference::Preference(std::vector<Alt> r) : ranking(std::move(r)) {
  if (!is_permutation_of_ids(ranking))
    throw InvalidAlignment("preference is not a permutation of 0..m-1");
}

int Preference::rank_of(Alt a) const {
  for (int i = 0; i < m(); ++i)
    if (ranking[i] == a) return i;
  throw DomainMismatch("alternative not present in preference");
}

SupportSpec SupportSpec::of(const std::vector<Alignment>& raw,
                            std::vector<Alignment>* collapsed) {
  SupportSpec s;
  for (const auto& a : raw) {
    if (!s.alignments.empty() && a.m() != s.alignments.front().m())
      throw DomainMismatch("support mixes alternative counts");
    Alignment c = canonicalize_alignment(a);
    if (std::find(s.alignments.begin(), s.alignments.end(), c) != s.alignments.end()) {
      if (collapsed) collapsed->push_back(a);
      continue;
    }
    s.alignments.push_back(std::move(c));
  }
  std::sort(s.alignments.begin(), s.alignments.end());
  return s;
}

bool SupportSpec::contains(const Alignment& a) const {
  Alignment c = canonicalize_alignment(a);
  return std::binary_search(alignments.begin(), alignments.end(), c);
}

std::vector<std::string> default_labels(int m) {
  std::vector<std::string> labels;
  labels.reserve(m);
  for (int i = 0; i < m; ++i) labels.push_back(std::string(1, char('a' + i)));
  return labels;
}

Alignment canonicalize_alignment(const Alignment& a) {
  if (!is_permutation_of_ids(a.order))
    throw InvalidAlignment("alignment is not a permutation of 0..m-1");
  std::vector<Alt> rev = reversed_order(a.order);
  return Alignment(a.order <= rev ? a.order : rev);
}

bool is_single_peaked(const Preference& p, const Alignment& a) {
  if (p.m() != a.m()) throw DomainMismatch("preference and alignment sizes differ");
  std::array<int, kMaxAlternatives> pos{};
  for (int i = 0; i < a.m(); ++i) pos[a.order[i]] = i;
  // Each step down the ranking must extend the interval of visited positions
  // by exactly one slot on either side.
  int lo = pos[p.ranking[0]], hi = lo;
  for (int k = 1; k < p.m(); ++k) {
    int q = pos[p.ranking[k]];
    if (q == lo - 1)
      lo = q;
    else if (q == hi + 1)
      hi = q;
    else
      return false;
  }
  return true;
}

std::vector<Preference> enumerate_single_peaked(const Alignment& a) {
  const int m = a.m();
  // Build each member worst-to-best: repeatedly take from the left or right
  // end of the remaining interval of the alignment. Every bit pattern yields
  // a distinct preference, 2^(m-1) in total.
  std::vector<Preference> out;
  out.reserve(std::size_t{1} << (m - 1));
  for (unsigned mask = 0; mask < (1u << (m - 1)); ++mask) {
    std::vector<Alt> worst_first;
    worst_first.reserve(m);
    int lo = 0, hi = m - 1;
    for (int k = 0; k < m - 1; ++k) {
      if (mask & (1u << k))
        worst_first.push_back(a.order[lo++]);
      else
        worst_first.push_back(a.order[hi--]);
    }
    worst_first.push_back(a.order[lo]);
    out.emplace_back(std::vector<Alt>(worst_first.rbegin(), worst_first.rend()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Preference> domain_intersection(const Alignment& a1, const Alignment& a2) {
  if (a1.m() != a2.m()) throw DomainMismatch("alignments over different alternative sets");
  std::vector<Preference> d1 = enumerate_single_peaked(a1);
  std::vector<Preference> d2 = enumerate_single_peaked(a2);
  std::vector<Preference> out;
  std::set_intersection(d1.begin(), d1.end(), d2.begin(), d2.end(), std::back_inserter(out));
  return out;
}

std::vector<Alt> shared_peaks(const Alignment& a1, const Alignment& a2) {
  std::vector<Alt> peaks;
  for (const Preference& p : domain_intersection(a1, a2)) peaks.push_back(p.peak());
  std::sort(peaks.begin(), peaks.end());
  peaks.erase(std::unique(peaks.begin(), peaks.end()), peaks.end());
  return peaks;
}

ConstantSharedPeaksVerdict has_constant_shared_peaks(const SupportSpec& s) {
  if (s.size() < 2)
    throw PremiseNotMet("constant shared peaks needs at least two reversal classes");
  ConstantSharedPeaksVerdict v;
  bool first = true;
  for (int i = 0; i < s.size(); ++i) {
    for (int j = i + 1; j < s.size(); ++j) {
      std::vector<Alt> t = shared_peaks(s.alignments[i], s.alignments[j]);
      if (first) {
        v.shared = t;
        first = false;
        continue;
      }
      if (t != v.shared) {
        v.constant = false;
        v.witness_pair = {s.alignments[i], s.alignments[j]};
        v.witness_first = v.shared;
        v.witness_second = t;
        return v;
      }
    }
  }
  v.constant = !v.shared.empty();
  if (!v.constant) v.witness_pair = {s.alignments[0], s.alignments[1]};
  return v;
}

std::vector<Alignment> all_canonical_alignments(int m) {
  if (m < 2 || m > kMaxAlternatives) throw InvalidAlignment("unsupported alternative count");
  std::vector<Alt> perm(m);
  std::iota(perm.begin(), perm.end(), Alt{0});
  std::vector<Alignment> out;
  do {
    Alignment a(perm);
    if (a.canonical) out.push_back(std::move(a));
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::vector<Alt>> contiguous_run(const Alignment& a,
                                               const std::vector<Alt>& t) {
  if (t.empty()) return std::nullopt;
  std::vector<int> positions;
  for (Alt x : t) positions.push_back(a.position_of(x));
  int lo = *std::min_element(positions.begin(), positions.end());
  int hi = *std::max_element(positions.begin(), positions.end());
  if (hi - lo + 1 != static_cast<int>(t.size())) return std::nullopt;
  std::vector<Alt> run;
  for (int p = lo; p <= hi; ++p) run.push_back(a.order[p]);
  return run;
}

}  // namespace peakcheck
