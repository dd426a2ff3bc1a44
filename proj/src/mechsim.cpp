#include "peakcheck/mechsim.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "peakcheck/domain.hpp"

namespace peakcheck {

namespace {

constexpr int kMaxAgents = 8;

Mechanism build_mechanism(MechKind kind, const ProjectedSCF& f, int int_cap,
                          std::optional<int> honest) {
  if (int_cap < 2) throw PremiseNotMet("integer messages need at least two levels");
  if (f.rules.empty()) throw PremiseNotMet("mechanism needs a nonempty support");
  if (f.n > kMaxAgents) throw ScaleExceeded("too many agents for the simulator");

  Mechanism mech;
  mech.kind = kind;
  mech.n = f.n;
  mech.int_cap = int_cap;
  mech.f = f;
  mech.support = f.support();
  mech.honest_agent = honest;
  const int m = mech.support.m();

  for (const Alignment& a : mech.support.alignments) {
    Mechanism::ClassData cd;
    cd.alignment = a;
    cd.domain = enumerate_single_peaked(a);
    for (int p = 0; p < m; ++p) cd.pos_of[a.order[p]] = static_cast<Pos>(p);
    if (kind == MechKind::PartiallyHonest) {
      cd.rule_pool = enumerate_median_rules(f.n, a, /*nvp_only=*/false);
      const MedianRule& own = f.rule_for(a);
      auto it = std::find(cd.rule_pool.begin(), cd.rule_pool.end(), own);
      cd.f_rule_idx = static_cast<std::uint16_t>(it - cd.rule_pool.begin());
    }
    mech.classes.push_back(std::move(cd));
  }

  // Claims: both raw orientations of every support class, every member of
  // its single-peaked domain.
  for (std::uint16_t c = 0; c < mech.classes.size(); ++c) {
    const auto& cd = mech.classes[c];
    for (int rev = 0; rev < 2; ++rev)
      for (std::uint16_t p = 0; p < cd.domain.size(); ++p) {
        mech.claims.push_back({c, rev == 1, p});
        mech.claim_peak.push_back(cd.domain[p].peak());
      }
  }

  mech.fav_count = (kind == MechKind::Canonical) ? m : 1;
  mech.rule_count = (kind == MechKind::PartiallyHonest)
                        ? static_cast<int>(mech.classes.front().rule_pool.size())
                        : 1;
  return mech;
}

}  // namespace

std::uint32_t Mechanism::option_index(std::uint16_t claim, int fav, int rule, int z) const {
  return static_cast<std::uint32_t>(
      ((claim * fav_count + fav) * rule_count + rule) * int_cap + (z - 1));
}

MsgOption Mechanism::option_at(std::uint32_t index) const {
  MsgOption o;
  o.z = static_cast<std::uint8_t>(index % int_cap + 1);
  index /= int_cap;
  o.rule = static_cast<std::uint16_t>(index % rule_count);
  index /= rule_count;
  o.favorite = static_cast<Alt>(index % fav_count);
  index /= fav_count;
  o.claim = static_cast<std::uint16_t>(index);
  return o;
}

Alt Mechanism::outcome_fast(std::span<const MsgOption> msgs) const {
  // Class-level agreement; at most one class can reach n-1 claims.
  int agreed = -1;
  for (int i = 0; i < n && agreed < 0; ++i) {
    const int ci = claims[msgs[i].claim].class_idx;
    int count = 0;
    for (int j = 0; j < n; ++j)
      if (claims[msgs[j].claim].class_idx == ci) ++count;
    if (count >= n - 1) agreed = ci;
  }

  if (agreed >= 0) {
    const auto& cd = classes[agreed];
    std::array<Pos, kMaxAgents> peaks;
    for (int i = 0; i < n; ++i) peaks[i] = cd.pos_of[claim_peak[msgs[i].claim]];
    return cd.alignment.order[eval_median_rule(f.rules[agreed], std::span(peaks.data(), n))];
  }

  // The lowest-indexed sender of the largest integer dictates.
  int j = 0;
  for (int i = 1; i < n; ++i)
    if (msgs[i].z > msgs[j].z) j = i;
  if (kind == MechKind::Canonical) return msgs[j].favorite;

  const auto& cd = classes[claims[msgs[j].claim].class_idx];
  std::array<Pos, kMaxAgents> peaks;
  for (int i = 0; i < n; ++i) peaks[i] = cd.pos_of[claim_peak[msgs[i].claim]];
  return cd.alignment.order[eval_median_rule(cd.rule_pool[msgs[j].rule],
                                             std::span(peaks.data(), n))];
}

Alt Mechanism::outcome(std::span<const std::uint32_t> message_profile) const {
  if (static_cast<int>(message_profile.size()) != n)
    throw InvalidMessage("message profile arity mismatch");
  std::vector<MsgOption> msgs;
  for (std::uint32_t id : message_profile) {
    if (id >= options_per_agent()) throw InvalidMessage("message index out of range");
    msgs.push_back(option_at(id));
  }
  return outcome_fast(msgs);
}

Mechanism canonical_mechanism(const ProjectedSCF& f, int int_cap) {
  return build_mechanism(MechKind::Canonical, f, int_cap, std::nullopt);
}

Mechanism partially_honest_mechanism(const ProjectedSCF& f, int honest_agent, int int_cap) {
  if (f.support().size() < 3)
    throw PremiseNotMet("the partially-honest construction needs at least three classes");
  if (!f.is_nvpms()) throw PremiseNotMet("the projected SCF must place phantoms on both ends");
  if (honest_agent < 0 || honest_agent >= f.n)
    throw PremiseNotMet("honest agent index out of range");
  return build_mechanism(MechKind::PartiallyHonest, f, int_cap, honest_agent);
}

namespace {

struct StateJob {
  int class_idx;
  std::vector<int> digits;
};

class EquilibriumScanner {
 public:
  EquilibriumScanner(const Mechanism& mech, const MechCheckOptions& opts)
      : mech_(mech), opts_(opts), tab_(to_tabular(mech.f)) {
    if (mech_.options_per_agent() > opts_.max_options_per_agent)
      throw ScaleExceeded("message space exceeds the configured per-agent bound");
    // Truthful claim lists: for every class and domain index, the claims
    // whose preference component equals that preference as a value.
    truthful_claims_.resize(mech_.classes.size());
    for (std::size_t c = 0; c < mech_.classes.size(); ++c) {
      const auto& domain = mech_.classes[c].domain;
      truthful_claims_[c].resize(domain.size());
      for (std::uint16_t k = 0; k < mech_.claims.size(); ++k) {
        const Claim& cl = mech_.claims[k];
        const Preference& claimed = mech_.classes[cl.class_idx].domain[cl.pref_idx];
        for (std::size_t p = 0; p < domain.size(); ++p)
          if (claimed == domain[p]) truthful_claims_[c][p].push_back(k);
      }
    }
  }

  std::vector<EquilibriumReport> run() const {
    std::vector<StateJob> jobs;
    for (std::size_t c = 0; c < mech_.classes.size(); ++c) {
      const int d = static_cast<int>(mech_.classes[c].domain.size());
      for_each_profile(mech_.n, d, [&](std::span<const int> digits) {
        jobs.push_back({static_cast<int>(c), {digits.begin(), digits.end()}});
      });
    }
    if (opts_.limit_states > 0 && jobs.size() > opts_.limit_states)
      jobs.resize(opts_.limit_states);
    if (jobs.size() > opts_.max_states)
      throw ScaleExceeded("state space exceeds the configured bound");

    std::vector<EquilibriumReport> reports(jobs.size());
    const int workers = std::max(1, opts_.jobs);
    if (workers == 1) {
      for (std::size_t i = 0; i < jobs.size(); ++i) reports[i] = check_state(jobs[i]);
    } else {
      std::vector<std::thread> pool;
      std::atomic<std::size_t> next{0};
      for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1))
            reports[i] = check_state(jobs[i]);
        });
      for (auto& t : pool) t.join();
    }
    return reports;
  }

 private:
  // True when the agents other than `agent` already hold n-1 claims on one
  // class. Every unilateral deviation then keeps that class agreed, so the
  // outcome depends on the deviator's claimed peak alone.
  int locked_class(const std::vector<MsgOption>& prof, int agent) const {
    for (int j = 0; j < mech_.n; ++j) {
      if (j == agent) continue;
      const int c = mech_.claims[prof[j].claim].class_idx;
      int count = 0;
      for (int k = 0; k < mech_.n; ++k)
        if (k != agent && mech_.claims[prof[k].claim].class_idx == c) ++count;
      if (count >= mech_.n - 1) return c;
    }
    return -1;
  }

  // Scans one agent's full unilateral deviation space, overbids first; the
  // z = int_cap + 1 messages stand in for every integer above anything the
  // profile carries. Stops at the first deviation `accept` takes.
  template <typename Fn>
  bool scan_deviations(std::vector<MsgOption>& prof, int agent, Fn&& accept) const {
    const MsgOption saved = prof[agent];
    if (locked_class(prof, agent) >= 0) {
      for (std::uint16_t claim = 0; claim < mech_.claims.size(); ++claim) {
        prof[agent] = {1, 0, claim, 0};
        if (accept(prof[agent], mech_.outcome_fast(prof))) {
          prof[agent] = saved;
          return true;
        }
      }
      prof[agent] = saved;
      return false;
    }
    for (int z = mech_.int_cap + 1; z >= 1; --z) {
      for (std::uint16_t claim = 0; claim < mech_.claims.size(); ++claim) {
        for (int rule = 0; rule < mech_.rule_count; ++rule) {
          for (int fav = 0; fav < mech_.fav_count; ++fav) {
            prof[agent] = {static_cast<std::uint8_t>(z), static_cast<Alt>(fav), claim,
                           static_cast<std::uint16_t>(rule)};
            if (accept(prof[agent], mech_.outcome_fast(prof))) {
              prof[agent] = saved;
              return true;
            }
          }
        }
      }
    }
    prof[agent] = saved;
    return false;
  }

  enum class NashStatus { NotEquilibrium, Equilibrium, HonestyKilled };

  NashStatus classify(
      std::vector<MsgOption>& prof,
      const std::array<std::array<std::int8_t, kMaxAlternatives>, kMaxAgents>& rank,
      int state_class) const {
    const Alt out = mech_.outcome_fast(prof);
    for (int i = 0; i < mech_.n; ++i) {
      const auto& r = rank[i];
      if (scan_deviations(prof, i,
                          [&](const MsgOption&, Alt o) { return r[o] < r[out]; }))
        return NashStatus::NotEquilibrium;
    }
    if (mech_.kind == MechKind::PartiallyHonest && opts_.honesty_refinement) {
      const int h = *mech_.honest_agent;
      if (mech_.claims[prof[h].claim].class_idx != state_class) {
        // A truthful-class message that costs nothing is strictly preferred.
        const auto& r = rank[h];
        const MsgOption saved = prof[h];
        const bool locked = locked_class(prof, h) >= 0;
        for (std::uint16_t claim = 0; claim < mech_.claims.size(); ++claim) {
          if (mech_.claims[claim].class_idx != state_class) continue;
          const int z_hi = locked ? 1 : mech_.int_cap + 1;
          const int rules = locked ? 1 : mech_.rule_count;
          const int favs = locked ? 1 : mech_.fav_count;
          for (int z = 1; z <= z_hi; ++z) {
            for (int rule = 0; rule < rules; ++rule) {
              for (int fav = 0; fav < favs; ++fav) {
                prof[h] = {static_cast<std::uint8_t>(z), static_cast<Alt>(fav), claim,
                           static_cast<std::uint16_t>(rule)};
                const Alt o = mech_.outcome_fast(prof);
                if (r[o] <= r[out]) {
                  prof[h] = saved;
                  return NashStatus::HonestyKilled;
                }
              }
            }
          }
        }
        prof[h] = saved;
      }
    }
    return NashStatus::Equilibrium;
  }

  EquilibriumReport check_state(const StateJob& job) const {
    const auto& cls = mech_.classes[job.class_idx];
    const int n = mech_.n;

    EquilibriumReport rep;
    rep.class_idx = job.class_idx;
    rep.profile_digits = job.digits;

    std::array<std::array<std::int8_t, kMaxAlternatives>, kMaxAgents> rank{};
    std::array<Alt, kMaxAgents> peak{};
    for (int i = 0; i < n; ++i) {
      const Preference& p = cls.domain[job.digits[i]];
      peak[i] = p.peak();
      for (int a = 0; a < cls.alignment.m(); ++a)
        rank[i][a] = static_cast<std::int8_t>(p.rank_of(static_cast<Alt>(a)));
    }

    {
      std::array<int, kMaxAlternatives> counts{};
      for (int i = 0; i < n; ++i) ++counts[peak[i]];
      rep.near_unanimous = *std::max_element(counts.begin(), counts.end()) >= n - 1;
    }

    const auto& table = tab_.table_for(cls.alignment);
    rep.f_outcome = table.outcomes[TabularSCF::profile_index(table, job.digits)];

    // The truthful message profile: canonical orientation of the true class,
    // own preference, favorite at the own peak, the lowest integer, own rule.
    std::vector<MsgOption> star(n);
    const std::uint16_t claim_base =
        static_cast<std::uint16_t>(job.class_idx * 2 * cls.domain.size());
    for (int i = 0; i < n; ++i)
      star[i] = {1, peak[i], static_cast<std::uint16_t>(claim_base + job.digits[i]),
                 cls.f_rule_idx};

    rep.truthful_outcome = mech_.outcome_fast(star);
    if (rep.truthful_outcome != rep.f_outcome)
      rep.violations.push_back({"truthful_outcome_mismatch", encode(star), -1,
                                rep.truthful_outcome, rep.f_outcome});

    rep.truthful_equilibrium_ok = true;
    for (int i = 0; i < n; ++i) {
      const auto& r = rank[i];
      const Alt out = rep.truthful_outcome;
      Alt dev_out = out;
      if (scan_deviations(star, i, [&](const MsgOption&, Alt o) {
            if (r[o] < r[out]) {
              dev_out = o;
              return true;
            }
            return false;
          })) {
        rep.truthful_equilibrium_ok = false;
        rep.violations.push_back(
            {"profitable_deviation_from_truth", encode(star), i, dev_out, out});
        break;
      }
    }

    // Every message profile in which all claims carry the agents' true
    // private preferences; Nash members must reproduce f(state).
    std::vector<std::vector<MsgOption>> choices(n);
    for (int i = 0; i < n; ++i) {
      for (std::uint16_t claim : truthful_claims_[job.class_idx][job.digits[i]])
        for (int fav = 0; fav < mech_.fav_count; ++fav)
          for (int rule = 0; rule < mech_.rule_count; ++rule)
            for (int z = 1; z <= mech_.int_cap; ++z)
              choices[i].push_back({static_cast<std::uint8_t>(z), static_cast<Alt>(fav),
                                    claim, static_cast<std::uint16_t>(rule)});
    }

    std::set<Alt> outcomes;
    std::vector<MsgOption> prof(n);
    std::vector<std::size_t> pick(n, 0);
    while (true) {
      for (int i = 0; i < n; ++i) prof[i] = choices[i][pick[i]];
      switch (classify(prof, rank, job.class_idx)) {
        case NashStatus::NotEquilibrium:
          break;
        case NashStatus::HonestyKilled:
          ++rep.honesty_killed;
          break;
        case NashStatus::Equilibrium: {
          ++rep.equilibria_scanned;
          const Alt out = mech_.outcome_fast(prof);
          outcomes.insert(out);
          const int first_class = mech_.claims[prof[0].claim].class_idx;
          bool all_same = true;
          for (int i = 1; i < n; ++i)
            all_same = all_same && mech_.claims[prof[i].claim].class_idx == first_class;
          if (all_same && first_class != job.class_idx) ++rep.spurious_false_class;
          if (out != rep.f_outcome)
            rep.violations.push_back(
                {"bad_truthful_equilibrium", encode(prof), -1, out, rep.f_outcome});
          break;
        }
      }
      int i = n - 1;
      while (i >= 0 && pick[i] + 1 == choices[i].size()) pick[i--] = 0;
      if (i < 0) break;
      ++pick[i];
    }
    rep.truthful_nash_outcomes.assign(outcomes.begin(), outcomes.end());

    // Dominant-strategy condition under truthful public reports: with every
    // claim on the true class the integer and favorite components are inert,
    // so the quantifiers reduce to preference reports.
    rep.dominant_ok = true;
    rep.strict_clause = true;
    const int d = static_cast<int>(cls.domain.size());
    std::vector<int> vt(n), vd(n);
    for (int i = 0; i < n && rep.dominant_ok; ++i) {
      const auto& r = rank[i];
      for (int dev = 0; dev < d; ++dev) {
        if (dev == job.digits[i]) continue;
        bool weak = true;
        bool strict = false;
        for_each_profile(n - 1, d, [&](std::span<const int> others) {
          if (!weak) return;
          int oi = 0;
          for (int j = 0; j < n; ++j) {
            const int v = (j == i) ? job.digits[i] : others[oi];
            vt[j] = v;
            vd[j] = (j == i) ? dev : v;
            if (j != i) ++oi;
          }
          const Alt out_t = table.outcomes[TabularSCF::profile_index(table, vt)];
          const Alt out_d = table.outcomes[TabularSCF::profile_index(table, vd)];
          if (r[out_d] < r[out_t]) {
            weak = false;
            rep.violations.push_back({"dominance_failure", {}, i, out_d, out_t});
          } else if (r[out_t] < r[out_d]) {
            strict = true;
          }
        });
        if (!weak) {
          rep.dominant_ok = false;
          break;
        }
        if (!strict) rep.strict_clause = false;
      }
    }
    return rep;
  }

  std::vector<std::uint32_t> encode(const std::vector<MsgOption>& prof) const {
    std::vector<std::uint32_t> ids;
    for (const MsgOption& o : prof)
      ids.push_back(mech_.option_index(o.claim, o.favorite, o.rule,
                                       std::min<int>(o.z, mech_.int_cap)));
    return ids;
  }

  const Mechanism& mech_;
  MechCheckOptions opts_;
  TabularSCF tab_;
  // [class][domain index] -> claims carrying that preference value
  std::vector<std::vector<std::vector<std::uint16_t>>> truthful_claims_;
};

}  // namespace

std::vector<EquilibriumReport> check_mixed_implementation(const Mechanism& mech,
                                                          const ProjectedSCF& f,
                                                          const SupportSpec& s,
                                                          const MechCheckOptions& opts) {
  if (mech.f != f) throw SupportMismatch("mechanism was built for a different SCF");
  if (f.support() != s) throw SupportMismatch("SCF and support disagree");
  return EquilibriumScanner(mech, opts).run();
}

std::vector<EquilibriumReport> check_partially_honest_implementation(
    const ProjectedSCF& f, const SupportSpec& s, int honest_agent, int int_cap,
    const MechCheckOptions& opts) {
  if (f.support() != s) throw SupportMismatch("SCF and support disagree");
  Mechanism mech = partially_honest_mechanism(f, honest_agent, int_cap);
  return EquilibriumScanner(mech, opts).run();
}

bool all_reports_ok(const std::vector<EquilibriumReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const EquilibriumReport& r) { return r.ok(); });
}

}  // namespace peakcheck
