#include "mpcsim/adversaries.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

namespace mpcsim {

// --- Cleve search -----------------------------------------------------------

namespace {

void consistency_precheck(const TwoPartyProtocol& psi) {
  uint64_t sum0 = 0, sum1 = 0, agree = 0;
  for (uint64_t w = 0; w < psi.outcomes; ++w) {
    int o0 = psi.output(w, 0), o1 = psi.output(w, 1);
    sum0 += o0;
    sum1 += o1;
    agree += (o0 == o1);
  }
  if (2 * sum0 != psi.outcomes || 2 * sum1 != psi.outcomes)
    throw SpecError("not a coin-flipping protocol: honest output is biased");
  double agree_frac = static_cast<double>(agree) / psi.outcomes;
  if (agree_frac + 1e-12 < 0.5 + psi.gamma)
    throw SpecError("protocol is not gamma-consistent");
}

// Output of the defender when the attacker plays abort-at(i_star) whenever
// the prediction b_{j} equals trigger; otherwise honest (or abort at `alt`).
int64_t attacked_sum(const TwoPartyProtocol& psi, int attacker, int i_star,
                     int j_star, int trigger, int alt_round /* <0: none */) {
  int64_t sum = 0;
  int defender = 1 - attacker;
  for (uint64_t w = 0; w < psi.outcomes; ++w) {
    int predict = psi.default_output(w, attacker, j_star);
    int out;
    if (predict == trigger) {
      out = psi.default_output(w, defender, i_star);
    } else if (alt_round >= 0) {
      out = psi.default_output(w, defender, alt_round);
    } else {
      out = psi.output(w, defender);
    }
    sum += out;
  }
  return sum;
}

}  // namespace

CleveAttack find_cleve_attacker(const TwoPartyProtocol& psi,
                                uint64_t max_outcomes) {
  if (psi.outcomes == 0 || psi.rounds <= 0)
    throw SpecError("empty two-party protocol");
  if (psi.outcomes > max_outcomes)
    throw ScaleError("outcome space too large for exact search");
  consistency_precheck(psi);

  CleveAttack best;
  bool found = false;
  for (int attacker = 0; attacker < 2; ++attacker) {
    for (int i_star = 1; i_star <= psi.rounds; ++i_star) {
      if (psi.sender[i_star - 1] != attacker) continue;
      for (int j_star : {i_star, i_star - 1}) {
        for (int trigger : {0, 1}) {
          int64_t sum =
              attacked_sum(psi, attacker, i_star, j_star, trigger, -1);
          double mean = static_cast<double>(sum) / psi.outcomes;
          double signed_bias = mean - 0.5;
          if (!found || std::abs(signed_bias) > best.bias + 1e-15) {
            best.spec = {attacker, i_star, j_star, trigger};
            best.bias = std::abs(signed_bias);
            best.signed_bias = signed_bias;
            found = true;
          }
        }
      }
    }
  }
  if (!found) throw SpecError("attacker has no round to abort in");
  return best;
}

AveragingCheck cleve_averaging(const TwoPartyProtocol& psi, int attacker,
                               int j_star, int b) {
  if (j_star < 1 || j_star > psi.rounds) throw SpecError("j* out of range");
  uint64_t m = psi.outcomes;
  // Two-round attacker: abort at j* on the trigger, else at j*+1.
  int64_t s = attacked_sum(psi, attacker, j_star, j_star, b, j_star + 1);
  // Its halves: abort at j* on the trigger, else never; abort at j*+1 on the
  // complementary trigger, else never.
  int64_t s0 = attacked_sum(psi, attacker, j_star, j_star, b, -1);
  int64_t s1 = attacked_sum(psi, attacker, j_star + 1, j_star, 1 - b, -1);
  AveragingCheck chk;
  chk.b = static_cast<double>(s) / m - 0.5;
  chk.b0 = static_cast<double>(s0) / m - 0.5;
  chk.b1 = static_cast<double>(s1) / m - 0.5;
  // (B0 + B1)/2 = B/2 iff 2(S0 + S1) = 2S + M, exactly in integers.
  chk.exact_identity = (2 * (s0 + s1) == 2 * s + static_cast<int64_t>(m));
  return chk;
}

// --- toy hybrid protocol ------------------------------------------------------

ProtocolSpec make_hybrid_xor_cf(
    int n, const std::vector<std::vector<Committee>>& rounds) {
  ProtocolSpec spec;
  spec.n = n;
  for (const auto& committees : rounds) {
    std::vector<CallSpec> calls;
    std::vector<Committee> sorted = committees;
    std::sort(sorted.begin(), sorted.end());
    for (const Committee& c : sorted) {
      c.validate(n);
      CallSpec cs;
      cs.label = "cf";
      cs.functionality = f_cf();
      cs.tp = TrustedPartyType::restricted(
          TrustedPartyType::Kind::RestrictedIdFair, {c});
      cs.participants = c;
      calls.push_back(std::move(cs));
    }
    spec.rounds.push_back(RoundSpec::functionality(std::move(calls)));
  }
  spec.rounds.push_back(RoundSpec::comm());

  int total = static_cast<int>(spec.rounds.size());
  spec.program.finalize = [total](int, const PartyView& view) {
    if (view.rounds_done() < total) return Output::pending();
    uint64_t x = 0;
    for (int r = 0; r + 1 < total; ++r) {
      for (int c = 0;; ++c) {
        const CallResult* res = view.call(r, c);
        if (!res) break;
        if (!res->aborted && !res->outcome.public_value.empty())
          x ^= res->outcome.public_value[0] & 1;
      }
    }
    return Output::of({x});
  };
  return spec;
}

// --- embedding ------------------------------------------------------------------

Committee extend_committee(const TwoPartyView& view, const Committee& c) {
  const auto& emb = view.embedding;
  auto outside = [&](int p) {
    return !contains_sorted(emb.s_set, p) && !contains_sorted(view.j_union, p);
  };
  if (emb.large_threshold >= 0 &&
      static_cast<int>(c.size()) > emb.large_threshold) {
    // Large committee: an arbitrary (fixed) eligible subset of the target
    // size; lexicographically first keeps it deterministic.
    std::vector<int> members;
    for (int p = 0; p < view.pi_n && static_cast<int>(members.size()) <
                                         emb.extend_outside;
         ++p)
      if (outside(p)) members.push_back(p);
    if (static_cast<int>(members.size()) < emb.extend_outside)
      throw SpecError("not enough parties to extend a large committee");
    return Committee(members);
  }
  std::vector<int> members = c.members;
  int have = 0;
  for (int p : members)
    if (outside(p)) ++have;
  for (int p = 0; p < view.pi_n && have < emb.extend_outside; ++p) {
    if (!outside(p) || c.contains(p)) continue;
    members.push_back(p);
    ++have;
  }
  if (have < emb.extend_outside)
    throw SpecError("not enough parties outside S and J to extend");
  return Committee(members);
}

std::vector<std::vector<int>> admissible_t_sets(const TwoPartyView& view,
                                                const Committee& aborted) {
  Committee ext = extend_committee(view, aborted);
  int n = view.pi_n;
  int t_size = n - static_cast<int>(std::llround(view.embedding.beta * n));
  std::vector<int> pool;
  for (int p = 0; p < n; ++p)
    if (!contains_sorted(view.embedding.s_set, p) &&
        !contains_sorted(view.j_union, p) && !ext.contains(p))
      pool.push_back(p);
  std::vector<std::vector<int>> out;
  if (static_cast<int>(pool.size()) < t_size) return out;
  std::vector<int> idx(t_size);
  for (int i = 0; i < t_size; ++i) idx[i] = i;
  for (;;) {
    std::vector<int> t;
    for (int i : idx) t.push_back(pool[i]);
    out.push_back(std::move(t));
    int i = t_size - 1;
    while (i >= 0 && idx[i] == static_cast<int>(pool.size()) - t_size + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int k = i + 1; k < t_size; ++k) idx[k] = idx[k - 1] + 1;
  }
  return out;
}

namespace {

constexpr uint64_t kEmuSeed = 0x70617274696573ULL;

std::vector<int> sorted_union(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

std::vector<int> complement_of(int n, const std::vector<int>& s) {
  std::vector<int> out;
  for (int p = 0; p < n; ++p)
    if (!contains_sorted(s, p)) out.push_back(p);
  return out;
}

// Closure-free skeleton of the embedding, shared by the emulation closures.
struct EmbeddingCore {
  ProtocolSpec pi;
  TwoPartyEmbedding embedding;
  std::vector<PsiRound> rounds;
  std::vector<int> j_union;
  std::vector<int> func_ordinal_of_pi_round;
  std::vector<size_t> slot_base;
  std::vector<int> sender;
  int pi_n = 0;
  std::vector<int> s_side, side1, s_union_j;
  std::optional<std::vector<int>> t_fixed;
};

// Continuation plans used both to emulate the two-party protocol and to
// evaluate abort predictions.
struct EmuPlan {
  std::vector<int> corrupted;  // sorted
  int comm_drop_from = INT_MAX;
  int call_abort_from = INT_MAX;
  int abort_round = -1, abort_call = -1, abort_blame = -1;
};

// The J-subsets abort their committees' calls in every plan; everything else
// is plan-specific.
AdversaryStrategy emulation_strategy(std::shared_ptr<const EmbeddingCore> core,
                                     EmuPlan plan) {
  AdversaryStrategy adv;
  adv.corrupted = plan.corrupted;
  adv.fail_stop = true;
  auto abort_decision = [core, plan](const AdvCallCtx& ctx)
      -> std::optional<std::vector<int>> {
    const Committee& c = ctx.spec->tp.committees.at(0);
    int ord = core->func_ordinal_of_pi_round[ctx.round];
    if (ord >= 0 && ord < static_cast<int>(core->embedding.j_bar.size())) {
      auto hit = intersect_sorted(c.members, core->embedding.j_bar[ord]);
      if (!hit.empty()) return std::vector<int>{hit.front()};
    }
    if (ctx.round == plan.abort_round && ctx.call_index == plan.abort_call)
      return std::vector<int>{plan.abort_blame};
    if (ctx.round >= plan.call_abort_from) {
      auto hit = intersect_sorted(c.members, plan.corrupted);
      if (!hit.empty()) return std::vector<int>{hit.front()};
    }
    return std::nullopt;
  };
  adv.early_abort = [abort_decision](const AdvView&, const AdvCallCtx& ctx) {
    return abort_decision(ctx);
  };
  adv.dictate = [abort_decision](const AdvView&, const AdvCallCtx& ctx,
                                 const std::vector<Value>&) {
    DictateAction act;
    if (auto ids = abort_decision(ctx)) {
      act.abort = true;
      act.blamed = *ids;
    }
    return act;  // otherwise honest evaluation
  };
  adv.on_comm = [plan](const AdvView&, int round,
                       std::map<int, std::vector<OutMsg>>& planned) {
    if (round >= plan.comm_drop_from)
      for (auto& [p, msgs] : planned) msgs.clear();
  };
  return adv;
}

int lowest_not_in(const std::vector<int>& candidates,
                  const std::vector<int>& excluded) {
  for (int p : candidates)
    if (!contains_sorted(excluded, p)) return p;
  throw SpecError("no surviving reference party");
}

int emulate_bit(std::shared_ptr<const EmbeddingCore> core, uint64_t w,
                const EmuPlan& plan, const std::vector<int>& reference_side) {
  size_t slots = coin_slots(core->pi);
  std::vector<uint8_t> bits(slots);
  for (size_t s = 0; s < slots; ++s) bits[s] = (w >> s) & 1;
  ScriptedCoinSource coins(std::move(bits));
  AdversaryStrategy adv = emulation_strategy(core, plan);
  ExecutionResult res = run_with_coins(core->pi, adv, kEmuSeed, coins);
  int ref = lowest_not_in(reference_side, plan.corrupted);
  const Output& out = res.outputs[ref];
  if (out.kind != Output::Kind::Value || out.value.empty())
    throw SpecError("reference party produced no bit");
  return static_cast<int>(out.value[0] & 1);
}

std::vector<int> survivor_for(std::shared_ptr<const EmbeddingCore> core,
                              const TwoPartyView& v, const Committee& c) {
  auto all = admissible_t_sets(v, c);
  if (all.empty()) throw SpecError("no admissible survivor set");
  if (core->t_fixed) {
    for (const auto& t : all)
      if (t == *core->t_fixed) return t;
  }
  return all.front();
}

TwoPartyView view_of_core(std::shared_ptr<const EmbeddingCore> core) {
  TwoPartyView v;
  v.embedding = core->embedding;
  v.rounds = core->rounds;
  v.pi_n = core->pi_n;
  v.j_union = core->j_union;
  v.func_ordinal_of_pi_round = core->func_ordinal_of_pi_round;
  v.slot_base = core->slot_base;
  return v;
}

}  // namespace

TwoPartyView build_two_party(const ProtocolSpec& pi,
                             const TwoPartyEmbedding& emb,
                             std::optional<std::vector<int>> t_fixed) {
  if (!std::is_sorted(emb.s_set.begin(), emb.s_set.end()))
    throw SpecError("embedding S must be sorted");
  auto core = std::make_shared<EmbeddingCore>();
  core->pi = pi;
  core->embedding = emb;
  core->pi_n = pi.n;
  core->t_fixed = std::move(t_fixed);
  for (const auto& j : emb.j_bar) core->j_union = sorted_union(core->j_union, j);
  for (int p : emb.s_set)
    if (contains_sorted(core->j_union, p))
      throw SpecError("S must avoid the aborting subsets");
  {
    int expect = pi.n - static_cast<int>(std::llround(emb.beta * pi.n));
    if (static_cast<int>(emb.s_set.size()) != expect)
      throw SpecError("S must have (1-beta)n parties");
  }
  for (size_t a = 0; a < emb.j_bar.size(); ++a)
    for (size_t b = a + 1; b < emb.j_bar.size(); ++b)
      if (!intersect_sorted(emb.j_bar[a], emb.j_bar[b]).empty())
        throw SpecError("aborting subsets must be disjoint");

  int func_ord = 0;
  size_t slot = 0;
  core->func_ordinal_of_pi_round.assign(pi.rounds.size(), -1);
  for (size_t r = 0; r < pi.rounds.size(); ++r) {
    core->slot_base.push_back(slot);
    const RoundSpec& round = pi.rounds[r];
    if (round.kind == RoundSpec::Kind::Communication) {
      core->rounds.push_back({PsiRound::Kind::CommP0, static_cast<int>(r), -1, {}});
      core->rounds.push_back({PsiRound::Kind::CommP1, static_cast<int>(r), -1, {}});
      continue;
    }
    core->func_ordinal_of_pi_round[r] = func_ord;
    const std::vector<int>* j =
        func_ord < static_cast<int>(emb.j_bar.size()) ? &emb.j_bar[func_ord]
                                                      : nullptr;
    for (size_t c = 0; c < round.calls.size(); ++c) {
      const Committee& committee = round.calls[c].tp.committees.at(0);
      if (j && !intersect_sorted(committee.members, *j).empty())
        continue;  // assumed aborted by J, so no message in psi
      core->rounds.push_back({PsiRound::Kind::FuncBit, static_cast<int>(r),
                              static_cast<int>(c), committee});
    }
    ++func_ord;
    slot += round.calls.size();
  }

  core->s_side = emb.s_set;
  core->s_union_j = sorted_union(emb.s_set, core->j_union);
  core->side1 = complement_of(pi.n, core->s_union_j);
  if (core->side1.empty()) throw SpecError("the second side has no parties");
  for (const PsiRound& r : core->rounds)
    core->sender.push_back(r.kind == PsiRound::Kind::CommP1 ? 1 : 0);

  TwoPartyProtocol psi;
  psi.rounds = static_cast<int>(core->rounds.size());
  psi.sender = core->sender;
  size_t total_slots = coin_slots(pi);
  if (total_slots > 22) throw ScaleError("coin space above the desk-scale cap");
  psi.outcomes = uint64_t(1) << total_slots;

  std::shared_ptr<const EmbeddingCore> c = core;
  psi.output = [c](uint64_t w, int party) {
    EmuPlan plan;
    plan.corrupted = c->j_union;  // the baked-in aborting subsets
    return emulate_bit(c, w, plan, party == 0 ? c->s_side : c->side1);
  };

  psi.default_output = [c](uint64_t w, int party, int j) {
    int rounds = static_cast<int>(c->rounds.size());
    int opp = 1 - party;
    int ar = -1;
    for (int q = std::max(j, 1); q <= rounds; ++q) {
      if (c->sender[q - 1] == opp) {
        ar = q;
        break;
      }
    }
    const std::vector<int>& side = party == 0 ? c->s_side : c->side1;
    if (j > rounds || ar < 0) {  // nothing left for the opponent to withhold
      EmuPlan plan;
      plan.corrupted = c->j_union;
      return emulate_bit(c, w, plan, side);
    }
    const PsiRound& pr = c->rounds[ar - 1];
    EmuPlan plan;
    if (pr.kind != PsiRound::Kind::FuncBit) {
      // Communication abort: the opponent's whole side goes silent.
      const std::vector<int>& opp_side = opp == 0 ? c->s_union_j : c->side1;
      plan.corrupted = sorted_union(opp_side, c->j_union);
      plan.comm_drop_from = pr.pi_round;
      plan.call_abort_from = pr.pi_round;
      return emulate_bit(c, w, plan, side);
    }
    // Functionality abort by the emulating side: the committee's call dies,
    // the same round's later calls still complete, and from the next round
    // only the survivor set T keeps talking.
    TwoPartyView v = view_of_core(c);
    std::vector<int> t_set = survivor_for(c, v, pr.committee);
    std::vector<int> corrupted =
        sorted_union(complement_of(c->pi_n, t_set), c->j_union);
    auto hit = intersect_sorted(pr.committee.members, corrupted);
    int blame;
    if (hit.empty()) {
      // Bookkeeping case: the committee straddles the survivor set, so the
      // emulation enlists its lowest member for the single abort.
      corrupted = sorted_union(corrupted, {pr.committee.lowest()});
      blame = pr.committee.lowest();
    } else {
      blame = pr.committee.lowest();
      if (!contains_sorted(corrupted, blame))
        corrupted = sorted_union(corrupted, {blame});
    }
    plan.corrupted = corrupted;
    plan.abort_round = pr.pi_round;
    plan.abort_call = pr.call_index;
    plan.abort_blame = blame;
    plan.comm_drop_from = pr.pi_round + 1;
    plan.call_abort_from = pr.pi_round + 1;
    return emulate_bit(c, w, plan, side);
  };

  TwoPartyView out = view_of_core(core);
  out.psi = std::move(psi);
  return out;
}

// --- attack translation ------------------------------------------------------------

namespace {

// Coins as the corrupted side can determine them: observed public bits for
// finished calls, the adversary's own coins (fully corrupted committees) for
// pending ones, zero elsewhere. Continuations only ever consume the first two
// kinds.
uint64_t assemble_coins(const AdvView& view, const TwoPartyView& tv) {
  uint64_t w = 0;
  for (const PsiRound& r : tv.rounds) {
    if (r.kind != PsiRound::Kind::FuncBit) continue;
    size_t slot = tv.slot_base[r.pi_round] + r.call_index;
    const CallResult* res = view.call(r.pi_round, r.call_index);
    if (!res && r.pi_round == view.round())
      res = view.parallel_result(r.call_index);
    uint64_t bit = 0;
    if (res) {
      bit = res->aborted ? 0 : (res->outcome.public_value[0] & 1);
    } else if (subset_of(r.committee.members, view.corrupted())) {
      bit = view.peek_own_call_coin(r.pi_round, r.call_index) & 1;
    }
    w |= bit << slot;
  }
  return w;
}

}  // namespace

AdversaryStrategy translate_attack(const TwoPartyView& tv,
                                   const AttackSpec& attack,
                                   const std::vector<int>& t_set) {
  if (attack.i_star < 1 || attack.i_star > static_cast<int>(tv.rounds.size()))
    throw SpecError("attack round out of range");
  auto tv_ptr = std::make_shared<TwoPartyView>(tv);
  const PsiRound& ar = tv.rounds[attack.i_star - 1];
  std::vector<int> s_union_j = sorted_union(tv.embedding.s_set, tv.j_union);

  std::vector<int> corrupted;
  bool func_attack =
      attack.attacker == 0 && ar.kind == PsiRound::Kind::FuncBit;
  if (func_attack) {
    int expect =
        tv.pi_n - static_cast<int>(std::llround(tv.embedding.beta * tv.pi_n));
    if (static_cast<int>(t_set.size()) != expect)
      throw SpecError("survivor set has the wrong size");
    if (!std::is_sorted(t_set.begin(), t_set.end()))
      throw SpecError("survivor set must be sorted");
    for (int p : t_set)
      if (contains_sorted(s_union_j, p))
        throw SpecError("survivor set must avoid S and the aborting subsets");
    corrupted = complement_of(tv.pi_n, t_set);
  } else {
    // Mirror attack: corrupt exactly the attacker's emulation side.
    corrupted = attack.attacker == 0 ? s_union_j
                                     : complement_of(tv.pi_n, s_union_j);
  }

  // The attack fires only when the extended committee is fully corrupted and
  // (large variant) the committee itself is small enough to attack.
  bool can_fire = true;
  Committee ext;
  if (func_attack) {
    ext = extend_committee(tv, ar.committee);
    can_fire = subset_of(ext.members, corrupted);
    if (tv.embedding.large_threshold >= 0 &&
        static_cast<int>(ar.committee.size()) > tv.embedding.large_threshold)
      can_fire = false;
  }

  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.fail_stop = true;

  auto j_for_round = [tv_ptr](int pi_round) -> const std::vector<int>* {
    int ord = tv_ptr->func_ordinal_of_pi_round[pi_round];
    if (ord < 0 || ord >= static_cast<int>(tv_ptr->embedding.j_bar.size()))
      return nullptr;
    return &tv_ptr->embedding.j_bar[ord];
  };

  auto fired = [tv_ptr, attack, ar, can_fire, func_attack](
                   const AdvView& view) -> bool {
    if (!can_fire) return false;
    if (!func_attack) return false;
    const CallResult* res = view.call(ar.pi_round, ar.call_index);
    return res && res->aborted;
  };

  auto decide = [tv_ptr, attack](const AdvView& view) {
    uint64_t w = assemble_coins(view, *tv_ptr);
    int predict = tv_ptr->psi.default_output(w, attack.attacker, attack.j_star);
    return predict == attack.b;
  };

  if (func_attack) {
    adv.dictate = [tv_ptr, attack, ar, can_fire, decide](
                      const AdvView& view, const AdvCallCtx& ctx,
                      const std::vector<Value>&) {
      DictateAction act;
      const Committee& c = ctx.spec->tp.committees.at(0);
      int ord = tv_ptr->func_ordinal_of_pi_round[ctx.round];
      if (ord >= 0 &&
          ord < static_cast<int>(tv_ptr->embedding.j_bar.size())) {
        auto hit = intersect_sorted(c.members, tv_ptr->embedding.j_bar[ord]);
        if (!hit.empty()) {
          act.abort = true;
          act.blamed = {hit.front()};
          return act;
        }
      }
      if (can_fire && ctx.round == ar.pi_round &&
          ctx.call_index == ar.call_index && decide(view)) {
        act.abort = true;
        act.blamed = {ar.committee.lowest()};
        return act;
      }
      // After the fired abort every corrupted call of the LATER rounds dies;
      // calls sharing the attacked round still complete, mirroring the
      // emulated handling where the remaining coins of that round are
      // flipped internally.
      const CallResult* star = view.call(ar.pi_round, ar.call_index);
      if (can_fire && star && star->aborted && ctx.round > ar.pi_round) {
        auto hit = intersect_sorted(c.members, view.corrupted());
        if (!hit.empty()) {
          act.abort = true;
          act.blamed = {hit.front()};
          return act;
        }
      }
      return act;
    };
    adv.early_abort = [tv_ptr, ar, fired, j_for_round](
                          const AdvView& view, const AdvCallCtx& ctx)
        -> std::optional<std::vector<int>> {
      const Committee& c = ctx.spec->tp.committees.at(0);
      if (const std::vector<int>* j = j_for_round(ctx.round)) {
        auto hit = intersect_sorted(c.members, *j);
        if (!hit.empty()) return std::vector<int>{hit.front()};
      }
      if (fired(view) && ctx.round > ar.pi_round) {
        auto hit = intersect_sorted(c.members, view.corrupted());
        if (!hit.empty()) return std::vector<int>{hit.front()};
      }
      return std::nullopt;
    };
    adv.on_comm = [ar, fired](const AdvView& view, int round,
                              std::map<int, std::vector<OutMsg>>& planned) {
      if (round > ar.pi_round && fired(view))
        for (auto& [p, msgs] : planned) msgs.clear();
    };
    return adv;
  }

  // Mirror attack: the whole side stops from the attack round on when the
  // prediction matches.
  int stop_round = ar.pi_round;
  adv.on_comm = [stop_round, decide](const AdvView& view, int round,
                                     std::map<int, std::vector<OutMsg>>& planned) {
    if (round >= stop_round && decide(view))
      for (auto& [p, msgs] : planned) msgs.clear();
  };
  adv.early_abort = [stop_round, decide, j_for_round](
                        const AdvView& view, const AdvCallCtx& ctx)
      -> std::optional<std::vector<int>> {
    const Committee& c = ctx.spec->tp.committees.at(0);
    if (const std::vector<int>* j = j_for_round(ctx.round)) {
      auto hit = intersect_sorted(c.members, *j);
      if (!hit.empty()) return std::vector<int>{hit.front()};
    }
    if (ctx.round >= stop_round && decide(view)) {
      auto hit = intersect_sorted(c.members, view.corrupted());
      if (!hit.empty()) return std::vector<int>{hit.front()};
    }
    return std::nullopt;
  };
  adv.dictate = [stop_round, decide, j_for_round](
                    const AdvView& view, const AdvCallCtx& ctx,
                    const std::vector<Value>&) {
    DictateAction act;
    const Committee& c = ctx.spec->tp.committees.at(0);
    if (const std::vector<int>* j = j_for_round(ctx.round)) {
      auto hit = intersect_sorted(c.members, *j);
      if (!hit.empty()) {
        act.abort = true;
        act.blamed = {hit.front()};
        return act;
      }
    }
    if (ctx.round >= stop_round && decide(view)) {
      auto hit = intersect_sorted(c.members, view.corrupted());
      if (!hit.empty()) {
        act.abort = true;
        act.blamed = {hit.front()};
      }
    }
    return act;
  };
  return adv;
}

// --- bias measurement ---------------------------------------------------------------

BiasReport measure_bias_exact(const ProtocolSpec& pi,
                              const AdversaryStrategy& adv,
                              uint64_t max_outcomes) {
  size_t slots = coin_slots(pi);
  if (slots >= 63 || (uint64_t(1) << slots) > max_outcomes)
    throw ScaleError("coin space too large; use the Monte-Carlo mode");
  uint64_t outcomes = uint64_t(1) << slots;
  uint64_t sum = 0;
  for (uint64_t w = 0; w < outcomes; ++w) {
    std::vector<uint8_t> bits(slots);
    for (size_t s = 0; s < slots; ++s) bits[s] = (w >> s) & 1;
    ScriptedCoinSource coins(std::move(bits));
    ExecutionResult res = run_with_coins(pi, adv, kEmuSeed, coins);
    const Output& out = res.honest_output(adv.corrupted);
    if (out.kind != Output::Kind::Value || out.value.empty())
      throw SpecError("honest parties produced no bit");
    sum += out.value[0] & 1;
  }
  BiasReport rep;
  rep.trials = outcomes;
  rep.mean = static_cast<double>(sum) / outcomes;
  rep.bias = std::abs(rep.mean - 0.5);
  rep.exact = true;
  return rep;
}

BiasReport measure_bias_mc(const ProtocolSpec& pi, const AdversaryStrategy& adv,
                           int trials, uint64_t seed) {
  Summary s = estimate(pi, adv, trials, seed);
  BiasReport rep;
  rep.trials = trials;
  rep.mean = s.mean;
  rep.bias = std::abs(s.mean - 0.5);
  rep.std_error = s.std_error;
  rep.exact = false;
  return rep;
}

// --- aborting subsets ------------------------------------------------------------------

double lower_bound_c(int m, double beta_prime, int n) {
  return std::log2(static_cast<double>(m) * (32.0 * m + 10.0)) /
         (beta_prime * std::log2(static_cast<double>(n)));
}

std::vector<std::vector<int>> choose_good_subsets(
    const ProtocolSpec& pi, int s, double beta_prime, int trials,
    uint64_t seed, int size_threshold, int m_bound, int max_attempts) {
  if (s == 0) return {};
  int n = pi.n;
  int size = static_cast<int>(std::llround(beta_prime * n));
  if (size < 1) throw SpecError("aborting subsets would be empty");
  if (size * s > n) throw SpecError("disjoint subsets do not fit");
  double budget = 1.0 / (32.0 * m_bound + 10.0);
  RngStream rng = derive_stream(seed, "good-subsets", 0);
  static const AdversaryStrategy kHonest;

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[rng.next_below(i)]);
    std::vector<std::vector<int>> j_bar(s);
    for (int k = 0; k < s; ++k) {
      j_bar[k].assign(perm.begin() + k * size, perm.begin() + (k + 1) * size);
      std::sort(j_bar[k].begin(), j_bar[k].end());
    }

    std::vector<int> bad(s, 0);
    for (int t = 0; t < trials; ++t) {
      uint64_t trial_seed = derive_stream(seed, "good-subsets-trial",
                                          (uint64_t)attempt * trials + t)
                                .next();
      ExecutionResult res = run(pi, kHonest, trial_seed);
      int ord = -1;
      for (const RoundRecord& round : res.transcript) {
        if (round.kind != RoundSpec::Kind::Functionality) continue;
        ++ord;
        if (ord >= s) break;
        for (const CallRecord& call : round.calls) {
          if (!call.executed) continue;
          const Committee& c = call.tp.committees.at(0);
          if (static_cast<int>(c.size()) >= size_threshold &&
              intersect_sorted(c.members, j_bar[ord]).empty()) {
            bad[ord]++;
            break;
          }
        }
      }
    }
    bool ok = true;
    for (int k = 0; k < s; ++k)
      if (static_cast<double>(bad[k]) / trials > budget) ok = false;
    if (ok) return j_bar;
  }
  throw SearchExhausted("no aborting-subset sample passed the check");
}

}  // namespace mpcsim
