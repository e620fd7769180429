#include "mpcsim/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mpcsim {

// --- config ------------------------------------------------------------------

int ReductionConfig::m() const {
  int target = static_cast<int>(std::ceil(phi * std::log2(kappa)));
  return std::min(n, target);
}

int ReductionConfig::n_second() const {
  int target = static_cast<int>(std::ceil(std::log2(kappa) / phi));
  return std::min(target, m() - 1);
}

void ReductionConfig::validate(bool honest_majority) const {
  if (!(beta < beta_prime)) throw SpecError("config needs beta < beta'");
  if (beta < 0 || beta_prime >= 1) throw SpecError("fractions out of range");
  double floor_phi = honest_majority ? 1.0 / std::sqrt(1.0 - 2.0 * beta_prime)
                                     : 1.0 / std::sqrt(1.0 - beta_prime);
  if (honest_majority && beta_prime >= 0.5)
    throw SpecError("honest-majority path needs beta' < 1/2");
  if (!(phi > floor_phi))
    throw SpecError("phi below the committee-size constraint");
}

double err_bound(int n, int n_prime, double beta, double beta_prime) {
  double expo = -((beta_prime - beta) * (beta_prime - beta) * n_prime) /
                (2.0 * (1.0 - beta));
  return (static_cast<double>(n) / n_prime) * std::exp(expo);
}

// --- lightest bin --------------------------------------------------------------

int feige_bin_count(int n, int n_prime) {
  if (n_prime >= n || n_prime < 1) throw SpecError("need 1 <= n' < n");
  return (n + n_prime - 1) / n_prime;
}

Committee feige_elect(int n, int n_prime, const std::vector<int>& bins) {
  int k = feige_bin_count(n, n_prime);
  if (bins.size() != static_cast<size_t>(n)) throw SpecError("one bin per party");
  std::vector<std::vector<int>> load(k);
  for (int p = 0; p < n; ++p) {
    if (bins[p] < 0) continue;  // silent party joins no bin
    if (bins[p] >= k) throw SpecError("bin index out of range");
    load[bins[p]].push_back(p);
  }
  int best = -1;
  for (int b = 0; b < k; ++b) {
    if (load[b].empty()) continue;
    if (best < 0 || load[b].size() < load[best].size()) best = b;
  }
  if (best < 0) throw SpecError("no party chose a bin");
  return Committee(load[best]);
}

Committee feige_elect_random(int n, int n_prime, RngStream& rng) {
  int k = feige_bin_count(n, n_prime);
  std::vector<int> bins(n);
  for (int p = 0; p < n; ++p) bins[p] = static_cast<int>(rng.next_below(k));
  return feige_elect(n, n_prime, bins);
}

// --- sub-committees ------------------------------------------------------------

uint64_t binomial(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  uint64_t r = 1;
  for (uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<Committee> enumerate_subcommittees(const Committee& committee,
                                               int n_second, uint64_t cap) {
  int m = static_cast<int>(committee.size());
  if (n_second < 0 || n_second >= m)
    throw SpecError("sub-committee complement out of range");
  int size = m - n_second;
  if (binomial(m, n_second) > cap)
    throw CapExceeded("sub-committee count above the configured cap");
  std::vector<Committee> subs;
  std::vector<int> idx(size);
  for (int i = 0; i < size; ++i) idx[i] = i;
  for (;;) {
    std::vector<int> members;
    for (int i : idx) members.push_back(committee.members[i]);
    subs.emplace_back(std::move(members));
    int i = size - 1;
    while (i >= 0 && idx[i] == m - size + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
  return subs;
}

double subcommittee_count_bound(int kappa, double phi) {
  double ex = std::log2(std::exp(1.0)) * (2.0 / std::exp(1.0) + 1.0 / phi);
  return std::pow(static_cast<double>(kappa), ex);
}

bool subcommittees_honest_majority(const std::vector<Committee>& subs,
                                   const std::vector<int>& corrupted) {
  for (const Committee& c : subs)
    if (2 * intersect_sorted(c.members, corrupted).size() >= c.size())
      return false;
  return true;
}

bool subcommittees_honest_presence(const std::vector<Committee>& subs,
                                   const std::vector<int>& corrupted) {
  for (const Committee& c : subs)
    if (intersect_sorted(c.members, corrupted).size() == c.size()) return false;
  return true;
}

// --- player elimination ---------------------------------------------------------

namespace {

Committee everyone(int n) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  return Committee(all);
}

// Elimination fold over the public call ledger: the revealed party leaves if
// still present, otherwise the abort is charged to its simulator, the lowest
// remaining member.
Committee eliminate_fold(const PublicView& pv, Committee cur, int first_round,
                         int upto_round) {
  for (int r = first_round; r < upto_round; ++r) {
    const CallResult* res = pv.call(r, 0);
    if (!res || !res->aborted || res->blamed.empty()) continue;
    int revealed = res->blamed[0];
    int victim = cur.contains(revealed) ? revealed : cur.lowest();
    auto& m = cur.members;
    m.erase(std::remove(m.begin(), m.end(), victim), m.end());
  }
  return cur;
}

const CallResult* first_success(const PublicView& pv, int first_round,
                                int upto_round) {
  for (int r = first_round; r < upto_round; ++r) {
    const CallResult* res = pv.call(r, 0);
    if (res && !res->aborted) return res;
  }
  return nullptr;
}

FunctionalitySpec with_default_inputs(FunctionalitySpec f,
                                      std::vector<int> defaulted) {
  if (defaulted.empty()) return f;
  auto inner = f.eval;
  f.eval = [inner, defaulted = std::move(defaulted)](
               const std::vector<Value>& inputs, CallEnv& env) {
    std::vector<Value> patched = inputs;
    for (size_t k = 0; k < env.participants.members.size(); ++k)
      if (contains_sorted(defaulted, env.participants.members[k]))
        patched[k] = Value{0};
    return inner(patched, env);
  };
  return f;
}

ProtocolSpec player_elimination_core(int n, int t_prime, FunctionalitySpec f,
                                     std::vector<Value> inputs,
                                     std::function<Committee(const PublicView&)>
                                         committee_source,
                                     int first_call_round,
                                     std::vector<RoundSpec> prefix_rounds,
                                     PartyProgram prefix_program) {
  ProtocolSpec spec;
  spec.n = n;
  spec.inputs = std::move(inputs);
  spec.rounds = std::move(prefix_rounds);

  for (int i = 0; i <= t_prime; ++i) {
    CallSpec cs;
    cs.label = "pe-call";
    cs.functionality = f;
    cs.participants = everyone(n);
    cs.configure = [committee_source, first_call_round, f](
                       const PublicView& pv, CallSpec& self) {
      if (first_success(pv, first_call_round, pv.rounds_done())) return false;
      Committee base = committee_source(pv);
      if (base.empty()) return false;
      Committee cur =
          eliminate_fold(pv, base, first_call_round, pv.rounds_done());
      if (cur.empty()) return false;
      // The trusted party stays parametrized by the original committee; the
      // parties do the stale-identity bookkeeping themselves.
      self.tp = TrustedPartyType::restricted(
          TrustedPartyType::Kind::RestrictedIdFair, {base});
      std::vector<int> gone;
      for (int p : base.members)
        if (!cur.contains(p)) gone.push_back(p);
      self.functionality = with_default_inputs(f, gone);
      return true;
    };
    spec.rounds.push_back(RoundSpec::functionality({cs}));
  }

  spec.program.on_comm = prefix_program.on_comm;
  spec.program.call_input = [](int party, int, int, const PartyView& view) {
    (void)party;
    return view.input();
  };
  int total_rounds = static_cast<int>(spec.rounds.size());
  auto prefix_finalize = prefix_program.finalize;
  spec.program.finalize = [first_call_round, total_rounds, prefix_finalize](
                              int party, const PartyView& view) {
    if (prefix_finalize) {
      Output pre = prefix_finalize(party, view);
      if (pre.kind != Output::Kind::Pending) return pre;
    }
    int done = view.rounds_done();
    std::vector<int> blamed;
    for (int r = first_call_round; r < done; ++r) {
      const CallResult* res = view.call(r, 0);
      if (!res) continue;
      if (!res->aborted) return Output::of(res->outcome.public_value);
      for (int id : res->blamed)
        if (!contains_sorted(blamed, id)) {
          blamed.push_back(id);
          std::sort(blamed.begin(), blamed.end());
        }
    }
    if (done >= total_rounds) return Output::abort(blamed);
    return Output::pending();
  };
  return spec;
}

}  // namespace

ProtocolSpec make_player_elimination(int n, const Committee& committee,
                                     int t_prime, FunctionalitySpec f,
                                     std::vector<Value> inputs) {
  committee.validate(n);
  if (t_prime < 0 || t_prime >= static_cast<int>(committee.size()))
    throw SpecError("need 0 <= t' < |C|");
  Committee c1 = committee;
  return player_elimination_core(
      n, t_prime, std::move(f), std::move(inputs),
      [c1](const PublicView&) { return c1; }, 0, {}, {});
}

ExecutionResult run_player_elimination(const ProtocolSpec& spec,
                                       const AdversaryStrategy& adv,
                                       uint64_t seed) {
  ExecutionResult res = run(spec, adv, seed);
  // An abort naming an eliminated party physically comes from whoever
  // simulates it, so that simulator must itself be corrupted.
  Committee cur;
  bool started = false;
  for (const RoundRecord& round : res.transcript) {
    if (round.kind != RoundSpec::Kind::Functionality) continue;
    for (const CallRecord& call : round.calls) {
      if (!call.executed) continue;
      if (!started) {
        cur = call.tp.committees.at(0);
        started = true;
      }
      if (!call.result.aborted) continue;
      int revealed = call.result.blamed.at(0);
      int victim = cur.contains(revealed) ? revealed : cur.lowest();
      if (victim != revealed && !contains_sorted(adv.corrupted, victim))
        throw ProtocolViolation(
            "stale abort identity while the simulating member is honest");
      auto& m = cur.members;
      m.erase(std::remove(m.begin(), m.end(), victim), m.end());
    }
  }
  return res;
}

ProtocolSpec make_coinflip_uplift(int n, int n_prime, double beta_prime) {
  int t_prime = static_cast<int>(beta_prime * n_prime);
  int k = feige_bin_count(n, n_prime);

  PartyProgram prefix;
  prefix.on_comm = [k](int party, int round,
                       const PartyView& view) -> std::vector<OutMsg> {
    if (round != 0) return {};
    RngStream rng = view.derived("bin-choice");
    (void)party;
    return {OutMsg{kBroadcast, {rng.next_below(static_cast<uint64_t>(k))}}};
  };

  auto committee_source = [n, n_prime, k](const PublicView& pv) {
    std::vector<int> bins(n, -1);
    for (int p = 0; p < n; ++p) {
      auto b = pv.broadcast(0, p);
      // Malformed bin choices count as silence.
      if (b && b->size() == 1 && (*b)[0] < static_cast<uint64_t>(k))
        bins[p] = static_cast<int>((*b)[0]);
    }
    return feige_elect(n, n_prime, bins);
  };

  std::vector<RoundSpec> prefix_rounds{RoundSpec::comm()};
  return player_elimination_core(n, t_prime, f_cf(), {}, committee_source, 1,
                                 std::move(prefix_rounds), std::move(prefix));
}

// --- parallel sub-committees ------------------------------------------------------

ProtocolSpec make_parallel_subcommittees(int n, const Committee& committee,
                                         int n_second, int max_iterations,
                                         FunctionalitySpec f, bool fair,
                                         std::vector<Value> inputs) {
  committee.validate(n);
  if (max_iterations < 1) throw SpecError("need at least one iteration");
  ProtocolSpec spec;
  spec.n = n;
  spec.inputs = std::move(inputs);
  Committee base = committee;
  auto kind = fair ? TrustedPartyType::Kind::RestrictedIdFair
                   : TrustedPartyType::Kind::RestrictedIdAbort;

  for (int it = 0; it < max_iterations; ++it) {
    CallSpec cs;
    cs.label = "subcommittee-call";
    cs.functionality = f;
    cs.participants = everyone(n);
    cs.configure = [base, n_second, kind](const PublicView& pv, CallSpec& self) {
      for (int r = 0; r < pv.rounds_done(); ++r) {
        const CallResult* res = pv.call(r, 0);
        if (res && !res->aborted) return false;
      }
      std::vector<int> gone = pv.identified();
      std::vector<int> left;
      for (int p : base.members)
        if (!contains_sorted(gone, p)) left.push_back(p);
      Committee cur(left);
      if (cur.empty()) return false;
      int n2 = std::min<int>(n_second, static_cast<int>(cur.size()) - 1);
      self.tp = TrustedPartyType::restricted(
          kind, enumerate_subcommittees(cur, n2));
      return true;
    };
    spec.rounds.push_back(RoundSpec::functionality({cs}));
  }

  spec.program.call_input = [](int, int, int, const PartyView& view) {
    return view.input();
  };
  int total_rounds = max_iterations;
  spec.program.finalize = [total_rounds](int, const PartyView& view) {
    std::vector<int> blamed;
    for (int r = 0; r < view.rounds_done(); ++r) {
      const CallResult* res = view.call(r, 0);
      if (!res) continue;
      if (!res->aborted) return Output::of(res->outcome.public_value);
      for (int id : res->blamed)
        if (!contains_sorted(blamed, id)) {
          blamed.push_back(id);
          std::sort(blamed.begin(), blamed.end());
        }
    }
    if (view.rounds_done() >= total_rounds) return Output::abort(blamed);
    return Output::pending();
  };
  return spec;
}

// --- fair -> fair with restricted identifiable abort (no inputs) -----------------

ProtocolSpec compile_fair_to_ridfair_noinput(int n, const Committee& committee,
                                             FunctionalitySpec inner) {
  committee.validate(n);
  int n_prime = static_cast<int>(committee.size());
  ProtocolSpec spec;
  spec.n = n;

  CallSpec augct;
  augct.label = "aug-ct";
  augct.functionality = f_augct();
  augct.tp = TrustedPartyType::restricted(
      TrustedPartyType::Kind::RestrictedIdAbort, {committee});
  augct.participants = committee;
  spec.rounds.push_back(RoundSpec::functionality({augct}));

  CallSpec run_inner;
  run_inner.label = "inner";
  run_inner.functionality = std::move(inner);
  run_inner.tp = TrustedPartyType::restricted(
      TrustedPartyType::Kind::RestrictedIdFair, {committee});
  run_inner.participants = committee;
  run_inner.configure = [](const PublicView& pv, CallSpec&) {
    const CallResult* ct = pv.call(0, 0);
    return ct && !ct->aborted;
  };
  spec.rounds.push_back(RoundSpec::functionality({run_inner}));

  // Output claims: member j proves its claimed output matches the run it
  // took part in, under its committed randomness.
  std::vector<CallSpec> claims;
  for (int j = 0; j < n_prime; ++j) {
    CallSpec zk;
    zk.label = "claim";
    zk.tp = TrustedPartyType::full();
    zk.participants = Committee({committee.members[j]});
    zk.functionality = zk_one_to_many("out", [](const Value&, const Value&,
                                                const CallEnv&) { return false; });
    zk.configure = [j](const PublicView& pv, CallSpec& self) {
      const CallResult* ct = pv.call(0, 0);
      const CallResult* run = pv.call(1, 0);
      if (!ct || ct->aborted || !run || run->aborted) return false;
      uint64_t handle = ct->outcome.public_value.at(j);
      Value genuine = run->outcome.public_value;
      self.functionality = zk_one_to_many(
          "out", [handle, genuine](const Value& stmt, const Value& wit,
                                   const CallEnv& env) {
            return stmt == genuine && wit.size() == 2 &&
                   env.registry->open(handle, {wit[0]}, wit[1]);
          });
      return true;
    };
    claims.push_back(std::move(zk));
  }
  spec.rounds.push_back(RoundSpec::functionality(std::move(claims)));

  spec.program.call_input = [](int, int round, int,
                               const PartyView& view) -> Value {
    if (round != 2) return {};
    auto genuine = view.my_call_output(1, 0);
    auto key = view.my_call_output(0, 0);
    if (!genuine || !key) return {};
    Value in{genuine->size()};
    in.insert(in.end(), genuine->begin(), genuine->end());
    in.insert(in.end(), key->begin(), key->end());
    return in;
  };
  spec.program.finalize = [n_prime](int, const PartyView& view) {
    const CallResult* ct = view.call(0, 0);
    if (ct && ct->aborted) return Output::abort(ct->blamed);
    const CallResult* run = view.call(1, 0);
    if (run && run->aborted) return Output::abort(run->blamed);
    if (view.rounds_done() < 3) return Output::pending();
    for (int j = 0; j < n_prime; ++j) {
      const CallResult* zk = view.call(2, j);
      if (!zk || zk->aborted) continue;
      const Value& pub = zk->outcome.public_value;
      if (!pub.empty() && pub.back() == 1)
        return Output::of(Value(pub.begin(), pub.end() - 1));
    }
    return Output::abort({});
  };
  return spec;
}

// --- abort -> fairness with restricted identifiable abort (honest majority) ------

namespace {

struct HmLedger {
  // Notice counts and plurality identities per committee, from the notice
  // broadcast round.
  std::vector<int> counts;
  std::vector<int> plurality;
};

HmLedger hm_read_notices(const PartyView& view, int notice_round,
                         const std::vector<Committee>& committees) {
  HmLedger led;
  size_t ell = committees.size();
  led.counts.assign(ell, 0);
  led.plurality.assign(ell, -1);
  std::vector<std::map<int, int>> freq(ell);
  for (int p = 0; p < view.n(); ++p) {
    auto msg = view.broadcast(notice_round, p);
    if (!msg) continue;
    // One notice per committee per member: repeats cannot stuff the count
    // or the plurality.
    std::vector<bool> voted(ell, false);
    for (size_t k = 0; k + 1 < msg->size(); k += 2) {
      size_t l = (*msg)[k];
      int id = static_cast<int>((*msg)[k + 1]);
      if (l >= ell || !committees[l].contains(p) || voted[l]) continue;
      voted[l] = true;
      led.counts[l]++;
      freq[l][id]++;
    }
  }
  for (size_t l = 0; l < ell; ++l) {
    int best = -1, best_count = 0;
    for (auto& [id, c] : freq[l])
      if (c > best_count) {  // map order makes ties fall to the lowest id
        best = id;
        best_count = c;
      }
    led.plurality[l] = best;
  }
  return led;
}

}  // namespace

ProtocolSpec compile_abort_to_ridfair_hm(
    int n, const std::vector<Committee>& committees, int t_prime,
    std::function<uint64_t(const std::vector<uint64_t>&)> f, bool coin_output,
    std::vector<Value> inputs) {
  if (committees.empty()) throw SpecError("need at least one committee");
  for (const Committee& c : committees) c.validate(n);
  bool with_input = !inputs.empty();
  int base = with_input ? 1 : 0;
  size_t ell = committees.size();
  ProtocolSpec spec;
  spec.n = n;
  spec.inputs = std::move(inputs);

  if (with_input) spec.rounds.push_back(RoundSpec::comm());

  std::vector<CallSpec> calls;
  for (size_t l = 0; l < ell; ++l) {
    CallSpec cs;
    cs.label = "ssout";
    cs.tp = TrustedPartyType::restricted(
        TrustedPartyType::Kind::RestrictedIdAbort, {committees[l]});
    cs.participants = committees[l];
    cs.functionality =
        coin_output ? f_ssout_coin(t_prime) : f_ssout(f, n, t_prime);
    calls.push_back(std::move(cs));
  }
  spec.rounds.push_back(RoundSpec::functionality(std::move(calls)));
  spec.rounds.push_back(RoundSpec::comm());  // abort notices
  spec.rounds.push_back(RoundSpec::comm());  // surviving committee's shares

  auto committees_copy = committees;
  spec.program.on_comm = [committees_copy, base, with_input, t_prime](
                             int party, int round,
                             const PartyView& view) -> std::vector<OutMsg> {
    size_t ell = committees_copy.size();
    if (with_input && round == 0) {
      RngStream rng = view.derived("hm-input-shares");
      Value x = view.input();
      FieldElem val(x.empty() ? 0 : x[0]);
      std::map<int, Value> per_recipient;
      for (size_t l = 0; l < ell; ++l) {
        const Committee& c = committees_copy[l];
        auto shares = ([&] {
          std::vector<FieldElem> coeffs(t_prime + 1);
          coeffs[0] = val;
          for (int k = 1; k <= t_prime; ++k) coeffs[k] = FieldElem::random(rng);
          Poly poly(std::move(coeffs));
          std::vector<uint64_t> out;
          for (size_t j = 1; j <= c.size(); ++j)
            out.push_back(poly.eval(FieldElem(j)).value());
          return out;
        })();
        for (size_t j = 0; j < c.size(); ++j) {
          Value& msg = per_recipient[c.members[j]];
          msg.push_back(l);
          msg.push_back(shares[j]);
        }
      }
      std::vector<OutMsg> out;
      for (auto& [to, payload] : per_recipient)
        out.push_back({to, std::move(payload)});
      (void)party;
      return out;
    }
    if (round == base + 1) {
      Value notice;
      for (size_t l = 0; l < ell; ++l) {
        if (!committees_copy[l].contains(party)) continue;
        const CallResult* res = view.call(base, static_cast<int>(l));
        if (res && res->aborted && !res->blamed.empty()) {
          notice.push_back(l);
          notice.push_back(res->blamed[0]);
        }
      }
      if (notice.empty()) return {};
      return {OutMsg{kBroadcast, std::move(notice)}};
    }
    if (round == base + 2) {
      HmLedger led = hm_read_notices(view, base + 1, committees_copy);
      int l_star = -1;
      for (size_t l = 0; l < ell; ++l)
        if (led.counts[l] <= t_prime) {
          l_star = static_cast<int>(l);
          break;
        }
      if (l_star < 0 || !committees_copy[l_star].contains(party)) return {};
      auto share = view.my_call_output(base, l_star);
      if (!share) return {};
      return {OutMsg{kBroadcast, *share}};
    }
    return {};
  };

  spec.program.call_input = [committees_copy, with_input](
                                int party, int round, int call,
                                const PartyView& view) -> Value {
    if (!with_input || round != 1) return {};
    // Member input: the call-index committee's share of every party's value.
    Value shares(view.n(), kAbsentShare);
    for (int i = 0; i < view.n(); ++i) {
      auto msg = view.p2p(0, i);
      if (!msg) continue;
      for (size_t k = 0; k + 1 < msg->size(); k += 2)
        if ((*msg)[k] == static_cast<uint64_t>(call)) shares[i] = (*msg)[k + 1];
    }
    (void)party;
    return shares;
  };

  spec.program.finalize = [committees_copy, base, t_prime](
                              int, const PartyView& view) {
    size_t ell = committees_copy.size();
    if (view.rounds_done() < base + 2) return Output::pending();
    HmLedger led = hm_read_notices(view, base + 1, committees_copy);
    int l_star = -1;
    for (size_t l = 0; l < ell; ++l)
      if (led.counts[l] <= t_prime) {
        l_star = static_cast<int>(l);
        break;
      }
    if (l_star < 0) {
      std::vector<int> ids;
      for (size_t l = 0; l < ell; ++l)
        if (led.plurality[l] >= 0) ids.push_back(led.plurality[l]);
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      return Output::abort(ids);
    }
    if (view.rounds_done() < base + 3) return Output::pending();
    const Committee& c = committees_copy[l_star];
    PointVec pts;
    for (size_t j = 0; j < c.size(); ++j) {
      auto msg = view.broadcast(base + 2, c.members[j]);
      if (msg && msg->size() == 1)
        pts.emplace_back(FieldElem(j + 1), FieldElem((*msg)[0]));
    }
    if (static_cast<int>(pts.size()) < t_prime + 1)
      return Output::abort({});
    size_t budget =
        std::min<size_t>(t_prime, (pts.size() - (t_prime + 1)) / 2);
    Poly p = bw_decode(pts, t_prime + 1, budget);
    return Output::of({p.eval(FieldElem(0)).value()});
  };
  return spec;
}

// --- fair -> fair with restricted identifiable abort (with inputs) ---------------

namespace {

// Round indices: 0 commit/share, 1 R_enc, 2 aug-ct, 3 inner, 4 claims.
// Parties the protocol has excluded (no commitments or rejected input proof).
std::vector<int> wi_excluded(const PartyView& view, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    auto bc = view.broadcast(0, i);
    if (!bc) {
      out.push_back(i);
      continue;
    }
    const CallResult* zk = view.call(1, i);
    if (!zk || zk->aborted || zk->outcome.public_value.empty() ||
        zk->outcome.public_value.back() != 1)
      out.push_back(i);
  }
  return out;
}

std::vector<int> wi_excluded_public(const PublicView& pv, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    auto bc = pv.broadcast(0, i);
    if (!bc) {
      out.push_back(i);
      continue;
    }
    const CallResult* zk = pv.call(1, i);
    if (!zk || zk->aborted || zk->outcome.public_value.empty() ||
        zk->outcome.public_value.back() != 1)
      out.push_back(i);
  }
  return out;
}

}  // namespace

ProtocolSpec compile_fair_to_ridfair_withinput(
    int n, const std::vector<Committee>& committees,
    std::function<uint64_t(const std::vector<uint64_t>&)> f,
    std::vector<uint64_t> input_bits) {
  if (committees.empty()) throw SpecError("need at least one committee");
  size_t ell = committees.size();
  int n_prime = static_cast<int>(committees[0].size());
  for (const Committee& c : committees) {
    c.validate(n);
    if (static_cast<int>(c.size()) != n_prime)
      throw SpecError("committees must share one size");
  }
  if (input_bits.size() != static_cast<size_t>(n))
    throw SpecError("one input per party");

  ProtocolSpec spec;
  spec.n = n;
  for (uint64_t x : input_bits) spec.inputs.push_back(Value{x});

  spec.rounds.push_back(RoundSpec::comm());  // commit + distribute shares

  // Input-consistency proofs, one prover per party.
  std::vector<CallSpec> enc_calls;
  for (int i = 0; i < n; ++i) {
    CallSpec zk;
    zk.label = "r-enc";
    zk.tp = TrustedPartyType::full();
    zk.participants = Committee({i});
    zk.functionality = zk_one_to_many(
        "enc", [](const Value&, const Value&, const CallEnv&) { return false; });
    zk.configure = [i, ell, n_prime](const PublicView& pv, CallSpec& self) {
      auto bc = pv.broadcast(0, i);
      if (!bc || bc->size() != ell * n_prime) return false;
      Value handles = *bc;
      self.functionality = zk_one_to_many(
          "enc", [handles, ell, n_prime](const Value& stmt, const Value& wit,
                                         const CallEnv& env) {
            if (stmt != handles) return false;
            if (wit.size() != 2 * ell * n_prime) return false;
            uint64_t first_sum = 0;
            for (size_t l = 0; l < ell; ++l) {
              uint64_t sum = 0;
              for (int j = 0; j < n_prime; ++j) {
                size_t idx = l * n_prime + j;
                uint64_t share = wit[2 * idx], nonce = wit[2 * idx + 1];
                if (!env.registry->open(handles[idx], {share}, nonce))
                  return false;
                sum ^= share;
              }
              if (l == 0)
                first_sum = sum;
              else if (sum != first_sum)
                return false;
            }
            return true;
          });
      return true;
    };
    enc_calls.push_back(std::move(zk));
  }
  spec.rounds.push_back(RoundSpec::functionality(std::move(enc_calls)));

  // Committed randomness per still-active committee.
  std::vector<CallSpec> ct_calls;
  for (size_t l = 0; l < ell; ++l) {
    CallSpec cs;
    cs.label = "aug-ct";
    cs.functionality = f_augct();
    cs.tp = TrustedPartyType::restricted(
        TrustedPartyType::Kind::RestrictedIdAbort, {committees[l]});
    cs.participants = committees[l];
    cs.configure = [l, committees, n](const PublicView& pv, CallSpec&) {
      std::vector<int> gone = wi_excluded_public(pv, n);
      return intersect_sorted(committees[l].members, gone).empty();
    };
    ct_calls.push_back(std::move(cs));
  }
  spec.rounds.push_back(RoundSpec::functionality(std::move(ct_calls)));

  // Inner fair call per active committee.
  std::vector<CallSpec> inner_calls;
  for (size_t l = 0; l < ell; ++l) {
    CallSpec cs;
    cs.label = "f-in";
    cs.tp = TrustedPartyType::restricted(
        TrustedPartyType::Kind::RestrictedIdFair, {committees[l]});
    cs.participants = committees[l];
    cs.functionality = f_in(f, {}, committees[l].members);
    cs.configure = [l, committees, n, ell, n_prime, f](const PublicView& pv,
                                                       CallSpec& self) {
      std::vector<int> gone = wi_excluded_public(pv, n);
      if (!intersect_sorted(committees[l].members, gone).empty()) return false;
      const CallResult* ct = pv.call(2, static_cast<int>(l));
      if (!ct || ct->aborted) return false;
      std::vector<int> active;
      for (int i = 0; i < n; ++i)
        if (!contains_sorted(gone, i)) active.push_back(i);
      // Commitment matrix for this committee, active parties only; excluded
      // parties enter f with the default value zero.
      std::vector<std::vector<uint64_t>> commits;
      for (int i : active) {
        auto bc = pv.broadcast(0, i);
        std::vector<uint64_t> row;
        for (int j = 0; j < n_prime; ++j) row.push_back((*bc)[l * n_prime + j]);
        commits.push_back(std::move(row));
      }
      auto expand = [f, active, n](const std::vector<uint64_t>& xs) {
        std::vector<uint64_t> full(n, 0);
        for (size_t k = 0; k < active.size(); ++k) full[active[k]] = xs[k];
        return f(full);
      };
      self.functionality = f_in(expand, commits, committees[l].members);
      return true;
    };
    inner_calls.push_back(std::move(cs));
  }
  spec.rounds.push_back(RoundSpec::functionality(std::move(inner_calls)));

  // Output claims per active committee member.
  std::vector<CallSpec> claim_calls;
  for (size_t l = 0; l < ell; ++l) {
    for (int j = 0; j < n_prime; ++j) {
      CallSpec zk;
      zk.label = "claim";
      zk.tp = TrustedPartyType::full();
      zk.participants = Committee({committees[l].members[j]});
      zk.functionality = zk_one_to_many(
          "out", [](const Value&, const Value&, const CallEnv&) { return false; });
      zk.configure = [l, j](const PublicView& pv, CallSpec& self) {
        const CallResult* ct = pv.call(2, static_cast<int>(l));
        const CallResult* run = pv.call(3, static_cast<int>(l));
        if (!ct || ct->aborted || !run || run->aborted) return false;
        uint64_t handle = ct->outcome.public_value.at(j);
        Value genuine = run->outcome.public_value;
        self.functionality = zk_one_to_many(
            "out", [handle, genuine](const Value& stmt, const Value& wit,
                                     const CallEnv& env) {
              return stmt == genuine && wit.size() == 2 &&
                     env.registry->open(handle, {wit[0]}, wit[1]);
            });
        return true;
      };
      claim_calls.push_back(std::move(zk));
    }
  }
  spec.rounds.push_back(RoundSpec::functionality(std::move(claim_calls)));

  auto committees_copy = committees;
  spec.program.on_comm = [committees_copy, ell, n_prime](
                             int party, int round,
                             const PartyView& view) -> std::vector<OutMsg> {
    if (round != 0) return {};
    RngStream rng = view.derived("wi-input-shares");
    uint64_t x = view.input().empty() ? 0 : view.input()[0];
    Value handles;
    std::map<int, Value> per_recipient;
    for (size_t l = 0; l < ell; ++l) {
      uint64_t acc = 0;
      std::vector<uint64_t> shares(n_prime), nonces(n_prime);
      for (int j = 0; j < n_prime; ++j) {
        shares[j] = (j + 1 < n_prime) ? rng.next() : (acc ^ x);
        acc ^= shares[j];
        nonces[j] = rng.next();
      }
      for (int j = 0; j < n_prime; ++j) {
        handles.push_back(view.commitments().commit({shares[j]}, nonces[j]));
        Value& msg = per_recipient[committees_copy[l].members[j]];
        msg.push_back(l);
        msg.push_back(shares[j]);
        msg.push_back(nonces[j]);
      }
    }
    std::vector<OutMsg> out;
    out.push_back({kBroadcast, std::move(handles)});
    for (auto& [to, payload] : per_recipient)
      out.push_back({to, std::move(payload)});
    (void)party;
    return out;
  };

  spec.program.call_input = [committees_copy, ell, n_prime](
                                int party, int round, int call,
                                const PartyView& view) -> Value {
    if (round == 1) {
      if (call != party) return {};
      RngStream rng = view.derived("wi-input-shares");
      uint64_t x = view.input().empty() ? 0 : view.input()[0];
      Value stmt;
      Value wit;
      for (size_t l = 0; l < ell; ++l) {
        uint64_t acc = 0;
        for (int j = 0; j < n_prime; ++j) {
          uint64_t share = (j + 1 < n_prime) ? rng.next() : (acc ^ x);
          acc ^= share;
          uint64_t nonce = rng.next();
          wit.push_back(share);
          wit.push_back(nonce);
        }
      }
      auto bc = view.broadcast(0, party);
      if (!bc) return {};
      Value in{bc->size()};
      in.insert(in.end(), bc->begin(), bc->end());
      in.insert(in.end(), wit.begin(), wit.end());
      return in;
    }
    if (round == 3) {
      // Openings of every active party's share addressed to me in this
      // committee, in active-party order. Delivery is binding for parties
      // whose input proof passed: the real transport is a broadcast
      // ciphertext covered by that proof.
      size_t l = static_cast<size_t>(call);
      std::vector<int> gone = wi_excluded(view, view.n());
      Value in;
      for (int i = 0; i < view.n(); ++i) {
        if (contains_sorted(gone, i)) continue;
        auto msg = view.p2p(0, i);
        uint64_t share = 0, nonce = 0;
        bool found = false;
        if (msg)
          for (size_t k = 0; k + 2 < msg->size(); k += 3)
            if ((*msg)[k] == l) {
              share = (*msg)[k + 1];
              nonce = (*msg)[k + 2];
              found = true;
            }
        if (!found) return {};  // malformed input; the functionality blames me
        in.push_back(share);
        in.push_back(nonce);
      }
      return in;
    }
    if (round == 4) {
      size_t l = static_cast<size_t>(call) / n_prime;
      auto genuine = view.my_call_output(3, static_cast<int>(l));
      auto key = view.my_call_output(2, static_cast<int>(l));
      if (!genuine || !key) return {};
      Value in{genuine->size()};
      in.insert(in.end(), genuine->begin(), genuine->end());
      in.insert(in.end(), key->begin(), key->end());
      return in;
    }
    return {};
  };

  spec.program.finalize = [committees_copy, ell, n_prime,
                           n](int, const PartyView& view) {
    if (view.rounds_done() < 5) return Output::pending();
    std::vector<int> blamed;
    auto blame = [&blamed](int id) {
      if (!contains_sorted(blamed, id)) {
        blamed.push_back(id);
        std::sort(blamed.begin(), blamed.end());
      }
    };
    for (int i : wi_excluded(view, n))
      for (size_t l = 0; l < ell; ++l)
        if (committees_copy[l].contains(i)) blame(i);
    for (size_t l = 0; l < ell; ++l) {
      const CallResult* ct = view.call(2, static_cast<int>(l));
      if (ct && ct->aborted)
        for (int id : ct->blamed) blame(id);
      const CallResult* run = view.call(3, static_cast<int>(l));
      if (run && run->aborted)
        for (int id : run->blamed) blame(id);
      if (run && !run->aborted && run->outcome.public_value.size() == 2 &&
          run->outcome.public_value[0] == 1)
        blame(static_cast<int>(run->outcome.public_value[1]));
    }
    for (size_t c = 0; c < ell * n_prime; ++c) {
      const CallResult* zk = view.call(4, static_cast<int>(c));
      if (!zk || zk->aborted) continue;
      const Value& pub = zk->outcome.public_value;
      if (pub.size() == 3 && pub.back() == 1 && pub[0] == 0)
        return Output::of({pub[1]});
    }
    return Output::abort(blamed);
  };
  return spec;
}

// --- appendix partition protocols -------------------------------------------------

std::vector<Committee> partition_committees(int n, int t, int count) {
  int size = 2 * t + 1;
  if (count * size > n) throw SpecError("party set too small to partition");
  std::vector<Committee> cs;
  for (int j = 0; j < count; ++j) {
    std::vector<int> members;
    for (int k = 0; k < size; ++k) members.push_back(j * size + k);
    cs.emplace_back(std::move(members));
  }
  return cs;
}

namespace {

FunctionalitySpec plain_eval(std::function<uint64_t(const std::vector<uint64_t>&)> f) {
  FunctionalitySpec spec;
  spec.id = "eval";
  spec.eval = [f = std::move(f)](const std::vector<Value>& inputs, CallEnv&) {
    std::vector<uint64_t> xs;
    for (const Value& v : inputs) xs.push_back(v.empty() ? 0 : v[0]);
    CallOutcome out;
    out.public_value = {f(xs)};
    return out;
  };
  return spec;
}

}  // namespace

ProtocolSpec make_partition_sequential(
    int n, int t, std::function<uint64_t(const std::vector<uint64_t>&)> f,
    std::vector<uint64_t> input_bits) {
  if (t * (2 * t + 1) >= n)
    throw SpecError("sequential partition needs t(2t+1) < n");
  auto committees = partition_committees(n, t, t);
  int fallback = t * (2 * t + 1);
  ProtocolSpec spec;
  spec.n = n;
  for (uint64_t x : input_bits) spec.inputs.push_back(Value{x});

  for (int j = 0; j < t; ++j) {
    CallSpec cs;
    cs.label = "partition-call";
    cs.functionality = plain_eval(f);
    cs.tp = TrustedPartyType::restricted(
        TrustedPartyType::Kind::RestrictedFairAbort, {committees[j]});
    cs.participants = everyone(n);
    spec.rounds.push_back(RoundSpec::functionality({cs}));
  }
  spec.rounds.push_back(RoundSpec::comm());  // inputs to the fallback party
  spec.rounds.push_back(RoundSpec::comm());  // fallback result

  spec.program.on_comm = [t, fallback, f](int party, int round,
                                          const PartyView& view)
      -> std::vector<OutMsg> {
    if (round == t) {
      Value x = view.input();
      return {OutMsg{fallback, {x.empty() ? 0 : x[0]}}};
    }
    if (round == t + 1 && party == fallback) {
      std::vector<uint64_t> xs;
      for (int i = 0; i < view.n(); ++i) {
        auto msg = view.p2p(t, i);
        xs.push_back(msg && !msg->empty() ? (*msg)[0] : 0);
      }
      return {OutMsg{kBroadcast, {f(xs)}}};
    }
    return {};
  };
  spec.program.call_input = [](int, int, int, const PartyView& view) {
    return view.input();
  };
  spec.program.finalize = [t, fallback](int, const PartyView& view) {
    for (int r = 0; r < std::min(t, view.rounds_done()); ++r) {
      const CallResult* res = view.call(r, 0);
      if (res && !res->aborted) return Output::of(res->outcome.public_value);
    }
    if (view.rounds_done() < t + 2) return Output::pending();
    auto bc = view.broadcast(t + 1, fallback);
    if (bc) return Output::of(*bc);
    return Output::abort({});
  };
  return spec;
}

ProtocolSpec make_partition_parallel(
    int n, int t, std::function<uint64_t(const std::vector<uint64_t>&)> f,
    std::vector<uint64_t> input_bits) {
  if ((t + 1) * (2 * t + 1) > n)
    throw SpecError("parallel partition needs (t+1)(2t+1) <= n");
  auto committees = partition_committees(n, t, t + 1);
  ProtocolSpec spec;
  spec.n = n;
  for (uint64_t x : input_bits) spec.inputs.push_back(Value{x});

  CallSpec cs;
  cs.label = "partition-parallel";
  cs.functionality = plain_eval(f);
  cs.tp = TrustedPartyType::restricted(
      TrustedPartyType::Kind::RestrictedFairAbort, committees);
  cs.participants = everyone(n);
  spec.rounds.push_back(RoundSpec::functionality({cs}));

  spec.program.call_input = [](int, int, int, const PartyView& view) {
    return view.input();
  };
  spec.program.finalize = [](int, const PartyView& view) {
    const CallResult* res = view.call(0, 0);
    if (!res) return Output::pending();
    if (res->aborted) return Output::abort(res->blamed);
    return Output::of(res->outcome.public_value);
  };
  return spec;
}

// --- committed OR ------------------------------------------------------------------

CommittedOrConfig committed_or_config(int n, int kappa, double phi,
                                      double beta_prime) {
  CommittedOrConfig cfg;
  cfg.n = n;
  cfg.m = std::min(n, static_cast<int>(std::ceil(phi * std::log2(kappa))));
  cfg.n_second = std::min(static_cast<int>(std::ceil(std::log2(kappa) / phi)),
                          cfg.m - 1);
  cfg.max_iterations = static_cast<int>(std::ceil(phi * phi));
  cfg.beta_prime = beta_prime;
  return cfg;
}

namespace {

struct OrLedger {
  std::vector<int> party_set;  // sorted survivors
  int done_round = -1;         // phase-2 round that delivered the bit
  uint64_t bit = 0;
};

OrLedger or_fold(int n, int iter_base, int upto_round,
                 const std::function<const CallResult*(int, int)>& call) {
  OrLedger led;
  for (int i = 0; i < n; ++i) led.party_set.push_back(i);
  auto drop = [&led](const std::vector<int>& ids) {
    auto& ps = led.party_set;
    ps.erase(std::remove_if(ps.begin(), ps.end(),
                            [&ids](int p) { return contains_sorted(ids, p); }),
             ps.end());
  };
  for (int r = iter_base; r + 1 < upto_round; r += 2) {
    const CallResult* ph1 = call(r, 0);
    if (!ph1) continue;
    if (ph1->aborted) {
      drop(ph1->blamed);
      continue;
    }
    std::vector<int> m_set;
    const Value& pub = ph1->outcome.public_value;
    if (pub.size() >= 2 && pub[0] == 0)
      for (size_t k = 0; k < pub[1]; ++k)
        m_set.push_back(static_cast<int>(pub[2 + k]));
    std::sort(m_set.begin(), m_set.end());
    const CallResult* ph2 = call(r + 1, 0);
    if (!ph2) continue;
    if (ph2->aborted) {
      std::vector<int> both = ph2->blamed;
      both.insert(both.end(), m_set.begin(), m_set.end());
      std::sort(both.begin(), both.end());
      drop(both);
      continue;
    }
    if (ph2->outcome.public_value.size() == 2 &&
        ph2->outcome.public_value[0] == 1) {
      led.done_round = r + 1;
      led.bit = ph2->outcome.public_value[1];
      return led;
    }
  }
  return led;
}

}  // namespace

ProtocolSpec make_committed_or(const CommittedOrConfig& cfg,
                               std::vector<uint64_t> input_bits) {
  int n = cfg.n;
  if (input_bits.size() != static_cast<size_t>(n))
    throw SpecError("one input bit per party");
  bool elect = cfg.m < n;
  int iter_base = elect ? 2 : 1;

  ProtocolSpec spec;
  spec.n = n;
  for (uint64_t x : input_bits) spec.inputs.push_back(Value{x & 1});
  spec.rounds.push_back(RoundSpec::comm());  // commitments

  if (elect) {
    CallSpec cs;
    cs.label = "elect";
    cs.functionality = f_elect(cfg.m, cfg.beta_prime);
    cs.tp = TrustedPartyType::full();
    cs.participants = everyone(n);
    spec.rounds.push_back(RoundSpec::functionality({cs}));
  }

  for (int it = 0; it < cfg.max_iterations; ++it) {
    for (int phase = 0; phase < 2; ++phase) {
      CallSpec cs;
      cs.label = phase == 0 ? "com-or-1" : "com-or-2";
      cs.instance = it;
      cs.functionality = f_comor({}, {});
      cs.configure = [n, iter_base, elect, phase, it, cfg](
                         const PublicView& pv, CallSpec& self) {
        // Missing commitment: the protocol already ended with output 1.
        for (int i = 0; i < n; ++i)
          if (!pv.broadcast(0, i)) return false;
        auto reader = [&pv](int r, int c) { return pv.call(r, c); };
        OrLedger led = or_fold(n, iter_base, pv.rounds_done(), reader);
        if (led.done_round >= 0) return false;
        if (phase == 1) {
          const CallResult* ph1 = pv.call(iter_base + 2 * it, 0);
          if (!ph1 || ph1->aborted) return false;
        }
        Committee base;
        if (elect) {
          const CallResult* e = pv.call(1, 0);
          if (!e || e->aborted) return false;
          std::vector<int> members;
          for (uint64_t w : e->outcome.public_value)
            members.push_back(static_cast<int>(w));
          base = Committee(members);
        } else {
          base = everyone(n);
        }
        std::vector<int> cur;
        for (int p : base.members)
          if (contains_sorted(led.party_set, p)) cur.push_back(p);
        Committee cc(cur);
        if (cc.empty()) return false;
        int n2 = std::min(cfg.n_second, static_cast<int>(cc.size()) - 1);
        self.tp = TrustedPartyType::restricted(
            TrustedPartyType::Kind::RestrictedIdAbort,
            enumerate_subcommittees(cc, n2));
        self.participants = Committee(led.party_set);
        std::vector<uint64_t> handles;
        for (int p : led.party_set) {
          auto bc = pv.broadcast(0, p);
          handles.push_back(bc->empty() ? 0 : (*bc)[0]);
        }
        self.functionality = f_comor(led.party_set, handles);
        return true;
      };
      spec.rounds.push_back(RoundSpec::functionality({cs}));
    }
  }

  spec.program.on_comm = [](int, int round,
                            const PartyView& view) -> std::vector<OutMsg> {
    if (round != 0) return {};
    RngStream rng = view.derived("or-nonce");
    uint64_t nonce = rng.next();
    uint64_t x = view.input().empty() ? 0 : view.input()[0];
    uint64_t handle = view.commitments().commit({x}, nonce);
    return {OutMsg{kBroadcast, {handle}}};
  };
  spec.program.call_input = [iter_base](int, int round, int,
                                        const PartyView& view) -> Value {
    if (round < iter_base || (round - iter_base) % 2 != 0) return {};
    RngStream rng = view.derived("or-nonce");
    uint64_t nonce = rng.next();
    uint64_t x = view.input().empty() ? 0 : view.input()[0];
    return {x, nonce};
  };
  int total_rounds = iter_base + 2 * cfg.max_iterations;
  spec.program.finalize = [n, iter_base, total_rounds](
                              int, const PartyView& view) {
    if (view.rounds_done() < 1) return Output::pending();
    for (int i = 0; i < n; ++i)
      if (!view.broadcast(0, i)) return Output::of({1});
    auto reader = [&view](int r, int c) { return view.call(r, c); };
    OrLedger led = or_fold(n, iter_base, view.rounds_done(), reader);
    if (led.done_round >= 0) return Output::of({led.bit});
    if (view.rounds_done() >= total_rounds) return Output::abort({});
    return Output::pending();
  };
  return spec;
}

}  // namespace mpcsim
