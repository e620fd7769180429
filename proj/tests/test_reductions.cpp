#include <doctest.h>

#include <cmath>

#include "mpcsim/reductions.hpp"

using namespace mpcsim;

namespace {

uint64_t or_fn(const std::vector<uint64_t>& xs) {
  uint64_t y = 0;
  for (uint64_t x : xs) y |= x & 1;
  return y;
}

// Aborts every player-elimination call that still has a fresh corrupted
// member, revealing the lowest one.
AdversaryStrategy pe_max_abort(std::vector<int> corrupted) {
  AdversaryStrategy adv;
  adv.corrupted = std::move(corrupted);
  adv.early_abort = [](const AdvView& view, const AdvCallCtx& ctx)
      -> std::optional<std::vector<int>> {
    Committee cur = ctx.spec->tp.committees.at(0);
    for (int r = 0; r < view.round(); ++r) {
      const CallResult* res = view.call(r, 0);
      if (!res || !res->aborted || res->blamed.empty()) continue;
      int revealed = res->blamed[0];
      int victim = cur.contains(revealed) ? revealed : cur.lowest();
      auto& m = cur.members;
      m.erase(std::remove(m.begin(), m.end(), victim), m.end());
    }
    auto fresh = intersect_sorted(cur.members, view.corrupted());
    if (fresh.empty()) return std::nullopt;
    return std::vector<int>{fresh.front()};
  };
  return adv;
}

}  // namespace

TEST_CASE("err bound closed form") {
  CHECK(err_bound(1000, 100, 0.5, 0.6) ==
        doctest::Approx(10.0 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(err_bound(4096, 256, 0.25, 0.5) ==
        doctest::Approx(16.0 * std::exp(-32.0 / 3.0)).epsilon(1e-12));
  CHECK(err_bound(2000, 100, 0.3, 0.6) == doctest::Approx(0.0323).epsilon(1e-2));
  // beta' = beta degenerates to n/n'.
  CHECK(err_bound(500, 50, 0.3, 0.3) == doctest::Approx(10.0));
}

TEST_CASE("lightest bin: ties break toward the lowest bin") {
  CHECK(feige_elect(4, 2, {0, 0, 1, 1}) == Committee({0, 1}));
  CHECK(feige_elect(6, 3, {0, 0, 0, 0, 1, 1}) == Committee({4, 5}));
  // silent parties join no bin
  CHECK(feige_elect(4, 2, {-1, 0, 1, 1}) == Committee({1}));
  CHECK_THROWS_AS(feige_elect(4, 2, {0, 0, 9, 1}), SpecError);
}

TEST_CASE("lightest bin Monte Carlo stays under the error bound") {
  int n = 200, n_prime = 20;
  double beta = 0.2, beta_prime = 0.6;
  std::vector<int> corrupted;
  for (int i = 0; i < static_cast<int>(beta * n); ++i) corrupted.push_back(i);
  RngStream rng(99, 0);
  int bad = 0, trials = 2000;
  for (int t = 0; t < trials; ++t) {
    Committee c = feige_elect_random(n, n_prime, rng);
    size_t hit = intersect_sorted(c.members, corrupted).size();
    if (static_cast<double>(hit) >= beta_prime * c.size()) ++bad;
  }
  CHECK(static_cast<double>(bad) / trials <=
        err_bound(n, n_prime, beta, beta_prime));
}

TEST_CASE("reduction config derived counts") {
  ReductionConfig cfg;
  cfg.n = 4096;
  cfg.kappa = 256;
  cfg.phi = 2.0;
  cfg.beta = 0.1;
  cfg.beta_prime = 0.25;
  cfg.validate(true);
  CHECK(cfg.m() == 16);
  CHECK(cfg.n_second() == 4);
  CHECK(cfg.n_prime() == 12);
  CHECK(cfg.t_prime() == 3);

  ReductionConfig small = cfg;
  small.n = 10;  // fewer parties than the target committee
  CHECK(small.m() == 10);

  ReductionConfig badphi = cfg;
  badphi.phi = 1.0;  // below 1/sqrt(1 - 2*0.25)
  CHECK_THROWS_AS(badphi.validate(true), SpecError);
}

TEST_CASE("sub-committee enumeration and claim bound") {
  std::vector<int> base(16);
  for (int i = 0; i < 16; ++i) base[i] = i;
  auto subs = enumerate_subcommittees(Committee(base), 4);
  CHECK(subs.size() == 1820);
  CHECK(subcommittee_count_bound(256, 2.0) ==
        doctest::Approx(19658).epsilon(1e-3));
  CHECK(1820.0 <= subcommittee_count_bound(256, 2.0));

  auto whole = enumerate_subcommittees(Committee(base), 0);
  CHECK(whole.size() == 1);
  CHECK(whole[0] == Committee(base));

  auto six = enumerate_subcommittees(Committee({0, 1, 2, 3}), 2);
  CHECK(six.size() == 6);
  CHECK(six[0] == Committee({0, 1}));
  CHECK(six[5] == Committee({2, 3}));

  CHECK_THROWS_AS(enumerate_subcommittees(Committee(base), 8, 100),
                  CapExceeded);
}

TEST_CASE("player elimination: no aborts means one call") {
  ProtocolSpec spec =
      make_player_elimination(8, Committee({0, 1, 2, 3}), 3, f_cf());
  ExecutionResult res = run_player_elimination(spec, no_adversary(), 5);
  CHECK(res.calls_made == 1);
  CHECK(res.honest_agree({}));
  CHECK(res.outputs[0].kind == Output::Kind::Value);
}

TEST_CASE("player elimination: t' fresh aborts then success") {
  std::vector<int> corrupted{1, 2, 3};
  ProtocolSpec spec =
      make_player_elimination(8, Committee({0, 1, 2, 3, 4}), 3, f_cf());
  ExecutionResult res =
      run_player_elimination(spec, pe_max_abort(corrupted), 5);
  CHECK(res.calls_made == 4);  // exactly t' + 1
  CHECK(res.honest_agree(corrupted));
  CHECK(res.honest_output(corrupted).kind == Output::Kind::Value);
  CHECK(res.identified == corrupted);
}

TEST_CASE("player elimination: stale identity charges the simulator") {
  // First abort reveals 1; the second re-reveals the eliminated 1, charging
  // the lowest remaining member 0, who is corrupted, so the run is legal.
  std::vector<int> corrupted{0, 1};
  ProtocolSpec spec =
      make_player_elimination(6, Committee({0, 1, 2, 3}), 2, f_cf());
  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.early_abort = [](const AdvView& view, const AdvCallCtx&)
      -> std::optional<std::vector<int>> {
    if (view.round() == 0) return std::vector<int>{1};
    if (view.round() == 1) return std::vector<int>{1};  // stale
    return std::nullopt;
  };
  ExecutionResult res = run_player_elimination(spec, adv, 5);
  CHECK(res.calls_made == 3);
  CHECK(res.honest_output(corrupted).kind == Output::Kind::Value);

  // With only party 1 corrupted the same stale reveal is illegal: the blamed
  // simulator (party 0) is honest.
  AdversaryStrategy cheat = adv;
  cheat.corrupted = {1};
  CHECK_THROWS_AS(run_player_elimination(spec, cheat, 5), ProtocolViolation);
}

TEST_CASE("player elimination with inputs substitutes defaults") {
  std::vector<int> corrupted{2};
  FunctionalitySpec f;
  f.id = "or";
  f.eval = [](const std::vector<Value>& inputs, CallEnv&) {
    uint64_t y = 0;
    for (const Value& v : inputs) y |= v.empty() ? 0 : (v[0] & 1);
    CallOutcome out;
    out.public_value = {y};
    return out;
  };
  // Party 2 holds the only 1; after its elimination the default input zeroes
  // it, flipping the OR to 0.
  std::vector<Value> inputs{{0}, {0}, {1}, {0}, {0}};
  ProtocolSpec spec =
      make_player_elimination(5, Committee({1, 2, 3}), 1, f, inputs);
  ExecutionResult res =
      run_player_elimination(spec, pe_max_abort(corrupted), 3);
  CHECK(res.calls_made == 2);
  CHECK(res.honest_output(corrupted) == Output::of({0}));
}

TEST_CASE("coin-flip uplift composes election and elimination") {
  ProtocolSpec spec = make_coinflip_uplift(24, 6, 0.5);
  ExecutionResult res = run_player_elimination(spec, no_adversary(), 11);
  CHECK(res.honest_agree({}));
  CHECK(res.honest_output({}).kind == Output::Kind::Value);
  CHECK(res.calls_made == 1);

  Summary s = estimate(spec, no_adversary(), 2000, 11);
  CHECK(s.mean > 0.46);
  CHECK(s.mean < 0.54);
}

TEST_CASE("parallel sub-committees: non-aborting adversary, one iteration") {
  std::vector<int> base(8);
  for (int i = 0; i < 8; ++i) base[i] = i;
  ProtocolSpec spec =
      make_parallel_subcommittees(8, Committee(base), 2, 4, f_cf());
  ExecutionResult res = run(spec, no_adversary(), 3);
  CHECK(res.functionality_rounds_used == 1);
  CHECK(res.honest_output({}).kind == Output::Kind::Value);
}

TEST_CASE("parallel sub-committees: abort burns n''+1 identities per round") {
  // Committee of 8, n'' = 2, sub-committees of size 6: aborting needs a
  // corrupted member in every 6-subset, i.e. at least 3 corrupted parties.
  std::vector<int> base(8);
  for (int i = 0; i < 8; ++i) base[i] = i;
  std::vector<int> corrupted{0, 1, 2};
  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.early_abort = [](const AdvView& view, const AdvCallCtx& ctx)
      -> std::optional<std::vector<int>> {
    std::vector<int> ids;
    for (const Committee& c : ctx.spec->tp.committees) {
      auto hit = intersect_sorted(c.members, view.corrupted());
      if (hit.empty()) return std::nullopt;
      ids.push_back(hit.front());
    }
    return ids;
  };
  ProtocolSpec spec =
      make_parallel_subcommittees(8, Committee(base), 2, 4, f_cf());
  ExecutionResult res = run(spec, adv, 3);
  // One abort (3 identities), then a corruption-free sub-committee exists.
  CHECK(res.functionality_rounds_used == 2);
  CHECK(res.identified == corrupted);
  CHECK(res.honest_output(corrupted).kind == Output::Kind::Value);

  // 3 corrupted of 8 leaves a 6-subset with only half honest, so only the
  // honest-presence constraint survives; 2 corrupted keep a majority.
  auto subs = enumerate_subcommittees(Committee(base), 2);
  CHECK(subcommittees_honest_presence(subs, corrupted));
  CHECK(!subcommittees_honest_majority(subs, corrupted));
  CHECK(subcommittees_honest_majority(subs, {0, 1}));
}

TEST_CASE("fewer than n''+1 corrupted members cannot abort at all") {
  std::vector<int> base(8);
  for (int i = 0; i < 8; ++i) base[i] = i;
  std::vector<int> corrupted{0, 1};
  auto tried = std::make_shared<bool>(false);
  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.early_abort = [tried](const AdvView& view, const AdvCallCtx& ctx)
      -> std::optional<std::vector<int>> {
    std::vector<int> ids;
    for (const Committee& c : ctx.spec->tp.committees) {
      auto hit = intersect_sorted(c.members, view.corrupted());
      if (hit.empty()) return std::nullopt;  // pigeonhole: must give up
      ids.push_back(hit.front());
    }
    *tried = true;
    return ids;
  };
  ProtocolSpec spec =
      make_parallel_subcommittees(8, Committee(base), 2, 4, f_cf());
  ExecutionResult res = run(spec, adv, 3);
  CHECK(!*tried);
  CHECK(res.functionality_rounds_used == 1);
}

TEST_CASE("no-input compiler: honest run spreads the inner output") {
  ProtocolSpec spec =
      compile_fair_to_ridfair_noinput(7, Committee({1, 3, 5}), f_cf());
  ExecutionResult res = run(spec, no_adversary(), 21);
  CHECK(res.honest_agree({}));
  const Output& out = res.honest_output({});
  CHECK(out.kind == Output::Kind::Value);
  CHECK(out.value.size() == 1);
  for (const Output& o : res.outputs) CHECK(o == out);
}

TEST_CASE("no-input compiler: lying member's claim is rejected") {
  std::vector<int> corrupted{3};
  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.fail_stop = false;
  adv.substitute_inputs = [](const AdvView&, const AdvCallCtx& ctx,
                             std::vector<Value>& inputs) {
    if (ctx.spec->label != "claim") return;
    for (Value& in : inputs)
      if (in.size() >= 2) in[1] ^= 1;  // flip the claimed output bit
  };
  ProtocolSpec spec =
      compile_fair_to_ridfair_noinput(7, Committee({1, 3, 5}), f_cf());
  ExecutionResult res = run(spec, adv, 21);
  ExecutionResult honest = run(spec, no_adversary(), 21);
  CHECK(res.honest_output(corrupted) == honest.honest_output({}));
  bool rejected = false;
  for (const CallRecord& call : res.transcript[2].calls)
    if (call.executed && !call.result.aborted &&
        call.result.outcome.public_value.back() == 0)
      rejected = true;
  CHECK(rejected);
}

TEST_CASE("no-input compiler: inner abort propagates the identity to all") {
  std::vector<int> corrupted{3};
  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.early_abort = [](const AdvView&, const AdvCallCtx& ctx)
      -> std::optional<std::vector<int>> {
    if (ctx.spec->label != "inner") return std::nullopt;
    return std::vector<int>{3};
  };
  ProtocolSpec spec =
      compile_fair_to_ridfair_noinput(7, Committee({1, 3, 5}), f_cf());
  ExecutionResult res = run(spec, adv, 21);
  for (int p = 0; p < 7; ++p)
    if (p != 3) CHECK(res.outputs[p] == Output::abort({3}));
}

TEST_CASE("hm compiler: no aborts, everyone reconstructs y") {
  std::vector<Committee> cs{Committee({0, 1, 2, 3, 4, 5, 6}),
                            Committee({7, 8, 9, 10, 11, 12, 13})};
  ProtocolSpec spec = compile_abort_to_ridfair_hm(14, cs, 2, or_fn, true);
  ExecutionResult res = run(spec, no_adversary(), 4);
  CHECK(res.honest_agree({}));
  CHECK(res.honest_output({}).kind == Output::Kind::Value);
}

TEST_CASE("hm compiler: all committees aborted yields plurality identities") {
  std::vector<Committee> cs{Committee({0, 1, 2, 3, 4, 5, 6}),
                            Committee({7, 8, 9, 10, 11, 12, 13})};
  std::vector<int> corrupted{2, 9};
  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.late_abort = [](const AdvView&, const AdvCallCtx& ctx,
                      const std::vector<std::pair<int, Value>>&)
      -> std::optional<std::vector<int>> {
    const Committee& c = ctx.spec->tp.committees.at(0);
    return std::vector<int>{c.contains(2) ? 2 : 9};
  };
  ProtocolSpec spec = compile_abort_to_ridfair_hm(14, cs, 2, or_fn, true);
  ExecutionResult res = run(spec, adv, 4);
  const Output& out = res.honest_output(corrupted);
  CHECK(out.kind == Output::Kind::Abort);
  CHECK(out.blamed == std::vector<int>{2, 9});
}

TEST_CASE("hm compiler: fake notices below t' leave the committee surviving") {
  std::vector<Committee> cs{Committee({0, 1, 2, 3, 4, 5, 6})};
  std::vector<int> corrupted{2, 4};
  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.fail_stop = false;
  adv.on_comm = [](const AdvView&, int round,
                   std::map<int, std::vector<OutMsg>>& planned) {
    if (round != 1) return;  // notice round in the no-input layout
    for (auto& [p, msgs] : planned) msgs = {OutMsg{kBroadcast, {0, 0}}};
  };
  ProtocolSpec spec = compile_abort_to_ridfair_hm(7, cs, 2, or_fn, true);
  ExecutionResult res = run(spec, adv, 8);
  CHECK(res.honest_output(corrupted).kind == Output::Kind::Value);
  ExecutionResult honest = run(spec, no_adversary(), 8);
  CHECK(res.honest_output(corrupted) == honest.honest_output({}));
}

TEST_CASE("hm compiler: notice stuffing cannot fake an abort or shift blame") {
  std::vector<Committee> cs{Committee({0, 1, 2, 3, 4, 5, 6})};
  std::vector<int> corrupted{2, 4};
  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.fail_stop = false;
  // Both corrupted members flood the notice round with repeated pairs
  // accusing the honest party 0.
  adv.on_comm = [](const AdvView&, int round,
                   std::map<int, std::vector<OutMsg>>& planned) {
    if (round != 1) return;
    Value flood;
    for (int k = 0; k < 20; ++k) {
      flood.push_back(0);
      flood.push_back(0);
    }
    for (auto& [p, msgs] : planned) msgs = {OutMsg{kBroadcast, flood}};
  };
  ProtocolSpec spec = compile_abort_to_ridfair_hm(7, cs, 2, or_fn, true);
  ExecutionResult res = run(spec, adv, 12);
  // Two distinct voters stay at or below t' = 2: the committee survives and
  // nobody honest is blamed.
  const Output& out = res.honest_output(corrupted);
  CHECK(out.kind == Output::Kind::Value);

  // Same flood while the call genuinely aborts: the honest majority's
  // notices dominate the plurality.
  AdversaryStrategy both = adv;
  both.early_abort = [](const AdvView&, const AdvCallCtx& ctx)
      -> std::optional<std::vector<int>> {
    if (ctx.spec->label != "ssout") return std::nullopt;
    return std::vector<int>{2};
  };
  ExecutionResult res2 = run(spec, both, 12);
  const Output& out2 = res2.honest_output(corrupted);
  CHECK(out2.kind == Output::Kind::Abort);
  CHECK(out2.blamed == std::vector<int>{2});
}

TEST_CASE("hm compiler: corrupted share broadcasts stay within tolerance") {
  std::vector<Committee> cs{Committee({0, 1, 2, 3, 4, 5, 6})};
  std::vector<int> corrupted{2, 4};
  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.fail_stop = false;
  adv.on_comm = [](const AdvView&, int round,
                   std::map<int, std::vector<OutMsg>>& planned) {
    if (round != 2) return;  // share-broadcast round
    for (auto& [p, msgs] : planned)
      msgs = {OutMsg{kBroadcast, {123456789 + static_cast<uint64_t>(p)}}};
  };
  ProtocolSpec spec = compile_abort_to_ridfair_hm(7, cs, 2, or_fn, true);
  ExecutionResult res = run(spec, adv, 8);
  ExecutionResult honest = run(spec, no_adversary(), 8);
  CHECK(res.honest_output(corrupted) == honest.honest_output({}));
}

TEST_CASE("hm compiler with inputs reconstructs f on the true inputs") {
  std::vector<Committee> cs{Committee({0, 1, 2, 3, 4, 5, 6})};
  std::vector<Value> inputs;
  for (int i = 0; i < 7; ++i) inputs.push_back({i == 4 ? uint64_t(1) : 0});
  ProtocolSpec spec =
      compile_abort_to_ridfair_hm(7, cs, 2, or_fn, false, inputs);
  ExecutionResult res = run(spec, no_adversary(), 9);
  CHECK(res.honest_output({}) == Output::of({1}));

  std::vector<Value> zeros(7, Value{0});
  ProtocolSpec spec0 =
      compile_abort_to_ridfair_hm(7, cs, 2, or_fn, false, zeros);
  CHECK(run(spec0, no_adversary(), 9).honest_output({}) == Output::of({0}));
}

TEST_CASE("with-input compiler: honest run computes f on true inputs") {
  std::vector<Committee> cs{Committee({0, 1, 2}), Committee({2, 3, 4})};
  ProtocolSpec spec =
      compile_fair_to_ridfair_withinput(6, cs, or_fn, {0, 0, 0, 0, 1, 0});
  ExecutionResult res = run(spec, no_adversary(), 31);
  CHECK(res.honest_agree({}));
  CHECK(res.honest_output({}) == Output::of({1}));

  ProtocolSpec zero =
      compile_fair_to_ridfair_withinput(6, cs, or_fn, {0, 0, 0, 0, 0, 0});
  CHECK(run(zero, no_adversary(), 31).honest_output({}) == Output::of({0}));
}

TEST_CASE("with-input compiler: failed input proof excludes without stopping") {
  std::vector<Committee> cs{Committee({0, 1, 2})};
  std::vector<int> corrupted{5};
  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.fail_stop = false;
  adv.substitute_inputs = [](const AdvView&, const AdvCallCtx& ctx,
                             std::vector<Value>& inputs) {
    if (ctx.spec->label != "r-enc" || ctx.call_index != 5) return;
    for (Value& in : inputs)
      if (in.size() > 2) in.back() ^= 1;  // break the witness
  };
  // Party 5 holds the only 1; its exclusion defaults it to 0.
  ProtocolSpec spec =
      compile_fair_to_ridfair_withinput(6, cs, or_fn, {0, 0, 0, 0, 0, 1});
  ExecutionResult res = run(spec, adv, 31);
  CHECK(res.honest_output(corrupted) == Output::of({0}));
}

TEST_CASE("with-input compiler: member substituting a share is identified") {
  std::vector<Committee> cs{Committee({0, 1, 2})};
  std::vector<int> corrupted{1};
  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.fail_stop = false;
  adv.substitute_inputs = [](const AdvView&, const AdvCallCtx& ctx,
                             std::vector<Value>& inputs) {
    if (ctx.spec->label != "f-in") return;
    for (Value& in : inputs)
      if (in.size() >= 2) in[0] ^= 1;  // opening no longer matches
  };
  ProtocolSpec spec =
      compile_fair_to_ridfair_withinput(6, cs, or_fn, {1, 0, 0, 0, 0, 0});
  ExecutionResult res = run(spec, adv, 31);
  const Output& out = res.honest_output(corrupted);
  CHECK(out.kind == Output::Kind::Abort);
  CHECK(out.blamed == std::vector<int>{1});
}

TEST_CASE("partition committees of the appendix shape") {
  auto cs = partition_committees(11, 2, 2);
  CHECK(cs[0] == Committee({0, 1, 2, 3, 4}));
  CHECK(cs[1] == Committee({5, 6, 7, 8, 9}));
}

TEST_CASE("sequential partition completes under maximal fair aborts") {
  std::vector<int> corrupted{0, 5};  // one per committee
  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.early_abort = [](const AdvView& view, const AdvCallCtx& ctx)
      -> std::optional<std::vector<int>> {
    for (const Committee& c : ctx.spec->tp.committees)
      if (intersect_sorted(c.members, view.corrupted()).empty())
        return std::nullopt;
    return std::vector<int>{};  // fair: no identities
  };
  std::vector<uint64_t> inputs(11, 0);
  inputs[10] = 1;
  ProtocolSpec spec = make_partition_sequential(11, 2, or_fn, inputs);
  ExecutionResult res = run(spec, adv, 41);
  // Both calls aborted; the honest fallback party finishes alone.
  CHECK(res.honest_output(corrupted) == Output::of({1}));
  CHECK(res.identified.empty());

  ExecutionResult fast = run(spec, no_adversary(), 41);
  CHECK(fast.calls_made == 1);
  CHECK(fast.honest_output({}) == Output::of({1}));
}

TEST_CASE("t = 0 partition degenerates to the single honest computation") {
  ProtocolSpec spec = make_partition_sequential(3, 0, or_fn, {1, 0, 0});
  ExecutionResult res = run(spec, no_adversary(), 2);
  CHECK(res.calls_made == 0);
  CHECK(res.honest_output({}) == Output::of({1}));
}

TEST_CASE("parallel partition never admits an abort") {
  std::vector<int> corrupted{0, 5};
  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.early_abort = [](const AdvView&, const AdvCallCtx&)
      -> std::optional<std::vector<int>> {
    return std::vector<int>{};  // tries to abort every call
  };
  std::vector<uint64_t> inputs(15, 0);
  ProtocolSpec spec = make_partition_parallel(15, 2, or_fn, inputs);
  CHECK_THROWS_AS(run(spec, adv, 7), ProtocolViolation);

  ExecutionResult res = run(spec, no_adversary(), 7);
  CHECK(res.calls_made == 1);
  CHECK(res.honest_output({}) == Output::of({0}));
}

TEST_CASE("committed OR config and honest runs") {
  CommittedOrConfig cfg = committed_or_config(6, 256, 2.0, 0.5);
  CHECK(cfg.m == 6);  // falls back to n when the target exceeds n
  CHECK(cfg.max_iterations == 4);

  ProtocolSpec spec = make_committed_or(cfg, {0, 0, 1, 0, 0, 0});
  ExecutionResult res = run(spec, no_adversary(), 13);
  CHECK(res.honest_output({}) == Output::of({1}));

  ProtocolSpec zero = make_committed_or(cfg, {0, 0, 0, 0, 0, 0});
  CHECK(run(zero, no_adversary(), 13).honest_output({}) == Output::of({0}));
}

TEST_CASE("committed OR: non-committing party forces output 1") {
  CommittedOrConfig cfg = committed_or_config(5, 256, 2.0, 0.5);
  AdversaryStrategy adv;
  adv.corrupted = {2};
  adv.on_comm = [](const AdvView&, int round,
                   std::map<int, std::vector<OutMsg>>& planned) {
    if (round == 0)
      for (auto& [p, msgs] : planned) msgs.clear();
  };
  ProtocolSpec spec = make_committed_or(cfg, {0, 0, 0, 0, 0});
  ExecutionResult res = run(spec, adv, 19);
  CHECK(res.honest_output(adv.corrupted) == Output::of({1}));
}

TEST_CASE("committed OR: aborts only delay, never flip an honest 1") {
  CommittedOrConfig cfg = committed_or_config(5, 256, 2.0, 0.5);
  std::vector<int> corrupted{0, 1, 2, 3};
  AdversaryStrategy adv;
  adv.corrupted = corrupted;
  adv.early_abort = [](const AdvView& view, const AdvCallCtx& ctx)
      -> std::optional<std::vector<int>> {
    if (ctx.spec->label.rfind("com-or", 0) != 0) return std::nullopt;
    std::vector<int> ids;
    for (const Committee& c : ctx.spec->tp.committees) {
      auto hit = intersect_sorted(c.members, view.corrupted());
      if (hit.empty()) return std::nullopt;
      ids.push_back(hit.front());
    }
    return ids;
  };
  ProtocolSpec spec = make_committed_or(cfg, {0, 0, 0, 0, 1});
  ExecutionResult res = run(spec, adv, 23);
  CHECK(res.honest_output(corrupted) == Output::of({1}));
  CHECK(res.functionality_rounds_used <= 1 + 2 * cfg.max_iterations);
}
