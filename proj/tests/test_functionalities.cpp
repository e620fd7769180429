#include <doctest.h>

#include "mpcsim/functionalities.hpp"

using namespace mpcsim;

namespace {

FunctionalitySpec or_functionality() {
  FunctionalitySpec f;
  f.id = "or";
  f.eval = [](const std::vector<Value>& inputs, CallEnv&) {
    uint64_t y = 0;
    for (const Value& v : inputs) y |= v.empty() ? 0 : (v[0] & 1);
    CallOutcome out;
    out.public_value = {y};
    return out;
  };
  return f;
}

struct Fixture {
  SeededCoinSource coins{123};
  CommitmentRegistry registry;
  Value reactive;

  CallEnv env(int n, Committee participants,
              const std::vector<int>* corrupted, size_t slot = 0) {
    CallEnv e;
    e.n = n;
    e.participants = std::move(participants);
    e.corrupted = corrupted;
    e.registry = &registry;
    e.reactive_state = &reactive;
    e.rand = {&coins, slot};
    return e;
  }
};

Committee comm(std::initializer_list<int> m) { return Committee(m); }

const std::vector<int> kNone;

std::vector<Value> bits(std::initializer_list<uint64_t> xs) {
  std::vector<Value> v;
  for (uint64_t x : xs) v.push_back({x});
  return v;
}

}  // namespace

TEST_CASE("full security: OR over honest inputs, no abort possible") {
  Fixture fx;
  CallEnv env = fx.env(3, comm({0, 1, 2}), &kNone);
  CallResult res = tp_execute(or_functionality(), TrustedPartyType::full(),
                              bits({0, 1, 0}), {}, kNone, env);
  CHECK(!res.aborted);
  CHECK(res.outcome.public_value == Value{1});

  TpAdversary adv;
  adv.early_abort = [] {
    return std::optional<std::vector<int>>(std::vector<int>{});
  };
  CallEnv env2 = fx.env(3, comm({0, 1, 2}), &kNone);
  CHECK_THROWS_AS(tp_execute(or_functionality(), TrustedPartyType::full(),
                             bits({0, 1, 0}), adv, kNone, env2),
                  ProtocolViolation);
}

TEST_CASE("id-fair abort carries a corrupted identity to everyone") {
  Fixture fx;
  std::vector<int> corrupted{1};
  TpAdversary adv;
  adv.early_abort = [] {
    return std::optional<std::vector<int>>(std::vector<int>{1});
  };
  CallEnv env = fx.env(3, comm({0, 1, 2}), &corrupted);
  CallResult res = tp_execute(or_functionality(), TrustedPartyType::id_fair(),
                              bits({0, 1, 0}), adv, corrupted, env);
  CHECK(res.aborted);
  CHECK(res.blamed == std::vector<int>{1});

  TpAdversary cheat;
  cheat.early_abort = [] {
    return std::optional<std::vector<int>>(std::vector<int>{0});  // honest id
  };
  CallEnv env2 = fx.env(3, comm({0, 1, 2}), &corrupted);
  CHECK_THROWS_AS(tp_execute(or_functionality(), TrustedPartyType::id_fair(),
                             bits({0, 1, 0}), cheat, corrupted, env2),
                  ProtocolViolation);
}

TEST_CASE("fair models never sample functionality randomness on early abort") {
  struct CountingSource : CoinSource {
    int draws = 0;
    uint64_t draw_bit(size_t) override {
      ++draws;
      return 0;
    }
    RngStream stream(size_t) override {
      ++draws;
      return RngStream(0, 0);
    }
    uint64_t peek_bit(size_t) override { return 0; }
  } source;
  std::vector<int> corrupted{0};
  TpAdversary adv;
  adv.early_abort = [] {
    return std::optional<std::vector<int>>(std::vector<int>());
  };
  CallEnv env;
  env.n = 2;
  env.participants = comm({0, 1});
  env.corrupted = &corrupted;
  env.rand = {&source, 0};
  CallResult res = tp_execute(f_cf(), TrustedPartyType::fair(), bits({0, 0}),
                              adv, corrupted, env);
  CHECK(res.aborted);
  CHECK(source.draws == 0);
}

TEST_CASE("late abort allowed only for abort-type models") {
  Fixture fx;
  std::vector<int> corrupted{2};
  int phase_seen = -1;
  TpAdversary adv;
  adv.late_abort = [&phase_seen](const std::vector<std::pair<int, Value>>& outs)
      -> std::optional<std::vector<int>> {
    phase_seen = static_cast<int>(outs.size());
    return std::vector<int>{2};
  };
  CallEnv env = fx.env(3, comm({0, 1, 2}), &corrupted);
  CallResult res = tp_execute(or_functionality(), TrustedPartyType::id_abort(),
                              bits({0, 0, 1}), adv, corrupted, env);
  CHECK(res.aborted);
  CHECK(phase_seen == 1);  // saw the corrupted party's output first

  // The same hook under a fair model is ignored.
  CallEnv env2 = fx.env(3, comm({0, 1, 2}), &corrupted);
  CallResult fair = tp_execute(or_functionality(), TrustedPartyType::id_fair(),
                               bits({0, 0, 1}), adv, corrupted, env2);
  CHECK(!fair.aborted);
}

TEST_CASE("restricted id-fair: one identity per committee, honest committee blocks") {
  Fixture fx;
  std::vector<int> corrupted{1, 3};
  auto type = TrustedPartyType::restricted(
      TrustedPartyType::Kind::RestrictedIdFair,
      {comm({0, 1}), comm({2, 3})});
  TpAdversary adv;
  adv.early_abort = [] {
    return std::optional<std::vector<int>>(std::vector<int>{1, 3});
  };
  CallEnv env = fx.env(4, comm({0, 1, 2, 3}), &corrupted);
  CallResult res = tp_execute(or_functionality(), type, bits({0, 0, 0, 0}),
                              adv, corrupted, env);
  CHECK(res.aborted);
  CHECK(res.blamed == std::vector<int>{1, 3});

  // A corruption-free committee forbids the abort outright.
  auto blocked = TrustedPartyType::restricted(
      TrustedPartyType::Kind::RestrictedIdFair, {comm({0, 2}), comm({1, 3})});
  TpAdversary attempt;
  attempt.early_abort = [] {
    return std::optional<std::vector<int>>(std::vector<int>{1, 1});
  };
  CallEnv env2 = fx.env(4, comm({0, 1, 2, 3}), &corrupted);
  CHECK_THROWS_AS(tp_execute(or_functionality(), blocked, bits({0, 0, 0, 0}),
                             attempt, corrupted, env2),
                  ProtocolViolation);
}

TEST_CASE("restricted id-fair with a corruption-free committee acts like full security") {
  // Exhaust the adversary's legal moves: the only one is not aborting, so
  // every trace coincides with the fully secure computation.
  std::vector<int> corrupted{3};
  auto type = TrustedPartyType::restricted(
      TrustedPartyType::Kind::RestrictedIdFair, {comm({0, 1, 2})});
  for (bool try_abort : {false, true}) {
    Fixture fx;
    TpAdversary adv;
    if (try_abort)
      adv.early_abort = [] {
        return std::optional<std::vector<int>>(std::vector<int>{3});
      };
    CallEnv env = fx.env(4, comm({0, 1, 2, 3}), &corrupted);
    if (try_abort) {
      CHECK_THROWS_AS(tp_execute(or_functionality(), type, bits({0, 1, 0, 0}),
                                 adv, corrupted, env),
                      ProtocolViolation);
    } else {
      CallResult restricted = tp_execute(or_functionality(), type,
                                         bits({0, 1, 0, 0}), adv, corrupted, env);
      Fixture fx2;
      CallEnv env2 = fx2.env(4, comm({0, 1, 2, 3}), &corrupted);
      CallResult full = tp_execute(or_functionality(), TrustedPartyType::full(),
                                   bits({0, 1, 0, 0}), {}, corrupted, env2);
      CHECK(restricted.aborted == full.aborted);
      CHECK(restricted.outcome.public_value == full.outcome.public_value);
    }
  }
}

TEST_CASE("restricted: all-corrupted committee hands over the outcome") {
  Fixture fx;
  std::vector<int> corrupted{0, 1};
  auto type = TrustedPartyType::restricted(
      TrustedPartyType::Kind::RestrictedIdFair, {comm({0, 1})});
  std::vector<Value> seen;
  TpAdversary adv;
  adv.dictate = [&seen](const std::vector<Value>& inputs) {
    seen = inputs;
    DictateAction act;
    CallOutcome out;
    out.public_value = {7};
    act.outcome = out;
    return act;
  };
  CallEnv env = fx.env(3, comm({0, 1, 2}), &corrupted);
  CallResult res = tp_execute(or_functionality(), type, bits({0, 0, 1}), adv,
                              corrupted, env);
  CHECK(!res.aborted);
  CHECK(res.outcome.public_value == Value{7});
  CHECK(seen.size() == 3);  // the adversary saw every input
}

TEST_CASE("coin flip basics") {
  std::vector<int> corrupted;
  SeededCoinSource coins(5);
  int ones = 0;
  const int kTrials = 10000;
  for (int i = 0; i < kTrials; ++i) {
    CallEnv env;
    env.n = 3;
    env.participants = comm({0, 1, 2});
    env.corrupted = &corrupted;
    env.rand = {&coins, static_cast<size_t>(i)};
    CallResult res = tp_execute(f_cf(), TrustedPartyType::fair(), bits({0, 0, 0}),
                                {}, corrupted, env);
    ones += static_cast<int>(res.outcome.public_value[0]);
  }
  double freq = static_cast<double>(ones) / kTrials;
  CHECK(freq > 0.48);
  CHECK(freq < 0.52);

  // Same slot, same source: same bit.
  SeededCoinSource a(9), b(9);
  CHECK(a.draw_bit(3) == b.draw_bit(3));
}

TEST_CASE("election: with nobody corrupted the committee is all honest") {
  Fixture fx;
  std::vector<int> corrupted;
  CallEnv env = fx.env(8, comm({0, 1, 2, 3, 4, 5, 6, 7}), &corrupted);
  CallResult res = tp_execute(f_elect(4, 0.5), TrustedPartyType::full(),
                              std::vector<Value>(8), {}, corrupted, env);
  CHECK(!res.aborted);
  CHECK(res.outcome.public_value.size() <= 4);
  CHECK(res.outcome.public_value.size() >= 2);  // the seeded honest base
}

TEST_CASE("election honors the adversary's bucket and padding") {
  Fixture fx;
  std::vector<int> corrupted{0, 1, 2};
  // n = 9, n' = 3, k = 3 buckets, base = ceil(0.5*3) = 2 honest each.
  TpAdversary adv;
  adv.functionality_query = [](const Value& view) -> Value {
    // view = {k, size, members..., ...}; pick bucket 1 and pad with party 0.
    (void)view;
    return {1, 0};
  };
  CallEnv env = fx.env(9, comm({0, 1, 2, 3, 4, 5, 6, 7, 8}), &corrupted);
  CallResult res = tp_execute(f_elect(3, 0.5), TrustedPartyType::full(),
                              std::vector<Value>(9), adv, corrupted, env);
  CHECK(!res.aborted);
  Committee c(std::vector<int>(res.outcome.public_value.begin(),
                               res.outcome.public_value.end()));
  CHECK(c.contains(0));
  CHECK(c.size() <= 3);
  size_t bad = intersect_sorted(c.members, corrupted).size();
  CHECK(static_cast<double>(bad) <= 0.5 * c.size());

  // Padding with an honest party is a protocol violation.
  TpAdversary cheat;
  cheat.functionality_query = [](const Value&) -> Value { return {0, 8}; };
  CallEnv env2 = fx.env(9, comm({0, 1, 2, 3, 4, 5, 6, 7, 8}), &corrupted);
  CHECK_THROWS_AS(tp_execute(f_elect(3, 0.5), TrustedPartyType::full(),
                             std::vector<Value>(9), cheat, corrupted, env2),
                  ProtocolViolation);
}

TEST_CASE("election guarantee over many adversarial choices") {
  std::vector<int> corrupted{0, 1, 2, 3};
  SeededCoinSource coins(17);
  for (int trial = 0; trial < 1000; ++trial) {
    CommitmentRegistry reg;
    TpAdversary adv;
    adv.functionality_query = [trial](const Value& view) -> Value {
      uint64_t k = view[0];
      uint64_t pick = trial % k;
      // Walk the partition layout to the chosen bucket's size, then pad it
      // to exactly n' = 4 with corrupted ids.
      size_t at = 1;
      uint64_t size = 0;
      for (uint64_t b = 0; b <= pick; ++b) {
        size = view[at];
        at += 1 + size;
      }
      Value choice{pick};
      for (uint64_t p = 0; p + size < 4; ++p) choice.push_back(p);
      return choice;
    };
    CallEnv env;
    env.n = 12;
    env.participants = Committee({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
    env.corrupted = &corrupted;
    env.registry = &reg;
    env.rand = {&coins, static_cast<size_t>(trial)};
    CallResult res = tp_execute(f_elect(4, 0.5), TrustedPartyType::full(),
                                std::vector<Value>(12), adv, corrupted, env);
    Committee c(std::vector<int>(res.outcome.public_value.begin(),
                                 res.outcome.public_value.end()));
    CHECK(c.size() <= 4);
    size_t bad = intersect_sorted(c.members, corrupted).size();
    // Fraction of corrupted members stays at most beta'.
    CHECK(static_cast<double>(bad) <= 0.5 * c.size());
  }
}

TEST_CASE("reconstruct-compute-share recovers inputs through bad columns") {
  Fixture fx;
  std::vector<int> corrupted;
  auto or_fn = [](const std::vector<uint64_t>& xs) {
    uint64_t y = 0;
    for (uint64_t x : xs) y |= x;
    return y;
  };
  // n = 3 input parties, committee of 7, threshold 2: share each input.
  RngStream rng(55, 0);
  int n_prime = 7, t_prime = 2;
  std::vector<uint64_t> xs{0, 0, 1};
  std::vector<Value> member_inputs(n_prime, Value(3));
  for (int i = 0; i < 3; ++i) {
    std::vector<FieldElem> coeffs(t_prime + 1);
    coeffs[0] = FieldElem(xs[i]);
    for (int k = 1; k <= t_prime; ++k) coeffs[k] = FieldElem::random(rng);
    Poly p(std::move(coeffs));
    for (int j = 0; j < n_prime; ++j)
      member_inputs[j][i] = p.eval(FieldElem(j + 1)).value();
  }
  // One member's vector replaced by garbage.
  member_inputs[4] = {99, 98, 97};

  CallEnv env = fx.env(7, comm({0, 1, 2, 3, 4, 5, 6}), &corrupted);
  CallResult res =
      tp_execute(f_ssout(or_fn, 3, t_prime), TrustedPartyType::abort(),
                 member_inputs, {}, corrupted, env);
  CHECK(!res.aborted);
  CHECK(res.outcome.is_private);
  // The output shares reconstruct f(x) = 1.
  PointVec pts;
  for (int j = 0; j < n_prime; ++j)
    pts.emplace_back(FieldElem(j + 1),
                     FieldElem(res.outcome.private_values[j][0]));
  Poly out = bw_decode(pts, t_prime + 1, t_prime);
  CHECK(out.eval(FieldElem(0)) == FieldElem(1));
}

TEST_CASE("reconstruct-compute-share: all-zero and unparsable inputs") {
  Fixture fx;
  std::vector<int> corrupted;
  auto xor_fn = [](const std::vector<uint64_t>& xs) {
    uint64_t y = 0;
    for (uint64_t x : xs) y ^= x;
    return y;
  };
  // Everyone submits unparsable vectors: inputs default to the zero vector.
  std::vector<Value> junk(5, Value{1});
  CallEnv env = fx.env(5, comm({0, 1, 2, 3, 4}), &corrupted);
  CallResult res = tp_execute(f_ssout(xor_fn, 2, 1), TrustedPartyType::abort(),
                              junk, {}, corrupted, env);
  PointVec pts;
  for (int j = 0; j < 5; ++j)
    pts.emplace_back(FieldElem(j + 1),
                     FieldElem(res.outcome.private_values[j][0]));
  CHECK(bw_decode(pts, 2, 1).eval(FieldElem(0)) == FieldElem(0));
}

TEST_CASE("verify-reconstruct-compute blames the smallest malformed member") {
  Fixture fx;
  std::vector<int> corrupted;
  auto or_fn = [](const std::vector<uint64_t>& xs) {
    uint64_t y = 0;
    for (uint64_t x : xs) y |= x;
    return y;
  };
  // 2 input parties, committee of 3 (ids 10, 20, 30), XOR sharing.
  RngStream rng(66, 0);
  int n_inputs = 2, n_prime = 3;
  std::vector<std::vector<uint64_t>> commitments(n_inputs);
  std::vector<Value> member_inputs(n_prime);
  std::vector<uint64_t> xs{1, 0};
  for (int i = 0; i < n_inputs; ++i) {
    uint64_t acc = 0;
    for (int j = 0; j < n_prime; ++j) {
      uint64_t s = (j + 1 < n_prime) ? rng.next() : (acc ^ xs[i]);
      acc ^= s;
      uint64_t nonce = rng.next();
      commitments[i].push_back(fx.registry.commit({s}, nonce));
      member_inputs[j].push_back(s);
      member_inputs[j].push_back(nonce);
    }
  }
  auto f = f_in(or_fn, commitments, {10, 20, 30});
  SUBCASE("all valid") {
    CallEnv env = fx.env(40, comm({10, 20, 30}), &corrupted);
    CallResult res = tp_execute(f, TrustedPartyType::id_fair(), member_inputs,
                                {}, corrupted, env);
    CHECK(res.outcome.public_value == Value{0, 1});
  }
  SUBCASE("members 2 and 3 malformed: smallest one blamed") {
    member_inputs[1][0] ^= 1;
    member_inputs[2][0] ^= 1;
    CallEnv env = fx.env(40, comm({10, 20, 30}), &corrupted);
    CallResult res = tp_execute(f, TrustedPartyType::id_fair(), member_inputs,
                                {}, corrupted, env);
    CHECK(res.outcome.public_value == Value{1, 20});
  }
}

TEST_CASE("verify-reconstruct-compute, single-member committee") {
  Fixture fx;
  std::vector<int> corrupted;
  auto id_fn = [](const std::vector<uint64_t>& xs) { return xs[0]; };
  uint64_t nonce = 77;
  std::vector<std::vector<uint64_t>> commitments{
      {fx.registry.commit({1}, nonce)}};
  auto f = f_in(id_fn, commitments, {0});
  CallEnv env = fx.env(1, comm({0}), &corrupted);
  CallResult res = tp_execute(f, TrustedPartyType::id_fair(),
                              {Value{1, nonce}}, {}, corrupted, env);
  CHECK(res.outcome.public_value == Value{0, 1});
}

TEST_CASE("augmented coin tossing registers openable commitments") {
  Fixture fx;
  std::vector<int> corrupted;
  CallEnv env = fx.env(5, comm({1, 2, 3}), &corrupted);
  CallResult res = tp_execute(f_augct(), TrustedPartyType::id_abort(),
                              std::vector<Value>(3), {}, corrupted, env);
  CHECK(res.outcome.public_value.size() == 3);
  for (int j = 0; j < 3; ++j) {
    uint64_t handle = res.outcome.public_value[j];
    const Value& priv = res.outcome.private_values[j];
    CHECK(fx.registry.open(handle, {priv[0]}, priv[1]));
    CHECK(!fx.registry.open(handle, {priv[0] + 1}, priv[1]));
  }
  // committee of one: a single commitment
  CallEnv env1 = fx.env(5, comm({2}), &corrupted, 1);
  CallResult one = tp_execute(f_augct(), TrustedPartyType::id_abort(),
                              std::vector<Value>(1), {}, corrupted, env1);
  CHECK(one.outcome.public_value.size() == 1);
}

TEST_CASE("one-to-many zk evaluates the relation on the witness") {
  Fixture fx;
  std::vector<int> corrupted;
  auto relation = [](const Value& stmt, const Value& wit, const CallEnv&) {
    return !stmt.empty() && !wit.empty() && stmt[0] == wit[0] * wit[0];
  };
  auto zk = zk_one_to_many("square", relation);
  CallEnv env = fx.env(4, comm({2}), &corrupted);
  CallResult ok = tp_execute(zk, TrustedPartyType::full(), {Value{1, 9, 3}},
                             {}, corrupted, env);
  CHECK(ok.outcome.public_value == Value{9, 1});
  CallEnv env2 = fx.env(4, comm({2}), &corrupted);
  CallResult bad = tp_execute(zk, TrustedPartyType::full(), {Value{1, 9, 2}},
                              {}, corrupted, env2);
  CHECK(bad.outcome.public_value == Value{9, 0});
}

TEST_CASE("committed OR: two phases, invalid openings zeroed") {
  Fixture fx;
  std::vector<int> corrupted;
  uint64_t n1 = 11, n2 = 12, n3 = 13;
  std::vector<uint64_t> commits{fx.registry.commit({1}, n1),
                                fx.registry.commit({0}, n2),
                                fx.registry.commit({0}, n3)};
  auto f = f_comor({5, 6, 7}, commits);

  SUBCASE("all valid, inputs (1,0,0)") {
    CallEnv env = fx.env(8, comm({5, 6, 7}), &corrupted, 0);
    CallResult ph1 = tp_execute(f, TrustedPartyType::id_abort(),
                                {Value{1, n1}, Value{0, n2}, Value{0, n3}}, {},
                                corrupted, env);
    CHECK(ph1.outcome.public_value == Value{0, 0});  // empty M
    CallEnv env2 = fx.env(8, comm({5, 6, 7}), &corrupted, 1);
    env2.reactive_state = env.reactive_state;
    CallResult ph2 = tp_execute(f, TrustedPartyType::id_abort(),
                                std::vector<Value>(3), {}, corrupted, env2);
    CHECK(ph2.outcome.public_value == Value{1, 1});
  }
  SUBCASE("party 7 opens invalidly after committing to 1") {
    std::vector<uint64_t> commits2{fx.registry.commit({0}, n1),
                                   fx.registry.commit({0}, n2),
                                   fx.registry.commit({1}, n3)};
    auto g = f_comor({5, 6, 7}, commits2);
    fx.reactive.clear();
    CallEnv env = fx.env(8, comm({5, 6, 7}), &corrupted, 0);
    CallResult ph1 = tp_execute(g, TrustedPartyType::id_abort(),
                                {Value{0, n1}, Value{0, n2}, Value{1, 999}}, {},
                                corrupted, env);
    CHECK(ph1.outcome.public_value == Value{0, 1, 7});  // M = {7}
    CallEnv env2 = fx.env(8, comm({5, 6, 7}), &corrupted, 1);
    env2.reactive_state = env.reactive_state;
    CallResult ph2 = tp_execute(g, TrustedPartyType::id_abort(),
                                std::vector<Value>(3), {}, corrupted, env2);
    CHECK(ph2.outcome.public_value == Value{1, 0});  // 1 was dropped to 0
  }
  SUBCASE("all invalid") {
    fx.reactive.clear();
    CallEnv env = fx.env(8, comm({5, 6, 7}), &corrupted, 0);
    CallResult ph1 = tp_execute(f, TrustedPartyType::id_abort(),
                                std::vector<Value>(3), {}, corrupted, env);
    CHECK(ph1.outcome.public_value == Value{0, 3, 5, 6, 7});
    CallEnv env2 = fx.env(8, comm({5, 6, 7}), &corrupted, 1);
    env2.reactive_state = env.reactive_state;
    CallResult ph2 = tp_execute(f, TrustedPartyType::id_abort(),
                                std::vector<Value>(3), {}, corrupted, env2);
    CHECK(ph2.outcome.public_value == Value{1, 0});
  }
}
