#include "mpcsim/functionalities.hpp"

#include <algorithm>
#include <cmath>

namespace mpcsim {

RngStream ScriptedCoinSource::stream(size_t) {
  throw ScaleError("scripted coin source only supplies single bits");
}

uint64_t ScriptedCoinSource::draw_bit(size_t slot) {
  if (drawn_.size() <= slot) drawn_.resize(slot + 1, false);
  if (drawn_[slot])
    throw ScaleError("call drew more than its one scripted bit");
  drawn_[slot] = true;
  return peek_bit(slot);
}

uint64_t ScriptedCoinSource::peek_bit(size_t slot) {
  if (slot >= bits_.size())
    throw ScaleError("coin script shorter than the call schedule");
  return bits_[slot] & 1;
}

namespace {

void validate_identities(const TrustedPartyType& type,
                         const std::vector<int>& ids,
                         const std::vector<int>& corrupted, int n) {
  if (type.kind == TrustedPartyType::Kind::RestrictedFairAbort) {
    // Restricted but unidentified: the trusted party only sends a plain
    // bottom. The per-committee corruption precondition is checked upstream.
    if (!ids.empty())
      throw ProtocolViolation("fair restricted abort carries no identities");
    return;
  }
  if (type.restricted()) {
    // One corrupted identity per committee; aborting at all requires a
    // corrupted member in every committee.
    if (ids.size() != type.committees.size())
      throw ProtocolViolation("restricted abort needs one identity per committee");
    for (size_t j = 0; j < ids.size(); ++j) {
      const Committee& c = type.committees[j];
      if (intersect_sorted(c.members, corrupted).empty())
        throw ProtocolViolation("abort against a corruption-free committee");
      if (!c.contains(ids[j]) || !contains_sorted(corrupted, ids[j]))
        throw ProtocolViolation("abort identity outside I intersect C_j");
    }
    return;
  }
  if (type.identifying()) {
    if (ids.size() != 1 || ids[0] < 0 || ids[0] >= n ||
        !contains_sorted(corrupted, ids[0]))
      throw ProtocolViolation("abort identity is not a corrupted party");
    return;
  }
  if (!ids.empty())
    throw ProtocolViolation("this ideal model reveals no identities on abort");
}

std::vector<int> dedup(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool abort_precondition(const TrustedPartyType& type,
                        const std::vector<int>& corrupted) {
  if (!type.restricted()) return true;
  for (const Committee& c : type.committees)
    if (intersect_sorted(c.members, corrupted).empty()) return false;
  return true;
}

}  // namespace

CallResult tp_execute(const FunctionalitySpec& f, const TrustedPartyType& type,
                      std::vector<Value> inputs, const TpAdversary& adv,
                      const std::vector<int>& corrupted, CallEnv& env) {
  for (const Committee& c : type.committees) c.validate(env.n);
  if (type.restricted() && type.committees.empty())
    throw SpecError("restricted ideal model without committees");

  env.ask_adversary = adv.functionality_query;

  if (adv.substitute_inputs) adv.substitute_inputs(inputs);

  // Early abort: before the trusted party samples anything for f.
  if (adv.early_abort) {
    if (auto ids = adv.early_abort()) {
      if (!type.allows_early_abort())
        throw ProtocolViolation("abort under full security");
      if (!abort_precondition(type, corrupted))
        throw ProtocolViolation("abort against a corruption-free committee");
      validate_identities(type, *ids, corrupted, env.n);
      return CallResult{true, dedup(*ids), {}};
    }
  }

  // All-corrupted committee: the adversary sees the inputs and dictates.
  if (type.restricted()) {
    bool owned = false;
    for (const Committee& c : type.committees)
      if (subset_of(c.members, corrupted)) owned = true;
    if (owned && adv.dictate) {
      DictateAction act = adv.dictate(inputs);
      if (act.abort) {
        // Identified parties must still be corrupted; the artifact keeps the
        // identified-subset-of-I invariant even on dictated aborts.
        for (int id : act.blamed)
          if (!contains_sorted(corrupted, id))
            throw ProtocolViolation("dictated abort blames an honest party");
        return CallResult{true, dedup(act.blamed), {}};
      }
      if (act.outcome) return CallResult{false, {}, *act.outcome};
      // fall through: honest evaluation
    }
  }

  CallOutcome out = f.eval(inputs, env);

  // Late abort, after the corrupted participants' outputs are visible.
  if (type.allows_late_abort() && adv.late_abort) {
    std::vector<std::pair<int, Value>> corrupted_outputs;
    for (size_t k = 0; k < env.participants.members.size(); ++k) {
      int p = env.participants.members[k];
      if (!contains_sorted(corrupted, p)) continue;
      corrupted_outputs.emplace_back(
          p, out.is_private ? out.private_values[k] : out.public_value);
    }
    if (auto ids = adv.late_abort(corrupted_outputs)) {
      if (!abort_precondition(type, corrupted))
        throw ProtocolViolation("abort against a corruption-free committee");
      validate_identities(type, *ids, corrupted, env.n);
      return CallResult{true, dedup(*ids), {}};
    }
  }

  return CallResult{false, {}, std::move(out)};
}

// ---------------------------------------------------------------------------

FunctionalitySpec f_cf() {
  FunctionalitySpec f;
  f.id = "cf";
  f.eval = [](const std::vector<Value>&, CallEnv& env) {
    CallOutcome out;
    out.public_value = {env.rand.draw_bit()};
    return out;
  };
  return f;
}

FunctionalitySpec f_elect(int n_prime, double beta_prime) {
  FunctionalitySpec f;
  f.id = "elect";
  f.eval = [n_prime, beta_prime](const std::vector<Value>&, CallEnv& env) {
    int n = env.n;
    if (n_prime >= n) throw SpecError("elect needs n' < n");
    if (!env.corrupted) throw SpecError("elect is corruption aware");
    const std::vector<int>& bad = *env.corrupted;
    int k = n / n_prime;
    if (k < 1) throw SpecError("elect needs at least one bucket");
    int base = static_cast<int>(std::ceil((1.0 - beta_prime) * n_prime));

    std::vector<int> honest;
    for (int p = 0; p < n; ++p)
      if (!contains_sorted(bad, p)) honest.push_back(p);
    if (static_cast<int>(honest.size()) < k * base)
      throw SpecError("not enough honest parties for the bucket partition");

    RngStream rng = env.rand.stream();
    for (size_t i = honest.size(); i > 1; --i)
      std::swap(honest[i - 1], honest[rng.next_below(i)]);

    std::vector<std::vector<int>> buckets(k);
    size_t idx = 0;
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < base; ++c) buckets[b].push_back(honest[idx++]);
    for (; idx < honest.size(); ++idx)
      buckets[rng.next_below(k)].push_back(honest[idx]);

    // Reveal the partition, read back {bucket_index, pad...}.
    Value view;
    view.push_back(k);
    for (int b = 0; b < k; ++b) {
      view.push_back(buckets[b].size());
      for (int p : buckets[b]) view.push_back(p);
    }
    Value choice;
    if (env.ask_adversary) choice = env.ask_adversary(view);
    if (choice.empty()) {
      // Canonical choice: the fullest bucket that still fits n'.
      int pick = -1;
      for (int b = 0; b < k; ++b) {
        if (static_cast<int>(buckets[b].size()) > n_prime) continue;
        if (pick < 0 || buckets[b].size() > buckets[pick].size()) pick = b;
      }
      if (pick < 0) throw SpecError("no bucket fits within n'");
      choice = {static_cast<uint64_t>(pick)};
    }

    int pick = static_cast<int>(choice[0]);
    if (pick < 0 || pick >= k) throw ProtocolViolation("bucket index out of range");
    std::vector<int> committee = buckets[pick];
    for (size_t i = 1; i < choice.size(); ++i) {
      int p = static_cast<int>(choice[i]);
      if (!contains_sorted(bad, p))
        throw ProtocolViolation("election padding with an honest party");
      committee.push_back(p);
    }
    committee = dedup(committee);
    if (committee.size() > static_cast<size_t>(n_prime))
      throw ProtocolViolation("padded committee exceeds n'");

    CallOutcome out;
    for (int p : committee) out.public_value.push_back(p);
    return out;
  };
  return f;
}

namespace {

std::vector<FieldElem> rs_share_elem(FieldElem secret, int n, int t,
                                     RngStream& rng) {
  std::vector<FieldElem> coeffs(t + 1);
  coeffs[0] = secret;
  for (int k = 1; k <= t; ++k) coeffs[k] = FieldElem::random(rng);
  Poly poly(std::move(coeffs));
  std::vector<FieldElem> out;
  for (int j = 1; j <= n; ++j) out.push_back(poly.eval(FieldElem(j)));
  return out;
}

}  // namespace

FunctionalitySpec f_ssout(
    std::function<uint64_t(const std::vector<uint64_t>&)> f, int n_inputs,
    int t_prime, uint64_t default_input) {
  FunctionalitySpec spec;
  spec.id = "ssout";
  spec.eval = [f = std::move(f), n_inputs, t_prime, default_input](
                  const std::vector<Value>& inputs, CallEnv& env) {
    int n_prime = static_cast<int>(env.participants.size());
    // Column j = member j's vector; malformed vectors become all zero.
    std::vector<std::vector<uint64_t>> cols(n_prime,
                                            std::vector<uint64_t>(n_inputs, 0));
    for (int j = 0; j < n_prime; ++j) {
      if (static_cast<int>(inputs[j].size()) == n_inputs) cols[j] = inputs[j];
    }
    std::vector<uint64_t> xs(n_inputs);
    for (int i = 0; i < n_inputs; ++i) {
      PointVec pts;
      for (int j = 0; j < n_prime; ++j)
        if (cols[j][i] != kAbsentShare)
          pts.emplace_back(FieldElem(j + 1), FieldElem(cols[j][i]));
      try {
        if (static_cast<int>(pts.size()) < t_prime + 1)
          throw DecodingFailure("too few shares");
        size_t budget =
            std::min<size_t>(t_prime, (pts.size() - (t_prime + 1)) / 2);
        Poly p = bw_decode(pts, t_prime + 1, budget);
        xs[i] = p.eval(FieldElem(0)).value();
      } catch (const DecodingFailure&) {
        xs[i] = default_input;
      }
    }
    uint64_t y = f(xs);
    RngStream rng = env.rand.stream();
    auto shares = rs_share_elem(FieldElem(y), n_prime, t_prime, rng);
    CallOutcome out;
    out.is_private = true;
    for (int j = 0; j < n_prime; ++j)
      out.private_values.push_back({shares[j].value()});
    return out;
  };
  return spec;
}

FunctionalitySpec f_ssout_coin(int t_prime) {
  FunctionalitySpec spec;
  spec.id = "ssout-coin";
  spec.eval = [t_prime](const std::vector<Value>&, CallEnv& env) {
    uint64_t y = env.rand.draw_bit();
    RngStream rng = env.rand.stream();
    auto shares = rs_share_elem(FieldElem(y),
                                static_cast<int>(env.participants.size()),
                                t_prime, rng);
    CallOutcome out;
    out.is_private = true;
    for (const FieldElem& s : shares) out.private_values.push_back({s.value()});
    return out;
  };
  return spec;
}

FunctionalitySpec f_in(std::function<uint64_t(const std::vector<uint64_t>&)> f,
                       std::vector<std::vector<uint64_t>> commitments,
                       std::vector<int> member_ids) {
  FunctionalitySpec spec;
  spec.id = "in";
  spec.eval = [f = std::move(f), commitments = std::move(commitments),
               member_ids = std::move(member_ids)](
                  const std::vector<Value>& inputs, CallEnv& env) {
    size_t n_inputs = commitments.size();
    size_t n_prime = env.participants.size();
    if (!env.registry) throw SpecError("f_in needs the commitment registry");
    // Smallest malformed member wins the blame; identities are the actual
    // party ids carried in member_ids.
    for (size_t j = 0; j < n_prime; ++j) {
      bool ok = inputs[j].size() == 2 * n_inputs;
      for (size_t i = 0; ok && i < n_inputs; ++i) {
        uint64_t share = inputs[j][2 * i];
        uint64_t nonce = inputs[j][2 * i + 1];
        ok = env.registry->open(commitments[i][j], {share}, nonce);
      }
      if (!ok) {
        CallOutcome out;
        out.public_value = {1, static_cast<uint64_t>(member_ids[j])};
        return out;
      }
    }
    std::vector<uint64_t> xs(n_inputs, 0);
    for (size_t i = 0; i < n_inputs; ++i)
      for (size_t j = 0; j < n_prime; ++j) xs[i] ^= inputs[j][2 * i];
    CallOutcome out;
    out.public_value = {0, f(xs)};
    return out;
  };
  return spec;
}

FunctionalitySpec f_augct() {
  FunctionalitySpec spec;
  spec.id = "aug-ct";
  spec.eval = [](const std::vector<Value>&, CallEnv& env) {
    if (!env.registry) throw SpecError("f_augct needs the commitment registry");
    RngStream rng = env.rand.stream();
    CallOutcome out;
    out.is_private = true;
    for (size_t j = 0; j < env.participants.size(); ++j) {
      uint64_t r = rng.next();
      uint64_t nonce = rng.next();
      uint64_t handle = env.registry->commit({r}, nonce);
      out.public_value.push_back(handle);
      out.private_values.push_back({r, nonce});
    }
    return out;
  };
  return spec;
}

FunctionalitySpec zk_one_to_many(std::string relation_id, ZkRelation relation) {
  FunctionalitySpec spec;
  spec.id = "zk:" + relation_id;
  spec.eval = [relation = std::move(relation)](const std::vector<Value>& inputs,
                                               CallEnv& env) {
    CallOutcome out;
    if (inputs.size() != 1) throw SpecError("zk has a single prover");
    const Value& in = inputs[0];
    if (in.empty()) {
      out.public_value = {0};  // silent prover: reject
      return out;
    }
    size_t stmt_len = in[0];
    if (in.size() < 1 + stmt_len) {
      out.public_value = {0};
      return out;
    }
    Value statement(in.begin() + 1, in.begin() + 1 + stmt_len);
    Value witness(in.begin() + 1 + stmt_len, in.end());
    bool ok = relation(statement, witness, env);
    out.public_value = statement;
    out.public_value.push_back(ok ? 1 : 0);
    return out;
  };
  return spec;
}

FunctionalitySpec f_comor(std::vector<int> party_ids,
                          std::vector<uint64_t> commitments) {
  FunctionalitySpec spec;
  spec.id = "com-or";
  spec.eval = [party_ids = std::move(party_ids),
               commitments = std::move(commitments)](
                  const std::vector<Value>& inputs, CallEnv& env) {
    if (!env.registry || !env.reactive_state)
      throw SpecError("f_comor needs registry and reactive state");
    Value& state = *env.reactive_state;
    CallOutcome out;
    if (!state.empty()) {  // second invocation: release the stored bit
      out.public_value = {1, state[0]};
      return out;
    }
    std::vector<int> invalid;
    uint64_t y = 0;
    for (size_t j = 0; j < env.participants.size(); ++j) {
      uint64_t x = 0;
      bool ok = inputs[j].size() == 2 &&
                env.registry->open(commitments[j], {inputs[j][0]}, inputs[j][1]);
      if (ok) {
        x = inputs[j][0] & 1;
      } else {
        invalid.push_back(party_ids[j]);  // input replaced by zero
      }
      y |= x;
    }
    state = {y};
    out.public_value = {0, invalid.size()};
    for (int p : invalid) out.public_value.push_back(p);
    return out;
  };
  return spec;
}

}  // namespace mpcsim
