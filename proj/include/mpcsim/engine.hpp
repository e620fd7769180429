#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "mpcsim/functionalities.hpp"

namespace mpcsim {

constexpr int kBroadcast = -1;

struct OutMsg {
  int to = kBroadcast;
  Value payload;
  friend bool operator==(const OutMsg& a, const OutMsg& b) {
    return a.to == b.to && a.payload == b.payload;
  }
};

struct Output {
  enum class Kind { Pending, Value, Abort };
  Kind kind = Kind::Pending;
  Value value;
  std::vector<int> blamed;

  static Output pending() { return {}; }
  static Output of(Value v) { return {Kind::Value, std::move(v), {}}; }
  static Output abort(std::vector<int> ids) {
    return {Kind::Abort, {}, std::move(ids)};
  }
  friend bool operator==(const Output& a, const Output& b) {
    return a.kind == b.kind && a.value == b.value && a.blamed == b.blamed;
  }
};

class Execution;  // engine internals

// Read-only window onto the execution, restricted to what one party is
// allowed to see. Honest next-message behavior is a pure function of this.
class PartyView {
 public:
  PartyView(const Execution* e, int party) : exec_(e), party_(party) {}
  int party() const { return party_; }
  int n() const;
  int rounds_done() const;
  // Round r inbox. Absent/omitted messages come back as nullopt.
  std::optional<Value> p2p(int round, int from) const;
  std::optional<Value> broadcast(int round, int from) const;
  // Call results. Public parts are visible to everyone; a private value only
  // to its owner.
  const CallResult* call(int round, int call_index) const;
  std::optional<Value> my_call_output(int round, int call_index) const;
  Value input() const;        // this party's private protocol input
  RngStream& rng() const;
  // Stable per-purpose stream: the same purpose re-derives the same values in
  // any round, so programs can stay stateless.
  RngStream derived(std::string_view purpose) const;
  // The ideal commitment service is a public bulletin; anyone may commit.
  CommitmentRegistry& commitments() const;

 private:
  const Execution* exec_;
  int party_;
};

// Common information: broadcasts plus the call ledger. Used to resolve
// data-dependent schedules, so it must contain only what every party sees.
class PublicView {
 public:
  explicit PublicView(const Execution* e) : exec_(e) {}
  int rounds_done() const;
  std::optional<Value> broadcast(int round, int from) const;
  const CallResult* call(int round, int call_index) const;
  std::vector<int> identified() const;

 private:
  const Execution* exec_;
};

struct CallSpec {
  std::string label;
  FunctionalitySpec functionality;
  TrustedPartyType tp;
  Committee participants;
  int instance = -1;  // shared reactive state across call sites when >= 0
  // Rewrites tp/participants from the public view; returning false skips the
  // call in this execution. Null means the static configuration runs as is.
  std::function<bool(const PublicView&, CallSpec&)> configure;
};

struct RoundSpec {
  enum class Kind { Communication, Functionality };
  Kind kind = Kind::Communication;
  std::vector<CallSpec> calls;

  static RoundSpec comm() { return {Kind::Communication, {}}; }
  static RoundSpec functionality(std::vector<CallSpec> calls) {
    return {Kind::Functionality, std::move(calls)};
  }
};

struct PartyProgram {
  std::function<std::vector<OutMsg>(int party, int round, const PartyView&)>
      on_comm;
  std::function<Value(int party, int round, int call, const PartyView&)>
      call_input;
  std::function<Output(int party, const PartyView&)> finalize;
};

struct ProtocolSpec {
  int n = 0;
  std::vector<RoundSpec> rounds;
  PartyProgram program;
  std::vector<Value> inputs;  // per-party; empty for no-input protocols
  bool secure_channels = true;
};

// ---------------------------------------------------------------------------
// Adversary.

class AdvView {
 public:
  AdvView(const Execution* e) : exec_(e) {}
  int n() const;
  int round() const;  // current round index
  const std::vector<int>& corrupted() const;
  bool is_corrupted(int p) const;
  PartyView party(int p) const;  // corrupted parties only
  std::optional<Value> broadcast(int round, int from) const;
  // Secure channels hide honest-to-honest payloads; the adversary still sees
  // that a message was sent. Authenticated-only channels expose payloads.
  bool p2p_sent(int round, int from, int to) const;
  std::optional<Value> p2p_payload(int round, int from, int to) const;
  const CallResult* call(int round, int call_index) const;
  // Honest senders' messages of the current communication round (rushing).
  const std::vector<OutMsg>* pending_honest(int from) const;
  // Results already produced in the current functionality round, visible only
  // when deciding for an all-corrupted committee (rushing release order).
  const CallResult* parallel_result(int call_index) const;
  // The scripted/derived coin of a pending call owned by the adversary (its
  // committee fully corrupted). Such a coin is the adversary's to fix, so
  // consulting it early is sound.
  uint64_t peek_own_call_coin(int round, int call_index) const;
  RngStream& rng() const;
  RngStream derived(std::string_view purpose) const;
  CommitmentRegistry& commitments() const;

 private:
  const Execution* exec_;
};

struct AdvCallCtx {
  int round;
  int call_index;
  const CallSpec* spec;  // resolved
  const std::vector<Value>* prescribed_inputs;
};

struct AdversaryStrategy {
  std::vector<int> corrupted;  // sorted
  bool fail_stop = true;

  // Communication rounds: `planned` maps each corrupted party to the messages
  // it would send honestly. Fail-stop strategies may only erase entries;
  // Byzantine ones may rewrite them.
  std::function<void(const AdvView&, int round,
                     std::map<int, std::vector<OutMsg>>& planned)>
      on_comm;
  std::function<std::optional<std::vector<int>>(const AdvView&,
                                                const AdvCallCtx&)>
      early_abort;
  std::function<std::optional<std::vector<int>>(
      const AdvView&, const AdvCallCtx&,
      const std::vector<std::pair<int, Value>>& corrupted_outputs)>
      late_abort;
  std::function<DictateAction(const AdvView&, const AdvCallCtx&,
                              const std::vector<Value>& inputs)>
      dictate;
  std::function<void(const AdvView&, const AdvCallCtx&,
                     std::vector<Value>& inputs)>
      substitute_inputs;
  std::function<Value(const AdvView&, const AdvCallCtx&, const Value& view)>
      functionality_query;
};

inline AdversaryStrategy no_adversary() { return {}; }

// ---------------------------------------------------------------------------
// Results.

struct CommRecord {
  // p2p[from][to], bcast[from]; nullopt = nothing sent.
  std::vector<std::vector<std::optional<Value>>> p2p;
  std::vector<std::optional<Value>> bcast;
};

struct CallRecord {
  bool executed = false;
  std::string label;
  TrustedPartyType tp;
  Committee participants;
  CallResult result;
};

struct RoundRecord {
  RoundSpec::Kind kind = RoundSpec::Kind::Communication;
  CommRecord comm;
  std::vector<CallRecord> calls;
};

struct ExecutionResult {
  std::vector<Output> outputs;
  std::vector<RoundRecord> transcript;
  int rounds_used = 0;
  int functionality_rounds_used = 0;
  int calls_made = 0;
  std::vector<int> identified;  // cumulative, sorted

  bool honest_agree(const std::vector<int>& corrupted) const;
  // Lowest-index honest party's output.
  const Output& honest_output(const std::vector<int>& corrupted) const;
};

// Deterministic function of (spec, adversary, seed).
ExecutionResult run(const ProtocolSpec& spec, const AdversaryStrategy& adv,
                    uint64_t seed);
// Exact-mode entry: trusted-party bits come from the script, one per call
// slot in schedule order. Party/adversary streams still derive from seed.
ExecutionResult run_with_coins(const ProtocolSpec& spec,
                               const AdversaryStrategy& adv, uint64_t seed,
                               CoinSource& coins);

// Number of coin slots in the static schedule (one per call site).
size_t coin_slots(const ProtocolSpec& spec);

struct Summary {
  int trials = 0;
  std::map<std::string, int> frequencies;  // serialized output -> count
  double mean = 0.0;      // of value[0] over value-kind outputs
  double std_error = 0.0;
  int value_outputs = 0;
};

// Independent trials with derived per-trial seeds.
Summary estimate(const ProtocolSpec& spec, const AdversaryStrategy& adv,
                 int trials, uint64_t seed);

std::string output_to_string(const Output& o);
// One JSON object per round: index, kind, message metadata with payload
// hashes, and the call ledger.
std::string transcript_to_jsonl(const ExecutionResult& result);

}  // namespace mpcsim
