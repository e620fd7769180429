#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpcsim/committee.hpp"
#include "mpcsim/field.hpp"
#include "mpcsim/rng.hpp"

namespace mpcsim {

// Wire/message/functionality value: a flat word vector. Layout conventions
// are local to each functionality and documented at its builder.
using Value = std::vector<uint64_t>;

// ---------------------------------------------------------------------------
// Trusted-party randomness. Each call site in a protocol schedule owns a
// static slot, so coin consumption is independent of which other calls ran.
// The scripted source backs exact enumeration of small coin spaces.

class CoinSource {
 public:
  virtual ~CoinSource() = default;
  virtual uint64_t draw_bit(size_t slot) = 0;
  virtual RngStream stream(size_t slot) = 0;
  // Enumerable sources expose the scripted bit for a slot before the call
  // runs. Only the engine uses this, and only for calls whose committee is
  // fully corrupted (the adversary owns that coin anyway).
  virtual uint64_t peek_bit(size_t slot) = 0;
};

class SeededCoinSource : public CoinSource {
 public:
  explicit SeededCoinSource(uint64_t root) : root_(root) {}
  uint64_t draw_bit(size_t slot) override { return peek_bit(slot); }
  RngStream stream(size_t slot) override {
    return derive_stream(root_, "tp-stream", slot);
  }
  uint64_t peek_bit(size_t slot) override {
    return derive_stream(root_, "tp-bit", slot).next_bit();
  }

 private:
  uint64_t root_;
};

// One bit per call slot; non-bit randomness is out of enumeration scope.
class ScriptedCoinSource : public CoinSource {
 public:
  explicit ScriptedCoinSource(std::vector<uint8_t> bits)
      : bits_(std::move(bits)) {}
  uint64_t draw_bit(size_t slot) override;
  RngStream stream(size_t slot) override;
  uint64_t peek_bit(size_t slot) override;

 private:
  std::vector<uint8_t> bits_;
  std::vector<bool> drawn_;
};

struct TpRandomness {
  CoinSource* source = nullptr;
  size_t slot = 0;
  uint64_t draw_bit() { return source->draw_bit(slot); }
  RngStream stream() { return source->stream(slot); }
};

// ---------------------------------------------------------------------------
// Ideal commitment registry: perfectly binding, perfectly hiding inside the
// simulation. A handle reveals nothing; opening checks exact equality.

class CommitmentRegistry {
 public:
  uint64_t commit(const Value& value, uint64_t nonce) {
    entries_.push_back({value, nonce});
    return entries_.size() - 1;
  }
  bool open(uint64_t handle, const Value& value, uint64_t nonce) const {
    if (handle >= entries_.size()) return false;
    return entries_[handle].value == value && entries_[handle].nonce == nonce;
  }
  bool valid(uint64_t handle) const { return handle < entries_.size(); }

 private:
  struct Entry {
    Value value;
    uint64_t nonce;
  };
  std::vector<Entry> entries_;
};

// ---------------------------------------------------------------------------
// Ideal models.

struct TrustedPartyType {
  enum class Kind {
    Full,
    Fair,
    IdFair,
    Abort,
    IdAbort,
    RestrictedIdAbort,
    RestrictedIdFair,
    RestrictedFairAbort,
  };
  Kind kind = Kind::Full;
  std::vector<Committee> committees;  // restricted variants only

  static TrustedPartyType full() { return {Kind::Full, {}}; }
  static TrustedPartyType fair() { return {Kind::Fair, {}}; }
  static TrustedPartyType id_fair() { return {Kind::IdFair, {}}; }
  static TrustedPartyType abort() { return {Kind::Abort, {}}; }
  static TrustedPartyType id_abort() { return {Kind::IdAbort, {}}; }
  static TrustedPartyType restricted(Kind k, std::vector<Committee> cs) {
    return {k, std::move(cs)};
  }

  bool restricted() const {
    return kind == Kind::RestrictedIdAbort || kind == Kind::RestrictedIdFair ||
           kind == Kind::RestrictedFairAbort;
  }
  bool identifying() const {
    return kind == Kind::IdFair || kind == Kind::IdAbort ||
           kind == Kind::RestrictedIdAbort || kind == Kind::RestrictedIdFair;
  }
  bool allows_late_abort() const {
    return kind == Kind::Abort || kind == Kind::IdAbort ||
           kind == Kind::RestrictedIdAbort;
  }
  bool allows_early_abort() const { return kind != Kind::Full; }
};

// Execution-scoped services a functionality may use.
struct CallEnv {
  int n = 0;                 // parties in the enclosing protocol
  Committee participants;    // whose inputs arrive, in member order
  const std::vector<int>* corrupted = nullptr;  // corruption-aware functionalities
  CommitmentRegistry* registry = nullptr;
  Value* reactive_state = nullptr;  // per-instance, erased at execution end
  TpRandomness rand;
  // Functionality-level adversary interaction (e.g. the committee choice in
  // the election functionality). Null means the canonical default choice.
  std::function<Value(const Value& adversary_view)> ask_adversary;
};

struct CallOutcome {
  Value public_value;
  std::vector<Value> private_values;  // indexed like participants
  bool is_private = false;
};

struct FunctionalitySpec {
  std::string id;
  std::function<CallOutcome(const std::vector<Value>& inputs, CallEnv& env)>
      eval;
};

struct CallResult {
  bool aborted = false;
  std::vector<int> blamed;  // revealed identities (empty for plain abort)
  CallOutcome outcome;      // valid when !aborted
};

struct DictateAction {
  bool abort = false;
  std::vector<int> blamed;
  // Engine evaluates honestly when empty; otherwise the dictated outcome.
  std::optional<CallOutcome> outcome;
};

// Adversary side of one ideal call. Absent hooks mean honest behavior.
struct TpAdversary {
  std::function<void(std::vector<Value>& inputs)> substitute_inputs;
  std::function<std::optional<std::vector<int>>()> early_abort;
  std::function<std::optional<std::vector<int>>(
      const std::vector<std::pair<int, Value>>& corrupted_outputs)>
      late_abort;
  std::function<DictateAction(const std::vector<Value>& inputs)> dictate;
  std::function<Value(const Value& view)> functionality_query;
};

// One ideal computation under the chosen model. `inputs` holds the
// prescribed input per participant (honest parties' inputs are fixed;
// corrupted entries may be substituted by the adversary). Early abort happens
// before any functionality randomness is consumed; fair kinds have no late
// abort; restricted kinds demand one corrupted identity per committee and an
// all-corrupted committee hands the adversary the inputs and the outcome.
CallResult tp_execute(const FunctionalitySpec& f, const TrustedPartyType& type,
                      std::vector<Value> inputs, const TpAdversary& adv,
                      const std::vector<int>& corrupted, CallEnv& env);

// ---------------------------------------------------------------------------
// Concrete functionalities.

// Coin flipping: one uniform public bit, no inputs. Output layout: {bit}.
FunctionalitySpec f_cf();

// Committee election (corruption-aware). Partitions honest parties into
// n/n_prime buckets with at least ceil((1-beta_prime)*n_prime) honest parties
// each, shows the partition to the adversary, and returns bucket choice plus
// corrupted padding. Output layout: the committee members.
// Adversary reply layout: {bucket_index, pad...}.
FunctionalitySpec f_elect(int n_prime, double beta_prime);

// Reconstruct-Compute-Share over a (t'+1)-out-of-n' Reed-Solomon ECSS of
// single field elements. Member j's input: n words, the j-th share of every
// party's value (kAbsentShare marks a missing word). Output: private share of
// y per member.
// Unparsable input vectors become all-zero; failed reconstructions take the
// default value.
constexpr uint64_t kAbsentShare = ~uint64_t(0);
FunctionalitySpec f_ssout(std::function<uint64_t(const std::vector<uint64_t>&)> f,
                          int n_inputs, int t_prime, uint64_t default_input = 0);
// No-input variant whose result is a fresh coin: shares of a uniform bit.
FunctionalitySpec f_ssout_coin(int t_prime);

// Verify-Reconstruct-Compute over n'-out-of-n' XOR sharing with registry
// commitments. Parametrized by commitments[i][j] = handle of party i's j-th
// share. Member j's input: for each i, (share, nonce). Output layout:
// {0, y} or {1, j} for the smallest malformed member j (1-based within the
// committee, matching the party indices recorded in `member_ids`).
FunctionalitySpec f_in(std::function<uint64_t(const std::vector<uint64_t>&)> f,
                       std::vector<std::vector<uint64_t>> commitments,
                       std::vector<int> member_ids);

// Delegated augmented coin tossing for committee C. No inputs. Public output:
// n' commitment handles; private output to member j: {r_j, nonce_j}.
FunctionalitySpec f_augct();

// One-to-many zero knowledge. The prover is the single participant; its
// input is {statement_len, statement..., witness...}. Public output:
// {statement..., accept_bit}.
using ZkRelation =
    std::function<bool(const Value& statement, const Value& witness,
                       const CallEnv& env)>;
FunctionalitySpec zk_one_to_many(std::string relation_id, ZkRelation relation);

// Two-phase reactive committed OR over the current party set. Parametrized by
// the party ids and their commitment handles. First call: input (x_i, nonce_i)
// per participant; output {0, |M|, M...} and the OR of valid inputs is stored.
// Second call: output {1, y}.
FunctionalitySpec f_comor(std::vector<int> party_ids,
                          std::vector<uint64_t> commitments);

}  // namespace mpcsim
