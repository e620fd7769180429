#include "mpcsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mpcsim {

// Engine internals. One Execution per run; everything observable is derived
// from (spec, adversary, seed [, coin script]).
class Execution {
 public:
  Execution(const ProtocolSpec& spec, const AdversaryStrategy& adv,
            uint64_t seed, CoinSource& coins)
      : spec_(spec), adv_(adv), coins_(coins), seed_(seed) {
    if (spec.n <= 0) throw SpecError("protocol needs at least one party");
    for (int p : adv.corrupted)
      if (p < 0 || p >= spec.n) throw SpecError("corrupted id out of range");
    if (!std::is_sorted(adv.corrupted.begin(), adv.corrupted.end()))
      throw SpecError("corrupted set must be sorted");
    if (!spec.inputs.empty() &&
        spec.inputs.size() != static_cast<size_t>(spec.n))
      throw SpecError("inputs must cover every party");
    for (int p = 0; p < spec.n; ++p)
      party_rngs_.push_back(derive_stream(seed, "party", p));
    adv_rng_ = derive_stream(seed, "adversary", 0);
    // Slot layout is schedule-static: calls keep their coins whether or not
    // they execute.
    size_t slot = 0;
    for (const RoundSpec& r : spec.rounds) {
      slot_base_.push_back(slot);
      slot += r.calls.size();
    }
  }

  ExecutionResult go() {
    for (int r = 0; r < static_cast<int>(spec_.rounds.size()); ++r) {
      if (all_honest_done()) break;
      round_ = r;
      trace_.push_back({});
      trace_.back().kind = spec_.rounds[r].kind;
      if (spec_.rounds[r].kind == RoundSpec::Kind::Communication)
        run_comm_round(r);
      else
        run_functionality_round(r);
    }
    ExecutionResult res;
    res.transcript = trace_;
    res.rounds_used = static_cast<int>(trace_.size());
    res.functionality_rounds_used = functionality_rounds_;
    res.calls_made = calls_made_;
    res.identified = identified_;
    for (int p = 0; p < spec_.n; ++p)
      res.outputs.push_back(finalize_party(p));
    return res;
  }

  // --- view plumbing -------------------------------------------------------
  const ProtocolSpec& spec() const { return spec_; }
  const AdversaryStrategy& adv() const { return adv_; }
  int rounds_done() const { return static_cast<int>(trace_.size()) - in_round_; }
  int current_round() const { return round_; }

  const RoundRecord* record(int round) const {
    if (round < 0 || round >= rounds_done()) return nullptr;
    return &trace_[round];
  }
  bool corrupted_party(int p) const {
    return contains_sorted(adv_.corrupted, p);
  }
  RngStream& party_rng(int p) const { return party_rngs_[p]; }
  RngStream& adv_rng() const { return adv_rng_; }
  RngStream derived_for(int party, std::string_view purpose) const {
    return RngStream(RngStream::mix(seed_) ^ hash_str(purpose),
                     static_cast<uint64_t>(party));
  }
  CommitmentRegistry& registry() const { return registry_; }
  const std::vector<OutMsg>* pending_honest(int from) const {
    if (!pending_ || corrupted_party(from)) return nullptr;
    auto it = pending_->find(from);
    return it == pending_->end() ? nullptr : &it->second;
  }
  const CallRecord* parallel_record(int call_index) const {
    if (!parallel_ || call_index < 0 ||
        call_index >= static_cast<int>(parallel_->size()))
      return nullptr;
    const CallRecord& rec = (*parallel_)[call_index];
    return rec.executed && parallel_released_[call_index] ? &rec : nullptr;
  }
  uint64_t peek_call_coin(int round, int call_index) const {
    const RoundSpec& r = spec_.rounds.at(round);
    const CallSpec& c = r.calls.at(call_index);
    bool owned = false;
    for (const Committee& cm : c.tp.committees)
      if (!cm.empty() && subset_of(cm.members, adv_.corrupted)) owned = true;
    if (!owned)
      throw ProtocolViolation("peeking a coin the adversary does not own");
    return coins_.peek_bit(slot_base_.at(round) + call_index);
  }

 private:
  bool all_honest_done() {
    for (int p = 0; p < spec_.n; ++p) {
      if (corrupted_party(p)) continue;
      if (finalize_party(p).kind == Output::Kind::Pending) return false;
    }
    return true;
  }

  Output finalize_party(int p) {
    if (!spec_.program.finalize) return Output::pending();
    return spec_.program.finalize(p, PartyView(this, p));
  }

  std::vector<OutMsg> honest_messages(int p, int round) {
    if (!spec_.program.on_comm) return {};
    return spec_.program.on_comm(p, round, PartyView(this, p));
  }

  void run_comm_round(int r) {
    CommRecord& rec = trace_.back().comm;
    rec.p2p.assign(spec_.n, std::vector<std::optional<Value>>(spec_.n));
    rec.bcast.assign(spec_.n, std::nullopt);
    in_round_ = 1;

    // Send phase: honest messages first, then the (rushing) adversary fixes
    // the corrupted parties' messages with the honest ones in view.
    std::map<int, std::vector<OutMsg>> planned;
    for (int p = 0; p < spec_.n; ++p)
      planned[p] = honest_messages(p, r);

    if (adv_.on_comm) {
      pending_ = &planned;
      std::map<int, std::vector<OutMsg>> corrupted_planned;
      for (int p : adv_.corrupted) corrupted_planned[p] = planned[p];
      auto honest_copy = corrupted_planned;
      adv_.on_comm(AdvView(this), r, corrupted_planned);
      pending_ = nullptr;
      if (adv_.fail_stop) {
        // Omission only: every surviving message must be one the party would
        // have sent anyway.
        for (auto& [p, msgs] : corrupted_planned) {
          for (const OutMsg& m : msgs) {
            const auto& honest = honest_copy[p];
            if (std::find(honest.begin(), honest.end(), m) == honest.end())
              throw ProtocolViolation("fail-stop strategy substituted a message");
          }
        }
      }
      // Only corrupted parties' plans come back from the hook.
      for (auto& [p, msgs] : corrupted_planned)
        if (corrupted_party(p)) planned[p] = std::move(msgs);
    }

    // Receive phase: deliver everything at once.
    for (auto& [from, msgs] : planned) {
      for (OutMsg& m : msgs) {
        if (m.to == kBroadcast) {
          rec.bcast[from] = std::move(m.payload);
        } else {
          if (m.to < 0 || m.to >= spec_.n) throw SpecError("recipient out of range");
          rec.p2p[from][m.to] = std::move(m.payload);
        }
      }
    }
    in_round_ = 0;
  }

  void run_functionality_round(int r) {
    const RoundSpec& round = spec_.rounds[r];
    RoundRecord& rec = trace_.back();
    rec.calls.resize(round.calls.size());
    in_round_ = 1;

    // Resolve data-dependent call configurations against the public view.
    std::vector<CallSpec> resolved;
    std::vector<bool> live(round.calls.size(), false);
    for (size_t c = 0; c < round.calls.size(); ++c) {
      CallSpec cs = round.calls[c];
      bool runs = true;
      if (cs.configure) runs = cs.configure(PublicView(this), cs);
      resolved.push_back(std::move(cs));
      live[c] = runs;
      rec.calls[c].label = resolved[c].label;
      rec.calls[c].tp = resolved[c].tp;
      rec.calls[c].participants = resolved[c].participants;
    }

    // Two release phases: calls by committees that are not fully corrupted
    // commit to their behavior blind to this round's results; a fully
    // corrupted committee decides last, with every other result in view.
    std::vector<size_t> phase_a, phase_b;
    for (size_t c = 0; c < round.calls.size(); ++c) {
      if (!live[c]) continue;
      bool owned = false;
      for (const Committee& cm : resolved[c].tp.committees)
        if (subset_of(cm.members, adv_.corrupted)) owned = true;
      (owned ? phase_b : phase_a).push_back(c);
    }

    parallel_ = &rec.calls;
    parallel_released_.assign(rec.calls.size(), false);
    bool any = false;
    for (size_t c : phase_a) {
      execute_call(r, static_cast<int>(c), resolved[c], rec.calls[c]);
      any = true;
    }
    // Simultaneous release: no call in the blind phase saw a sibling.
    for (size_t c : phase_a) parallel_released_[c] = true;
    for (size_t c : phase_b) {
      execute_call(r, static_cast<int>(c), resolved[c], rec.calls[c]);
      parallel_released_[c] = true;
      any = true;
    }
    parallel_ = nullptr;
    if (any) ++functionality_rounds_;
    in_round_ = 0;
  }

  void execute_call(int r, int call_index, const CallSpec& cs, CallRecord& rec) {
    cs.participants.validate(spec_.n);
    std::vector<Value> inputs;
    for (int p : cs.participants.members) {
      inputs.push_back(spec_.program.call_input
                           ? spec_.program.call_input(p, r, call_index,
                                                      PartyView(this, p))
                           : Value{});
    }

    CallEnv env;
    env.n = spec_.n;
    env.participants = cs.participants;
    env.corrupted = &adv_.corrupted;
    env.registry = &registry_;
    env.rand = {&coins_, slot_base_.at(r) + call_index};
    if (cs.instance >= 0) env.reactive_state = &reactive_[cs.instance];

    std::vector<Value> prescribed = inputs;  // stable copy for the hooks
    AdvCallCtx ctx{r, call_index, &cs, &prescribed};
    AdvView view(this);
    TpAdversary tp_adv;
    // The adversary touches a call through its corrupted participants; the
    // ideal-model checks in tp_execute govern what it may then do.
    bool participates =
        !intersect_sorted(cs.participants.members, adv_.corrupted).empty();
    if (participates) {
      if (adv_.substitute_inputs && !adv_.fail_stop)
        tp_adv.substitute_inputs = [&](std::vector<Value>& in) {
          adv_.substitute_inputs(view, ctx, in);
          // Only corrupted participants' inputs are the adversary's to pick.
          for (size_t k = 0; k < cs.participants.members.size(); ++k)
            if (!corrupted_party(cs.participants.members[k]))
              in[k] = prescribed[k];
        };
      if (adv_.early_abort)
        tp_adv.early_abort = [&]() { return adv_.early_abort(view, ctx); };
      if (adv_.late_abort)
        tp_adv.late_abort =
            [&](const std::vector<std::pair<int, Value>>& outs) {
              return adv_.late_abort(view, ctx, outs);
            };
      if (adv_.dictate)
        tp_adv.dictate = [&](const std::vector<Value>& in) {
          return adv_.dictate(view, ctx, in);
        };
    }
    if (!adv_.corrupted.empty() && adv_.functionality_query)
      tp_adv.functionality_query = [&](const Value& v) {
        return adv_.functionality_query(view, ctx, v);
      };

    rec.executed = true;
    rec.result = tp_execute(cs.functionality, cs.tp, std::move(inputs), tp_adv,
                            adv_.corrupted, env);
    ++calls_made_;
    if (rec.result.aborted)
      for (int id : rec.result.blamed)
        if (!contains_sorted(identified_, id)) {
          identified_.push_back(id);
          std::sort(identified_.begin(), identified_.end());
        }
  }

  const ProtocolSpec& spec_;
  const AdversaryStrategy& adv_;
  CoinSource& coins_;
  uint64_t seed_;
  mutable std::vector<RngStream> party_rngs_;
  mutable RngStream adv_rng_;
  mutable CommitmentRegistry registry_;
  std::map<int, Value> reactive_;
  std::vector<RoundRecord> trace_;
  std::vector<size_t> slot_base_;
  std::vector<int> identified_;
  int round_ = -1;
  int in_round_ = 0;  // current (incomplete) round is invisible to parties
  int functionality_rounds_ = 0;
  int calls_made_ = 0;
  // Rushing windows, live only inside the owning phase.
  std::map<int, std::vector<OutMsg>>* pending_ = nullptr;
  std::vector<CallRecord>* parallel_ = nullptr;
  std::vector<bool> parallel_released_;

  friend class PartyView;
  friend class PublicView;
  friend class AdvView;
};

// --- PartyView -------------------------------------------------------------

int PartyView::n() const { return exec_->spec().n; }
int PartyView::rounds_done() const { return exec_->rounds_done(); }

std::optional<Value> PartyView::p2p(int round, int from) const {
  const RoundRecord* r = exec_->record(round);
  if (!r || r->kind != RoundSpec::Kind::Communication) return std::nullopt;
  return r->comm.p2p[from][party_];
}

std::optional<Value> PartyView::broadcast(int round, int from) const {
  const RoundRecord* r = exec_->record(round);
  if (!r || r->kind != RoundSpec::Kind::Communication) return std::nullopt;
  return r->comm.bcast[from];
}

const CallResult* PartyView::call(int round, int call_index) const {
  const RoundRecord* r = exec_->record(round);
  if (!r || r->kind != RoundSpec::Kind::Functionality) return nullptr;
  if (call_index < 0 || call_index >= static_cast<int>(r->calls.size()))
    return nullptr;
  return r->calls[call_index].executed ? &r->calls[call_index].result : nullptr;
}

std::optional<Value> PartyView::my_call_output(int round, int call_index) const {
  const CallResult* res = call(round, call_index);
  if (!res || res->aborted) return std::nullopt;
  if (!res->outcome.is_private) return res->outcome.public_value;
  const RoundRecord* r = exec_->record(round);
  const Committee& parts = r->calls[call_index].participants;
  for (size_t k = 0; k < parts.members.size(); ++k)
    if (parts.members[k] == party_) return res->outcome.private_values[k];
  return std::nullopt;
}

Value PartyView::input() const {
  if (exec_->spec().inputs.empty()) return {};
  return exec_->spec().inputs[party_];
}

RngStream& PartyView::rng() const { return exec_->party_rng(party_); }

RngStream PartyView::derived(std::string_view purpose) const {
  return exec_->derived_for(party_, purpose);
}

CommitmentRegistry& PartyView::commitments() const { return exec_->registry(); }

// --- PublicView ------------------------------------------------------------

int PublicView::rounds_done() const { return exec_->rounds_done(); }

std::optional<Value> PublicView::broadcast(int round, int from) const {
  const RoundRecord* r = exec_->record(round);
  if (!r || r->kind != RoundSpec::Kind::Communication) return std::nullopt;
  return r->comm.bcast[from];
}

const CallResult* PublicView::call(int round, int call_index) const {
  const RoundRecord* r = exec_->record(round);
  if (!r || r->kind != RoundSpec::Kind::Functionality) return nullptr;
  if (call_index < 0 || call_index >= static_cast<int>(r->calls.size()))
    return nullptr;
  return r->calls[call_index].executed ? &r->calls[call_index].result : nullptr;
}

std::vector<int> PublicView::identified() const {
  std::vector<int> ids;
  for (int r = 0; r < rounds_done(); ++r) {
    const RoundRecord* rec = exec_->record(r);
    if (rec->kind != RoundSpec::Kind::Functionality) continue;
    for (const CallRecord& c : rec->calls)
      if (c.executed && c.result.aborted)
        for (int id : c.result.blamed)
          if (!contains_sorted(ids, id)) {
            ids.push_back(id);
            std::sort(ids.begin(), ids.end());
          }
  }
  return ids;
}

// --- AdvView ----------------------------------------------------------------

int AdvView::n() const { return exec_->spec().n; }
int AdvView::round() const { return exec_->current_round(); }
const std::vector<int>& AdvView::corrupted() const {
  return exec_->adv().corrupted;
}
bool AdvView::is_corrupted(int p) const { return exec_->corrupted_party(p); }

PartyView AdvView::party(int p) const {
  if (!is_corrupted(p))
    throw ProtocolViolation("adversary reading an honest party's view");
  return PartyView(exec_, p);
}

std::optional<Value> AdvView::broadcast(int round, int from) const {
  const RoundRecord* r = exec_->record(round);
  if (!r || r->kind != RoundSpec::Kind::Communication) return std::nullopt;
  return r->comm.bcast[from];
}

bool AdvView::p2p_sent(int round, int from, int to) const {
  const RoundRecord* r = exec_->record(round);
  if (!r || r->kind != RoundSpec::Kind::Communication) return false;
  return r->comm.p2p[from][to].has_value();
}

std::optional<Value> AdvView::p2p_payload(int round, int from, int to) const {
  const RoundRecord* r = exec_->record(round);
  if (!r || r->kind != RoundSpec::Kind::Communication) return std::nullopt;
  if (exec_->spec().secure_channels && !is_corrupted(from) && !is_corrupted(to))
    return std::nullopt;  // secure channel: metadata only
  return r->comm.p2p[from][to];
}

const CallResult* AdvView::call(int round, int call_index) const {
  const RoundRecord* r = exec_->record(round);
  if (!r || r->kind != RoundSpec::Kind::Functionality) return nullptr;
  if (call_index < 0 || call_index >= static_cast<int>(r->calls.size()))
    return nullptr;
  return r->calls[call_index].executed ? &r->calls[call_index].result : nullptr;
}

const std::vector<OutMsg>* AdvView::pending_honest(int from) const {
  return exec_->pending_honest(from);
}

const CallResult* AdvView::parallel_result(int call_index) const {
  const CallRecord* rec = exec_->parallel_record(call_index);
  return rec ? &rec->result : nullptr;
}

uint64_t AdvView::peek_own_call_coin(int round, int call_index) const {
  return exec_->peek_call_coin(round, call_index);
}

RngStream& AdvView::rng() const { return exec_->adv_rng(); }

RngStream AdvView::derived(std::string_view purpose) const {
  return exec_->derived_for(-1, purpose);
}

CommitmentRegistry& AdvView::commitments() const { return exec_->registry(); }

// --- results & drivers -------------------------------------------------------

bool ExecutionResult::honest_agree(const std::vector<int>& corrupted) const {
  const Output* first = nullptr;
  for (size_t p = 0; p < outputs.size(); ++p) {
    if (contains_sorted(corrupted, static_cast<int>(p))) continue;
    if (!first)
      first = &outputs[p];
    else if (!(*first == outputs[p]))
      return false;
  }
  return true;
}

const Output& ExecutionResult::honest_output(
    const std::vector<int>& corrupted) const {
  for (size_t p = 0; p < outputs.size(); ++p)
    if (!contains_sorted(corrupted, static_cast<int>(p))) return outputs[p];
  throw SpecError("no honest party");
}

ExecutionResult run(const ProtocolSpec& spec, const AdversaryStrategy& adv,
                    uint64_t seed) {
  SeededCoinSource coins(RngStream::mix(seed) ^ hash_str("tp"));
  return Execution(spec, adv, seed, coins).go();
}

ExecutionResult run_with_coins(const ProtocolSpec& spec,
                               const AdversaryStrategy& adv, uint64_t seed,
                               CoinSource& coins) {
  return Execution(spec, adv, seed, coins).go();
}

size_t coin_slots(const ProtocolSpec& spec) {
  size_t n = 0;
  for (const RoundSpec& r : spec.rounds) n += r.calls.size();
  return n;
}

std::string output_to_string(const Output& o) {
  std::ostringstream os;
  switch (o.kind) {
    case Output::Kind::Pending:
      os << "pending";
      break;
    case Output::Kind::Value: {
      os << "v:";
      for (size_t i = 0; i < o.value.size(); ++i)
        os << (i ? "," : "") << o.value[i];
      break;
    }
    case Output::Kind::Abort: {
      os << "abort:";
      for (size_t i = 0; i < o.blamed.size(); ++i)
        os << (i ? "," : "") << o.blamed[i];
      break;
    }
  }
  return os.str();
}

Summary estimate(const ProtocolSpec& spec, const AdversaryStrategy& adv,
                 int trials, uint64_t seed) {
  if (trials < 1) throw SpecError("estimate needs at least one trial");
  Summary s;
  s.trials = trials;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < trials; ++i) {
    uint64_t trial_seed = derive_stream(seed, "trial", i).next();
    ExecutionResult res = run(spec, adv, trial_seed);
    const Output& out = res.honest_output(adv.corrupted);
    s.frequencies[output_to_string(out)]++;
    if (out.kind == Output::Kind::Value && !out.value.empty()) {
      double v = static_cast<double>(out.value[0]);
      sum += v;
      sumsq += v * v;
      ++s.value_outputs;
    }
  }
  if (s.value_outputs > 0) {
    s.mean = sum / s.value_outputs;
    double var = sumsq / s.value_outputs - s.mean * s.mean;
    if (var < 0) var = 0;
    s.std_error = std::sqrt(var / s.value_outputs);
  }
  return s;
}

namespace {

uint64_t payload_hash(const Value& v) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint64_t w : v) {
    for (int k = 0; k < 8; ++k) {
      h ^= (w >> (8 * k)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace

std::string transcript_to_jsonl(const ExecutionResult& result) {
  std::ostringstream os;
  for (size_t r = 0; r < result.transcript.size(); ++r) {
    const RoundRecord& rec = result.transcript[r];
    os << "{\"round\":" << r << ",\"kind\":\""
       << (rec.kind == RoundSpec::Kind::Communication ? "communication"
                                                      : "functionality")
       << "\"";
    if (rec.kind == RoundSpec::Kind::Communication) {
      os << ",\"messages\":[";
      bool first = true;
      for (size_t from = 0; from < rec.comm.bcast.size(); ++from) {
        if (rec.comm.bcast[from]) {
          os << (first ? "" : ",") << "{\"from\":" << from
             << ",\"to\":\"broadcast\",\"hash\":"
             << payload_hash(*rec.comm.bcast[from]) << "}";
          first = false;
        }
        for (size_t to = 0; to < rec.comm.p2p[from].size(); ++to)
          if (rec.comm.p2p[from][to]) {
            os << (first ? "" : ",") << "{\"from\":" << from
               << ",\"to\":" << to
               << ",\"hash\":" << payload_hash(*rec.comm.p2p[from][to]) << "}";
            first = false;
          }
      }
      os << "]";
    } else {
      os << ",\"calls\":[";
      for (size_t c = 0; c < rec.calls.size(); ++c) {
        const CallRecord& cr = rec.calls[c];
        os << (c ? "," : "") << "{\"label\":\"" << cr.label << "\",\"executed\":"
           << (cr.executed ? "true" : "false");
        if (cr.executed) {
          os << ",\"participants\":[";
          for (size_t k = 0; k < cr.participants.members.size(); ++k)
            os << (k ? "," : "") << cr.participants.members[k];
          os << "],\"aborted\":" << (cr.result.aborted ? "true" : "false");
          if (cr.result.aborted) {
            os << ",\"blamed\":[";
            for (size_t k = 0; k < cr.result.blamed.size(); ++k)
              os << (k ? "," : "") << cr.result.blamed[k];
            os << "]";
          }
        }
        os << "}";
      }
      os << "]";
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace mpcsim
