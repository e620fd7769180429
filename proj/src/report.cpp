#include "mpcsim/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace mpcsim {

using nlohmann::ordered_json;

bool ExperimentReport::all_pass() const {
  for (const auto& [name, ok] : verdicts)
    if (!ok) return false;
  return true;
}

std::string ExperimentReport::to_json() const {
  ordered_json j;
  j["schema"] = "mpcsim-report-v1";
  j["experiment"] = id;
  j["seed"] = seed;
  ordered_json p = ordered_json::object();
  for (const auto& [k, v] : params) p[k] = v;
  j["params"] = p;
  ordered_json m = ordered_json::object();
  for (const auto& [k, v] : measured) m[k] = v;
  j["measured"] = m;
  ordered_json b = ordered_json::object();
  for (const auto& [k, v] : bounds) b[k] = v;
  j["bounds"] = b;
  ordered_json v = ordered_json::object();
  for (const auto& [k, ok] : verdicts) v[k] = ok;
  j["verdicts"] = v;
  j["pass"] = all_pass();
  if (!artifact_json.empty())
    j["artifact"] = ordered_json::parse(artifact_json);
  if (!trial_rows.empty()) j["trials_csv"] = trial_rows;
  return j.dump(2) + "\n";
}

std::string ExperimentReport::to_table(double wall_seconds) const {
  std::ostringstream os;
  os << "experiment: " << id << "  (seed " << seed << ")\n";
  for (const auto& [k, v] : params) os << "  param    " << k << " = " << v << "\n";
  for (const auto& [k, v] : measured)
    os << "  measured " << k << " = " << v << "\n";
  for (const auto& [k, v] : bounds) os << "  bound    " << k << " = " << v << "\n";
  for (const auto& [k, ok] : verdicts)
    os << "  [" << (ok ? "PASS" : "FAIL") << "] " << k << "\n";
  os << "  wall-clock: " << wall_seconds << " s\n";
  return os.str();
}

// --- election experiment -----------------------------------------------------

std::vector<int> stuff_bins(const std::vector<int>& bins, int k,
                            const std::vector<int>& corrupted,
                            double beta_prime) {
  std::vector<int> out = bins;
  std::vector<int> honest_load(k, 0);
  int n = static_cast<int>(bins.size());
  for (int p = 0; p < n; ++p) {
    if (contains_sorted(corrupted, p)) continue;
    if (bins[p] >= 0) honest_load[bins[p]]++;
  }
  int budget = static_cast<int>(corrupted.size());
  int heaviest = 0;
  for (int b = 1; b < k; ++b)
    if (honest_load[b] > honest_load[heaviest]) heaviest = b;

  int target = -1, fill = 0;
  for (int b = 0; b < k; ++b) {
    // Smallest count that pushes the corrupted fraction to beta_prime.
    int c = static_cast<int>(
        std::ceil(beta_prime * honest_load[b] / (1.0 - beta_prime)));
    c = std::max(c, honest_load[b] == 0 ? 1 : c);
    if (c > budget) continue;
    int total = honest_load[b] + c;
    bool wins = true;
    for (int o = 0; o < k && wins; ++o) {
      if (o == b) continue;
      int other = honest_load[o] + (o == heaviest ? budget - c : 0);
      if (other == 0) {
        // An empty bin is ineligible unless the leftovers land there.
        continue;
      }
      if (other < total || (other == total && o < b)) wins = false;
    }
    if (wins) {
      target = b;
      fill = c;
      break;
    }
  }

  int at = 0;
  for (int p : corrupted) {
    if (target >= 0 && at < fill)
      out[p] = target;
    else
      out[p] = heaviest;
    ++at;
  }
  return out;
}

ExperimentReport cmd_elect(int n, int n_prime, double beta, double beta_prime,
                           int trials, uint64_t seed, bool want_rows) {
  ExperimentReport rep;
  rep.id = "elect";
  rep.seed = seed;
  rep.params = {{"n", std::to_string(n)},
                {"n_prime", std::to_string(n_prime)},
                {"beta", std::to_string(beta)},
                {"beta_prime", std::to_string(beta_prime)},
                {"trials", std::to_string(trials)}};
  int t = static_cast<int>(beta * n);
  std::vector<int> corrupted(t);
  for (int i = 0; i < t; ++i) corrupted[i] = i;
  int k = feige_bin_count(n, n_prime);

  int bad = 0;
  for (int trial = 0; trial < trials; ++trial) {
    RngStream rng = derive_stream(seed, "elect-trial", trial);
    std::vector<int> bins(n, -1);
    for (int p = t; p < n; ++p) bins[p] = static_cast<int>(rng.next_below(k));
    bins = stuff_bins(bins, k, corrupted, beta_prime);
    Committee c = feige_elect(n, n_prime, bins);
    size_t bad_members = intersect_sorted(c.members, corrupted).size();
    bool event = static_cast<double>(bad_members) >= beta_prime * c.size();
    if (event) ++bad;
    if (want_rows)
      rep.trial_rows.push_back(std::to_string(trial) + "," +
                               std::to_string(c.size()) + "," +
                               std::to_string(bad_members) + "," +
                               (event ? "1" : "0"));
  }
  double freq = trials > 0 ? static_cast<double>(bad) / trials : 0.0;
  double bound = err_bound(n, n_prime, beta, beta_prime);
  rep.measured = {{"bad_committee_freq", freq}};
  rep.bounds = {{"err", bound}};
  rep.verdicts = {{"freq_within_err", freq <= bound}};
  return rep;
}

// --- uplift ---------------------------------------------------------------------

const char* const kUpliftPresets[5] = {"none", "abort-fresh", "abort-alternate",
                                       "drop-bins", "stale-abort"};

namespace {

// Replays the player-elimination ledger to find the surviving committee.
Committee uplift_current_committee(const AdvView& view, const AdvCallCtx& ctx) {
  Committee base = ctx.spec->tp.committees.at(0);
  Committee cur = base;
  for (int r = 1; r < view.round(); ++r) {
    const CallResult* res = view.call(r, 0);
    if (!res || !res->aborted || res->blamed.empty()) continue;
    int revealed = res->blamed[0];
    int victim = cur.contains(revealed) ? revealed : cur.lowest();
    auto& m = cur.members;
    m.erase(std::remove(m.begin(), m.end(), victim), m.end());
  }
  return cur;
}

}  // namespace

AdversaryStrategy uplift_adversary(const std::string& preset, int n,
                                   double beta) {
  AdversaryStrategy adv;
  int t = static_cast<int>(beta * n);
  for (int i = 0; i < t; ++i) adv.corrupted.push_back(i);
  adv.fail_stop = true;
  if (preset == "none" || t == 0) return adv;

  if (preset == "drop-bins") {
    adv.on_comm = [](const AdvView&, int round,
                     std::map<int, std::vector<OutMsg>>& planned) {
      if (round == 0)
        for (auto& [p, msgs] : planned) msgs.clear();
    };
  }

  bool alternate = preset == "abort-alternate";
  bool stale = preset == "stale-abort";
  adv.early_abort = [alternate, stale](const AdvView& view,
                                       const AdvCallCtx& ctx)
      -> std::optional<std::vector<int>> {
    if (ctx.spec->label != "pe-call") return std::nullopt;
    if (alternate && (ctx.round % 2) == 0) return std::nullopt;
    Committee cur = uplift_current_committee(view, ctx);
    auto fresh = intersect_sorted(cur.members, view.corrupted());
    if (stale) {
      // Re-reveal an already-identified member when the blame would still
      // land on a corrupted simulator.
      Committee base = ctx.spec->tp.committees.at(0);
      auto all_bad = intersect_sorted(base.members, view.corrupted());
      for (int id : all_bad)
        if (!cur.contains(id) && !cur.empty() &&
            view.is_corrupted(cur.lowest()))
          return std::vector<int>{id};
    }
    if (fresh.empty()) return std::nullopt;
    return std::vector<int>{fresh.front()};
  };
  return adv;
}

ExperimentReport cmd_uplift_cf(int n, int n_prime, double beta,
                               double beta_prime, const std::string& preset,
                               int trials, uint64_t seed) {
  ExperimentReport rep;
  rep.id = "uplift-cf";
  rep.seed = seed;
  rep.params = {{"n", std::to_string(n)},
                {"n_prime", std::to_string(n_prime)},
                {"beta", std::to_string(beta)},
                {"beta_prime", std::to_string(beta_prime)},
                {"adversary", preset},
                {"trials", std::to_string(trials)}};
  ProtocolSpec spec = make_coinflip_uplift(n, n_prime, beta_prime);
  AdversaryStrategy adv = uplift_adversary(preset, n, beta);
  int t_prime = static_cast<int>(beta_prime * n_prime);

  int ones = 0, agree = 0, delivered = 0;
  int max_calls = 0, max_rounds = 0;
  double sum_calls = 0;
  for (int trial = 0; trial < trials; ++trial) {
    uint64_t trial_seed = derive_stream(seed, "uplift-trial", trial).next();
    ExecutionResult res = run_player_elimination(spec, adv, trial_seed);
    if (res.honest_agree(adv.corrupted)) ++agree;
    const Output& out = res.honest_output(adv.corrupted);
    if (out.kind == Output::Kind::Value && !out.value.empty()) {
      ++delivered;
      ones += static_cast<int>(out.value[0] & 1);
    }
    max_calls = std::max(max_calls, res.calls_made);
    max_rounds = std::max(max_rounds, res.rounds_used);
    sum_calls += res.calls_made;
  }
  double freq = delivered > 0 ? static_cast<double>(ones) / delivered : 0.0;
  // A committee with more than t' corrupted members (the election error
  // event) can exhaust all t'+1 calls; fair aborts leave the delivered bits
  // unbiased, so uniformity is judged over the delivered trials, at a window
  // never tighter than the 3-sigma binomial one.
  double window =
      std::max(0.02, delivered > 0 ? 3.5 * std::sqrt(0.25 / delivered) : 0.02);
  rep.measured = {{"ones_freq", freq},
                  {"agreement", trials ? static_cast<double>(agree) / trials : 0},
                  {"delivery", trials ? static_cast<double>(delivered) / trials : 0},
                  {"max_calls", static_cast<double>(max_calls)},
                  {"max_rounds", static_cast<double>(max_rounds)},
                  {"mean_calls", trials ? sum_calls / trials : 0}};
  rep.bounds = {{"calls_ceiling", static_cast<double>(t_prime + 1)},
                {"ones_lo", 0.5 - window},
                {"ones_hi", 0.5 + window}};
  rep.verdicts = {
      {"agreement_total", agree == trials},
      {"calls_within_ceiling", max_calls <= t_prime + 1},
      {"uniform", freq >= 0.5 - window && freq <= 0.5 + window}};
  return rep;
}

ExperimentReport cmd_uplift_or(int n, int kappa, double phi, double beta_prime,
                               uint64_t inputs_mask, const std::string& preset,
                               int trials, uint64_t seed) {
  ExperimentReport rep;
  rep.id = "uplift-or";
  rep.seed = seed;
  rep.params = {{"n", std::to_string(n)},
                {"kappa", std::to_string(kappa)},
                {"phi", std::to_string(phi)},
                {"beta_prime", std::to_string(beta_prime)},
                {"inputs", std::to_string(inputs_mask)},
                {"adversary", preset},
                {"trials", std::to_string(trials)}};
  CommittedOrConfig cfg = committed_or_config(n, kappa, phi, beta_prime);
  std::vector<uint64_t> inputs(n);
  for (int i = 0; i < n; ++i) inputs[i] = (inputs_mask >> i) & 1;
  ProtocolSpec spec = make_committed_or(cfg, inputs);

  AdversaryStrategy adv;
  adv.fail_stop = true;
  if (preset != "none") {
    adv.corrupted = {0};
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
  }

  uint64_t honest_or = 0;
  for (int i = 0; i < n; ++i)
    if (!contains_sorted(adv.corrupted, i)) honest_or |= inputs[i];

  int agree = 0, correct = 0, max_rounds = 0;
  for (int trial = 0; trial < trials; ++trial) {
    uint64_t trial_seed = derive_stream(seed, "or-trial", trial).next();
    ExecutionResult res = run(spec, adv, trial_seed);
    if (res.honest_agree(adv.corrupted)) ++agree;
    const Output& out = res.honest_output(adv.corrupted);
    bool ok = out.kind == Output::Kind::Value && !out.value.empty() &&
              (out.value[0] == 1 || honest_or == 0);
    if (ok) ++correct;
    max_rounds = std::max(max_rounds, res.functionality_rounds_used);
  }
  rep.measured = {
      {"agreement", trials ? static_cast<double>(agree) / trials : 0},
      {"honest_one_respected", trials ? static_cast<double>(correct) / trials : 0},
      {"max_functionality_rounds", static_cast<double>(max_rounds)}};
  rep.bounds = {{"iteration_ceiling",
                 static_cast<double>(1 + 2 * cfg.max_iterations)}};
  rep.verdicts = {{"agreement_total", agree == trials},
                  {"or_correct", correct == trials}};
  return rep;
}

// --- attack pipeline ------------------------------------------------------------

namespace {

TwoPartyProtocol toy_two_party(int rounds) {
  // Bits sent alternately starting at P0; both parties output the XOR of all
  // bits. A missing tail counts as zero, so defaults stay well defined.
  TwoPartyProtocol psi;
  psi.rounds = rounds;
  psi.outcomes = uint64_t(1) << rounds;
  for (int r = 0; r < rounds; ++r) psi.sender.push_back(r % 2);
  psi.output = [rounds](uint64_t w, int) {
    int x = 0;
    for (int r = 0; r < rounds; ++r) x ^= (w >> r) & 1;
    return x;
  };
  psi.default_output = [rounds](uint64_t w, int party, int j) {
    int x = 0;
    for (int r = 0; r < rounds; ++r) {
      bool delivered = (r + 1 < j) || ((r % 2) == party);
      if (delivered) x ^= (w >> r) & 1;
    }
    return x;
  };
  return psi;
}

struct HybridInstance {
  int n = 0;
  std::vector<std::vector<Committee>> rounds;
  TwoPartyEmbedding emb;
  std::vector<int> t_set;

  ProtocolSpec pi() const { return make_hybrid_xor_cf(n, rounds); }
};

HybridInstance hybrid6_preset() {
  HybridInstance h;
  // n = 6, two functionality rounds with size-2 committees, beta = 2/3.
  h.n = 6;
  h.rounds = {{Committee({0, 1})}, {Committee({2, 3})}};
  h.emb.s_set = {0, 1};
  h.emb.beta = 2.0 / 3.0;
  h.emb.extend_outside = 2;
  h.t_set = {4, 5};
  return h;
}

// The artifact carries everything replay needs: the hybrid protocol shape,
// the embedding, the attack tuple, and the survivor set.
ordered_json hybrid_artifact(const HybridInstance& h, const AttackSpec& a) {
  ordered_json art;
  art["kind"] = "hybrid";
  art["n"] = h.n;
  ordered_json rounds = ordered_json::array();
  for (const auto& round : h.rounds) {
    ordered_json committees = ordered_json::array();
    for (const Committee& c : round) committees.push_back(c.members);
    rounds.push_back(committees);
  }
  art["rounds"] = rounds;
  art["s_set"] = h.emb.s_set;
  art["beta"] = h.emb.beta;
  art["extend_outside"] = h.emb.extend_outside;
  art["j_bar"] = h.emb.j_bar;
  art["large_threshold"] = h.emb.large_threshold;
  art["attacker"] = a.attacker;
  art["i_star"] = a.i_star;
  art["j_star"] = a.j_star;
  art["b"] = a.b;
  art["t_set"] = h.t_set;
  return art;
}

HybridInstance hybrid_from_artifact(const ordered_json& art) {
  HybridInstance h;
  h.n = art.value("n", 0);
  for (const auto& round : art.at("rounds")) {
    std::vector<Committee> committees;
    for (const auto& c : round)
      committees.emplace_back(c.get<std::vector<int>>());
    h.rounds.push_back(std::move(committees));
  }
  h.emb.s_set = art.value("s_set", std::vector<int>{});
  h.emb.beta = art.value("beta", 0.5);
  h.emb.extend_outside = art.value("extend_outside", 1);
  h.emb.j_bar = art.value("j_bar", std::vector<std::vector<int>>{});
  h.emb.large_threshold = art.value("large_threshold", -1);
  h.t_set = art.value("t_set", std::vector<int>{});
  return h;
}

}  // namespace

ExperimentReport cmd_attack(const std::string& preset, const std::string& mode,
                            int trials, uint64_t seed) {
  ExperimentReport rep;
  rep.id = "attack";
  rep.seed = seed;
  rep.params = {{"preset", preset}, {"mode", mode},
                {"trials", std::to_string(trials)}};

  if (preset == "toy1" || preset == "toy2" || preset == "toy3") {
    int r = preset.back() - '0';
    TwoPartyProtocol psi = toy_two_party(r);
    CleveAttack attack = find_cleve_attacker(psi);
    double floor = 0.5 / (8.0 * r + 2.0);
    rep.measured = {{"bias", attack.bias},
                    {"i_star", static_cast<double>(attack.spec.i_star)},
                    {"attacker", static_cast<double>(attack.spec.attacker)}};
    rep.bounds = {{"cleve_floor", floor}};
    rep.verdicts = {{"bias_at_least_floor", attack.bias + 1e-12 >= floor}};
    ordered_json art;
    art["kind"] = "two-party";
    art["rounds"] = r;
    art["attacker"] = attack.spec.attacker;
    art["i_star"] = attack.spec.i_star;
    art["j_star"] = attack.spec.j_star;
    art["b"] = attack.spec.b;
    rep.artifact_json = art.dump();
    return rep;
  }

  if (preset == "hybrid6") {
    HybridInstance h = hybrid6_preset();
    ProtocolSpec pi = h.pi();
    TwoPartyView view = build_two_party(pi, h.emb, h.t_set);
    CleveAttack attack = find_cleve_attacker(view.psi);
    AdversaryStrategy adv = translate_attack(view, attack.spec, h.t_set);
    BiasReport bias;
    if (mode == "exact")
      bias = measure_bias_exact(pi, adv);
    else
      bias = measure_bias_mc(pi, adv, trials, seed);
    rep.measured = {{"two_party_bias", attack.bias},
                    {"translated_bias", bias.bias},
                    {"translated_mean", bias.mean},
                    {"trials", static_cast<double>(bias.trials)}};
    rep.bounds = {{"positive", 0.0}};
    rep.verdicts = {{"translated_bias_positive", bias.bias > 0.0}};
    rep.artifact_json = hybrid_artifact(h, attack.spec).dump();
    return rep;
  }

  if (preset == "honest") {
    AdversaryStrategy honest;
    BiasReport bias = measure_bias_exact(hybrid6_preset().pi(), honest);
    rep.measured = {{"bias", bias.bias}, {"mean", bias.mean}};
    rep.bounds = {{"zero", 0.0}};
    rep.verdicts = {{"honest_unbiased", bias.bias == 0.0}};
    return rep;
  }

  throw SpecError("unknown attack preset: " + preset);
}

ExperimentReport cmd_replay(const std::string& report_json) {
  ordered_json j = ordered_json::parse(report_json);
  if (!j.contains("artifact"))
    throw SpecError("report carries no replayable artifact");
  ordered_json art = j["artifact"];
  ExperimentReport rep;
  rep.id = "replay";
  rep.seed = j.value("seed", uint64_t(0));
  rep.params = {{"source", j.value("experiment", std::string("?"))}};

  std::string kind = art.value("kind", "");
  AttackSpec attack;
  attack.attacker = art.value("attacker", 0);
  attack.i_star = art.value("i_star", 1);
  attack.j_star = art.value("j_star", 0);
  attack.b = art.value("b", 0);

  if (kind == "two-party") {
    TwoPartyProtocol psi = toy_two_party(art.value("rounds", 1));
    // Replay the stored attack exactly and report its bias.
    int64_t sum = 0;
    int defender = 1 - attack.attacker;
    for (uint64_t w = 0; w < psi.outcomes; ++w) {
      int predict = psi.default_output(w, attack.attacker, attack.j_star);
      sum += predict == attack.b
                 ? psi.default_output(w, defender, attack.i_star)
                 : psi.output(w, defender);
    }
    double mean = static_cast<double>(sum) / psi.outcomes;
    rep.measured = {{"bias", std::abs(mean - 0.5)}, {"mean", mean}};
    rep.verdicts = {{"replayed", true}};
    return rep;
  }
  if (kind == "hybrid") {
    HybridInstance h = hybrid_from_artifact(art);
    ProtocolSpec pi = h.pi();
    TwoPartyView view = build_two_party(pi, h.emb, h.t_set);
    AdversaryStrategy adv = translate_attack(view, attack, h.t_set);
    BiasReport bias = measure_bias_exact(pi, adv);
    rep.measured = {{"bias", bias.bias}, {"mean", bias.mean}};
    rep.verdicts = {{"replayed", true}};
    return rep;
  }
  throw SpecError("unknown artifact kind: " + kind);
}

// --- sub-committees ---------------------------------------------------------------

ExperimentReport cmd_subcommittees(int kappa, double phi, double beta_prime,
                                   int trials, uint64_t seed) {
  ExperimentReport rep;
  rep.id = "subcommittees";
  rep.seed = seed;
  rep.params = {{"kappa", std::to_string(kappa)},
                {"phi", std::to_string(phi)},
                {"beta_prime", std::to_string(beta_prime)},
                {"trials", std::to_string(trials)}};
  ReductionConfig cfg;
  cfg.n = 1 << 20;  // committee size depends only on kappa and phi here
  cfg.kappa = kappa;
  cfg.phi = phi;
  cfg.beta = beta_prime / 2;
  cfg.beta_prime = beta_prime;
  cfg.validate(true);

  int m = cfg.m();
  int n2 = cfg.n_second();
  std::vector<int> base(m);
  for (int i = 0; i < m; ++i) base[i] = i;
  Committee committee(base);
  auto subs = enumerate_subcommittees(committee, n2);
  double bound = subcommittee_count_bound(kappa, phi);
  uint64_t count = subs.size();

  int t_prime = static_cast<int>(beta_prime * m);
  bool hm_all = true;
  for (int trial = 0; trial < trials; ++trial) {
    RngStream rng = derive_stream(seed, "fill-trial", trial);
    std::vector<int> pool = base;
    for (size_t i = pool.size(); i > 1; --i)
      std::swap(pool[i - 1], pool[rng.next_below(i)]);
    std::vector<int> bad(pool.begin(), pool.begin() + t_prime);
    std::sort(bad.begin(), bad.end());
    if (!subcommittees_honest_majority(subs, bad)) hm_all = false;
  }

  // Maximally aborting run: corrupt the largest set that still leaves every
  // sub-committee an honest majority, then abort whenever permitted.
  int heavy = (m - n2 - 1) / 2;
  std::vector<int> heavy_bad;
  for (int i = 0; i < heavy; ++i) heavy_bad.push_back(i);
  AdversaryStrategy adv;
  adv.corrupted = heavy_bad;
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
  ProtocolSpec spec = make_parallel_subcommittees(
      m, committee, n2, static_cast<int>(std::ceil(phi * phi)), f_cf());
  int worst_rounds = 0;
  int abort_trials = std::min(trials, 100);
  for (int trial = 0; trial < abort_trials; ++trial) {
    uint64_t ts = derive_stream(seed, "abort-trial", trial).next();
    ExecutionResult res = run(spec, adv, ts);
    worst_rounds = std::max(worst_rounds, res.functionality_rounds_used);
    const Output& out = res.honest_output(adv.corrupted);
    if (out.kind != Output::Kind::Value) hm_all = hm_all && false;
  }

  rep.measured = {{"subcommittees", static_cast<double>(count)},
                  {"worst_iterations", static_cast<double>(worst_rounds)}};
  rep.bounds = {{"count_bound", bound},
                {"iteration_ceiling", std::ceil(phi * phi)}};
  rep.verdicts = {
      {"count_within_bound", static_cast<double>(count) <= bound},
      {"honest_majority_all_trials", hm_all},
      {"terminates_within_phi_sq",
       worst_rounds <= static_cast<int>(std::ceil(phi * phi))}};
  return rep;
}

}  // namespace mpcsim
