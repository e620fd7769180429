#pragma once

#include <optional>

#include "mpcsim/engine.hpp"

namespace mpcsim {

// ---------------------------------------------------------------------------
// Single-aborting-round attacks on two-party coin flipping.

struct AttackSpec {
  int attacker = 0;  // 0 or 1
  int i_star = 1;    // round the attacker aborts in
  int j_star = 0;    // prediction round, in {i_star, i_star - 1}
  int b = 0;         // abort when the predicted default output equals b
};

// A two-party protocol reduced to what the exhaustive attack search needs:
// outputs as functions of a uniform joint outcome space. `default_output`
// gives a party's output when its opponent stops participating from round j
// on (j = 0: from the start; j > rounds: never).
struct TwoPartyProtocol {
  int rounds = 0;
  std::vector<int> sender;  // sender[r-1] for round r
  uint64_t outcomes = 0;
  std::function<int(uint64_t, int)> output;
  std::function<int(uint64_t, int, int)> default_output;
  double gamma = 0.5;
};

struct CleveAttack {
  AttackSpec spec;
  double bias = 0.0;
  double signed_bias = 0.0;
};

// Exhaustive search over both parties, every abort round, both prediction
// rounds and both trigger bits, each evaluated exactly over the outcome
// space. Degenerate protocols (biased or insufficiently consistent honest
// outputs) are rejected up front.
CleveAttack find_cleve_attacker(const TwoPartyProtocol& psi,
                                uint64_t max_outcomes = uint64_t(1) << 22);

// Signed biases of the two-round attacker and its single-round halves.
struct AveragingCheck {
  double b = 0.0, b0 = 0.0, b1 = 0.0;
  bool exact_identity = false;
};
AveragingCheck cleve_averaging(const TwoPartyProtocol& psi, int attacker,
                               int j_star, int b);

// ---------------------------------------------------------------------------
// Multiparty-to-two-party embedding.

struct TwoPartyEmbedding {
  std::vector<int> s_set;  // sorted; the emulating party's base set
  double beta = 0.5;       // corrupted fraction of the final attack
  // Pre-designated aborting subsets, one per functionality round; empty for
  // the small-committee variant.
  std::vector<std::vector<int>> j_bar;
  int extend_outside = 1;  // elements of extend(C) outside S and J
  // Large-committee rule: committees above this size are never attacked
  // directly. Negative disables the rule.
  int large_threshold = -1;
};

struct PsiRound {
  enum class Kind { CommP0, CommP1, FuncBit };
  Kind kind = Kind::CommP0;
  int pi_round = 0;
  int call_index = -1;
  Committee committee;  // FuncBit only
};

struct TwoPartyView {
  TwoPartyProtocol psi;
  std::vector<PsiRound> rounds;
  TwoPartyEmbedding embedding;
  int pi_n = 0;
  std::vector<int> j_union;                    // sorted
  std::vector<int> func_ordinal_of_pi_round;   // -1 for communication rounds
  std::vector<size_t> slot_base;               // per pi round
};

// Builds the two-party emulation of a hybrid-model coin-flipping protocol.
// Every call must be a one-bit committee call and every party program must
// be deterministic given the call ledger. When the emulating party aborts a
// functionality bit, the continuation samples the survivor set T
// deterministically (t_fixed when admissible, else the lexicographically
// first admissible set).
TwoPartyView build_two_party(const ProtocolSpec& pi,
                             const TwoPartyEmbedding& emb,
                             std::optional<std::vector<int>> t_fixed = {});

Committee extend_committee(const TwoPartyView& view, const Committee& c);
std::vector<std::vector<int>> admissible_t_sets(const TwoPartyView& view,
                                                const Committee& aborted);

// Fail-stop strategy for the original protocol implementing the attack found
// on the two-party reduction. Functionality-round attacks corrupt everyone
// outside t_set; mirror attacks on communication rounds corrupt exactly the
// attacker's emulation side.
AdversaryStrategy translate_attack(const TwoPartyView& view,
                                   const AttackSpec& attack,
                                   const std::vector<int>& t_set);

// ---------------------------------------------------------------------------
// Bias measurement.

struct BiasReport {
  double mean = 0.0;
  double bias = 0.0;
  uint64_t trials = 0;
  double std_error = 0.0;
  bool exact = false;
};

// Exact: enumerates every trusted-party coin assignment (parties must be
// deterministic). Oversized spaces throw ScaleError; callers fall back to
// the Monte-Carlo mode themselves.
BiasReport measure_bias_exact(const ProtocolSpec& pi,
                              const AdversaryStrategy& adv,
                              uint64_t max_outcomes = uint64_t(1) << 22);
BiasReport measure_bias_mc(const ProtocolSpec& pi, const AdversaryStrategy& adv,
                           int trials, uint64_t seed);

// ---------------------------------------------------------------------------
// Aborting-subset search and toy protocol factory.

double lower_bound_c(int m, double beta_prime, int n);

// Samples s disjoint beta'*n-size subsets until, for every functionality
// round, the Monte-Carlo frequency of a size >= size_threshold committee
// avoiding its subset stays within 1/(32m+10).
std::vector<std::vector<int>> choose_good_subsets(const ProtocolSpec& pi,
                                                  int s, double beta_prime,
                                                  int trials, uint64_t seed,
                                                  int size_threshold,
                                                  int m_bound,
                                                  int max_attempts = 64);

// Hybrid-model coin flipping: the listed functionality rounds of committee
// coin calls, a trailing communication round, and everyone outputs the XOR of
// the delivered bits (aborted calls contribute zero).
ProtocolSpec make_hybrid_xor_cf(int n,
                                const std::vector<std::vector<Committee>>& rounds);

}  // namespace mpcsim
